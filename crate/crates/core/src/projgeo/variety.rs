use serde::{Deserialize, Serialize};

use crate::scalar::{float_rank_with_floor, Rational, Scalar, C64};

use super::point::ProjPoint;
use super::poly::{HomogeneousPolynomial, Polynomial};
use super::GeometryError;

/// Default membership tolerance for floating-point points.
pub const FLOAT_MEMBERSHIP_TOL: f64 = 1e-9;

/// A projective variety given by finitely many homogeneous generators.
///
/// Singularity verdicts are relative to this presentation: the toolkit
/// cannot certify that the generators span the full vanishing ideal.
#[derive(Clone, Debug, PartialEq)]
pub struct VarietyPresentation<S> {
    generators: Vec<HomogeneousPolynomial<S>>,
    nvars: usize,
    claimed_dim: Option<usize>,
}

impl<S: Scalar> VarietyPresentation<S> {
    pub fn new(
        generators: Vec<HomogeneousPolynomial<S>>,
        claimed_dim: Option<usize>,
    ) -> Result<Self, GeometryError> {
        let nvars = generators
            .first()
            .map(HomogeneousPolynomial::nvars)
            .ok_or(GeometryError::NoGenerators)?;
        if let Some(bad) = generators.iter().find(|g| g.nvars() != nvars) {
            return Err(GeometryError::DimensionMismatch { expected: nvars, found: bad.nvars() });
        }
        if nvars == 0 {
            return Err(GeometryError::DimensionMismatch { expected: 1, found: 0 });
        }
        Ok(VarietyPresentation { generators, nvars, claimed_dim })
    }

    pub fn hypersurface(f: HomogeneousPolynomial<S>, claimed_dim: Option<usize>) -> Self {
        let nvars = f.nvars();
        VarietyPresentation { generators: vec![f], nvars, claimed_dim }
    }

    pub fn generators(&self) -> &[HomogeneousPolynomial<S>] {
        &self.generators
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    /// `n` for a variety in `P^n`.
    pub fn ambient_dim(&self) -> usize {
        self.nvars - 1
    }

    pub fn claimed_dim(&self) -> Option<usize> {
        self.claimed_dim
    }

    /// Set when a zero polynomial was supplied as a generator. Such
    /// generators impose no condition and contribute zero Jacobian rows.
    pub fn has_zero_generator(&self) -> bool {
        self.generators.iter().any(HomogeneousPolynomial::is_zero)
    }

    pub fn to_c64(&self) -> VarietyPresentation<C64> {
        VarietyPresentation {
            generators: self
                .generators
                .iter()
                .map(|g| g.map_coeffs(Scalar::to_c64))
                .collect(),
            nvars: self.nvars,
            claimed_dim: self.claimed_dim,
        }
    }

    fn check_point(&self, p: &ProjPoint<S>) -> Result<(), GeometryError> {
        if p.len() != self.nvars {
            return Err(GeometryError::DimensionMismatch { expected: self.nvars, found: p.len() });
        }
        Ok(())
    }

    /// Scale-invariant membership test: `|f_l(p)| <= tol * |p|^deg f_l` for
    /// every generator. With `tol == 0` the test is an exact zero test.
    pub fn contains(&self, p: &ProjPoint<S>, tol: f64) -> Result<bool, GeometryError> {
        self.check_point(p)?;
        let norm = p.norm();
        for g in self.generators.iter().filter(|g| !g.is_zero()) {
            let v = g.eval(p.coords())?;
            let ok = if tol == 0.0 {
                v.is_zero()
            } else {
                v.modulus() <= tol * norm.powi(g.degree() as i32)
            };
            if !ok {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn jacobian(&self) -> JacobiMatrix<S> {
        JacobiMatrix {
            entries: self
                .generators
                .iter()
                .map(|g| (0..self.nvars).map(|i| g.derivative(i)).collect())
                .collect(),
        }
    }

    /// Rank of the Jacobi matrix at `p`, after checking `p` lies on the
    /// variety (exactly for exact scalars, to `FLOAT_MEMBERSHIP_TOL`
    /// otherwise).
    pub fn rank_at(&self, p: &ProjPoint<S>) -> Result<usize, GeometryError> {
        let tol = if S::EXACT { 0.0 } else { FLOAT_MEMBERSHIP_TOL };
        self.rank_at_with_tol(p, tol)
    }

    pub fn rank_at_with_tol(&self, p: &ProjPoint<S>, tol: f64) -> Result<usize, GeometryError> {
        if !self.contains(p, tol)? {
            return Err(GeometryError::PointNotOnVariety);
        }
        let jac = self.jacobian();
        let rows = jac.eval(p.coords())?;
        if S::EXACT {
            return Ok(S::rank(&rows));
        }
        // normalize each row by the natural size of the gradient at p
        let norm = p.norm();
        let scaled = rows
            .iter()
            .zip(&self.generators)
            .map(|(row, g)| {
                let coeff_mass: f64 = g.as_poly().terms().map(|(_, c)| c.modulus()).sum();
                let scale = coeff_mass * f64::from(g.degree().max(1))
                    * norm.powi(g.degree() as i32 - 1);
                row.iter()
                    .map(|x| if scale > 0.0 { x.to_c64() / scale } else { C64::new(0.0, 0.0) })
                    .collect()
            })
            .collect();
        Ok(float_rank_with_floor(scaled, 1.0))
    }

    /// Singular iff `rank J(p) < n - r`, with `r` the dimension of the
    /// variety supplied by the caller.
    pub fn is_singular_point(&self, p: &ProjPoint<S>, r: usize) -> Result<bool, GeometryError> {
        let tol = if S::EXACT { 0.0 } else { FLOAT_MEMBERSHIP_TOL };
        self.is_singular_point_with_tol(p, r, tol)
    }

    pub fn is_singular_point_with_tol(
        &self,
        p: &ProjPoint<S>,
        r: usize,
        tol: f64,
    ) -> Result<bool, GeometryError> {
        let rank = self.rank_at_with_tol(p, tol)?;
        let codim = self.ambient_dim().checked_sub(r).ok_or(GeometryError::BadDimension(r))?;
        Ok(rank < codim)
    }
}

/// Value of `f` at the given coordinate representative. Only its vanishing
/// is a projective notion; see [`VarietyPresentation::contains`].
pub fn evaluate<S: Scalar>(f: &HomogeneousPolynomial<S>, p: &ProjPoint<S>) -> Result<S, GeometryError> {
    f.eval(p.coords())
}

/// Matrix of formal partials `∂f_l/∂X_i`.
#[derive(Clone, Debug, PartialEq)]
pub struct JacobiMatrix<S> {
    entries: Vec<Vec<HomogeneousPolynomial<S>>>,
}

impl<S: Scalar> JacobiMatrix<S> {
    pub fn entries(&self) -> &[Vec<HomogeneousPolynomial<S>>] {
        &self.entries
    }

    pub fn entry(&self, l: usize, i: usize) -> &HomogeneousPolynomial<S> {
        &self.entries[l][i]
    }

    pub fn eval(&self, point: &[S]) -> Result<Vec<Vec<S>>, GeometryError> {
        self.entries
            .iter()
            .map(|row| row.iter().map(|e| e.eval(point)).collect())
            .collect()
    }
}

/// Dimension of the Zariski tangent space `(M/M^2)^*` at an affine point:
/// `n - rank` of the affine Jacobian.
pub fn zariski_tangent_dim<S: Scalar>(
    gens: &[Polynomial<S>],
    p: &[S],
) -> Result<usize, GeometryError> {
    let n = p.len();
    for g in gens {
        if g.nvars() != n {
            return Err(GeometryError::DimensionMismatch { expected: n, found: g.nvars() });
        }
        let v = g.eval(p)?;
        let scale: f64 = g.terms().map(|(_, c)| c.modulus()).sum::<f64>().max(1.0);
        if !v.is_negligible(scale) {
            return Err(GeometryError::PointNotOnVariety);
        }
    }
    let rows = gens
        .iter()
        .map(|g| (0..n).map(|i| g.derivative(i).eval(p)).collect())
        .collect::<Result<Vec<Vec<S>>, _>>()?;
    Ok(n - S::rank(&rows))
}

/// One row of a singularity report.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PointVerdict {
    pub on_variety: bool,
    pub rank: Option<usize>,
    pub singular: Option<bool>,
}

/// JSON export of a presentation together with per-point verdicts.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SingularityReport {
    pub generators: Vec<String>,
    pub dim: Option<usize>,
    pub points: Vec<String>,
    pub verdicts: Vec<PointVerdict>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
}

impl VarietyPresentation<Rational> {
    /// Exact singularity report for the given points. Uses `claimed_dim`
    /// for the singularity test; without it only membership and rank are
    /// reported.
    pub fn singularity_report(&self, points: &[ProjPoint<Rational>]) -> Result<SingularityReport, GeometryError> {
        let verdicts = points
            .iter()
            .map(|p| {
                let on_variety = self.contains(p, 0.0)?;
                if !on_variety {
                    return Ok(PointVerdict { on_variety, rank: None, singular: None });
                }
                let rank = self.rank_at(p)?;
                let singular = match self.claimed_dim {
                    Some(r) => Some(self.is_singular_point(p, r)?),
                    None => None,
                };
                Ok(PointVerdict { on_variety, rank: Some(rank), singular })
            })
            .collect::<Result<Vec<_>, GeometryError>>()?;
        let mut warnings = Vec::new();
        if self.has_zero_generator() {
            warnings.push("zero polynomial among generators (ignored)".to_string());
        }
        Ok(SingularityReport {
            generators: self.generators.iter().map(ToString::to_string).collect(),
            dim: self.claimed_dim,
            points: points.iter().map(ToString::to_string).collect(),
            verdicts,
            warnings,
        })
    }
}
