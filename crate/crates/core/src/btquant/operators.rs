use std::collections::BTreeMap;

use nalgebra::{DMatrix, DVector};

use crate::scalar::C64;

use super::functions::SmoothFunction;
use super::quadrature::{QuadNode, QuadratureRule};
use super::QuantError;

/// Relative tolerance of the power iteration in [`op_norm`].
pub const POWER_ITERATION_TOL: f64 = 1e-10;
/// Cap on the number of squarings in [`op_norm`].
pub const POWER_ITERATION_MAX: usize = 64;

/// Holomorphic sections of `O(m)` over `P^1`: the monomials `1, z, ..., z^m`
/// sampled at the quadrature nodes, their Gram matrix, and the inverse
/// Cholesky factor taking them to an orthonormal basis.
///
/// The stored samples are `z^k ĥ_m^{1/2}`, i.e. `e^{ikθ} t^{k/2} (1-t)^{(m-k)/2}`,
/// which stay bounded at every node.
#[derive(Clone, Debug)]
pub struct SectionBasis {
    m: u32,
    nodes: Vec<QuadNode<f64>>,
    samples: DMatrix<C64>,
    gram: DMatrix<C64>,
    onb: DMatrix<C64>,
}

impl SectionBasis {
    pub fn new(m: u32, quad: &QuadratureRule<f64>) -> Result<Self, QuantError> {
        if m > quad.m_max() {
            return Err(QuantError::LevelExceedsQuadrature { m, m_max: quad.m_max() });
        }
        let nodes = quad.nodes().to_vec();
        let dim = m as usize + 1;
        let mf = f64::from(m);
        let samples = DMatrix::from_fn(nodes.len(), dim, |row, k| {
            let n = &nodes[row];
            let k = k as f64;
            let modulus = n.t.powf(k / 2.0) * (1.0 - n.t).powf((mf - k) / 2.0);
            C64::from_polar(modulus, k * n.theta)
        });
        let weights: Vec<C64> = nodes.iter().map(|n| C64::new(n.weight, 0.0)).collect();
        let gram = weighted_product(&samples, &weights, &samples);
        let chol = nalgebra::Cholesky::new(gram.clone()).ok_or(QuantError::GramNotPositive)?;
        let l = chol.l();
        let onb = l
            .solve_lower_triangular(&DMatrix::identity(dim, dim))
            .ok_or(QuantError::GramNotPositive)?;
        Ok(SectionBasis { m, nodes, samples, gram, onb })
    }

    pub fn level(&self) -> u32 {
        self.m
    }

    pub fn dim(&self) -> usize {
        self.m as usize + 1
    }

    /// `G_jk = ⟨z^j, z^k⟩`.
    pub fn gram(&self) -> &DMatrix<C64> {
        &self.gram
    }

    /// `C = L^-1` for `G = L L*`.
    pub fn onb_transform(&self) -> &DMatrix<C64> {
        &self.onb
    }

    /// Ratio of the extreme Gram diagonal entries (the Gram matrix is
    /// diagonal, so this is its condition number).
    pub fn condition_number(&self) -> f64 {
        let d: Vec<f64> = (0..self.dim()).map(|k| self.gram[(k, k)].re).collect();
        let max = d.iter().cloned().fold(f64::MIN, f64::max);
        let min = d.iter().cloned().fold(f64::MAX, f64::min);
        max / min
    }

    fn to_onb(&self, monomial: &DMatrix<C64>) -> OperatorMatrix {
        OperatorMatrix {
            m: self.m,
            entries: &self.onb * monomial * self.onb.adjoint(),
        }
    }

    /// `A_jk = ⟨z^j, f z^k⟩` in the monomial basis.
    pub fn multiplication_form(&self, f: &SmoothFunction) -> DMatrix<C64> {
        let w: Vec<C64> = self.nodes.iter().map(|n| f.eval_node(n) * n.weight).collect();
        weighted_product(&self.samples, &w, &self.samples)
    }

    /// `T_f = Π (f ·)` in the orthonormal basis.
    pub fn toeplitz(&self, f: &SmoothFunction) -> OperatorMatrix {
        self.to_onb(&self.multiplication_form(f))
    }

    /// `Q_f = Π P_f` with `P_f = -(1/m) ∇_{X_f} + i f`, where
    /// `∇ = ∂ + ∂ log ĥ_m + ∂̄`. On `s = z^k`:
    ///
    /// ```text
    /// P_f z^k = (i k / m) f_z̄ (1+|z|²)² z^(k-1) + i (f - f_z̄ (1+|z|²) z̄) z^k
    /// ```
    pub fn geom_quant(&self, f: &SmoothFunction) -> Result<OperatorMatrix, QuantError> {
        if self.m == 0 {
            return Err(QuantError::LevelTooSmall(0));
        }
        let i = C64::new(0.0, 1.0);
        let mf = f64::from(self.m);
        let mut diag = Vec::with_capacity(self.nodes.len());
        let mut lower = Vec::with_capacity(self.nodes.len());
        for n in &self.nodes {
            let (_, fzb) = f.gradient(n.z)?;
            let d = 1.0 / (1.0 - n.t);
            diag.push((i * (f.eval_node(n) - fzb * d * n.z.conj())) * n.weight);
            lower.push(fzb * d * d * n.weight);
        }
        let dim = self.dim();
        let shifted = DMatrix::from_fn(self.nodes.len(), dim, |row, k| {
            if k == 0 {
                C64::new(0.0, 0.0)
            } else {
                self.samples[(row, k - 1)] * (i * (k as f64 / mf))
            }
        });
        let mono = weighted_product(&self.samples, &diag, &self.samples)
            + weighted_product(&self.samples, &lower, &shifted);
        Ok(self.to_onb(&mono))
    }
}

/// `L* diag(w) R`.
fn weighted_product(left: &DMatrix<C64>, w: &[C64], right: &DMatrix<C64>) -> DMatrix<C64> {
    let mut scaled = right.clone();
    for (r, wr) in w.iter().enumerate() {
        for c in 0..scaled.ncols() {
            scaled[(r, c)] *= wr;
        }
    }
    left.adjoint() * scaled
}

/// An operator on the level-`m` section space, in the orthonormal basis.
#[derive(Clone, Debug, PartialEq)]
pub struct OperatorMatrix {
    pub m: u32,
    pub entries: DMatrix<C64>,
}

impl OperatorMatrix {
    pub fn identity(m: u32) -> Self {
        let d = m as usize + 1;
        OperatorMatrix { m, entries: DMatrix::identity(d, d) }
    }

    pub fn from_entries(m: u32, entries: DMatrix<C64>) -> Self {
        OperatorMatrix { m, entries }
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    /// Largest entrywise deviation from hermiticity.
    pub fn hermitian_defect(&self) -> f64 {
        (&self.entries - self.entries.adjoint()).iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    pub fn max_entry(&self) -> f64 {
        self.entries.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// Eigenvalues of the hermitian part, ascending.
    pub fn hermitian_eigenvalues(&self) -> Vec<f64> {
        let h = (&self.entries + self.entries.adjoint()) * C64::new(0.5, 0.0);
        let mut ev: Vec<f64> = nalgebra::SymmetricEigen::new(h).eigenvalues.iter().cloned().collect();
        ev.sort_by(|a, b| a.partial_cmp(b).expect("finite eigenvalues"));
        ev
    }

    pub fn norm(&self) -> Result<f64, QuantError> {
        op_norm(self)
    }
}

/// Largest singular value by power iteration on `H = M* M`, from the
/// all-ones vector and a second fixed vector (the larger estimate wins, so
/// a start orthogonal to the top singular space cannot hide it).
///
/// The iteration runs on `H^(2^j)` by repeated squaring, so the contraction
/// ratio `λ2/λ1` is squared at every step and nearly degenerate top
/// singular values still converge; the estimate is the Rayleigh quotient of
/// `H` itself.
pub fn op_norm(m: &OperatorMatrix) -> Result<f64, QuantError> {
    let a = &m.entries;
    let n = a.ncols();
    if n == 0 || a.iter().all(|v| *v == C64::new(0.0, 0.0)) {
        return Ok(0.0);
    }
    let h = a.adjoint() * a;
    let starts = [
        DVector::from_element(n, C64::new(1.0, 0.0)),
        DVector::from_fn(n, |k, _| C64::new(1.0, (k as f64 + 1.0) / n as f64)),
    ];
    let mut power = h.clone();
    let mut previous: Option<f64> = None;
    for _ in 0..POWER_ITERATION_MAX {
        let lambda = starts
            .iter()
            .map(|s| rayleigh(&h, &(&power * s)))
            .fold(0.0, f64::max);
        if let Some(p) = previous {
            if (lambda - p).abs() <= POWER_ITERATION_TOL * lambda {
                return Ok(lambda.sqrt());
            }
        }
        previous = Some(lambda);
        power = &power * &power;
        let scale = power.iter().map(|v| v.norm()).fold(0.0, f64::max);
        if scale == 0.0 || !scale.is_finite() {
            break;
        }
        power /= C64::new(scale, 0.0);
    }
    Err(QuantError::NoConvergence {
        iterations: POWER_ITERATION_MAX,
        estimate: previous.unwrap_or(0.0).sqrt(),
    })
}

fn rayleigh(h: &DMatrix<C64>, v: &DVector<C64>) -> f64 {
    let norm2 = v.norm_squared();
    if norm2 == 0.0 {
        return 0.0;
    }
    v.dotc(&(h * v)).re / norm2
}

pub fn toeplitz(f: &SmoothFunction, m: u32, quad: &QuadratureRule<f64>) -> Result<OperatorMatrix, QuantError> {
    Ok(SectionBasis::new(m, quad)?.toeplitz(f))
}

pub fn geom_quant(f: &SmoothFunction, m: u32, quad: &QuadratureRule<f64>) -> Result<OperatorMatrix, QuantError> {
    SectionBasis::new(m, quad)?.geom_quant(f)
}

/// An element of the truncated graded ring `⊕_m H^0(P^1, O(m))`, one
/// coefficient vector (orthonormal basis) per level.
pub type GradedVector = BTreeMap<u32, DVector<C64>>;

/// The total Toeplitz operator `T_f^{(*)}`, one block per level `1..=m_max`.
#[derive(Clone, Debug)]
pub struct ToeplitzFamily {
    pub function: String,
    pub blocks: BTreeMap<u32, OperatorMatrix>,
}

impl ToeplitzFamily {
    /// Dimension of the level-`m` graded piece.
    pub fn graded_dim(&self, m: u32) -> Option<usize> {
        self.blocks.get(&m).map(OperatorMatrix::dim)
    }

    /// Block-by-block application; each level maps into itself.
    pub fn apply(&self, v: &GradedVector) -> Result<GradedVector, QuantError> {
        let mut out = GradedVector::new();
        for (&m, x) in v {
            let block = self.blocks.get(&m).ok_or(QuantError::LevelExceedsQuadrature {
                m,
                m_max: self.blocks.keys().next_back().copied().unwrap_or(0),
            })?;
            if x.len() != block.dim() {
                return Err(QuantError::DimensionMismatch { expected: block.dim(), found: x.len() });
            }
            out.insert(m, &block.entries * x);
        }
        Ok(out)
    }
}

pub fn total_toeplitz(f: &SmoothFunction, m_max: u32, quad: &QuadratureRule<f64>) -> Result<ToeplitzFamily, QuantError> {
    let mut blocks = BTreeMap::new();
    for m in 1..=m_max {
        blocks.insert(m, toeplitz(f, m, quad)?);
    }
    Ok(ToeplitzFamily { function: f.name().to_string(), blocks })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::btquant::quadrature::build_quadrature;

    fn quad(m_max: u32) -> QuadratureRule<f64> {
        build_quadrature(m_max, m_max as usize / 2 + 8, 2 * m_max as usize + 8).unwrap()
    }

    #[test]
    fn constant_one_gives_identity() {
        let q = quad(10);
        for m in [1, 4, 10] {
            let t = toeplitz(&SmoothFunction::constant(1.0), m, &q).unwrap();
            assert!((&t.entries - DMatrix::identity(t.dim(), t.dim())).iter().all(|v| v.norm() < 1e-10));
        }
    }

    #[test]
    fn height_function_spectrum() {
        let q = quad(12);
        for m in [2, 5, 12] {
            let t = toeplitz(&SmoothFunction::x3(), m, &q).unwrap();
            for k in 0..=m as usize {
                for l in 0..=m as usize {
                    let expected = if k == l { f64::from(m as i32 - 2 * k as i32) / f64::from(m + 2) } else { 0.0 };
                    assert!((t.entries[(k, l)] - expected).norm() < 1e-12);
                }
            }
            assert!((t.norm().unwrap() - f64::from(m) / f64::from(m + 2)).abs() < 1e-10);
        }
    }

    #[test]
    fn x1_is_real_tridiagonal() {
        let q = quad(8);
        let t = toeplitz(&SmoothFunction::x1(), 8, &q).unwrap();
        for k in 0..9 {
            for l in 0..9 {
                let v = t.entries[(k, l)];
                assert!(v.im.abs() < 1e-12);
                if k.abs_diff(l) != 1 {
                    assert!(v.norm() < 1e-12);
                }
            }
        }
        assert!(t.hermitian_defect() < 1e-12);
    }

    #[test]
    fn power_iteration_matches_svd() {
        let q = quad(16);
        for f in SmoothFunction::test_family() {
            let t = toeplitz(&f, 16, &q).unwrap();
            let svd = t.entries.clone().singular_values().max();
            assert!((t.norm().unwrap() - svd).abs() < 1e-9, "{} {} {}", f.name(), t.norm().unwrap(), svd);
        }
        let d = OperatorMatrix::from_entries(
            2,
            DMatrix::from_diagonal(&DVector::from_vec(vec![C64::new(0.5, 0.0), C64::new(-2.0, 0.0), C64::new(0.0, 1.0)])),
        );
        assert!((op_norm(&d).unwrap() - 2.0).abs() < 1e-10);
        assert!((op_norm(&OperatorMatrix::identity(7)).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn geometric_quantization_of_height_is_diagonal() {
        let q = quad(6);
        let g = geom_quant(&SmoothFunction::x3(), 6, &q).unwrap();
        for k in 0..7 {
            for l in 0..7 {
                let expected = if k == l { C64::new(0.0, 1.0 - 2.0 * k as f64 / 6.0) } else { C64::new(0.0, 0.0) };
                assert!((g.entries[(k, l)] - expected).norm() < 1e-12);
            }
        }
        let c = geom_quant(&SmoothFunction::constant(2.5), 6, &q).unwrap();
        assert!((&c.entries - DMatrix::identity(7, 7) * C64::new(0.0, 2.5)).iter().all(|v| v.norm() < 1e-12));
    }

    #[test]
    fn total_toeplitz_respects_grading() {
        let q = quad(5);
        let fam = total_toeplitz(&SmoothFunction::x1(), 5, &q).unwrap();
        for m in 1..=5 {
            assert_eq!(fam.graded_dim(m), Some(m as usize + 1));
        }
        let mut v = GradedVector::new();
        v.insert(3, DVector::from_element(4, C64::new(1.0, 0.0)));
        let out = fam.apply(&v).unwrap();
        assert_eq!(out.keys().collect::<Vec<_>>(), vec![&3]);
        let mut bad = GradedVector::new();
        bad.insert(2, DVector::from_element(5, C64::new(1.0, 0.0)));
        assert!(fam.apply(&bad).is_err());
    }
}
