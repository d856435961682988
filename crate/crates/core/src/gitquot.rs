//! Linear actions of reductive groups `G = K_C` on `P^n`: moment maps,
//! zero levels, infinitesimal invariance of polynomials, semistability
//! relative to a certified invariant set, orbit dimensions and
//! one-parameter limits, and a sampled check of the correspondence between
//! `μ^-1(0) / K` and the semistable locus on diagonal examples.
//!
//! The moment map uses `‖x̂‖²` in the denominator,
//! `μ(x)(a) = x̂* ρ(a) x̂ / (2πi ‖x̂‖²)`, which is the representative
//! independent normalization (the numerator is quadratic in `x̂`).

use std::f64::consts::{PI, TAU};

use nalgebra::{DMatrix, DVector};
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::projgeo::{HomogeneousPolynomial, Polynomial, ProjPoint};
use crate::scalar::{float_rank_with_floor, GaussRational, Rational, Scalar, C64};

/// Default tolerance for `‖μ‖ = 0` and for K-orbit phase matching.
pub const DEFAULT_TOL: f64 = 1e-8;

/// Relative size below which an invariant counts as vanishing at a point.
pub const INVARIANT_ZERO_TOL: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GitError {
    #[error("generator {0} is not anti-hermitian")]
    NotAntiHermitian(usize),
    #[error("generator {index} is {rows}x{cols}, expected {dim}x{dim}")]
    BadGeneratorShape { index: usize, rows: usize, cols: usize, dim: usize },
    #[error("point has {found} coordinates, the action needs {expected}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("the exact invariance check needs exact (Gaussian-rational) generators")]
    InexactGenerators,
    #[error("no certified nonconstant invariants: semistability cannot be decided")]
    EmptyInvariantSet,
    #[error("operation needs a diagonal action with integer weights")]
    NotDiagonal,
    #[error("all homogeneous coordinates are zero")]
    ZeroVector,
}

type ExactMatrix = Vec<Vec<GaussRational>>;

/// A linear action on `C^(n+1)` given by a basis of `k ⊂ u(n+1)`.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearAction {
    dim: usize,
    generators: Vec<DMatrix<C64>>,
    exact: Option<Vec<ExactMatrix>>,
    weights: Option<Vec<i64>>,
}

fn gauss_int(re: i64, im: i64) -> GaussRational {
    GaussRational::new(Rational::from_integer(re.into()), Rational::from_integer(im.into()))
}

impl LinearAction {
    /// Action from exact generators; each must satisfy `A* = -A` exactly.
    pub fn exact(dim: usize, generators: Vec<ExactMatrix>) -> Result<Self, GitError> {
        for (index, a) in generators.iter().enumerate() {
            if a.len() != dim || a.iter().any(|row| row.len() != dim) {
                return Err(GitError::BadGeneratorShape {
                    index,
                    rows: a.len(),
                    cols: a.first().map_or(0, Vec::len),
                    dim,
                });
            }
            for i in 0..dim {
                for j in 0..dim {
                    if a[i][j] != -a[j][i].conj() {
                        return Err(GitError::NotAntiHermitian(index));
                    }
                }
            }
        }
        let floats = generators
            .iter()
            .map(|a| DMatrix::from_fn(dim, dim, |i, j| a[i][j].to_c64()))
            .collect();
        Ok(LinearAction { dim, generators: floats, exact: Some(generators), weights: None })
    }

    /// Action from floating generators (anti-hermitian to `1e-12`); the
    /// exact invariance check is unavailable for it.
    pub fn numeric(generators: Vec<DMatrix<C64>>) -> Result<Self, GitError> {
        let dim = generators.first().map_or(0, DMatrix::nrows);
        for (index, a) in generators.iter().enumerate() {
            if a.nrows() != dim || a.ncols() != dim {
                return Err(GitError::BadGeneratorShape { index, rows: a.nrows(), cols: a.ncols(), dim });
            }
            let defect = (a + a.adjoint()).iter().map(|v| v.norm()).fold(0.0, f64::max);
            if defect > 1e-12 {
                return Err(GitError::NotAntiHermitian(index));
            }
        }
        Ok(LinearAction { dim, generators, exact: None, weights: None })
    }

    /// `C^*` acting by `t · x = (t^{w_0} x_0 : ... : t^{w_n} x_n)`, with
    /// compact generator `diag(i w_0, ..., i w_n)`.
    pub fn diagonal(weights: &[i64]) -> Self {
        let dim = weights.len();
        let gen: ExactMatrix = (0..dim)
            .map(|i| (0..dim).map(|j| if i == j { gauss_int(0, weights[i]) } else { gauss_int(0, 0) }).collect())
            .collect();
        let mut action = Self::exact(dim, vec![gen]).expect("diagonal imaginary matrices are anti-hermitian");
        action.weights = Some(weights.to_vec());
        action
    }

    /// The trivial action of a one-dimensional group on `C^dim`.
    pub fn trivial(dim: usize) -> Self {
        let mut action = Self::diagonal(&vec![0; dim]);
        action.weights = Some(vec![0; dim]);
        action
    }

    /// Number of homogeneous coordinates.
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// `dim_C G = dim_R K`.
    pub fn group_dim(&self) -> usize {
        self.generators.len()
    }

    pub fn generators(&self) -> &[DMatrix<C64>] {
        &self.generators
    }

    pub fn weights(&self) -> Option<&[i64]> {
        self.weights.as_deref()
    }

    pub fn is_exact(&self) -> bool {
        self.exact.is_some()
    }

    /// `exp(s A_j)`.
    pub fn flow(&self, j: usize, s: C64) -> DMatrix<C64> {
        (&self.generators[j] * s).exp()
    }

    fn check_point(&self, x: &ProjPoint<C64>) -> Result<DVector<C64>, GitError> {
        if x.len() != self.dim {
            return Err(GitError::DimensionMismatch { expected: self.dim, found: x.len() });
        }
        let v = DVector::from_column_slice(x.coords());
        if v.norm() == 0.0 {
            return Err(GitError::ZeroVector);
        }
        Ok(v)
    }

    fn diagonal_weights(&self) -> Result<&[i64], GitError> {
        self.weights.as_deref().ok_or(GitError::NotDiagonal)
    }
}

/// `μ(x)` in the generator basis.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MomentValue {
    pub coords: Vec<f64>,
}

impl MomentValue {
    pub fn norm(&self) -> f64 {
        self.coords.iter().map(|c| c * c).sum::<f64>().sqrt()
    }
}

/// `μ_j(x) = x̂* A_j x̂ / (2πi ‖x̂‖²)`.
pub fn moment_map(action: &LinearAction, x: &ProjPoint<C64>) -> Result<MomentValue, GitError> {
    let v = action.check_point(x)?;
    let n2 = v.norm_squared();
    let coords = action
        .generators
        .iter()
        .map(|a| (v.dotc(&(a * &v)) / C64::new(0.0, TAU * n2)).re)
        .collect();
    Ok(MomentValue { coords })
}

/// `2π μ_j(x) = x̂* A_j x̂ / (i ‖x̂‖²)` in exact arithmetic.
pub fn moment_map_scaled_exact(action: &LinearAction, x: &ProjPoint<GaussRational>) -> Result<Vec<Rational>, GitError> {
    let gens = action.exact.as_ref().ok_or(GitError::InexactGenerators)?;
    if x.len() != action.dim {
        return Err(GitError::DimensionMismatch { expected: action.dim, found: x.len() });
    }
    let c = x.coords();
    let n2: Rational = c.iter().map(|z| z.norm_sqr()).fold(Rational::zero(), |a, b| a + b);
    if n2.is_zero() {
        return Err(GitError::ZeroVector);
    }
    Ok(gens
        .iter()
        .map(|a| {
            let mut acc = GaussRational::zero();
            for i in 0..action.dim {
                for j in 0..action.dim {
                    acc = acc + c[i].conj() * a[i][j].clone() * c[j].clone();
                }
            }
            // x̂* A x̂ is purely imaginary for anti-hermitian A
            acc.im / n2.clone()
        })
        .collect())
}

/// Indices of the points with `‖μ‖ <= tol`.
pub fn zero_level(action: &LinearAction, points: &[ProjPoint<C64>], tol: f64) -> Result<Vec<usize>, GitError> {
    let mut out = Vec::new();
    for (i, p) in points.iter().enumerate() {
        if moment_map(action, p)?.norm() <= tol {
            out.push(i);
        }
    }
    Ok(out)
}

/// `D_A F = Σ_{i,k} A_ik X_k ∂F/∂X_i`, the derivative of `F` along the
/// linear vector field `x -> A x`.
pub fn derivation(f: &HomogeneousPolynomial<GaussRational>, a: &[Vec<GaussRational>]) -> Polynomial<GaussRational> {
    let n = f.nvars();
    let mut acc = Polynomial::zero(n);
    for (i, row) in a.iter().enumerate() {
        let di = f.as_poly().derivative(i);
        if di.is_zero() {
            continue;
        }
        for (k, aik) in row.iter().enumerate() {
            if aik.is_zero() {
                continue;
            }
            acc = &acc + &(&Polynomial::var(n, k) * &di.scale(aik));
        }
    }
    acc
}

/// Whether `F` is annihilated by the derivations along every `A_j` and
/// `i A_j`, i.e. by all of `g = k ⊕ i k`. Exact.
pub fn infinitesimal_invariance(f: &HomogeneousPolynomial<Rational>, action: &LinearAction) -> Result<bool, GitError> {
    let gens = action.exact.as_ref().ok_or(GitError::InexactGenerators)?;
    if f.nvars() != action.dim {
        return Err(GitError::DimensionMismatch { expected: action.dim, found: f.nvars() });
    }
    let fg = f.map_coeffs(|c| GaussRational::new(c.clone(), Rational::zero()));
    let i = gauss_int(0, 1);
    for a in gens {
        let ia: ExactMatrix = a.iter().map(|row| row.iter().map(|v| v.clone() * i.clone()).collect()).collect();
        if !derivation(&fg, a).is_zero() || !derivation(&fg, &ia).is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Floating-point variant for numeric actions; the result is not a
/// certificate.
pub fn infinitesimal_invariance_numeric(
    f: &HomogeneousPolynomial<Rational>,
    action: &LinearAction,
    tol: f64,
) -> Result<bool, GitError> {
    if f.nvars() != action.dim {
        return Err(GitError::DimensionMismatch { expected: action.dim, found: f.nvars() });
    }
    let fc = f.map_coeffs(|c| c.to_c64());
    for a in &action.generators {
        let mut size: f64 = 0.0;
        let n = action.dim;
        let mut acc = Polynomial::zero(n);
        for i in 0..n {
            let di = fc.as_poly().derivative(i);
            for k in 0..n {
                acc = &acc + &(&Polynomial::var(n, k) * &di.scale(&a[(i, k)]));
            }
        }
        for (_, c) in acc.terms() {
            size = size.max(c.norm());
        }
        if size > tol {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Polynomials with their exact invariance certificates.
#[derive(Clone, Debug, PartialEq)]
pub struct InvariantSet {
    pub polys: Vec<HomogeneousPolynomial<Rational>>,
    pub certificates: Vec<bool>,
}

impl InvariantSet {
    pub fn empty() -> Self {
        InvariantSet { polys: Vec::new(), certificates: Vec::new() }
    }

    /// Runs the exact invariance check on each polynomial.
    pub fn certify(polys: Vec<HomogeneousPolynomial<Rational>>, action: &LinearAction) -> Result<Self, GitError> {
        let certificates = polys
            .iter()
            .map(|f| infinitesimal_invariance(f, action))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(InvariantSet { polys, certificates })
    }

    /// The certified invariants of positive degree.
    pub fn certified(&self) -> impl Iterator<Item = &HomogeneousPolynomial<Rational>> {
        self.polys
            .iter()
            .zip(&self.certificates)
            .filter(|(f, ok)| **ok && f.degree() > 0 && !f.is_zero())
            .map(|(f, _)| f)
    }

    pub fn all_certified(&self) -> bool {
        self.certificates.iter().all(|c| *c)
    }
}

fn invariant_vanishes(f: &HomogeneousPolynomial<Rational>, x: &ProjPoint<C64>) -> bool {
    let unit = x.normalized();
    let fc = f.map_coeffs(|c| c.to_c64());
    let mass: f64 = fc.as_poly().terms().map(|(_, c)| c.norm()).sum();
    let value = fc.eval(unit.coords()).expect("dimension checked by caller");
    value.norm() <= INVARIANT_ZERO_TOL * mass
}

/// `x` is semistable (relative to `inv`) iff some certified nonconstant
/// invariant does not vanish at `x`. Completeness of `inv` is the caller's
/// responsibility.
pub fn semistable(x: &ProjPoint<C64>, inv: &InvariantSet) -> Result<bool, GitError> {
    let mut any = false;
    for f in inv.certified() {
        any = true;
        if f.nvars() != x.len() {
            return Err(GitError::DimensionMismatch { expected: f.nvars(), found: x.len() });
        }
        if !invariant_vanishes(f, x) {
            return Ok(true);
        }
    }
    if any {
        Ok(false)
    } else {
        Err(GitError::EmptyInvariantSet)
    }
}

/// Complex dimension of the `G`-orbit through `x`: the rank of
/// `{A_j x̂}` modulo the line `C x̂` (the vectors `i A_j x̂` add nothing
/// over `C`).
pub fn orbit_dim(action: &LinearAction, x: &ProjPoint<C64>) -> Result<usize, GitError> {
    let v = action.check_point(x)?;
    let v = &v / C64::new(v.norm(), 0.0);
    let mut rows = Vec::new();
    let mut scale: f64 = 0.0;
    for a in &action.generators {
        let av = a * &v;
        let proj = &av - &v * v.dotc(&av);
        scale = scale.max(a.norm());
        rows.push(proj.iter().cloned().collect::<Vec<_>>());
    }
    if rows.is_empty() {
        return Ok(0);
    }
    Ok(float_rank_with_floor(rows, scale.max(1.0)))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LimitDirection {
    ToZero,
    ToInfinity,
}

/// `lim (t^{w_0} x_0 : ... : t^{w_n} x_n)`: the coordinates whose weight is
/// extremal among the nonzero ones (minimal as `t -> 0`, maximal as
/// `t -> ∞`) survive, the rest become zero.
pub fn one_param_limit<S: Scalar>(
    weights: &[i64],
    x: &ProjPoint<S>,
    direction: LimitDirection,
) -> Result<ProjPoint<S>, GitError> {
    if weights.len() != x.len() {
        return Err(GitError::DimensionMismatch { expected: weights.len(), found: x.len() });
    }
    let support = x.coords().iter().zip(weights).filter(|(c, _)| !c.is_zero()).map(|(_, w)| *w);
    let extreme = match direction {
        LimitDirection::ToZero => support.min(),
        LimitDirection::ToInfinity => support.max(),
    }
    .ok_or(GitError::ZeroVector)?;
    let coords = x
        .coords()
        .iter()
        .zip(weights)
        .map(|(c, w)| if *w == extreme { c.clone() } else { S::zero() })
        .collect();
    ProjPoint::new(coords).map_err(|_| GitError::ZeroVector)
}

/// `(t^{w_0} x_0 : ... : t^{w_n} x_n)` for real `t = e^s`.
pub fn act_real(weights: &[i64], x: &ProjPoint<C64>, s: f64) -> ProjPoint<C64> {
    let coords = x.coords().iter().zip(weights).map(|(c, w)| c * (s * *w as f64).exp()).collect();
    ProjPoint::new(coords).expect("nonzero stays nonzero").normalized()
}

/// Searches the real one-parameter orbit of `x` (and its two limits) for a
/// point with `|μ| <= tol`. Along `t = e^s` the numerator
/// `Σ w_j e^{2 w_j s} |x_j|²` is nondecreasing, so a sign change is located
/// by bisection in `s`.
pub fn orbit_zero(action: &LinearAction, x: &ProjPoint<C64>, tol: f64) -> Result<Option<ProjPoint<C64>>, GitError> {
    let w = action.diagonal_weights()?.to_vec();
    let mu = |p: &ProjPoint<C64>| moment_map(action, p).map(|m| m.coords[0]);
    let x = x.normalized();
    if mu(&x)?.abs() <= tol {
        return Ok(Some(x));
    }
    for dir in [LimitDirection::ToZero, LimitDirection::ToInfinity] {
        let lim = one_param_limit(&w, &x, dir)?;
        if mu(&lim)?.abs() <= tol {
            return Ok(Some(lim.normalized()));
        }
    }
    let (mut lo, mut hi) = (-1.0_f64, 1.0_f64);
    let mut bracketed = false;
    for _ in 0..60 {
        if mu(&act_real(&w, &x, lo))? <= 0.0 && mu(&act_real(&w, &x, hi))? >= 0.0 {
            bracketed = true;
            break;
        }
        lo *= 2.0;
        hi *= 2.0;
        if hi > 700.0 / (w.iter().map(|v| v.unsigned_abs()).max().unwrap_or(1).max(1) as f64) {
            break;
        }
    }
    if !bracketed {
        return Ok(None);
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let p = act_real(&w, &x, mid);
        let m = mu(&p)?;
        if m == 0.0 {
            return Ok(Some(p));
        }
        if m < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 4.0 * f64::EPSILON * hi.abs().max(1.0) {
            break;
        }
    }
    let p = act_real(&w, &x, 0.5 * (lo + hi));
    Ok(if mu(&p)?.abs() <= tol { Some(p) } else { None })
}

/// Whether `y = λ exp(θ A) x` for some `λ ∈ C^*` and real `θ`, for a
/// diagonal action with integer weights.
pub fn same_k_orbit(weights: &[i64], x: &ProjPoint<C64>, y: &ProjPoint<C64>, tol: f64) -> bool {
    let (x, y) = (x.normalized(), y.normalized());
    let (xc, yc) = (x.coords(), y.coords());
    if xc.len() != yc.len() || xc.len() != weights.len() {
        return false;
    }
    let support: Vec<usize> = (0..xc.len()).filter(|&j| xc[j].norm() > tol).collect();
    if (0..xc.len()).any(|j| (xc[j].norm() > tol) != (yc[j].norm() > tol)) {
        return false;
    }
    if support.iter().any(|&j| (xc[j].norm() - yc[j].norm()).abs() > tol) {
        return false;
    }
    let r = support[0];
    let phase = |j: usize| (yc[j] / xc[j]).arg() - (yc[r] / xc[r]).arg();
    let wrap = |a: f64| {
        let t = a.rem_euclid(TAU);
        t.min(TAU - t)
    };
    let Some(&k) = support.iter().find(|&&j| weights[j] != weights[r]) else {
        // all weights on the support agree: θ acts as a scalar
        return support.iter().all(|&j| wrap(phase(j)) <= tol);
    };
    let dw = (weights[k] - weights[r]) as f64;
    let candidates = dw.abs() as i64;
    (0..candidates).any(|c| {
        let theta = (phase(k) + TAU * c as f64) / dw;
        support
            .iter()
            .all(|&j| wrap(phase(j) - theta * (weights[j] - weights[r]) as f64) <= tol)
    })
}

/// A shipped example: an action together with a certified invariant set.
#[derive(Clone, Debug)]
pub struct GitExample {
    pub name: &'static str,
    pub action: LinearAction,
    pub invariants: InvariantSet,
}

impl GitExample {
    /// `C^*` on `P^1` with weights `(-1, 1)`; invariants `X0 X1`.
    pub fn opposite_weights() -> Self {
        let action = LinearAction::diagonal(&[-1, 1]);
        let f = crate::projgeo::parse_homogeneous("X0 X1", Some(2)).expect("valid polynomial");
        let invariants = InvariantSet::certify(vec![f], &action).expect("exact action");
        GitExample { name: "weights(-1,1)", action, invariants }
    }

    /// `C^*` on `P^1` with weights `(1, 1)`: no nonconstant invariants and
    /// an empty zero level.
    pub fn equal_weights() -> Self {
        GitExample { name: "weights(1,1)", action: LinearAction::diagonal(&[1, 1]), invariants: InvariantSet::empty() }
    }

    pub fn trivial() -> Self {
        GitExample { name: "trivial", action: LinearAction::trivial(2), invariants: InvariantSet::empty() }
    }

    pub fn shipped() -> Vec<GitExample> {
        vec![Self::opposite_weights(), Self::equal_weights(), Self::trivial()]
    }

    pub fn by_weights(weights: &[i64]) -> Self {
        match weights {
            [-1, 1] => Self::opposite_weights(),
            [1, 1] => Self::equal_weights(),
            w if w.iter().all(|v| *v == 0) => GitExample {
                name: "trivial",
                action: LinearAction::trivial(w.len()),
                invariants: InvariantSet::empty(),
            },
            w => GitExample { name: "custom", action: LinearAction::diagonal(w), invariants: InvariantSet::empty() },
        }
    }
}

/// Stable in the sense used here: full orbit dimension, semistable, and
/// (for diagonal actions) both one-parameter limits leave the locus where
/// some invariant is nonzero, so the orbit is closed there.
pub fn stable(x: &ProjPoint<C64>, example: &GitExample) -> Result<bool, GitError> {
    if orbit_dim(&example.action, x)? != example.action.group_dim() || !semistable(x, &example.invariants)? {
        return Ok(false);
    }
    let w = example.action.diagonal_weights()?;
    for dir in [LimitDirection::ToZero, LimitDirection::ToInfinity] {
        let lim = one_param_limit(w, x, dir)?;
        if semistable(&lim, &example.invariants)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `count` random points of `P^n` (coordinates uniform in the unit square
/// of `C`), from a fixed seed.
pub fn sample_points(dim: usize, count: usize, seed: u64) -> Vec<ProjPoint<C64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let coords: Vec<C64> = (0..dim)
            .map(|_| C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
            .collect();
        if let Ok(p) = ProjPoint::new(coords) {
            if p.norm() > 1e-6 {
                out.push(p);
            }
        }
    }
    out
}

/// Points of `μ^-1(0)`: random points flowed along their real orbit to the
/// zero level, then rotated by a random element of `K`. Points whose orbit
/// closure misses the zero level are skipped.
pub fn sample_zero_level(example: &GitExample, count: usize, seed: u64, tol: f64) -> Result<Vec<ProjPoint<C64>>, GitError> {
    let w = example.action.diagonal_weights()?.to_vec();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    let mut attempts = 0;
    while out.len() < count && attempts < 50 * count.max(1) {
        attempts += 1;
        let x = sample_points(example.action.dim(), 1, rng.random())[0].clone();
        if let Some(z) = orbit_zero(&example.action, &x, tol)? {
            let theta: f64 = rng.random_range(0.0..TAU);
            let coords = z.coords().iter().zip(&w).map(|(c, wj)| c * C64::from_polar(1.0, theta * *wj as f64)).collect();
            out.push(ProjPoint::new(coords).map_err(|_| GitError::ZeroVector)?);
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PointReport {
    pub point: Vec<[f64; 2]>,
    pub mu: Vec<f64>,
    pub orbit_dim: usize,
    /// `None` when the invariant set is empty.
    pub semistable: Option<bool>,
    pub orbit_meets_zero_level: bool,
    pub limit_to_zero: Vec<[f64; 2]>,
    pub limit_to_infinity: Vec<[f64; 2]>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct KirwanReport {
    pub example: String,
    pub samples: usize,
    pub zero_level_samples: usize,
    /// Whether a certified nonconstant invariant exists.
    pub determinable: bool,
    pub note: Option<String>,
    pub semistable_count: usize,
    /// Samples where "semistable" and "orbit closure meets μ^-1(0)" disagree.
    pub equivalence_violations: usize,
    /// Zero-level samples that are not semistable.
    pub zero_level_unstable: usize,
    /// Classes of zero-level samples under K-orbit equivalence.
    pub k_orbit_classes: usize,
    /// Classes of zero-level samples by the values of the invariants.
    pub invariant_classes: usize,
    pub quotient_cardinality: Option<usize>,
    pub points: Vec<PointReport>,
}

impl KirwanReport {
    pub fn holds(&self) -> bool {
        self.determinable
            && self.equivalence_violations == 0
            && self.zero_level_unstable == 0
            && self.quotient_cardinality.is_some()
    }
}

fn pairs(p: &ProjPoint<C64>) -> Vec<[f64; 2]> {
    p.coords().iter().map(|c| [c.re, c.im]).collect()
}

/// Invariant values `[F_1(x)^{L/d_1} : ... : F_k(x)^{L/d_k}]` as a
/// projective point (`L` the lcm of the degrees), or `None` where all
/// invariants vanish.
fn invariant_class(inv: &InvariantSet, x: &ProjPoint<C64>) -> Option<ProjPoint<C64>> {
    let fs: Vec<_> = inv.certified().collect();
    let l = fs.iter().map(|f| f.degree()).fold(1, num_integer::lcm);
    let unit = x.normalized();
    let vals: Vec<C64> = fs
        .iter()
        .map(|f| {
            let v = f.map_coeffs(|c| c.to_c64()).eval(unit.coords()).expect("dimension checked");
            v.powi((l / f.degree()) as i32)
        })
        .collect();
    if vals.iter().all(|v| v.norm() <= INVARIANT_ZERO_TOL) {
        return None;
    }
    ProjPoint::new(vals).ok()
}

fn count_classes<T>(items: &[T], same: impl Fn(&T, &T) -> bool) -> usize {
    let mut reps: Vec<&T> = Vec::new();
    for it in items {
        if !reps.iter().any(|r| same(r, it)) {
            reps.push(it);
        }
    }
    reps.len()
}

/// Sampled check of the symplectic/GIT correspondence on a diagonal
/// example: for each sample, semistable ⟺ the closure of its orbit meets
/// `μ^-1(0)`; every zero-level sample is semistable; and the zero-level
/// samples form as many K-orbit classes as invariant-value classes.
pub fn kirwan_correspondence_check(
    example: &GitExample,
    samples: &[ProjPoint<C64>],
    zero_samples: &[ProjPoint<C64>],
    tol: f64,
) -> Result<KirwanReport, GitError> {
    let action = &example.action;
    let w = action.diagonal_weights()?.to_vec();
    let determinable = example.invariants.certified().next().is_some();
    let ss = |p: &ProjPoint<C64>| -> Result<Option<bool>, GitError> {
        if determinable {
            semistable(p, &example.invariants).map(Some)
        } else {
            Ok(None)
        }
    };
    let mut points = Vec::with_capacity(samples.len());
    let mut violations = 0;
    let mut ss_count = 0;
    for x in samples {
        let s = ss(x)?;
        let meets = orbit_zero(action, x, tol)?.is_some();
        if s == Some(true) {
            ss_count += 1;
        }
        if let Some(s) = s {
            if s != meets {
                violations += 1;
            }
        }
        points.push(PointReport {
            point: pairs(x),
            mu: moment_map(action, x)?.coords,
            orbit_dim: orbit_dim(action, x)?,
            semistable: s,
            orbit_meets_zero_level: meets,
            limit_to_zero: pairs(&one_param_limit(&w, x, LimitDirection::ToZero)?),
            limit_to_infinity: pairs(&one_param_limit(&w, x, LimitDirection::ToInfinity)?),
        });
    }
    let mut zero_unstable = 0;
    let mut zero_points = Vec::new();
    for z in zero_samples {
        if moment_map(action, z)?.norm() > tol {
            continue;
        }
        if ss(z)? == Some(false) {
            zero_unstable += 1;
        }
        zero_points.push(z.clone());
    }
    let k_classes = count_classes(&zero_points, |a, b| same_k_orbit(&w, a, b, tol));
    let (inv_classes, cardinality, note) = if determinable {
        let classes: Vec<Option<ProjPoint<C64>>> = zero_points.iter().map(|z| invariant_class(&example.invariants, z)).collect();
        let n = count_classes(&classes, |a, b| match (a, b) {
            (Some(a), Some(b)) => a.approx_eq(b, tol),
            (None, None) => true,
            _ => false,
        });
        let card = (n == k_classes).then_some(n);
        let note = card.is_none().then(|| format!("{k_classes} K-orbit classes but {n} invariant classes"));
        (n, card, note)
    } else {
        (
            0,
            None,
            Some("no nonconstant invariants: X^ss determination not possible from the empty certified set".to_string()),
        )
    };
    Ok(KirwanReport {
        example: example.name.to_string(),
        samples: samples.len(),
        zero_level_samples: zero_points.len(),
        determinable,
        note,
        semistable_count: ss_count,
        equivalence_violations: violations,
        zero_level_unstable: zero_unstable,
        k_orbit_classes: k_classes,
        invariant_classes: inv_classes,
        quotient_cardinality: cardinality,
        points,
    })
}

/// `1 / (2π)`, the value of `|μ|` at the fixed points of the weight
/// `(-1, 1)` and `(1, 1)` examples.
pub const INV_TWO_PI: f64 = 0.5 / PI;
