use std::fmt;
use std::sync::Arc;

use crate::projgeo::{Monomial, Polynomial};
use crate::scalar::C64;

use super::quadrature::QuadNode;
use super::QuantError;

/// Sign in `Δf = LAPLACIAN_SIGN · 2 (1 + |z|²)² ∂∂̄f`. With `+1` this is the
/// Laplace–Beltrami operator of the metric `ω(·, J·)` with nonpositive
/// spectrum (`Δx3 = -4 x3`); it is the sign for which the Tuynman relation
/// holds, and the regression tests pin it.
pub const LAPLACIAN_SIGN: f64 = 1.0;

/// Eigenvalue of `Δ` on the first spherical harmonics `x1, x2, x3`.
pub const FIRST_HARMONIC_EIGENVALUE: f64 = -4.0;

/// `{x1, x2} = POISSON_CONSTANT · x3` (and cyclically) for `∫ω = 2π`.
pub const POISSON_CONSTANT: f64 = 2.0;

const GRADIENT_STEP: f64 = 1e-5;
const HESSIAN_STEP: f64 = 1e-3;

/// Value and first/second Wirtinger derivatives at a chart point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Jet {
    pub value: C64,
    pub dz: C64,
    pub dzbar: C64,
    pub dzdzbar: C64,
}

/// Components of a real tangent vector `a ∂_z + b ∂_z̄` in the chart.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ChartVector {
    pub dz: C64,
    pub dzbar: C64,
}

type ValueFn = Arc<dyn Fn(C64) -> C64 + Send + Sync>;
type GradientFn = Arc<dyn Fn(C64) -> (C64, C64) + Send + Sync>;

#[derive(Clone)]
struct AmbientData {
    poly: Polynomial<C64>,
    grad: [Polynomial<C64>; 3],
    hess: [[Polynomial<C64>; 3]; 3],
}

impl AmbientData {
    fn new(poly: Polynomial<C64>) -> Self {
        let grad = [poly.derivative(0), poly.derivative(1), poly.derivative(2)];
        let hess = [0, 1, 2].map(|i| [0, 1, 2].map(|j| grad[i].derivative(j)));
        AmbientData { poly, grad, hess }
    }
}

#[derive(Clone)]
enum Repr {
    Ambient(Box<AmbientData>),
    Chart {
        value: ValueFn,
        at_infinity: Option<C64>,
        gradient: Option<GradientFn>,
    },
}

/// A smooth function on `P^1`, given either as a polynomial in the ambient
/// coordinates `(x1, x2, x3)` of the unit sphere (analytic derivatives,
/// closed under products, brackets and the Laplacian), or as a chart
/// evaluator `z -> f(z)` with optional analytic gradient.
#[derive(Clone)]
pub struct SmoothFunction {
    name: String,
    repr: Repr,
}

impl fmt::Debug for SmoothFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SmoothFunction").field("name", &self.name).finish()
    }
}

/// `(x1, x2, x3)` at the chart point `z` (inverse stereographic projection).
pub fn sphere_point(z: C64) -> [f64; 3] {
    let d = 1.0 + z.norm_sqr();
    [2.0 * z.re / d, 2.0 * z.im / d, (1.0 - z.norm_sqr()) / d]
}

/// `∂x_i/∂z` at `z`; `∂x_i/∂z̄` is the conjugate since `x_i` is real.
pub fn sphere_dz(z: C64) -> [C64; 3] {
    let d2 = (1.0 + z.norm_sqr()).powi(2);
    let zb = z.conj();
    let one = C64::new(1.0, 0.0);
    let i = C64::new(0.0, 1.0);
    [(one - zb * zb) / d2, -i * (one + zb * zb) / d2, -2.0 * zb / d2]
}

fn ambient_jet(a: &AmbientData, z: C64) -> Jet {
    let x = sphere_point(z).map(|v| C64::new(v, 0.0));
    let dx = sphere_dz(z);
    let d2 = (1.0 + z.norm_sqr()).powi(2);
    let ev = |p: &Polynomial<C64>| p.eval(&x).expect("three ambient coordinates");
    let g = [ev(&a.grad[0]), ev(&a.grad[1]), ev(&a.grad[2])];
    let mut dz = C64::new(0.0, 0.0);
    let mut dzbar = C64::new(0.0, 0.0);
    let mut dzdzbar = C64::new(0.0, 0.0);
    for i in 0..3 {
        dz += g[i] * dx[i];
        dzbar += g[i] * dx[i].conj();
        // ∂∂̄ x_i = -2 x_i / (1 + |z|²)²
        dzdzbar += g[i] * x[i] * (-2.0 / d2);
        for l in 0..3 {
            dzdzbar += ev(&a.hess[i][l]) * dx[i] * dx[l].conj();
        }
    }
    Jet { value: ev(&a.poly), dz, dzbar, dzdzbar }
}

fn var(i: usize) -> Polynomial<C64> {
    Polynomial::var(3, i)
}

impl SmoothFunction {
    /// Function given by a polynomial in `(x1, x2, x3)` (variables 0, 1, 2).
    pub fn ambient(name: impl Into<String>, poly: Polynomial<C64>) -> Result<Self, QuantError> {
        if poly.nvars() != 3 {
            return Err(QuantError::NotAmbient(poly.nvars()));
        }
        Ok(SmoothFunction {
            name: name.into(),
            repr: Repr::Ambient(Box::new(AmbientData::new(poly))),
        })
    }

    /// Function given by a chart evaluator; `at_infinity` is its value at
    /// the point `z = ∞` when known.
    pub fn chart(
        name: impl Into<String>,
        value: impl Fn(C64) -> C64 + Send + Sync + 'static,
        at_infinity: Option<C64>,
    ) -> Self {
        SmoothFunction {
            name: name.into(),
            repr: Repr::Chart { value: Arc::new(value), at_infinity, gradient: None },
        }
    }

    /// Attach an analytic gradient `z -> (∂f/∂z, ∂f/∂z̄)` to a chart function.
    pub fn with_gradient(mut self, gradient: impl Fn(C64) -> (C64, C64) + Send + Sync + 'static) -> Self {
        if let Repr::Chart { gradient: g, .. } = &mut self.repr {
            *g = Some(Arc::new(gradient));
        }
        self
    }

    pub fn constant(c: f64) -> Self {
        let name = if c == 1.0 { "1".to_string() } else { format!("{c}") };
        Self::from_poly(name, Polynomial::constant(3, C64::new(c, 0.0)))
    }

    pub fn x1() -> Self {
        Self::from_poly("x1", var(0))
    }

    pub fn x2() -> Self {
        Self::from_poly("x2", var(1))
    }

    pub fn x3() -> Self {
        Self::from_poly("x3", var(2))
    }

    /// `{1, x1, x2, x3, x3^2, x1 x2}`.
    pub fn test_family() -> Vec<SmoothFunction> {
        ["1", "x1", "x2", "x3", "x3^2", "x1x2"]
            .iter()
            .map(|n| Self::by_name(n).expect("family names are known"))
            .collect()
    }

    pub fn by_name(name: &str) -> Option<Self> {
        let f = match name {
            "1" => Self::constant(1.0),
            "x1" => Self::x1(),
            "x2" => Self::x2(),
            "x3" => Self::x3(),
            "x3^2" => Self::from_poly("x3^2", &var(2) * &var(2)),
            "x1x2" => Self::from_poly("x1x2", &var(0) * &var(1)),
            _ => return None,
        };
        Some(f)
    }

    fn from_poly(name: impl Into<String>, poly: Polynomial<C64>) -> Self {
        Self::ambient(name, poly).expect("three variables")
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn renamed(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    /// The ambient polynomial, when the function has one.
    pub fn ambient_poly(&self) -> Option<&Polynomial<C64>> {
        match &self.repr {
            Repr::Ambient(a) => Some(&a.poly),
            Repr::Chart { .. } => None,
        }
    }

    pub fn eval(&self, z: C64) -> C64 {
        match &self.repr {
            Repr::Ambient(a) => {
                let x = sphere_point(z).map(|v| C64::new(v, 0.0));
                a.poly.eval(&x).expect("three ambient coordinates")
            }
            Repr::Chart { value, .. } => value(z),
        }
    }

    /// Value at a quadrature node; ambient functions use the node's sphere
    /// coordinates directly.
    pub fn eval_node(&self, node: &QuadNode<f64>) -> C64 {
        match &self.repr {
            Repr::Ambient(a) => {
                let x = node.sphere().map(|v| C64::new(v, 0.0));
                a.poly.eval(&x).expect("three ambient coordinates")
            }
            Repr::Chart { value, .. } => value(node.z),
        }
    }

    pub fn at_infinity(&self) -> Option<C64> {
        match &self.repr {
            Repr::Ambient(a) => {
                let south = [0.0, 0.0, -1.0].map(|v| C64::new(v, 0.0));
                Some(a.poly.eval(&south).expect("three ambient coordinates"))
            }
            Repr::Chart { at_infinity, .. } => *at_infinity,
        }
    }

    /// Whether derivatives are analytic (rather than finite differences).
    pub fn has_analytic_gradient(&self) -> bool {
        match &self.repr {
            Repr::Ambient(_) => true,
            Repr::Chart { gradient, .. } => gradient.is_some(),
        }
    }

    /// `(∂f/∂z, ∂f/∂z̄)`: analytic when available, central differences
    /// (step `1e-5`) otherwise.
    pub fn gradient(&self, z: C64) -> Result<(C64, C64), QuantError> {
        if !z.re.is_finite() || !z.im.is_finite() {
            return Err(QuantError::GradientUnavailable);
        }
        match &self.repr {
            Repr::Ambient(a) => {
                let j = ambient_jet(a, z);
                Ok((j.dz, j.dzbar))
            }
            Repr::Chart { gradient: Some(g), .. } => Ok(g(z)),
            Repr::Chart { value, .. } => Ok(fd_gradient(value.as_ref(), z, GRADIENT_STEP)),
        }
    }

    pub fn jet(&self, z: C64) -> Result<Jet, QuantError> {
        if !z.re.is_finite() || !z.im.is_finite() {
            return Err(QuantError::GradientUnavailable);
        }
        match &self.repr {
            Repr::Ambient(a) => Ok(ambient_jet(a, z)),
            Repr::Chart { value, .. } => {
                let (dz, dzbar) = self.gradient(z)?;
                let h = HESSIAN_STEP;
                let f = value.as_ref();
                let lap = (f(z + h) + f(z - h) + f(z + C64::new(0.0, h)) + f(z - C64::new(0.0, h))
                    - 4.0 * f(z))
                    / (h * h);
                Ok(Jet { value: f(z), dz, dzbar, dzdzbar: lap / 4.0 })
            }
        }
    }

    /// `sup |f|`, sampled on a `(t, θ)` grid covering both poles.
    pub fn sup_norm(&self) -> f64 {
        let (nt, na) = (200, 400);
        let mut best: f64 = 0.0;
        for it in 0..=nt {
            let t = it as f64 / nt as f64;
            let thetas = if it == 0 || it == nt { 1 } else { na };
            for ia in 0..thetas {
                let theta = std::f64::consts::TAU * ia as f64 / na as f64;
                let v = if it == nt {
                    match self.at_infinity() {
                        Some(v) => v,
                        None => continue,
                    }
                } else {
                    let r = (t / (1.0 - t)).sqrt();
                    let node = QuadNode { z: C64::from_polar(r, theta), weight: 0.0, t, theta };
                    self.eval_node(&node)
                };
                best = best.max(v.norm());
            }
        }
        best
    }

    pub fn scale(&self, c: C64) -> SmoothFunction {
        let name = format!("{c}*{}", self.name);
        match &self.repr {
            Repr::Ambient(a) => Self::from_poly(name, a.poly.scale(&c)),
            Repr::Chart { .. } => {
                let f = self.clone();
                let inf = self.at_infinity().map(|v| v * c);
                SmoothFunction::chart(name, move |z| f.eval(z) * c, inf)
            }
        }
    }

    /// `a f + b g`.
    pub fn combine(&self, a: C64, other: &SmoothFunction, b: C64) -> SmoothFunction {
        let name = format!("{a}*{}+{b}*{}", self.name, other.name);
        match (&self.repr, &other.repr) {
            (Repr::Ambient(p), Repr::Ambient(q)) => {
                Self::from_poly(name, &p.poly.scale(&a) + &q.poly.scale(&b))
            }
            _ => {
                let (f, g) = (self.clone(), other.clone());
                let inf = match (self.at_infinity(), other.at_infinity()) {
                    (Some(u), Some(v)) => Some(a * u + b * v),
                    _ => None,
                };
                SmoothFunction::chart(name, move |z| a * f.eval(z) + b * g.eval(z), inf)
            }
        }
    }

    pub fn product(&self, other: &SmoothFunction) -> SmoothFunction {
        let name = format!("({})*({})", self.name, other.name);
        match (&self.repr, &other.repr) {
            (Repr::Ambient(p), Repr::Ambient(q)) => Self::from_poly(name, &p.poly * &q.poly),
            _ => {
                let (f, g) = (self.clone(), other.clone());
                let inf = match (self.at_infinity(), other.at_infinity()) {
                    (Some(u), Some(v)) => Some(u * v),
                    _ => None,
                };
                SmoothFunction::chart(name, move |z| f.eval(z) * g.eval(z), inf)
            }
        }
    }

    /// `{f, g}` as a function. For ambient polynomials this is
    /// `POISSON_CONSTANT · x · (∇F × ∇G)`, which only sees the tangential
    /// parts of the gradients and so does not depend on the extension off
    /// the sphere.
    pub fn poisson_function(&self, other: &SmoothFunction) -> SmoothFunction {
        let name = format!("{{{},{}}}", self.name, other.name);
        match (&self.repr, &other.repr) {
            (Repr::Ambient(p), Repr::Ambient(q)) => {
                let (f, g) = (&p.grad, &q.grad);
                let mut acc = Polynomial::zero(3);
                for (i, j, k) in [(0, 1, 2), (1, 2, 0), (2, 0, 1)] {
                    let cross = &(&f[i] * &g[j]) - &(&f[j] * &g[i]);
                    acc = &acc + &(&var(k) * &cross);
                }
                Self::from_poly(name, acc.scale(&C64::new(POISSON_CONSTANT, 0.0)))
            }
            _ => {
                let (f, g) = (self.clone(), other.clone());
                SmoothFunction::chart(name, move |z| poisson(&f, &g, z).unwrap_or(C64::new(f64::NAN, 0.0)), None)
            }
        }
    }

    /// `Δf` as a function. For ambient polynomials the round-sphere
    /// Laplacian is `Δ_{R^3} F - E(E + 1) F` with `E` the Euler operator,
    /// and `ω` gives half the round metric, hence the factor 2.
    pub fn laplacian_function(&self) -> SmoothFunction {
        let name = format!("lap({})", self.name);
        match &self.repr {
            Repr::Ambient(a) => {
                let flat = &(&a.hess[0][0] + &a.hess[1][1]) + &a.hess[2][2];
                let euler = |p: &Polynomial<C64>| {
                    Polynomial::from_terms(
                        3,
                        p.terms().map(|(mono, c)| (mono.clone(), *c * f64::from(mono.degree()))),
                    )
                };
                let e1 = euler(&a.poly);
                let e2 = euler(&e1);
                let sphere = &(&flat - &e2) - &e1;
                Self::from_poly(name, sphere.scale(&C64::new(2.0 * LAPLACIAN_SIGN, 0.0)))
            }
            Repr::Chart { .. } => {
                let f = self.clone();
                SmoothFunction::chart(name, move |z| laplacian(&f, z).unwrap_or(C64::new(f64::NAN, 0.0)), None)
            }
        }
    }

    /// `f - (1/2m) Δf`, the symbol on the Toeplitz side of the Tuynman
    /// relation.
    pub fn tuynman_symbol(&self, m: u32) -> SmoothFunction {
        let lap = self.laplacian_function();
        self.combine(C64::new(1.0, 0.0), &lap, C64::new(-1.0 / (2.0 * f64::from(m)), 0.0))
            .renamed(format!("{}-lap/{}", self.name, 2 * m))
    }
}

fn fd_gradient(f: &(dyn Fn(C64) -> C64 + Send + Sync), z: C64, h: f64) -> (C64, C64) {
    let fx = (f(z + h) - f(z - h)) / (2.0 * h);
    let fy = (f(z + C64::new(0.0, h)) - f(z - C64::new(0.0, h))) / (2.0 * h);
    let i = C64::new(0.0, 1.0);
    ((fx - i * fy) / 2.0, (fx + i * fy) / 2.0)
}

/// Central-difference gradient of `f`, independent of any analytic formula.
pub fn finite_difference_gradient(f: &SmoothFunction, z: C64, h: f64) -> (C64, C64) {
    let g = |w: C64| f.eval(w);
    fd_gradient(&g, z, h)
}

/// `X_f` with `ω(X_f, ·) = df`, for `ω = i (1 + |z|²)^-2 dz ∧ dz̄`:
/// `X_f = -i f_z̄ (1 + |z|²)² ∂_z + i f_z (1 + |z|²)² ∂_z̄`.
pub fn hamiltonian_vf(f: &SmoothFunction, z: C64) -> Result<ChartVector, QuantError> {
    let (fz, fzb) = f.gradient(z)?;
    let d2 = (1.0 + z.norm_sqr()).powi(2);
    let i = C64::new(0.0, 1.0);
    Ok(ChartVector { dz: -i * fzb * d2, dzbar: i * fz * d2 })
}

/// `ω(X, Y)` for chart vectors.
pub fn kahler_form(z: C64, x: ChartVector, y: ChartVector) -> C64 {
    let density = C64::new(0.0, 1.0) / (1.0 + z.norm_sqr()).powi(2);
    density * (x.dz * y.dzbar - x.dzbar * y.dz)
}

/// `{f, g} = ω(X_f, X_g) = i (1 + |z|²)² (f_z̄ g_z - f_z g_z̄)`.
pub fn poisson(f: &SmoothFunction, g: &SmoothFunction, z: C64) -> Result<C64, QuantError> {
    let xf = hamiltonian_vf(f, z)?;
    let xg = hamiltonian_vf(g, z)?;
    Ok(kahler_form(z, xf, xg))
}

/// `Δf = LAPLACIAN_SIGN · 2 (1 + |z|²)² ∂∂̄f`.
pub fn laplacian(f: &SmoothFunction, z: C64) -> Result<C64, QuantError> {
    let j = f.jet(z)?;
    Ok(j.dzdzbar * (2.0 * LAPLACIAN_SIGN * (1.0 + z.norm_sqr()).powi(2)))
}

/// Monomial `x1^a x2^b x3^c` as an ambient polynomial.
pub fn ambient_monomial(a: u32, b: u32, c: u32) -> Polynomial<C64> {
    Polynomial::from_terms(3, [(Monomial::new(vec![a, b, c]), C64::new(1.0, 0.0))])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid() -> Vec<C64> {
        let mut pts = Vec::new();
        for i in -4..=4 {
            for j in -4..=4 {
                pts.push(C64::new(0.37 * f64::from(i) + 0.01, 0.29 * f64::from(j) - 0.02));
            }
        }
        pts
    }

    #[test]
    fn sphere_coordinates_are_on_the_unit_sphere() {
        for z in grid() {
            let x = sphere_point(z);
            assert!((x[0] * x[0] + x[1] * x[1] + x[2] * x[2] - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn analytic_gradients_match_differences() {
        for f in SmoothFunction::test_family() {
            for z in grid() {
                let (a, b) = f.gradient(z).unwrap();
                let (fa, fb) = finite_difference_gradient(&f, z, 1e-5);
                assert!((a - fa).norm() < 1e-6 && (b - fb).norm() < 1e-6, "{} at {z}", f.name());
            }
        }
    }

    #[test]
    fn poisson_bracket_of_coordinates() {
        let (x1, x2, x3) = (SmoothFunction::x1(), SmoothFunction::x2(), SmoothFunction::x3());
        for z in grid() {
            let x = sphere_point(z);
            let b12 = poisson(&x1, &x2, z).unwrap();
            let b23 = poisson(&x2, &x3, z).unwrap();
            let b31 = poisson(&x3, &x1, z).unwrap();
            assert!((b12 - POISSON_CONSTANT * x[2]).norm() < 1e-12);
            assert!((b23 - POISSON_CONSTANT * x[0]).norm() < 1e-12);
            assert!((b31 - POISSON_CONSTANT * x[1]).norm() < 1e-12);
            assert!((b12 + poisson(&x2, &x1, z).unwrap()).norm() < 1e-14);
            assert!(poisson(&x1, &x1, z).unwrap().norm() < 1e-14);
        }
    }

    #[test]
    fn symbolic_operations_agree_with_chart_formulas() {
        let family = SmoothFunction::test_family();
        for f in &family {
            let lap = f.laplacian_function();
            for g in &family {
                let pb = f.poisson_function(g);
                for z in grid() {
                    assert!((pb.eval(z) - poisson(f, g, z).unwrap()).norm() < 1e-11);
                }
            }
            for z in grid() {
                assert!((lap.eval(z) - laplacian(f, z).unwrap()).norm() < 1e-10, "{}", f.name());
            }
        }
    }

    #[test]
    fn first_harmonics_are_laplace_eigenfunctions() {
        for f in [SmoothFunction::x1(), SmoothFunction::x2(), SmoothFunction::x3()] {
            for z in grid() {
                let r = laplacian(&f, z).unwrap() - FIRST_HARMONIC_EIGENVALUE * f.eval(z);
                assert!(r.norm() < 1e-12);
            }
        }
        let c = SmoothFunction::constant(3.0);
        assert!(laplacian(&c, C64::new(0.3, 0.1)).unwrap().norm() < 1e-15);
    }

    #[test]
    fn hamiltonian_field_of_height_is_rotation() {
        let x3 = SmoothFunction::x3();
        for z in grid() {
            let v = hamiltonian_vf(&x3, z).unwrap();
            assert!((v.dz - C64::new(0.0, 2.0) * z).norm() < 1e-12);
            assert!((v.dzbar - v.dz.conj()).norm() < 1e-12);
            assert!(kahler_form(z, v, v).norm() < 1e-14);
        }
        let zero = hamiltonian_vf(&SmoothFunction::constant(2.0), C64::new(0.5, 0.5)).unwrap();
        assert_eq!(zero.dz, C64::new(0.0, 0.0));
    }

    #[test]
    fn chart_functions_fall_back_to_differences() {
        let f = SmoothFunction::chart("h", |z: C64| C64::new(1.0 / (1.0 + z.norm_sqr()), 0.0), Some(C64::new(0.0, 0.0)));
        // 1 / (1 + |z|²) = (1 + x3) / 2
        let half = C64::new(0.5, 0.0);
        let g = SmoothFunction::x3().combine(half, &SmoothFunction::constant(1.0), half);
        for z in grid() {
            assert!((f.eval(z) - g.eval(z)).norm() < 1e-14);
            let (a, _) = f.gradient(z).unwrap();
            let (b, _) = g.gradient(z).unwrap();
            assert!((a - b).norm() < 1e-8);
            assert!((laplacian(&f, z).unwrap() - laplacian(&g, z).unwrap()).norm() < 1e-4);
        }
        assert!(!f.has_analytic_gradient());
        assert!(f.gradient(C64::new(f64::INFINITY, 0.0)).is_err());
    }

    #[test]
    fn sup_norms() {
        assert!((SmoothFunction::x3().sup_norm() - 1.0).abs() < 1e-12);
        assert!((SmoothFunction::x1().sup_norm() - 1.0).abs() < 1e-12);
        assert!((SmoothFunction::by_name("x1x2").unwrap().sup_norm() - 0.5).abs() < 1e-4);
    }
}
