use num_complex::Complex;

use crate::scalar::Real;

use super::QuantError;

/// Gauss–Legendre nodes and weights on `[0, 1]`, by Newton iteration on
/// the Legendre recurrence.
pub fn gauss_legendre<T: Real>(n: usize) -> Vec<(T, T)> {
    let one = T::one();
    let two = T::lit(2.0);
    let half = T::lit(0.5);
    let mut rule = Vec::with_capacity(n);
    for i in 0..n {
        let mut x = (T::PI() * T::lit(i as f64 + 0.75) / T::lit(n as f64 + 0.5)).cos();
        let mut dp = one;
        for _ in 0..100 {
            let (mut p0, mut p1) = (one, x);
            for k in 2..=n {
                let k = T::lit(k as f64);
                let p2 = ((two * k - one) * x * p1 - (k - one) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            let pn = if n == 0 { one } else { p1 };
            let pn_1 = if n == 0 { T::zero() } else { p0 };
            dp = T::lit(n as f64) * (x * pn - pn_1) / (x * x - one);
            let step = pn / dp;
            x = x - step;
            if step.abs() <= T::epsilon() * T::lit(4.0) {
                break;
            }
        }
        let w = two / ((one - x * x) * dp * dp);
        rule.push(((one - x) * half, w * half));
    }
    rule.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("finite nodes"));
    rule
}

/// One node of the sphere rule: chart point, weight (for `ω`), and the
/// compactified coordinates `t = |z|² / (1 + |z|²)` and angle `θ`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadNode<T> {
    pub z: Complex<T>,
    pub weight: T,
    pub t: T,
    pub theta: T,
}

impl<T: Real> QuadNode<T> {
    /// `(x1, x2, x3)` on the unit sphere, computed from `(t, θ)` without
    /// passing through `|z|`.
    pub fn sphere(&self) -> [T; 3] {
        let s = T::lit(2.0) * (self.t * (T::one() - self.t)).sqrt();
        [s * self.theta.cos(), s * self.theta.sin(), T::one() - T::lit(2.0) * self.t]
    }
}

/// Product rule for `∫_{P^1} F ω`: trapezoidal in the angle, Gauss–Legendre
/// in `t`. In these coordinates `ω = dt dθ`, and `(1 + |z|²)^-m |z|^(2k)`
/// becomes `t^k (1 - t)^(m-k)`, so the rule is exact on the integrands
/// that occur at levels `m <= m_max`.
#[derive(Clone, Debug)]
pub struct QuadratureRule<T> {
    nodes: Vec<QuadNode<T>>,
    radial: usize,
    angular: usize,
    m_max: u32,
}

/// Smallest radial node count that keeps Toeplitz entries of degree-2
/// ambient functions exact up to level `m_max`.
pub fn min_radial_nodes(m_max: u32) -> usize {
    m_max as usize / 2 + 4
}

/// Smallest angular node count accepted for level `m_max`.
pub fn min_angular_nodes(m_max: u32) -> usize {
    2 * m_max as usize + 4
}

pub fn build_quadrature<T: Real>(m_max: u32, radial: usize, angular: usize) -> Result<QuadratureRule<T>, QuantError> {
    if angular < min_angular_nodes(m_max) || radial < min_radial_nodes(m_max) {
        return Err(QuantError::InsufficientResolution {
            radial,
            angular,
            m_max,
        });
    }
    let dtheta = T::TAU() / T::lit(angular as f64);
    let mut nodes = Vec::with_capacity(radial * angular);
    for (t, wt) in gauss_legendre::<T>(radial) {
        let r = (t / (T::one() - t)).sqrt();
        for a in 0..angular {
            let theta = dtheta * T::lit(a as f64);
            nodes.push(QuadNode {
                z: Complex::from_polar(r, theta),
                weight: wt * dtheta,
                t,
                theta,
            });
        }
    }
    let rule = QuadratureRule { nodes, radial, angular, m_max };
    let mass = rule.total_mass();
    let tol = T::lit(1e-10).max(T::epsilon() * T::lit(1e3)) * T::TAU();
    if (mass - T::TAU()).abs() > tol {
        return Err(QuantError::MassCheck { mass: mass.to_f64().unwrap_or(f64::NAN) });
    }
    Ok(rule)
}

impl<T: Real> QuadratureRule<T> {
    pub fn nodes(&self) -> &[QuadNode<T>] {
        &self.nodes
    }

    pub fn radial(&self) -> usize {
        self.radial
    }

    pub fn angular(&self) -> usize {
        self.angular
    }

    pub fn m_max(&self) -> u32 {
        self.m_max
    }

    /// `Σ w`, which reproduces `∫ ω = 2π`.
    pub fn total_mass(&self) -> T {
        self.nodes.iter().fold(T::zero(), |acc, n| acc + n.weight)
    }

    pub fn integrate(&self, f: impl Fn(&QuadNode<T>) -> Complex<T>) -> Complex<T> {
        self.nodes
            .iter()
            .fold(Complex::new(T::zero(), T::zero()), |acc, n| acc + f(n) * n.weight)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn legendre_rule_integrates_polynomials() {
        let rule = gauss_legendre::<f64>(6);
        for k in 0..12 {
            let s: f64 = rule.iter().map(|(x, w)| w * x.powi(k)).sum();
            assert!((s - 1.0 / f64::from(k + 1)).abs() < 1e-14, "k={k}");
        }
        let rule32 = gauss_legendre::<f32>(5);
        let s: f32 = rule32.iter().map(|(x, w)| w * x * x).sum();
        assert!((s - 1.0 / 3.0).abs() < 1e-6);
    }

    #[test]
    fn total_mass_is_two_pi() {
        let q = build_quadrature::<f64>(8, 12, 24).unwrap();
        assert!((q.total_mass() - std::f64::consts::TAU).abs() < 1e-10);
        assert!(build_quadrature::<f64>(8, 12, 10).is_err());
        assert!(build_quadrature::<f64>(64, 4, 200).is_err());
    }

    #[test]
    fn monomials_are_orthogonal() {
        let m = 6;
        let q = build_quadrature::<f64>(m, 10, 20).unwrap();
        let h = |z: Complex<f64>| (1.0 + z.norm_sqr()).powi(-(m as i32));
        for j in 0..=m as i32 {
            for k in 0..=m as i32 {
                let v = q.integrate(|n| n.z.conj().powi(j) * n.z.powi(k) * h(n.z));
                if j != k {
                    assert!(v.norm() < 1e-12, "({j},{k}) -> {v}");
                }
            }
        }
    }
}
