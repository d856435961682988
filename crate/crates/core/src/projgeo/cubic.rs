use serde::{Deserialize, Serialize};

use crate::scalar::Scalar;

use super::point::ProjPoint;
use super::poly::{HomogeneousPolynomial, Monomial};
use super::variety::VarietyPresentation;
use super::GeometryError;

/// Coefficients of the Weierstrass cubic `Y^2 Z = 4 X^3 - g2 X Z^2 - g3 Z^3`.
#[derive(Clone, Debug, PartialEq)]
pub struct CubicParams<S> {
    pub g2: S,
    pub g3: S,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum CubicType {
    Smooth,
    Nodal,
    Cuspidal,
}

impl<S: Scalar> CubicParams<S> {
    pub fn new(g2: S, g3: S) -> Self {
        CubicParams { g2, g3 }
    }

    /// `g2^3 - 27 g3^2`.
    pub fn discriminant(&self) -> S {
        let g2_cubed = self.g2.clone() * self.g2.clone() * self.g2.clone();
        g2_cubed - S::from_i64(27) * self.g3.clone() * self.g3.clone()
    }

    /// Smooth iff the discriminant is nonzero; among singular cubics the
    /// right-hand side `4x^3 - g2 x - g3` has a triple root exactly when
    /// `g2 = g3 = 0` (cusp) and a double root otherwise (node).
    ///
    /// Floating inputs compare against the natural scale
    /// `max(|g2|^3, 27 |g3|^2)`.
    pub fn classify(&self) -> CubicType {
        let scale = self.g2.modulus().powi(3).max(27.0 * self.g3.modulus().powi(2));
        if !self.discriminant().is_negligible(scale) {
            return CubicType::Smooth;
        }
        let small = scale.cbrt().max(1.0);
        if self.g2.is_negligible(small) && self.g3.is_negligible(small) {
            CubicType::Cuspidal
        } else {
            CubicType::Nodal
        }
    }

    /// Homogeneous form `Y^2 Z - 4 X^3 + g2 X Z^2 + g3 Z^3` in `(X, Y, Z)`.
    pub fn homogeneous(&self) -> HomogeneousPolynomial<S> {
        let m = |e: [u32; 3]| Monomial::new(e.to_vec());
        HomogeneousPolynomial::from_terms(
            3,
            [
                (m([0, 2, 1]), S::one()),
                (m([3, 0, 0]), S::from_i64(-4)),
                (m([1, 0, 2]), self.g2.clone()),
                (m([0, 0, 3]), self.g3.clone()),
            ],
        )
        .expect("cubic is homogeneous")
    }

    pub fn variety(&self) -> VarietyPresentation<S> {
        VarietyPresentation::hypersurface(self.homogeneous(), Some(1))
    }

    /// The unique candidate for a singular point, confirmed by the Jacobian
    /// rank test.
    ///
    /// Any singular point has `Z != 0` (at `Z = 0` the partials force
    /// `X = Y = 0`) and `Y = 0`, and `∂F/∂Z = 0` then gives
    /// `2 g2 X + 3 g3 = 0`; when `g2 = 0` the `X`-partial forces `X = 0`.
    pub fn singular_point(&self) -> Option<ProjPoint<S>> {
        let x = if self.g2.is_zero() {
            S::zero()
        } else {
            -(S::from_i64(3) * self.g3.clone()) / (S::from_i64(2) * self.g2.clone())
        };
        let p = ProjPoint::new(vec![x, S::zero(), S::one()]).ok()?;
        let v = self.variety();
        let tol = if S::EXACT { 0.0 } else { 1e-9 };
        match v.is_singular_point_with_tol(&p, 1, tol) {
            Ok(true) => Some(p),
            _ => None,
        }
    }
}

/// The nodal cubic `Y^2 Z = 4 X^2 (X + Z)`.
pub fn nodal_cubic<S: Scalar>() -> VarietyPresentation<S> {
    let m = |e: [u32; 3]| Monomial::new(e.to_vec());
    let f = HomogeneousPolynomial::from_terms(
        3,
        [
            (m([0, 2, 1]), S::one()),
            (m([3, 0, 0]), S::from_i64(-4)),
            (m([2, 0, 1]), S::from_i64(-4)),
        ],
    )
    .expect("cubic is homogeneous");
    VarietyPresentation::hypersurface(f, Some(1))
}

/// The cuspidal cubic `Y^2 Z = 4 X^3`.
pub fn cuspidal_cubic<S: Scalar>() -> VarietyPresentation<S> {
    CubicParams::new(S::zero(), S::zero()).variety()
}

/// Degree-2 Veronese map `P^1 -> P^2`, `(a0 : a1) -> (a0^2 : a0 a1 : a1^2)`.
///
/// The image lies on the conic `X1^2 - X0 X2 = 0`.
pub fn veronese_square<S: Scalar>(p: &ProjPoint<S>) -> Result<ProjPoint<S>, GeometryError> {
    if p.len() != 2 {
        return Err(GeometryError::DimensionMismatch { expected: 2, found: p.len() });
    }
    let (a0, a1) = (p.coords()[0].clone(), p.coords()[1].clone());
    ProjPoint::new(vec![a0.clone() * a0.clone(), a0 * a1.clone(), a1.clone() * a1])
}

/// The conic `X1^2 - X0 X2` cutting out the Veronese image.
pub fn veronese_conic<S: Scalar>() -> HomogeneousPolynomial<S> {
    HomogeneousPolynomial::from_terms(
        3,
        [
            (Monomial::new(vec![0, 2, 0]), S::one()),
            (Monomial::new(vec![1, 0, 1]), -S::one()),
        ],
    )
    .expect("conic is homogeneous")
}
