use crate::scalar::{Scalar, C64};

use super::GeometryError;

/// Point of projective space given by a homogeneous coordinate vector.
///
/// Equality is projective: two representatives compare equal iff they are
/// proportional (all 2x2 minors of the pair vanish).
#[derive(Clone, Debug)]
pub struct ProjPoint<S> {
    coords: Vec<S>,
}

impl<S: Scalar> ProjPoint<S> {
    pub fn new(coords: Vec<S>) -> Result<Self, GeometryError> {
        if coords.iter().all(|c| c.is_zero()) {
            return Err(GeometryError::ZeroPoint);
        }
        Ok(ProjPoint { coords })
    }

    pub fn coords(&self) -> &[S] {
        &self.coords
    }

    /// Number of homogeneous coordinates (`n + 1` for a point of `P^n`).
    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn scaled(&self, lambda: &S) -> Result<Self, GeometryError> {
        ProjPoint::new(self.coords.iter().map(|c| c.clone() * lambda.clone()).collect())
    }

    /// Euclidean norm of the representative, as `f64`.
    pub fn norm(&self) -> f64 {
        self.coords
            .iter()
            .map(|c| c.modulus().powi(2))
            .sum::<f64>()
            .sqrt()
    }

    pub fn to_c64(&self) -> ProjPoint<C64> {
        ProjPoint { coords: self.coords.iter().map(Scalar::to_c64).collect() }
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> Result<ProjPoint<T>, GeometryError> {
        ProjPoint::new(self.coords.iter().map(f).collect())
    }

    /// Index of the first nonzero coordinate.
    pub fn first_nonzero(&self) -> usize {
        self.coords
            .iter()
            .position(|c| !c.is_zero())
            .expect("projective point has a nonzero coordinate")
    }

    /// Affine coordinates in the chart `X_i = 1`, if `X_i != 0`.
    pub fn affine_chart(&self, i: usize) -> Option<Vec<S>> {
        let pivot = self.coords.get(i)?.clone();
        if pivot.is_zero() {
            return None;
        }
        Some(
            self.coords
                .iter()
                .enumerate()
                .filter(|(j, _)| *j != i)
                .map(|(_, c)| c.clone() / pivot.clone())
                .collect(),
        )
    }

    /// Projective equality up to a relative tolerance (floating points).
    pub fn approx_eq(&self, other: &ProjPoint<S>, tol: f64) -> bool {
        if self.len() != other.len() {
            return false;
        }
        let scale = self.norm() * other.norm();
        for i in 0..self.len() {
            for j in i + 1..self.len() {
                let minor = self.coords[i].clone() * other.coords[j].clone()
                    - self.coords[j].clone() * other.coords[i].clone();
                if minor.modulus() > tol * scale {
                    return false;
                }
            }
        }
        true
    }
}

impl<S: Scalar> PartialEq for ProjPoint<S> {
    fn eq(&self, other: &Self) -> bool {
        if self.len() != other.len() {
            return false;
        }
        if S::EXACT {
            (0..self.len()).all(|i| {
                (i + 1..self.len()).all(|j| {
                    self.coords[i].clone() * other.coords[j].clone()
                        == self.coords[j].clone() * other.coords[i].clone()
                })
            })
        } else {
            self.approx_eq(other, 1e-12)
        }
    }
}

impl ProjPoint<C64> {
    /// Point from real floating coordinates.
    pub fn from_reals(coords: &[f64]) -> Result<Self, GeometryError> {
        ProjPoint::new(coords.iter().map(|&x| C64::new(x, 0.0)).collect())
    }

    /// Representative with unit Euclidean norm and first nonzero coordinate
    /// real positive.
    pub fn normalized(&self) -> ProjPoint<C64> {
        let n = self.norm();
        let k = self
            .coords
            .iter()
            .position(|c| c.norm() > 1e-300)
            .unwrap_or(0);
        let phase = self.coords[k] / self.coords[k].norm();
        ProjPoint { coords: self.coords.iter().map(|c| c / (phase * n)).collect() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat, Rational};

    #[test]
    fn projective_equality_is_proportionality() {
        let p = ProjPoint::new(vec![rat(1, 1), rat(2, 1), rat(3, 1)]).unwrap();
        let q = p.scaled(&rat(-5, 7)).unwrap();
        assert_eq!(p, q);
        let r = ProjPoint::new(vec![rat(1, 1), rat(2, 1), rat(4, 1)]).unwrap();
        assert_ne!(p, r);
    }

    #[test]
    fn zero_vector_is_rejected() {
        assert!(matches!(
            ProjPoint::<Rational>::new(vec![rat(0, 1), rat(0, 1)]),
            Err(GeometryError::ZeroPoint)
        ));
    }

    #[test]
    fn charts() {
        let p = ProjPoint::new(vec![rat(2, 1), rat(0, 1), rat(4, 1)]).unwrap();
        assert_eq!(p.affine_chart(2), Some(vec![rat(1, 2), rat(0, 1)]));
        assert_eq!(p.affine_chart(1), None);
    }
}
