//! Graded projective coordinate rings `K[X0..Xn] / (f1, ..., fs)` of
//! complete intersections, described by the degrees of a regular sequence.
//!
//! The degree-`m` piece of `K[P^n]` is the space of degree-`m` forms, i.e.
//! the space of holomorphic sections of `O(m)`; for `P^1` it is the level-`m`
//! quantum Hilbert space used by [`crate::btquant`].

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::projgeo::{HomogeneousPolynomial, Monomial};
use crate::scalar::Scalar;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RingError {
    #[error("{relations} relations exceed the {nvars} variables")]
    TooManyRelations { relations: usize, nvars: usize },
    #[error("relation degrees must be positive")]
    ZeroDegree,
    #[error("relation {index} has degree {found}, expected {expected}")]
    DegreeMismatch { index: usize, expected: u32, found: u32 },
    #[error("relation {0} is the zero polynomial")]
    ZeroRelation(usize),
    #[error("need at least one variable")]
    NoVariables,
}

/// A graded ring presented by the degrees of a regular sequence of
/// relations. No relations encodes the polynomial ring `K[P^n]`.
#[derive(Clone, Debug, PartialEq)]
pub struct GradedRingPresentation {
    nvars: usize,
    relation_degrees: Vec<u32>,
}

impl GradedRingPresentation {
    /// The regular-sequence property is the caller's assertion; only the
    /// shape is checked here.
    pub fn new(nvars: usize, relation_degrees: Vec<u32>) -> Result<Self, RingError> {
        if nvars == 0 {
            return Err(RingError::NoVariables);
        }
        if relation_degrees.len() > nvars {
            return Err(RingError::TooManyRelations {
                relations: relation_degrees.len(),
                nvars,
            });
        }
        if relation_degrees.contains(&0) {
            return Err(RingError::ZeroDegree);
        }
        Ok(GradedRingPresentation { nvars, relation_degrees })
    }

    pub fn polynomial_ring(nvars: usize) -> Result<Self, RingError> {
        Self::new(nvars, Vec::new())
    }

    /// Presentation from explicit relations. A single nonzero form of
    /// positive degree is always a regular sequence, which is the only case
    /// validated.
    pub fn from_relations<S: Scalar>(
        relations: &[HomogeneousPolynomial<S>],
    ) -> Result<Self, RingError> {
        let nvars = relations.first().map(|f| f.nvars()).ok_or(RingError::NoVariables)?;
        for (i, f) in relations.iter().enumerate() {
            if f.is_zero() {
                return Err(RingError::ZeroRelation(i));
            }
            if f.nvars() != nvars {
                return Err(RingError::DegreeMismatch {
                    index: i,
                    expected: nvars as u32,
                    found: f.nvars() as u32,
                });
            }
        }
        Self::new(nvars, relations.iter().map(HomogeneousPolynomial::degree).collect())
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn relation_degrees(&self) -> &[u32] {
        &self.relation_degrees
    }

    /// Dimension of the degree-`m` piece by Koszul inclusion-exclusion:
    /// `Σ_{S ⊆ relations} (-1)^|S| C(n + m - Σ_S d_i, n)`.
    pub fn hilbert_function(&self, m: u32) -> BigInt {
        let n = self.nvars as i64 - 1;
        let s = self.relation_degrees.len();
        let mut total = BigInt::zero();
        for subset in 0u64..(1u64 << s) {
            let shift: i64 = (0..s)
                .filter(|i| subset & (1 << i) != 0)
                .map(|i| i64::from(self.relation_degrees[i]))
                .sum();
            let term = binomial(n + i64::from(m) - shift, n);
            if subset.count_ones() % 2 == 0 {
                total += term;
            } else {
                total -= term;
            }
        }
        total
    }

    pub fn hilbert_data(&self, max_m: u32) -> HilbertData {
        HilbertData {
            values: (0..=max_m).map(|m| (m, self.hilbert_function(m))).collect(),
            poly_degree: self.hilbert_polynomial_degree(),
        }
    }

    /// Degree of the Hilbert polynomial, read off from finite differences of
    /// the Hilbert function beyond `Σ d_i`. `-1` when the function is
    /// eventually zero (empty projective variety).
    pub fn hilbert_polynomial_degree(&self) -> i64 {
        let start: u32 = self.relation_degrees.iter().sum();
        let count = self.nvars + 2;
        let mut diffs: Vec<BigInt> = (0..count as u32)
            .map(|k| self.hilbert_function(start + k))
            .collect();
        let mut degree = -1;
        while diffs.iter().any(|d| !d.is_zero()) {
            degree += 1;
            diffs = diffs.windows(2).map(|w| &w[1] - &w[0]).collect();
        }
        degree
    }

    /// Krull dimension of the graded ring: Hilbert-polynomial degree + 1.
    pub fn krull_dim(&self) -> i64 {
        self.hilbert_polynomial_degree() + 1
    }

    /// Dimension of the associated projective variety: Krull dimension - 1.
    pub fn variety_dim(&self) -> i64 {
        self.krull_dim() - 1
    }
}

/// Values of the Hilbert function on `0..=max_m` and the Hilbert polynomial
/// degree.
#[derive(Clone, Debug, PartialEq)]
pub struct HilbertData {
    pub values: BTreeMap<u32, BigInt>,
    pub poly_degree: i64,
}

/// Krull dimension for a hypersurface (or any complete intersection).
pub fn krull_dim_hypersurface(ring: &GradedRingPresentation) -> i64 {
    ring.krull_dim()
}

/// `C(top, k)` with the convention `C(top, k) = 0` for `top < k` (including
/// negative `top`).
pub fn binomial(top: i64, k: i64) -> BigInt {
    if k < 0 || top < k {
        return BigInt::zero();
    }
    let k = k.min(top - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(top - i) / BigInt::from(i + 1);
    }
    acc
}

/// Monomials of degree `m` not divisible by the graded-lex leading monomial
/// of `f`. A single generator is a Gröbner basis of its principal ideal, so
/// these monomials form a basis of the degree-`m` piece of `K[X]/(f)`.
pub fn graded_basis_hypersurface<S: Scalar>(
    f: &HomogeneousPolynomial<S>,
    m: u32,
) -> Result<Vec<Monomial>, RingError> {
    let (lead, _) = f.as_poly().leading_term().ok_or(RingError::ZeroRelation(0))?;
    Ok(Monomial::all_of_degree(f.nvars(), m)
        .into_iter()
        .filter(|mono| !lead.divides(mono))
        .collect())
}

/// Convenience: Hilbert function value as `u64` (panics beyond `u64`).
pub fn hilbert_value_u64(ring: &GradedRingPresentation, m: u32) -> u64 {
    let v = ring.hilbert_function(m);
    assert!(!v.is_negative(), "Hilbert function is nonnegative");
    v.to_u64().expect("Hilbert function value fits in u64")
}
