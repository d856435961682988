//! Computational bridge between quantizable Kähler manifolds and projective
//! varieties.
//!
//! * [`projgeo`]: exact projective geometry, singularities, cubics.
//! * [`coordring`]: graded coordinate rings and Hilbert functions.
//! * [`weierstrass`]: lattice sums, `℘`, `℘'` and the torus embedding into `P^2`.
//! * [`btquant`]: Berezin-Toeplitz and geometric quantization on `P^1`.
//! * [`gitquot`]: moment maps, semistability and one-parameter limits.
//!
//! The algebraic code is generic over [`Scalar`] (exact rationals, Gaussian
//! rationals, `f32`, `f64`, complex `f64`); the numerical code is generic
//! over [`Real`] where it does not depend on dense linear algebra. The
//! aliases below fix the common concrete choices.

pub mod btquant;
pub mod config;
pub mod coordring;
pub mod gitquot;
pub mod projgeo;
pub mod scalar;
pub mod weierstrass;

pub use scalar::{GaussRational, Rational, Real, Scalar, C64};

/// Exact rational homogeneous polynomial.
pub type RatPoly = projgeo::HomogeneousPolynomial<Rational>;
/// Homogeneous polynomial with Gaussian-rational coefficients.
pub type GaussPoly = projgeo::HomogeneousPolynomial<GaussRational>;
/// Homogeneous polynomial with complex floating coefficients.
pub type ComplexPoly = projgeo::HomogeneousPolynomial<C64>;
/// Exact rational projective point.
pub type RatPoint = projgeo::ProjPoint<Rational>;
/// Complex floating projective point.
pub type ComplexPoint = projgeo::ProjPoint<C64>;
/// Exact rational variety presentation.
pub type RatVariety = projgeo::VarietyPresentation<Rational>;
/// Double-precision lattice.
pub type Lattice64 = weierstrass::Lattice<f64>;
/// Double-precision sphere quadrature.
pub type Quadrature64 = btquant::QuadratureRule<f64>;
