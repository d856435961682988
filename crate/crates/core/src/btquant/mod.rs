//! Berezin–Toeplitz and geometric quantization of `P^1` with the
//! Fubini–Study quantum line bundle.
//!
//! Conventions, in the chart `z`:
//!
//! * `ω = i (1 + |z|²)^-2 dz ∧ dz̄`, so `∫ ω = 2π`;
//! * `ĥ_m = (1 + |z|²)^-m` on `L^m = O(m)`, with curvature `-i m ω`;
//! * `⟨s1, s2⟩ = ∫ ĥ_m s̄1 s2 ω`;
//! * `ω(X_f, ·) = df` and `{f, g} = ω(X_f, X_g)`;
//! * `P_f = -(1/m) ∇_{X_f} + i f` at level `m`, i.e. `X_f` is taken for
//!   the level-`m` form `m ω`.
//!
//! The quadrature is generic over [`Real`](crate::Real); the section spaces
//! and operators are dense `nalgebra` matrices over `f64`.

mod diagnostics;
mod functions;
mod operators;
mod quadrature;

use thiserror::Error;

pub use diagnostics::{
    curvature_check, dirac_residual, dirac_residual_in, doubling_levels, loglog_fit, norm_asymptotics,
    product_residual, product_residual_in, run_check, star_c1_check, star_c1_in, tuynman_residual,
    tuynman_residual_in, Check, CurvatureReport, NormRow, NormTable, Series, StarRow,
};
pub use functions::{
    ambient_monomial, finite_difference_gradient, hamiltonian_vf, kahler_form, laplacian, poisson,
    sphere_dz, sphere_point, ChartVector, Jet, SmoothFunction, FIRST_HARMONIC_EIGENVALUE, LAPLACIAN_SIGN,
    POISSON_CONSTANT,
};
pub use operators::{
    geom_quant, op_norm, toeplitz, total_toeplitz, GradedVector, OperatorMatrix, SectionBasis, ToeplitzFamily,
    POWER_ITERATION_MAX, POWER_ITERATION_TOL,
};
pub use quadrature::{
    build_quadrature, gauss_legendre, min_angular_nodes, min_radial_nodes, QuadNode, QuadratureRule,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum QuantError {
    #[error("quadrature with {radial} radial x {angular} angular nodes is too coarse for level {m_max}")]
    InsufficientResolution { radial: usize, angular: usize, m_max: u32 },
    #[error("quadrature mass {mass} differs from 2π")]
    MassCheck { mass: f64 },
    #[error("level {m} exceeds the quadrature's maximum level {m_max}")]
    LevelExceedsQuadrature { m: u32, m_max: u32 },
    #[error("level {0} is too small for this operation")]
    LevelTooSmall(u32),
    #[error("Gram matrix is not positive definite")]
    GramNotPositive,
    #[error("power iteration did not converge after {iterations} steps (estimate {estimate})")]
    NoConvergence { iterations: usize, estimate: f64 },
    #[error("gradient unavailable at this point")]
    GradientUnavailable,
    #[error("ambient polynomials need 3 variables, got {0}")]
    NotAmbient(usize),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("check '{0}' needs a second function")]
    MissingSecondFunction(&'static str),
}
