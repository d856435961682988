//! Projective and affine geometry over exact or floating scalars:
//! homogeneous polynomials, varieties, Jacobi-matrix singularity tests,
//! Zariski tangent dimensions, Weierstrass cubics and the Veronese map.

mod cubic;
mod parse;
mod point;
mod poly;
mod variety;

use thiserror::Error;

pub use cubic::{cuspidal_cubic, nodal_cubic, veronese_conic, veronese_square, CubicParams, CubicType};
pub use parse::{parse_homogeneous, parse_point, parse_polynomial};
pub use point::ProjPoint;
pub use poly::{HomogeneousPolynomial, Monomial, Polynomial};
pub use variety::{
    evaluate, zariski_tangent_dim, JacobiMatrix, PointVerdict, SingularityReport,
    VarietyPresentation, FLOAT_MEMBERSHIP_TOL,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeometryError {
    #[error("dimension mismatch: expected {expected} coordinates, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("polynomial is not homogeneous")]
    NotHomogeneous,
    #[error("point does not lie on the variety")]
    PointNotOnVariety,
    #[error("index {index} out of range for {len} variables")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("all homogeneous coordinates are zero")]
    ZeroPoint,
    #[error("variety presentation needs at least one generator")]
    NoGenerators,
    #[error("dimension {0} exceeds the ambient dimension")]
    BadDimension(usize),
    #[error("parse error: {0}")]
    Parse(String),
}
