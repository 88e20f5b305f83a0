//! Exact scalar, polynomial and matrix arithmetic.

pub mod gaussian;
pub mod laurent;
pub mod linalg;
pub mod mat2;
pub mod mpoly;
pub mod upoly;

pub use gaussian::{GaussianRational, Rational};
pub use laurent::{LaurentPoly, Monomial};
pub use mat2::Mat2;
pub use mpoly::MPoly;
pub use upoly::UPoly;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AlgebraError {
    #[error("evaluation at z = 0 of a polynomial with negative z-exponents")]
    PoleAtZero,
    #[error("negative u-exponent")]
    NegativeUExponent,
    #[error("parse error: {0}")]
    Parse(String),
}
