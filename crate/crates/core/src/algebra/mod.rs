//! Exact operator algebra: normal-ordered noncommutative polynomials over
//! complex rationals, truncated power series in a formal parameter, and the
//! identity checker that compares a product of exponentials against
//! `exp(ξ(A+B))` coefficient by coefficient.
//!
//! Everything here is exact. No floating point enters an identity check.

mod builtin;
pub mod cases;
mod opseries;
mod poly;
mod scalar;
mod series;
mod table;

pub use builtin::{builtin_table, BuiltinTable};
pub use opseries::{evolution_series, exp_series, verify_identity, IdentityReport, Mismatch, OperatorSeries};
pub use poly::{commutator, normal_order, poly_mul, Monomial, OperatorPolynomial, Word};
pub use scalar::Scalar;
pub use series::ScalarSeries;
pub use table::{verify_jacobi, CommutationTable, Commutator, Generator, GeneratorId};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("unknown generator {0}")]
    UnknownGenerator(String),
    #[error("malformed commutation table: {0}")]
    MalformedTable(String),
    #[error("cannot parse scalar {0:?}")]
    ParseScalar(String),
    #[error("truncation orders differ: {left} vs {right}")]
    OrderMismatch { left: usize, right: usize },
    #[error("exponent series has a nonzero constant term")]
    NonzeroConstantTerm,
    #[error("singular series operation: {0}")]
    SingularSeries(&'static str),
    #[error("unknown builtin table {0:?}")]
    UnknownTable(String),
    #[error("invalid table document: {0}")]
    Json(String),
    #[error("table {0} violates the Jacobi identity")]
    JacobiViolation(String),
    #[error("series are built over different commutation tables")]
    TableMismatch,
}
