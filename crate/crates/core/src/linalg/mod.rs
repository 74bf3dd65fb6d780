//! Exact dense linear algebra over `Q` and prime fields, and bounded cochain complexes.

mod complex;
mod field;
mod matrix;

pub use complex::{nonzero, ChainComplex, ChainMap, Cohomology, SummandLayout};
pub use field::{format_rational, parse_rational, FieldSpec, Scalar, MAX_PRIME};
pub use matrix::{rank_fraction_free, Matrix};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinalgError {
    #[error("shape mismatch in {op}: {left:?} vs {right:?}")]
    ShapeMismatch { op: &'static str, left: (usize, usize), right: (usize, usize) },
    #[error("row {row} has {found} entries, expected {expected}")]
    Ragged { row: usize, expected: usize, found: usize },
    #[error("{0} is not a supported prime")]
    NotPrime(u64),
    #[error("{value} has no image in F_{p}")]
    NotInvertibleModP { value: String, p: u64 },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("d^2 != 0 out of degree {degree}")]
    DSquaredNonzero { degree: i64 },
    #[error("malformed complex at degree {degree}: {detail}")]
    ComplexShape { degree: i64, detail: String },
}
