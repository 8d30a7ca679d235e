use thiserror::Error;

use crate::algebra::FieldSpec;
use crate::semigroup::InvalidReason;

/// Errors raised by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not a prime below 2^32")]
    NotPrime(u64),
    #[error("field mismatch: {0} vs {1}")]
    FieldMismatch(FieldSpec, FieldSpec),
    #[error("divisor is not monic in y or has degree 0")]
    NonMonicDivisor,
    #[error("f(0,y) = 0: the curve contains the branch x = 0")]
    ContainsXAxis,
    #[error("insufficient precision: {0}")]
    Precision(String),
    #[error("characteristic {p} divides {n}")]
    CharacteristicDivides { p: u64, n: u64 },
    #[error("invalid characteristic sequence: {0}")]
    InvalidSequence(InvalidReason),
    #[error("empty sequence")]
    EmptySequence,
    #[error("{a} is not divisible by {d}")]
    NotDivisible { a: i64, d: u64 },
    #[error("degree mismatch: {0}")]
    Degree(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("hypothesis violated: {0}")]
    Hypothesis(String),
    #[error("constants must be nonzero")]
    ZeroConstant,
    #[error("iteration cap {0} exceeded")]
    IterationCap(u64),
    #[error("division by zero")]
    DivisionByZero,
}

pub type Result<T> = std::result::Result<T, Error>;
