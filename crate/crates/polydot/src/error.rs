//! Error types shared across the crate.

use thiserror::Error;

/// Errors produced by encoders, decoders and analysis routines.
#[derive(Debug, Error)]
pub enum Error {
    /// The requested modulus failed the primality test.
    #[error("modulus {0} is not prime")]
    NotPrime(u64),

    /// Multiplicative inverse of zero was requested.
    #[error("zero has no multiplicative inverse")]
    InverseOfZero,

    /// Operands belong to different fields.
    #[error("field mismatch: {0} vs {1}")]
    FieldMismatch(u64, u64),

    /// Matrix shapes do not conform for the requested operation.
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    /// Matrix dimensions are not divisible by the requested split counts.
    #[error("partition error: {0}")]
    Partition(String),

    /// The decoder was handed fewer results than the recovery threshold.
    #[error("insufficient shares: need {needed}, got {got}")]
    InsufficientShares { needed: usize, got: usize },

    /// Two results carry the same evaluation point.
    #[error("duplicate evaluation point {0}")]
    DuplicatePoint(u64),

    /// A configuration value is out of range.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// The requested mode is outside what the code family supports.
    #[error("unsupported: {0}")]
    Unsupported(String),

    /// An exhaustive audit would exceed its enumeration budget.
    #[error("enumeration budget exceeded: need {needed}, budget {budget}")]
    BudgetExceeded { needed: u128, budget: u64 },
}

pub type Result<T> = std::result::Result<T, Error>;
