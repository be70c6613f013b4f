//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("modulus {0} is not prime")]
    NotPrime(u32),

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("d_out . d_in != 0 at entry ({row}, {col}); differential rules are inconsistent")]
    CompositionNonzero { row: usize, col: usize },

    #[error("unknown generator {0}")]
    UnknownGenerator(String),

    #[error("element is not homogeneous in homological degree")]
    NotHomogeneous,

    #[error("elements belong to different presentations")]
    MixedPresentation,

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("internal degree {0} is not divisible by 2(p-1)")]
    DegreeNotDivisible(u128),

    #[error("window too small: {0}")]
    IncompleteTable(String),

    #[error("verification mismatch: {0}")]
    OracleMismatch(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
