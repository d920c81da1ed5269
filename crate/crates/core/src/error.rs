use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("weights must be non-empty")]
    EmptyWeights,
    #[error("entries must be positive integers, found {0}")]
    NonPositiveEntry(u64),
    #[error("dimension {0} is too small for a family")]
    DimensionTooSmall(i64),
    #[error("dimension one is only allowed for P^1 and the plane conic")]
    DimensionOneNotAllowed,
    #[error("Fano index {0} is not positive")]
    NotFano(i64),
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("cannot strip: need {needed} unit weights, found {found}")]
    StripFailed { needed: usize, found: usize },
    #[error("pair is not in the class of product-balanced representable pairs")]
    NotInClassP,
    #[error("pre-minimal morphism search failed: {0}")]
    Unsat(String),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
