use thiserror::Error;

/// Errors produced by the weight and verification machinery.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid tuple collection: {0}")]
    InvalidTuples(String),
    #[error("tuple collection is empty")]
    EmptyCollection,
    #[error("collection is not quadratic (found a tuple of length {0})")]
    NonQuadratic(usize),
    #[error("A(x) vanishes for this collection")]
    ZeroA,
    #[error("no n <= {0} with A(x) | x^n - 1")]
    NoPeriod(usize),
    #[error("operands belong to different field contexts")]
    CtxMismatch,
    #[error("n = {requested} exceeds the configured cap {cap}")]
    CapExceeded { requested: usize, cap: usize },
    #[error("no exact split found for Theta_{0}")]
    SplitNotFound(usize),
    #[error("non-integral value: {0}")]
    NonIntegral(String),
    #[error("non-integral delta multiplicity for d = {0}")]
    NonIntegralMultiplicity(usize),
    #[error("insufficient data: need {needed} terms, have {available}")]
    InsufficientData { needed: usize, available: usize },
    #[error("identity mismatch: {0}")]
    IdentityMismatch(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
