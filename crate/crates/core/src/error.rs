use thiserror::Error;

/// Crate-wide error type. Variants map onto the CLI exit codes: hypothesis
/// violations exit 2, budget overruns exit 3, internal consistency failures
/// (a broken algebraic identity, always a bug) exit 4.
#[derive(Debug, Error)]
pub enum Error {
    #[error("expected a prime, got {0}")]
    NotPrime(u64),

    #[error("zero input not allowed in {0}")]
    ZeroInput(&'static str),

    #[error("hypothesis violated: {0}")]
    Hypothesis(String),

    #[error("duplicate x-coordinate in point set")]
    DuplicateX,

    #[error("polygon domains differ")]
    DomainMismatch,

    #[error("insufficient precision: {0}")]
    InsufficientPrecision(String),

    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),

    #[error("internal consistency failure: {0}")]
    Inconsistency(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn hypothesis(msg: impl Into<String>) -> Error {
    Error::Hypothesis(msg.into())
}
