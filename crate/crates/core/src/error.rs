use thiserror::Error;

/// Errors split into two families the CLI maps to distinct exit codes:
/// domain errors (bad input, singular matrices, unsupported sizes) and
/// budget refusals (the computation would exceed a configured enumeration
/// budget, so the operation declines rather than answer heuristically).
#[derive(Debug, Error)]
pub enum Error {
    #[error("empty input: {0}")]
    EmptyInput(&'static str),

    #[error("{0} is not prime")]
    NotPrime(String),

    #[error("primality of {0} is not deterministically certifiable at this size")]
    PrimalityUncertified(String),

    #[error("value {value} is not integral at {prime}: ord = {ord}")]
    NotIntegralAtP {
        value: String,
        prime: String,
        ord: i64,
    },

    #[error("matrix is singular")]
    SingularMatrix,

    #[error("invalid construction: {0}")]
    Construction(String),

    #[error("unsupported size: {0}")]
    SizeLimit(String),

    #[error("budget exceeded: {0}")]
    Budget(String),

    #[error("not a morphism: the resultant vanishes")]
    NotAMorphism,

    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

impl Error {
    /// True for refusals that mean "raise the budget", not "bad input".
    pub fn is_budget(&self) -> bool {
        matches!(self, Error::Budget(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
