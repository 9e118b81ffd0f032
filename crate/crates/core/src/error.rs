use thiserror::Error;

/// Errors produced by the estimators, mechanisms and harness.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument fell outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A configuration is internally inconsistent (bad bracket, overlapping bins, ...).
    #[error("invalid configuration: {0}")]
    Config(String),

    /// The pool is smaller than the sample-size bound an estimator requires.
    #[error("insufficient samples: need at least {required} users, have {available}")]
    InsufficientSamples { required: u64, available: u64 },

    #[error("user pool exhausted: requested {requested} users, {remaining} remain")]
    PoolExhausted { requested: usize, remaining: usize },

    /// One-shot access violated: the user has already been queried.
    #[error("user {index} has already been consumed")]
    AlreadyConsumed { index: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    /// A randomized sub-step produced an unusable estimate (e.g. an inverted quantile pair).
    #[error("estimation failure: {0}")]
    EstimationFailure(String),

    /// A caller-side contract was not met (e.g. z-test significance not above beta).
    #[error("contract violation: {0}")]
    Contract(String),

    #[error("binary search failed at iteration {iteration}: {source}")]
    SearchIteration {
        iteration: usize,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    /// True for failures caused by the pool being too small for the requested run.
    pub fn is_precondition_failure(&self) -> bool {
        match self {
            Error::InsufficientSamples { .. } | Error::PoolExhausted { .. } => true,
            Error::SearchIteration { source, .. } => source.is_precondition_failure(),
            _ => false,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}

pub(crate) fn config(msg: impl Into<String>) -> Error {
    Error::Config(msg.into())
}
