use thiserror::Error;

/// Errors raised by the transformation, estimators and experiments.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum KendallError {
    #[error("need at least 2 objects, got {0}")]
    TooFewObjects(usize),

    #[error("pair index {index} out of range for n = {n} (m = {m})")]
    PairIndexOutOfRange { index: usize, n: usize, m: usize },

    #[error("object index ({a}, {b}) is not a valid ordered pair for n = {n}")]
    InvalidPair { a: usize, b: usize, n: usize },

    #[error("length mismatch{}: expected {expected}, got {got}", context_suffix(.context))]
    LengthMismatch {
        expected: usize,
        got: usize,
        context: Option<String>,
    },

    #[error("sequence has no non-missing positions")]
    NoCompletePositions,

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("joint state space too large ({0} dimensions)")]
    StateSpaceOverflow(usize),
}

fn context_suffix(context: &Option<String>) -> String {
    match context {
        Some(c) => format!(" in {c}"),
        None => String::new(),
    }
}

impl KendallError {
    pub(crate) fn length_mismatch_in(expected: usize, got: usize, context: impl Into<String>) -> Self {
        KendallError::LengthMismatch {
            expected,
            got,
            context: Some(context.into()),
        }
    }
}

pub type Result<T, E = KendallError> = std::result::Result<T, E>;
