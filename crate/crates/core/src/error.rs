use thiserror::Error;

/// Everything that can go wrong while building instances or evaluating bounds.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected} atoms, found {found}")]
    Dimension { expected: usize, found: usize },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("usage error: {0}")]
    Usage(String),

    #[error("p = 2 is the exceptional exponent; the counterexample family needs p != 2")]
    ExceptionalExponent,

    #[error("sign condition violated: w^p - w^q = {diff:e} must be positive (p = {p}, w = {w})")]
    SignCondition { p: f64, w: f64, diff: f64 },

    #[error("invalid input at `{key}`: {reason}")]
    Input { key: String, reason: String },

    #[error("cannot parse transform token `{token}`: {reason}")]
    TransformParse { token: String, reason: String },

    #[error("invariant breach: {0}")]
    Invariant(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn usage(msg: impl Into<String>) -> Self {
        Error::Usage(msg.into())
    }
}
