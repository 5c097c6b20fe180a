use thiserror::Error;

/// Errors produced by the numerical operations in this crate.
#[derive(Debug, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation (p < 1, λ ≤ 0, ...).
    #[error("domain error: {0}")]
    Domain(String),

    /// A configuration object violates its own invariants.
    #[error("invalid configuration: {0}")]
    Config(String),

    /// Two signals or grids that must match exactly do not.
    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    /// An operation's documented precondition does not hold for the input.
    #[error("precondition failed: {0}")]
    Precondition(String),

    /// Inputs that are supposed to belong together (a signal and its
    /// decomposition, for instance) disagree.
    #[error("inconsistent input: {0}")]
    Consistency(String),

    /// A self-check inside an algorithm failed. Indicates a bug.
    #[error("internal consistency error: {0}")]
    Internal(String),

    #[error("line {line}, column {column}: {message}")]
    Csv {
        line: u64,
        column: usize,
        message: String,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
