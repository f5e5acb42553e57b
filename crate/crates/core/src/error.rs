use thiserror::Error;

/// Failure modes shared by every engine in the crate.
#[derive(Debug, Error)]
pub enum Error {
    /// A precondition on the arguments does not hold.
    #[error("usage error: {0}")]
    Usage(String),

    /// The request exceeds a hard size cap.
    #[error("resource limit exceeded: {0}")]
    Resource(String),

    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },

    /// An input object fails the structural invariants it claims to have.
    #[error("validation failed: {0}")]
    Validation(String),

    /// A self-check failed; indicates a bug (or a counterexample to a theorem).
    #[error("internal check failed: {0}")]
    Internal(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn usage(msg: impl Into<String>) -> Error {
    Error::Usage(msg.into())
}
