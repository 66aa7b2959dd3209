use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("unknown element {element} (ground set has {size} elements)")]
    UnknownElement { element: usize, size: usize },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("oracle validation failed: {0}")]
    Validation(String),

    #[error("matroid axiom violated: {0}")]
    MatroidAxiom(String),

    /// Greedy ran out of eligible elements before reaching the rank.
    #[error("matroid rank inconsistency: no eligible element at iteration {iteration} of {rank}")]
    RankInconsistency { iteration: usize, rank: usize },

    #[error("empty instance: {0}")]
    EmptyInstance(String),

    #[error("enumeration cap {cap} exceeded after {reached} {what}")]
    CapExceeded { what: &'static str, cap: u64, reached: u64 },

    #[error("usage error: {0}")]
    Usage(String),

    #[error("parse error at {path}: {message}")]
    Parse { path: String, message: String },

    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }

    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    /// Process exit code for the command-line front end.
    ///
    /// `1` is reserved for a violated bound and is never produced by an error.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::CapExceeded { .. } => 3,
            _ => 2,
        }
    }
}
