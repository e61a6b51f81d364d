use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// Parameters outside the range where a construction exists.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// (n, k) or (n, m, k) outside the range covered by the approximation guarantee.
    #[error("not applicable: {0}")]
    Applicability(String),

    #[error("dimension mismatch: expected {expected} agents, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("agent {agent} outside 1..={n}")]
    AgentOutOfRange { agent: usize, n: usize },

    #[error("invalid weight matrix: {0}")]
    InvalidMatrix(String),

    #[error("invalid partition system: {0}")]
    InvalidPartitionSystem(String),

    #[error("oracle budget of {budget} nodes exceeded")]
    BudgetExceeded { budget: u64 },

    #[error("parse error at {location}: {message}")]
    Parse { location: String, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }

    pub(crate) fn applicability(msg: impl Into<String>) -> Self {
        Error::Applicability(msg.into())
    }

    pub(crate) fn parse(location: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Parse {
            location: location.into(),
            message: message.into(),
        }
    }
}
