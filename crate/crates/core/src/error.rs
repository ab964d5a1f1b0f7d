use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("vertex {vertex} out of range for a graph on {n} vertices")]
    InvalidVertex { vertex: usize, n: usize },

    #[error("({0}, {1}) is not an edge of the graph")]
    InvalidEdge(usize, usize),

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("graph is not connected")]
    Disconnected,

    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),

    #[error("walk count saturated at the declared maximum")]
    Saturated,

    #[error("unknown name `{0}`")]
    UnknownName(String),

    #[error("illegal move by {agent} in round {round}: {detail}")]
    IllegalMove {
        agent: String,
        round: usize,
        detail: String,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Process exit code: 2 for bad input, 3 for an exhausted budget, 4 for
    /// I/O failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::BudgetExceeded(_) => 3,
            Error::Io(_) => 4,
            _ => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidParameter(msg.into()))
}
