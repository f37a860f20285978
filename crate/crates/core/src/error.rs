use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid vertex pair: {0}")]
    InvalidPair(String),

    #[error("vertex {vertex} out of range (limit {limit})")]
    VertexOutOfRange { vertex: usize, limit: usize },

    #[error("invalid edge: {0}")]
    InvalidEdge(String),

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("uniformity mismatch: host is {host}-uniform, pattern is {pattern}-uniform")]
    UniformityMismatch { host: usize, pattern: usize },

    #[error("search budget of {budget} nodes exceeded")]
    BudgetExceeded { budget: u64 },

    #[error("search budget of {budget} nodes exceeded; best incumbent has {best_value} edges")]
    ExactBudgetExceeded {
        budget: u64,
        best_value: usize,
        best_edges: Vec<Vec<usize>>,
    },

    #[error("input contains {pattern}; witness {witness:?}")]
    NotFree { pattern: String, witness: Vec<usize> },

    #[error("size limit exceeded: {0}")]
    SizeLimit(String),

    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            msg: msg.into(),
        }
    }
}
