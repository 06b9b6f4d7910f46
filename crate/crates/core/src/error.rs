use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid graph: {0}")]
    InvalidGraph(String),
    #[error("invalid function: {0}")]
    InvalidFunction(String),
    #[error("functions live on different graphs")]
    GraphMismatch,
    #[error("unknown edge {0}")]
    UnknownEdge(String),
    #[error("parameter {value} outside edge of length {len}")]
    PointOutOfRange { value: String, len: String },
    #[error("degree cap exceeded: {0}")]
    DegreeCap(String),
    #[error("syntax error at {position}: {message}")]
    Parse { position: usize, message: String },
    #[error("unassigned variable x{0}")]
    Unassigned(usize),
    #[error("square root of negative value {0}")]
    NegativeSqrt(String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("not a cover; uncovered point {0}")]
    NotACover(String),
    #[error("connectedness violation: {0}")]
    Connectedness(String),
    #[error("verification failed: {0}")]
    Verification(String),
    #[error("schema error in {path}: {message}")]
    Schema { path: String, message: String },
}
