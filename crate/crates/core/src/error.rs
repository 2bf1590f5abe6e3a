use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("vertex {vertex} out of range for graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },

    #[error("a graph needs at least one vertex")]
    EmptyGraph,

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("parse error at byte {offset}: {message}")]
    Parse { offset: usize, message: String },

    #[error("graph is not reduced: vertices {0} and {1} share a neighbourhood")]
    NotReduced(usize, usize),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("resource cap exceeded: {what} (cap {cap})")]
    ResourceCap { what: &'static str, cap: u64 },

    #[error("degree mismatch: {0} vs {1}")]
    DegreeMismatch(usize, usize),

    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    #[error("invalid group: {0}")]
    InvalidGroup(String),

    #[error("invalid construction parameters: {0}")]
    Construction(String),

    #[error("{0} is not an element of the group")]
    NotMember(String),

    #[error("internal invariant violated: {0}")]
    Internal(String),
}

impl Error {
    pub(crate) fn parse(offset: usize, message: impl Into<String>) -> Self {
        Error::Parse { offset, message: message.into() }
    }
}
