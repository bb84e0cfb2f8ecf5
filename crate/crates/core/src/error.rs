//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("empty edge list")]
    EmptyGraph,
    #[error("graph is disconnected: vertices {0} and {1} lie in different components")]
    Disconnected(usize, usize),
    #[error("vertex index {index} out of range (vertex count {vertex_count})")]
    VertexOutOfRange { index: usize, vertex_count: usize },
    #[error("self-loop at vertex {0} is not allowed")]
    SelfLoop(usize),
    #[error("duplicate edge {{{0}, {1}}} without the multigraph flag")]
    DuplicateEdge(usize, usize),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("size limit exceeded: {0}")]
    SizeLimit(String),
    #[error("eigensolver did not converge: {0}")]
    EigenFailure(String),
    #[error("point does not belong to the space: {0}")]
    SpaceMismatch(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("computed value disagrees with its closed form: {0}")]
    Discrepancy(String),
    #[error("arithmetic overflow in {0}")]
    Overflow(&'static str),
    #[error(
        "descent diverged: energy increased for {count} consecutive steps at iteration {iteration}"
    )]
    DescentDivergence { count: usize, iteration: usize },
    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),
    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
