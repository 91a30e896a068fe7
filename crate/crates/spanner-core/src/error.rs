use thiserror::Error;

use crate::graph::Vertex;

#[derive(Debug, Error)]
pub enum SpannerError {
    #[error("vertex {vertex} out of range for a graph with {n} vertices")]
    VertexOutOfRange { vertex: u64, n: usize },
    #[error("self-loop at vertex {0}")]
    SelfLoop(u64),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("not a path in the graph: {0}")]
    NotAPath(String),
    #[error("clustering does not cover vertex {0}")]
    Uncovered(Vertex),
    #[error("hitting set missed a large ball after {attempts} attempts")]
    HittingSetExhausted { attempts: usize },
    #[error("edge ({0}, {1}) is not in the host graph")]
    NotSubgraph(Vertex, Vertex),
    #[error("internal invariant violated: {0}")]
    Invariant(String),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, SpannerError>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(SpannerError::InvalidArgument(msg.into()))
}
