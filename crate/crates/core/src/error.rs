use thiserror::Error;

/// Errors surfaced by the matching library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("invalid type vector: {0}")]
    InvalidVector(String),
    #[error("invalid instance: {0}")]
    InvalidInstance(String),
    #[error("matching references inactive player: {0}")]
    InactivePlayer(String),
    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("invalid augmenting path: {0}")]
    InvalidPath(String),
    #[error("invalid graph: {0}")]
    InvalidGraph(String),
}

pub type Result<T> = std::result::Result<T, Error>;
