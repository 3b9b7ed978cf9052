use thiserror::Error;

use crate::grid::Coord;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("coordinate {0} lies outside V_{1}")]
    OutOfBounds(Coord, u32),
    #[error("move at {0} has no outgoing edges in V_{1}")]
    MoveOnBoundary(Coord, u32),
    #[error("operation needs a finite ambient degree")]
    InfiniteDegree,
    #[error("top-degree alternating sum is nonzero; configuration is not retractable")]
    NotRetractable,
    #[error("the zero configuration has no retraction")]
    ZeroConfiguration,
    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("matrix is not square ({0}x{1})")]
    NotSquare(usize, usize),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("index out of range: {0}")]
    Index(String),
    #[error("invalid parameters: {0}")]
    Parameters(String),
    #[error("configuration is not weakly valid for d = {0}")]
    NotWeaklyValid(u32),
    #[error("not a model: {0}")]
    NotAModel(String),
    #[error("internal consistency check failed: {0}")]
    Consistency(String),
    #[error("cache i/o: {0}")]
    Cache(String),
}

pub type Result<T> = std::result::Result<T, Error>;
