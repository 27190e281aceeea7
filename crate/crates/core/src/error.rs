use thiserror::Error;

/// Errors raised by constructors, measures and checks.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("Degenerate: {0}")]
    Degenerate(String),
    #[error("BadShape: {0}")]
    BadShape(String),
    #[error("UnknownName: {0}")]
    UnknownName(String),
    #[error("BadIndex: {index} (body has {count} vertices)")]
    BadIndex { index: usize, count: usize },
    #[error("CombinatoricsBroken: {0}")]
    CombinatoricsBroken(String),
    #[error("CombinatoricsMismatch: {0}")]
    CombinatoricsMismatch(String),
    #[error("NotSimple: vertex {0} has degree other than the dimension")]
    NotSimple(usize),
    #[error("NotPointed: {0}")]
    NotPointed(String),
    #[error("BadDim: {0}")]
    BadDim(usize),
    #[error("OutOfRange: {0}")]
    OutOfRange(String),
    #[error("NoiseFloor: {0}")]
    NoiseFloor(String),
    #[error("NotFound: {0}")]
    NotFound(String),
    #[error("Parse: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn degenerate(msg: impl Into<String>) -> Error {
    Error::Degenerate(msg.into())
}
