use thiserror::Error;

/// Errors shared by every layer of the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("not reducible: {0}")]
    NotReducible(String),
    #[error("precision error: {0}")]
    Precision(String),
    #[error("parse error at line {line}, column {col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },
    #[error("arity error: {0}")]
    Arity(String),
    #[error("unbound symbol `{0}`")]
    UnboundSymbol(String),
    #[error("linear system error: {0}")]
    Singular(String),
    #[error("{0}")]
    Other(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}

pub(crate) fn not_reducible<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::NotReducible(msg.into()))
}
