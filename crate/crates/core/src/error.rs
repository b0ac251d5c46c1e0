use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// A hard enumeration or expansion cap was exceeded.
    #[error("{what}: size {size} exceeds cap {cap}")]
    SizeLimit {
        what: &'static str,
        size: usize,
        cap: usize,
    },
    /// A sequence was asked for an entry beyond its truncation order.
    #[error("truncation: need order {needed}, sequence has order {order}")]
    Truncation { needed: usize, order: usize },
    #[error("invalid argument: {0}")]
    Argument(String),
    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    pub(crate) fn arg(msg: impl Into<String>) -> Self {
        Error::Argument(msg.into())
    }
}
