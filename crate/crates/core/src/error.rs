use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid genotype at edge {index}: {reason}")]
    InvalidGenotype { index: usize, reason: String },

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("no table entry for n = {0} (tables cover 2..=31)")]
    LookupMiss(usize),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
