use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// A model or simulator parameter is outside the domain where the
    /// corresponding formula is defined.
    #[error("parameter out of domain: {0}")]
    ParamDomain(String),

    /// The exhaustive enumerator was asked for an instance too large to
    /// enumerate.
    #[error("enumeration space too large: {0}")]
    EnumSpace(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::ParamDomain(msg.into()))
}
