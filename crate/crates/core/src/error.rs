use alloc::string::String;

/// Errors shared by every module of the crate.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    /// The arguments violate an operation's precondition.
    #[error("invalid input: {0}")]
    InvalidInput(String),
    /// The request needs more memory or a larger table than allowed.
    #[error("resource limit: {0}")]
    Resource(String),
    /// A bounded search ran out of range before finding an answer.
    #[error("not found: {0}")]
    NotFound(String),
}

pub type Result<T> = core::result::Result<T, Error>;

macro_rules! invalid {
    ($($arg:tt)*) => {
        $crate::Error::InvalidInput(alloc::format!($($arg)*))
    };
}

macro_rules! resource {
    ($($arg:tt)*) => {
        $crate::Error::Resource(alloc::format!($($arg)*))
    };
}

pub(crate) use invalid;
pub(crate) use resource;
