use alloc::string::String;

/// Errors raised by the partition, refinement and enumeration engines.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("element cap of {cap} exceeded during enumeration")]
    ElementCap { cap: usize },

    #[error("size limit exceeded: {0}")]
    TooLarge(String),

    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T, E = Error> = core::result::Result<T, E>;

macro_rules! dim_err {
    ($($arg:tt)*) => {
        $crate::error::Error::Dimension(alloc::format!($($arg)*))
    };
}

macro_rules! parse_err {
    ($($arg:tt)*) => {
        $crate::error::Error::Parse(alloc::format!($($arg)*))
    };
}

macro_rules! invalid {
    ($($arg:tt)*) => {
        $crate::error::Error::Invalid(alloc::format!($($arg)*))
    };
}

pub(crate) use {dim_err, invalid, parse_err};
