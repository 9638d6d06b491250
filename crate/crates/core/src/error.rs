use alloc::string::String;

/// Errors raised by the algebra layer.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    /// Input that violates a structural requirement (bad permutation, broken relation, ...).
    #[error("validation failed: {0}")]
    Validation(String),
    /// A group or search space larger than the configured cap.
    #[error("size limit exceeded: {what} is {actual}, cap is {cap}")]
    TooLarge {
        what: &'static str,
        actual: usize,
        cap: usize,
    },
    /// Operation not defined for the given coefficients or degree.
    #[error("unsupported: {0}")]
    Unsupported(String),
    /// Malformed textual input.
    #[error("parse error: {0}")]
    Parse(String),
    /// Two independent computations disagreed.
    #[error("inconsistent results: {0}")]
    Inconsistent(String),
}

pub type Result<T> = core::result::Result<T, Error>;

macro_rules! invalid {
    ($($arg:tt)*) => {
        $crate::error::Error::Validation(alloc::format!($($arg)*))
    };
}
pub(crate) use invalid;
