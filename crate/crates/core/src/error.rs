use thiserror::Error;

/// Errors raised by the numerical routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// An argument lies outside the range a particular method supports.
    #[error("range error: {0}")]
    Range(String),
    /// An iterative or adaptive method failed to reach its tolerance.
    #[error("numerical failure: {0}")]
    NumericalFailure(String),
    /// Malformed input to a scan or fit (empty lists, bad grid sizes, ...).
    #[error("usage error: {0}")]
    Usage(String),
}

pub type Result<T> = std::result::Result<T, Error>;

// `!(cond)` rather than the inverted comparison so NaN fails the check.
macro_rules! ensure {
    ($cond:expr, $kind:ident, $($fmt:tt)+) => {
        #[allow(clippy::neg_cmp_op_on_partial_ord)]
        if !$cond {
            return Err($crate::Error::$kind(format!($($fmt)+)));
        }
    };
}
pub(crate) use ensure;
