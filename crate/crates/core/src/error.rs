use alloc::string::String;

/// Errors raised by the numerical core.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("quadrature breakdown: {0}")]
    QuadratureBreakdown(String),
    #[error("linear program failed: {0}")]
    LpFailure(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("query budget exhausted after {0} queries")]
    BudgetExhausted(usize),
}

pub type Result<T> = core::result::Result<T, Error>;

macro_rules! invalid {
    ($($arg:tt)*) => {
        $crate::error::Error::InvalidArgument(alloc::format!($($arg)*))
    };
}
pub(crate) use invalid;
