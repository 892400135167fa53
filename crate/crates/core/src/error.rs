use thiserror::Error;

/// Errors surfaced by the library.
///
/// `Construction` is reserved for internal invariant failures detected while
/// assembling a design or code: it signals a bug or an unsupported corner of
/// the recursive machinery and is never returned silently alongside a value.
#[derive(Debug, Error)]
pub enum Error {
    /// An argument violated an operation's stated precondition.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    /// The parameters are outside the domain this library supports.
    #[error("unsupported parameter: {0}")]
    UnsupportedParameter(String),
    /// A constructed object failed its own validation.
    #[error("construction failed validation: {0}")]
    Construction(String),
    /// A search exhausted its node or time budget before completing.
    #[error("budget exhausted: {0}")]
    BudgetExhausted(String),
}

pub type Result<T> = std::result::Result<T, Error>;
