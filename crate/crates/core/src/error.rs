use thiserror::Error;

/// Errors raised by problem construction, method application, and the
/// convergence engine.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// An input lies outside the domain an operation was built for
    /// (foreign alphabet token, hypothesis outside H, bad numeric argument).
    #[error("input-domain error: {0}")]
    InputDomain(String),
    /// A problem or experiment was configured inconsistently.
    #[error("configuration error: {0}")]
    Config(String),
    /// A computation would exceed its declared budget.
    #[error("resource error: {0}")]
    Resource(String),
    /// A precondition on worlds or measures does not hold.
    #[error("precondition error: {0}")]
    Precondition(String),
    /// A method's outputs are not of the kind an operation requires.
    #[error("type error: {0}")]
    Type(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
