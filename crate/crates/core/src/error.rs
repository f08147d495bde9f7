use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A value violates the precondition of an operation or type.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// Power-law exponent too close to one of the logarithmic special cases.
    #[error("exponent {n} lies within {eps:e} of the special case N = {pole}; evaluate at N = {pole} exactly")]
    NearPole { n: f64, pole: f64, eps: f64 },

    /// Inputs are valid individually but leave nothing to compute (e.g. every force is zero).
    #[error("degenerate input: {0}")]
    Degenerate(String),
}

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidInput(msg.into()))
}

pub(crate) fn require(cond: bool, msg: impl FnOnce() -> String) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::InvalidInput(msg()))
    }
}
