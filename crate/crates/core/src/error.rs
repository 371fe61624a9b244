use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A constructor argument failed validation.
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    /// A function was evaluated outside the set where it is defined.
    #[error("domain error: {0}")]
    Domain(String),

    /// Two fields that must share a grid do not.
    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    /// Time integration produced a non-finite or out-of-model value.
    #[error("numerical blow-up at t = {t}: {reason}")]
    BlowUp { t: f64, reason: String },

    /// Every sample was masked out of a reduction.
    #[error("degenerate input: {0}")]
    Degenerate(String),
}

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}
