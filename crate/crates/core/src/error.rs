use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the set where the operation is defined.
    #[error("domain error: {0}")]
    Domain(String),

    /// A constructor rejected its inputs.
    #[error("validation error in `{field}`: {message}")]
    Validation { field: String, message: String },

    /// Linear-algebra breakdown (zero pivot, non-finite amplitude).
    #[error("numerical error: {0}")]
    Numerical(String),

    /// The adaptive integrator could not make progress.
    #[error("integration failed at clock {clock}: {reason}")]
    IntegrationFailure { clock: f64, reason: String },
}

impl Error {
    pub(crate) fn validation(field: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Validation {
            field: field.into(),
            message: message.into(),
        }
    }

    pub(crate) fn domain(message: impl Into<String>) -> Self {
        Error::Domain(message.into())
    }
}
