use thiserror::Error;

/// Errors raised by the simulator library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A configuration field violates its documented range.
    #[error("invalid `{field}`: {message}")]
    InvalidConfig { field: String, message: String },

    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    /// A formula argument is outside its domain.
    #[error("`{name}` = {value} is outside the domain {domain}")]
    Domain {
        name: &'static str,
        value: f64,
        domain: &'static str,
    },

    #[error("no comparable check events to estimate an error rate from")]
    EmptySample,

    #[error("efficiency undefined: q_t + b_t must be positive")]
    ZeroDenominator,
}

impl Error {
    pub(crate) fn config(field: impl Into<String>, message: impl Into<String>) -> Self {
        Error::InvalidConfig {
            field: field.into(),
            message: message.into(),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
