use thiserror::Error;

/// Errors raised by the probability engine.
///
/// Every variant names the input field it objects to, so front ends can point
/// the user at the offending flag or form control.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid {field}: {message}")]
    Domain {
        field: &'static str,
        message: String,
    },
    #[error("distribution is not normalized (total mass {total})")]
    Unnormalized { total: String },
}

impl Error {
    pub(crate) fn domain(field: &'static str, message: impl Into<String>) -> Self {
        Error::Domain {
            field,
            message: message.into(),
        }
    }

    /// Name of the input field the error refers to.
    pub fn field(&self) -> &'static str {
        match self {
            Error::Domain { field, .. } => field,
            Error::Unnormalized { .. } => "dist",
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
