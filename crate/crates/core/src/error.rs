use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum JtdError {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("{what} = {value} is outside its domain {domain}")]
    Domain {
        what: &'static str,
        value: f64,
        domain: &'static str,
    },

    #[error("non-finite phase state at step {step}")]
    NonFinite { step: u64 },

    #[error("trajectory {index}: {source}")]
    Trajectory {
        index: u64,
        #[source]
        source: Box<JtdError>,
    },

    #[error("{0} must not be empty")]
    Empty(&'static str),

    #[error("{0}")]
    Undefined(&'static str),

    #[error("no point of the curve reaches the detection threshold {threshold}")]
    NeverDetectable { threshold: f64 },

    /// Reading or writing an artifact failed.
    #[error("{0}")]
    Io(String),
}

impl From<std::io::Error> for JtdError {
    fn from(e: std::io::Error) -> Self {
        JtdError::Io(e.to_string())
    }
}

impl From<csv::Error> for JtdError {
    fn from(e: csv::Error) -> Self {
        JtdError::Io(e.to_string())
    }
}

impl From<serde_json::Error> for JtdError {
    fn from(e: serde_json::Error) -> Self {
        JtdError::Io(e.to_string())
    }
}

impl JtdError {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        JtdError::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }

    /// True for failures of the numerics rather than of the inputs.
    pub fn is_numeric(&self) -> bool {
        match self {
            JtdError::NonFinite { .. } => true,
            JtdError::Trajectory { source, .. } => source.is_numeric(),
            _ => false,
        }
    }
}

pub type Result<T> = std::result::Result<T, JtdError>;
