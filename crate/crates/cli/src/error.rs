use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{origin}: parse error: {message}")]
    Parse { origin: String, message: String },

    #[error("{origin}: schema_version {found} is not supported (expected {expected})")]
    Schema {
        origin: String,
        found: i64,
        expected: i64,
    },

    #[error("{origin}: [{section}] {source}")]
    Invalid {
        origin: String,
        section: &'static str,
        #[source]
        source: relabel_core::Error,
    },

    #[error("{0}")]
    Usage(String),
}

impl CliError {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn invalid(
        origin: &str,
        section: &'static str,
        field: &str,
        message: impl Into<String>,
    ) -> Self {
        CliError::Invalid {
            origin: origin.to_string(),
            section,
            source: relabel_core::Error::Validation {
                field: field.to_string(),
                message: message.into(),
            },
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
