use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// An argument outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A configuration the implemented measures cannot evaluate faithfully.
    #[error("unsupported configuration: {0}")]
    UnsupportedConfiguration(String),

    #[error("numerical error: {message} ({diagnostics})")]
    Numerical {
        message: String,
        diagnostics: String,
    },

    /// Conditioning on an event of probability zero.
    #[error("undefined conditional probability: {0}")]
    UndefinedConditional(String),

    #[error("invalid configuration:\n  {}", .0.join("\n  "))]
    Validation(Vec<String>),

    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn unsupported(msg: impl Into<String>) -> Self {
        Error::UnsupportedConfiguration(msg.into())
    }
}
