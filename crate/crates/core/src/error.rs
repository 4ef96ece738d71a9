use thiserror::Error;

/// Errors produced anywhere in the toolkit.
///
/// The CLI maps `Domain`/`Format`/`Config`/`Io` to exit code 2 and
/// `Fit`/`Numerical` to exit code 3.
#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("format error: {0}")]
    Format(String),
    #[error("configuration error: {0}")]
    Config(String),
    #[error("fit error in stage `{stage}`: {message}")]
    Fit { stage: &'static str, message: String },
    #[error("numerical error: {0}")]
    Numerical(String),
    #[error("I/O error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("CSV error: {0}")]
    Csv(#[from] csv::Error),
    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn format(msg: impl Into<String>) -> Self {
        Error::Format(msg.into())
    }

    pub(crate) fn fit(stage: &'static str, msg: impl Into<String>) -> Self {
        Error::Fit {
            stage,
            message: msg.into(),
        }
    }

    pub(crate) fn io(path: impl AsRef<std::path::Path>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.as_ref().display().to_string(),
            source,
        }
    }

    /// Re-tag a fit error with the pipeline stage that raised it. Non-fit
    /// errors are wrapped so the stage name is never lost.
    pub(crate) fn in_stage(self, stage: &'static str) -> Self {
        match self {
            Error::Fit { message, .. } => Error::Fit { stage, message },
            other => Error::Fit {
                stage,
                message: other.to_string(),
            },
        }
    }

    /// True for errors that the CLI reports as numerical/fit failures.
    pub fn is_numerical(&self) -> bool {
        matches!(self, Error::Fit { .. } | Error::Numerical(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
