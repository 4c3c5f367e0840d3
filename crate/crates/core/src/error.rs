use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{path}:{line}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("degenerate training labels: {0}")]
    DegenerateLabels(String),

    #[error("feature schema mismatch: expected {expected} columns [{expected_names}], found {found} [{found_names}]")]
    SchemaMismatch {
        expected: usize,
        expected_names: String,
        found: usize,
        found_names: String,
    },

    #[error("split too small: {0}")]
    SplitTooSmall(String),

    #[error("class {0} is absent from one of the datasets")]
    MissingClass(String),

    #[error("labels unavailable: {0}")]
    LabelsUnavailable(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("data error: {0}")]
    Data(String),

    #[error("internal invariant violated: {0}")]
    Invariant(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn parse(path: impl Into<PathBuf>, line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            path: path.into(),
            line,
            message: message.into(),
        }
    }

    pub(crate) fn schema(expected: &[String], found: &[String]) -> Self {
        Error::SchemaMismatch {
            expected: expected.len(),
            expected_names: expected.join(","),
            found: found.len(),
            found_names: found.join(","),
        }
    }
}
