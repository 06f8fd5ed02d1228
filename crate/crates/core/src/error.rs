use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("line {line}: non-finite value `{value}` in column {column}")]
    NonFinite {
        line: usize,
        column: usize,
        value: String,
    },

    #[error("recording contains no samples")]
    EmptyRecording,

    #[error("statistic `{0}` is undefined for an empty series")]
    EmptySeries(&'static str),

    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("proportion {0} is outside [0, 1]")]
    ProportionOutOfRange(f64),

    #[error("node has no observations")]
    EmptyNode,

    #[error("dataset has no rows")]
    EmptyDataset,

    #[error("training data has a single class; need at least 2")]
    SingleClass,

    #[error("label {label} is out of range for {class_count} classes")]
    LabelOutOfRange { label: usize, class_count: usize },

    #[error("class {class} has {count} rows, fewer than the {folds} folds requested")]
    ClassTooSmall {
        class: usize,
        count: usize,
        folds: usize,
    },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("feature CSV is missing columns: {}", .0.join(", "))]
    MissingColumns(Vec<String>),

    #[error("{path}: {source}")]
    File {
        path: PathBuf,
        #[source]
        source: Box<Error>,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn in_file(self, path: impl Into<PathBuf>) -> Self {
        Error::File {
            path: path.into(),
            source: Box::new(self),
        }
    }
}
