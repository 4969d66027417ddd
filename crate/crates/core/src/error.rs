use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("dimension mismatch: {left_name} is {left:?} but {right_name} is {right:?}")]
    DimensionMismatch {
        left_name: &'static str,
        left: (usize, usize),
        right_name: &'static str,
        right: (usize, usize),
    },

    #[error("expected {expected}-channel raster, got {actual} channels")]
    Channels { expected: usize, actual: usize },

    #[error("label contains values outside {{0,1,2}}: {values:?}")]
    LabelValues { values: Vec<u8> },

    #[error("unsupported PNG: {0}")]
    UnsupportedPng(String),

    #[error("PNG decode failed: {0}")]
    PngDecode(#[from] png::DecodingError),

    #[error("PNG encode failed: {0}")]
    PngEncode(#[from] png::EncodingError),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("manifest: {0}")]
    Manifest(String),

    #[error("class {0} has no pixels in the dataset; its weight is undefined")]
    AbsentClass(String),

    #[error("generator output missing for tiles: {0:?}")]
    MissingOutputs(Vec<String>),

    #[error("invalid generator outputs: {}", .0.join("; "))]
    BadOutputs(Vec<String>),

    #[error("generator command failed ({status}): {stderr}")]
    GeneratorFailed { status: String, stderr: String },

    #[error("synthetic batch references test tile {0}")]
    TestContamination(String),

    #[error("runs cannot be compared: {0}")]
    IncompatibleRuns(String),

    #[error("CSV: {0}")]
    Csv(#[from] csv::Error),

    #[error("empty input: {0}")]
    Empty(&'static str),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn dims(
        left_name: &'static str,
        left: (usize, usize),
        right_name: &'static str,
        right: (usize, usize),
    ) -> Self {
        Error::DimensionMismatch {
            left_name,
            left,
            right_name,
            right,
        }
    }
}
