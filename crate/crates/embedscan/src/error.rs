//! Crate-wide error type.

use thiserror::Error;

/// Errors raised by dataset ingestion, graph construction, layout, and sweeps.
#[derive(Debug, Error)]
pub enum Error {
    /// A caller-supplied parameter is out of its documented range.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// A CSV cell could not be parsed. Row and column are 1-based and refer
    /// to the file, not the extracted feature matrix.
    #[error("parse error at row {row}, column {col}: {message}")]
    CsvParse {
        row: usize,
        col: usize,
        message: String,
    },

    /// Structural problem with an input file (ragged rows, missing columns, ...).
    #[error("format error: {0}")]
    CsvFormat(String),

    /// Two per-point sequences that must align do not.
    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    /// A precomputed dissimilarity matrix is not symmetric within 1e-9.
    #[error("asymmetric dissimilarity matrix at ({i},{j}): |d_ij - d_ji| = {delta}")]
    Asymmetric { i: usize, j: usize, delta: f64 },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Process exit code for the CLI: 1 for usage errors, 2 for data errors.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InvalidParameter(_) => 1,
            _ => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
