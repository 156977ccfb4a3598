use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("cannot access {path}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("missing required column `{0}`")]
    MissingColumn(String),

    #[error("malformed CSV at line {line}: {message}")]
    MalformedCsv { line: u64, message: String },

    #[error("lexicon `{name}` line {line}: {message}")]
    Lexicon {
        name: String,
        line: usize,
        message: String,
    },

    #[error("lexicon `{name}` checksum mismatch: expected {expected}, got {actual}")]
    Checksum {
        name: String,
        expected: String,
        actual: String,
    },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("empty input: {0}")]
    Empty(&'static str),

    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("training data contains a single class")]
    SingleClass,

    #[error("unknown session `{0}`")]
    UnknownSession(String),

    #[error("conflict: {0}")]
    Conflict(String),

    #[error("invalid JSON")]
    Json(#[from] serde_json::Error),

    #[error("invalid CSV")]
    Csv(#[from] csv::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
