use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid block: {0}")]
    InvalidBlock(String),

    #[error("point {point} out of range for universe of size {n}")]
    PointOutOfRange { point: u64, n: u64 },

    #[error("rank {rank} out of range: C({n},{k}) = {count}")]
    RankOutOfRange { rank: u64, n: u64, k: u64, count: u64 },

    #[error("not a parallel class: {0}")]
    NotParallelClass(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid partial Latin rows at row {row}, column {col}: {reason}")]
    InvalidLatinRows { row: usize, col: usize, reason: String },

    #[error("unsupported construction: {0}")]
    Unsupported(String),

    #[error("exact cover search timed out after {seconds:.1}s")]
    SearchTimeout { seconds: f64 },

    #[error("exact cover instance is infeasible: {0}")]
    Infeasible(String),

    #[error("verification failed: {0}")]
    Verification(String),

    #[error("parse error at line {line}: {reason}")]
    Parse { line: usize, reason: String },

    #[error("cache entry {path} is corrupt: {reason}")]
    CorruptCache { path: PathBuf, reason: String },

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io { path: path.into(), source }
    }
}
