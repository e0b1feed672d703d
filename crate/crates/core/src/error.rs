use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Coarse failure category, used by the command line front end to pick an exit code.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    Usage,
    Data,
    Numeric,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("row {row}: {message}")]
    Schema { row: usize, message: String },

    #[error("row {row}: duplicate knot name {name:?}")]
    DuplicateName { row: usize, name: String },

    #[error("malformed polynomial: {0}")]
    Polynomial(String),

    #[error("zero polynomial has no canonical form")]
    ZeroPolynomial,

    #[error("dataset is empty")]
    EmptyDataset,

    #[error("record {name:?} has no Khovanov data")]
    MissingKhovanov { name: String },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("need at least {needed} samples, got {got}")]
    InsufficientData { needed: usize, got: usize },

    #[error("evaluation at z = 0 of a polynomial with negative exponent {min_exp}")]
    PoleAtZero { min_exp: i64 },

    #[error("determinant evaluates to zero; knot determinants are odd")]
    ZeroDeterminant,

    #[error("logarithm of non-positive value {0}")]
    NonPositive(f64),

    #[error("Jones degree {0} is below 2, ln(degree) is not a valid divisor")]
    DegenerateDegree(usize),

    #[error("invalid root of unity exponent {k}/{n}, need 0 < k < n")]
    InvalidRootOfUnity { k: i64, n: i64 },

    #[error("standard deviation is zero, correlation undefined")]
    ZeroVariance,

    #[error("target contains zero entries, percentage error undefined")]
    ZeroTarget,

    #[error("normal equations are singular (condition estimate {condition:.3e})")]
    Singular { condition: f64 },

    #[error("cluster {cluster} holds {size} points, need at least 2")]
    DegenerateCluster { cluster: usize, size: usize },

    #[error("training diverged at epoch {epoch} (loss {loss}); try a smaller learning rate")]
    Divergence { epoch: usize, loss: f64 },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn schema(row: usize, message: impl Into<String>) -> Self {
        Error::Schema {
            row,
            message: message.into(),
        }
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::Config(_) | Error::InvalidRootOfUnity { .. } => ErrorKind::Usage,
            Error::Io { .. }
            | Error::Schema { .. }
            | Error::DuplicateName { .. }
            | Error::Polynomial(_)
            | Error::ZeroPolynomial
            | Error::EmptyDataset
            | Error::MissingKhovanov { .. }
            | Error::Json(_) => ErrorKind::Data,
            _ => ErrorKind::Numeric,
        }
    }
}
