use std::io;
use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum EvalError {
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: io::Error },

    #[error("{}: {source}", path.display())]
    Csv { path: PathBuf, source: csv::Error },

    #[error("{}: line {line}: {message}", path.display())]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("{}: invalid schema file: {source}", path.display())]
    Schema {
        path: PathBuf,
        source: serde_json::Error,
    },

    #[error("{}: column `{column}` is not in the header (columns: {available})", path.display())]
    MissingColumn {
        path: PathBuf,
        column: String,
        available: String,
    },

    #[error("{}: column `{column}` holds no numeric values; mark it as id or ignored", path.display())]
    NonNumericColumn { path: PathBuf, column: String },

    #[error("{}: no usable rows ({rejected} rejected)", path.display())]
    NoRows { path: PathBuf, rejected: usize },

    #[error("{0}")]
    Usage(String),

    #[error(transparent)]
    Core(#[from] eam_core::Error),

    #[error("{0} selftest check(s) failed")]
    SelftestFailed(usize),
}

impl EvalError {
    pub fn io(path: impl Into<PathBuf>, source: io::Error) -> Self {
        EvalError::Io {
            path: path.into(),
            source,
        }
    }

    /// 1 for a failed computation, 2 for bad input or IO.
    pub fn exit_code(&self) -> i32 {
        use eam_core::Error as E;
        match self {
            EvalError::Core(
                E::UnknownMeasure { .. } | E::ParseDriver(_) | E::ParsePredictor(_) | E::ParseOption { .. },
            ) => 2,
            EvalError::Core(_) | EvalError::SelftestFailed(_) => 1,
            _ => 2,
        }
    }
}

pub type Result<T, E = EvalError> = std::result::Result<T, E>;
