use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}:{line}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("no usable embeddings in {0}")]
    EmptyStore(PathBuf),

    #[error("sentence has no in-vocabulary tokens")]
    EmptySentence,

    #[error("out-of-vocabulary token {0:?}")]
    OutOfVocabulary(String),

    #[error("degenerate sample: {0}")]
    DegenerateSample(&'static str),

    #[error("all pairwise distances are zero; cannot pick a kernel bandwidth")]
    DegenerateBandwidth,

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("unknown measure {0:?}")]
    UnknownMeasure(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("reports are not over the same dataset: {0}")]
    ReportMismatch(String),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn parse(path: impl Into<PathBuf>, line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            path: path.into(),
            line,
            message: message.into(),
        }
    }
}
