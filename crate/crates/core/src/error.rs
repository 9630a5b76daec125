use std::io;
use std::path::PathBuf;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },

    #[error(transparent)]
    RawIo(#[from] io::Error),

    /// A record in a text file could not be parsed.
    #[error("{file}:{line}: {message}")]
    Parse {
        file: String,
        line: usize,
        message: String,
    },

    #[error("duplicate {kind} `{id}`")]
    Duplicate { kind: &'static str, id: String },

    #[error("invalid ranked list for query `{query_id}`: {message}")]
    InvalidRanking { query_id: String, message: String },

    #[error("dimension mismatch for `{key}`: expected {expected}, found {found}")]
    Dimension {
        key: String,
        expected: usize,
        found: usize,
    },

    #[error("zero documents")]
    EmptyCorpus,

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("invalid index file: {0}")]
    IndexFormat(String),

    #[error("{0}")]
    Invalid(String),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn parse(file: impl Into<String>, line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            file: file.into(),
            line,
            message: message.into(),
        }
    }
}
