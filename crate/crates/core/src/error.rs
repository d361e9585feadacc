use std::path::PathBuf;

/// Errors produced anywhere in the denoising pipeline.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("input is not valid UTF-8 at byte offset {offset}")]
    Decode { offset: usize },

    #[error("not a word: {0:?}")]
    NotAWord(String),

    #[error("unscorable unit: {0}")]
    Unscorable(&'static str),

    #[error("scores are misaligned with the document: expected {expected}, found {found}")]
    Alignment { expected: usize, found: usize },

    #[error("invalid threshold {0}: must lie in (0, 1]")]
    InvalidThreshold(f64),

    #[error("{0}")]
    Validation(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("{path}:{line}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn validation(msg: impl Into<String>) -> Self {
        Error::Validation(msg.into())
    }
}
