use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{source_name}:{line}: field `{field}`: {message}")]
    Parse {
        source_name: String,
        line: usize,
        field: String,
        message: String,
    },

    #[error("transcript `{transcript_id}` has duplicate line_index {line_index}")]
    DuplicateLine { transcript_id: String, line_index: usize },

    #[error("transcript `{transcript_id}`: {message}")]
    InvalidTranscript { transcript_id: String, message: String },

    #[error("{source_name}:{line}: duplicate entry for ({word}, {emotion})")]
    DuplicateEntry {
        source_name: String,
        line: usize,
        word: String,
        emotion: String,
    },

    #[error("words present in both polarity lists: {}", .0.join(", "))]
    PolarityOverlap(Vec<String>),

    #[error("empty emotion subset")]
    EmptyEmotionSubset,

    #[error("all documents are empty after filtering")]
    EmptyVocabulary,

    #[error("invalid argument `{name}`: {message}")]
    InvalidArgument { name: String, message: String },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("writing {path}: {source}")]
    Write {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{0}")]
    Config(String),

    #[error("internal error: {0}")]
    Internal(String),
}

impl Error {
    pub(crate) fn parse(
        source_name: impl Into<String>,
        line: usize,
        field: impl Into<String>,
        message: impl Into<String>,
    ) -> Self {
        Error::Parse {
            source_name: source_name.into(),
            line,
            field: field.into(),
            message: message.into(),
        }
    }

    pub(crate) fn invalid(name: impl Into<String>, message: impl Into<String>) -> Self {
        Error::InvalidArgument {
            name: name.into(),
            message: message.into(),
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// Process exit code: 2 for bad input or configuration, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Internal(_) | Error::Write { .. } => 1,
            _ => 2,
        }
    }
}
