//! Error type shared across the library.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: malformed JSON: {msg}")]
    MalformedJson { line: usize, msg: String },

    #[error("line {line}: missing field \"{field}\"")]
    MissingField { line: usize, field: &'static str },

    #[error("empty transcript")]
    EmptyTranscript,

    #[error("no utterances found")]
    NoUtterances,

    #[error("sentence is already wrapped with bos/eos")]
    AlreadyWrapped,

    #[error("sentence has no taggable tokens")]
    EmptySentence,

    #[error("unknown speaker \"{0}\"")]
    UnknownSpeaker(String),

    #[error("no candidate keywords")]
    NoKeywords,

    #[error("empty keyword set")]
    EmptyKeywords,

    #[error("topic vector length mismatch: {0} vs {1}")]
    VectorLengthMismatch(usize, usize),

    #[error("requested {requested} topics but only {available} sentences")]
    TooManyTopics { requested: usize, available: usize },

    #[error("topic count must be at least 1")]
    ZeroTopics,

    #[error("disconnected graph: eos is unreachable from bos")]
    Disconnected,

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("document \"{0}\": {1}")]
    Document(String, Box<Error>),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Attach a document id to an error bubbling out of the pipeline.
    pub fn in_document(self, doc_id: &str) -> Error {
        Error::Document(doc_id.to_string(), Box::new(self))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
