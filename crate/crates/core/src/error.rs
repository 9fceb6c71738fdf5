use thiserror::Error;

use crate::model::MentionId;

/// Errors raised by the in-memory model.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("document `{0}` has no sentences")]
    EmptyDocument(String),
    #[error("duplicate sentence number `{0}`")]
    DuplicateSentence(String),
    #[error("sentence `{sentence}`: expected word index {expected}, found {found}")]
    WordIndexGap {
        sentence: String,
        expected: usize,
        found: usize,
    },
    #[error("sentence `{sentence}`, word {word}: dependency head {head} is outside the sentence")]
    HeadOutOfRange {
        sentence: String,
        word: usize,
        head: usize,
    },
    #[error("sentence `{sentence}`, word {word}: empty surface")]
    EmptySurface { sentence: String, word: usize },
    #[error("unknown sentence `{0}`")]
    UnknownSentence(String),
    #[error("mention {id}: span {from}..{to} is outside sentence `{sentence}` of length {len}")]
    SpanOutOfBounds {
        id: MentionId,
        sentence: String,
        from: usize,
        to: usize,
        len: usize,
    },
}

/// Errors raised while reading or writing one of the file formats.
#[derive(Debug, Error)]
pub enum FormatError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("malformed XML: {0}")]
    Xml(#[from] roxmltree::Error),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("document `{doc}`: {message}")]
    Mismatch { doc: String, message: String },
    #[error("unsupported conversion from {from} to {to}")]
    Unsupported { from: String, to: String },
}

impl FormatError {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        FormatError::Parse {
            line,
            message: message.into(),
        }
    }
}
