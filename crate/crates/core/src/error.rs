use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("invalid tag {0:?}")]
    InvalidTag(String),

    #[error("invalid sentence: {0}")]
    InvalidSentence(String),

    #[error("invalid span: {0}")]
    InvalidSpan(String),

    #[error("{what}: {left} vs {right}")]
    LengthMismatch {
        what: String,
        left: usize,
        right: usize,
    },

    #[error("spans overlap at token {index}")]
    Overlap { index: usize },

    #[error(
        "link {source_index}-{target_index} out of range for a {source_len}x{target_len} pair"
    )]
    LinkOutOfRange {
        source_index: usize,
        target_index: usize,
        source_len: usize,
        target_len: usize,
    },

    #[error("link target {target_index} out of range for a target of {target_len} tokens")]
    TargetOutOfRange {
        target_index: usize,
        target_len: usize,
    },

    #[error("entity {label} at token {start} has no aligned target token")]
    UnalignedEntity { label: String, start: usize },

    #[error("empty bitext")]
    EmptyBitext,

    #[error("sentence pair {index} has an empty side")]
    DegeneratePair { index: usize },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("model file line {line}: {message}")]
    ModelFormat { line: usize, message: String },

    #[error("empty corpus")]
    EmptyCorpus,

    #[error("sentence {index}: {source}")]
    Sentence {
        index: usize,
        #[source]
        source: Box<Error>,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }

    pub(crate) fn mismatch(what: impl Into<String>, left: usize, right: usize) -> Self {
        Error::LengthMismatch {
            what: what.into(),
            left,
            right,
        }
    }

    pub(crate) fn in_sentence(self, index: usize) -> Self {
        Error::Sentence {
            index,
            source: Box::new(self),
        }
    }
}
