use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("malformed XML at byte {offset}: {message}")]
    MalformedXml { offset: u64, message: String },

    #[error("unsupported feed format: root element <{0}>")]
    UnsupportedFeed(String),

    #[error("network error fetching {url} after {attempts} attempt(s): {message}")]
    Network {
        url: String,
        attempts: u32,
        message: String,
    },

    #[error("no main text block found in page {0}")]
    ExtractionEmpty(String),

    #[error("invalid record in {context}: {message}")]
    InvalidRecord { context: String, message: String },

    #[error("vocabulary is empty after applying min_count={0}")]
    EmptyVocabulary(usize),

    #[error("word not in vocabulary: {0:?}")]
    OutOfVocabulary(String),

    #[error("none of the seed words are in the vocabulary: {0:?}")]
    AllSeedsOutOfVocabulary(Vec<String>),

    #[error("training diverged: vector norm {norm} exceeds bound {bound} (epoch {epoch})")]
    Divergence { norm: f64, bound: f64, epoch: usize },

    #[error("term-document matrix is empty after pruning (min_doc_freq={0})")]
    EmptyMatrix(usize),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("bad model file: {0}")]
    BadModel(String),

    #[error("{path}:{line}: {message}")]
    Parse {
        path: String,
        line: usize,
        message: String,
    },

    #[error("gold labels missing for item(s): {0:?}")]
    MissingGold(Vec<String>),

    #[error("predicted triplet key(s) absent from gold: {0:?}")]
    KeyMismatch(Vec<String>),

    #[error("JSON error in {context}: {source}")]
    Json {
        context: String,
        #[source]
        source: serde_json::Error,
    },

    #[error("no articles in store {0}")]
    EmptyCorpus(PathBuf),

    #[error("stage `{stage}` failed: {source}")]
    Stage {
        stage: &'static str,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn json(context: impl Into<String>, source: serde_json::Error) -> Self {
        Error::Json {
            context: context.into(),
            source,
        }
    }

    /// True for failures worth retrying (currently only network errors).
    pub fn is_retryable(&self) -> bool {
        matches!(self, Error::Network { .. })
    }
}
