//! Shared error type for loading, aggregation, scoring and evaluation.

use std::path::PathBuf;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: expected header `{expected}`, found `{found}`")]
    Header {
        path: PathBuf,
        expected: String,
        found: String,
    },

    #[error("{path}:{line}: {msg}")]
    Schema {
        path: PathBuf,
        line: u64,
        msg: String,
    },

    #[error("{path}:{line}: duplicate {what} `{id}`")]
    Duplicate {
        path: PathBuf,
        line: u64,
        what: String,
        id: String,
    },

    #[error("{path}:{line}: unknown {kind} `{id}`")]
    DanglingReference {
        path: PathBuf,
        line: u64,
        kind: String,
        id: String,
    },

    #[error("unknown slot token `{token}`")]
    UnknownSlotToken { token: String },

    #[error("cannot instantiate `{slot}`: {reason}")]
    UnresolvableSlot { slot: String, reason: String },

    #[error("claim `{claim_id}` is not a single sentence ({sentences} found)")]
    ClaimNotOneSentence { claim_id: String, sentences: usize },

    #[error("label lists differ in length ({left} vs {right})")]
    LabelLengthMismatch { left: usize, right: usize },

    #[error("label lists are empty")]
    EmptyLabels,

    #[error("records mix item keys (`{first}` vs `{second}`)")]
    MixedItemKeys { first: String, second: String },

    #[error("records mix tasks (`{first}` vs `{second}`)")]
    MixedTasks { first: String, second: String },

    #[error("no records supplied for aggregation")]
    NoRecords,

    #[error("known-answer record for `{item}` by `{annotator}` has no gold answer")]
    ProbeWithoutGold { item: String, annotator: String },

    #[error("vector dimensions differ ({left} vs {right})")]
    DimensionMismatch { left: usize, right: usize },

    #[error("undefined recall: no positive gold labels among predictions")]
    NoPositives,

    #[error("precision-recall curve is empty")]
    EmptyCurve,

    #[error("{what} must lie in {range}, got {value}")]
    OutOfRange {
        what: String,
        range: String,
        value: f64,
    },

    #[error("unknown scorer `{name}` (available: {available})")]
    UnknownScorer { name: String, available: String },

    #[error("scorer `{scorer}` requires {input}")]
    MissingScorerInput { scorer: String, input: String },

    #[error("{0}")]
    InvalidInput(String),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn schema(path: impl Into<PathBuf>, line: u64, msg: impl Into<String>) -> Self {
        Error::Schema {
            path: path.into(),
            line,
            msg: msg.into(),
        }
    }
}
