use std::path::PathBuf;

use thiserror::Error;

/// Errors produced by the extractor library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("length mismatch: expected {expected} bits, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },

    #[error("bit range {start}..={end} out of bounds for a vector of {len} bits")]
    OutOfRange { start: usize, end: usize, len: usize },

    #[error("empty input")]
    EmptyInput,

    #[error("insufficient entropy: k = {k} with log2(eps) = {log2_eps} gives m = {m}")]
    InsufficientEntropy { k: u64, log2_eps: i64, m: i64 },

    #[error("output length {m} exceeds the min-entropy bound {k}")]
    OutputExceedsEntropy { m: u64, k: u64 },

    #[error("{0} is not a prime with primitive root 2")]
    NotCirculantPrime(u64),

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("stream incomplete: {consumed} of {expected} raw bits consumed")]
    IncompleteStream { consumed: usize, expected: usize },

    #[error("chunk of {chunk} bits overflows the stream ({consumed} of {expected} consumed)")]
    StreamOverflow {
        chunk: usize,
        consumed: usize,
        expected: usize,
    },

    #[error("short read from {}: need {needed} bits, only {available} available", path.display())]
    ShortRead {
        path: PathBuf,
        needed: u64,
        available: u64,
    },

    #[error("benchmark task failed after {completed} runs: {source}")]
    BenchTask {
        completed: usize,
        #[source]
        source: Box<Error>,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
