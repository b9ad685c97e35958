use thiserror::Error;

/// Errors produced by the numbering, permutation and verification routines.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// An exact integer quantity left the 64-bit range.
    #[error("arithmetic overflow while computing {0}")]
    Overflow(&'static str),

    /// Arguments outside an operation's domain (invalid partition,
    /// exhausted explicit list, offset past the end of a block, ...).
    #[error("domain error: {0}")]
    Domain(String),

    /// A request would materialize more elements than the configured cap.
    #[error("{requested} elements requested, cap is {cap}")]
    Resource { requested: u64, cap: u64 },

    /// A float-derived block number could not be repaired within the
    /// correction window.
    #[error("closed form for n={n} landed at {guess}, outside the +/-{window} correction window")]
    Correction { n: u64, guess: u64, window: u64 },

    /// Malformed b-file line.
    #[error("line {line}: {message}")]
    Format { line: usize, message: String },

    /// Non-contiguous b-file indices.
    #[error("line {line}: expected index {expected}, found {found}")]
    Gap {
        line: usize,
        expected: i64,
        found: i64,
    },

    /// A fixture or other local file could not be read.
    #[error("{path}: {message}")]
    Io { path: String, message: String },

    /// Transport-level failure while fetching a b-file.
    #[error("network error: {0}")]
    Network(String),

    /// The server answered with a non-success status.
    #[error("HTTP status {0}")]
    HttpStatus(u16),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
