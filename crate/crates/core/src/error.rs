use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Enumeration would produce more words than the configured cap allows.
    #[error("size limit exceeded: {count} words of length {length} (cap on word length is {cap})")]
    SizeLimit {
        count: String,
        length: usize,
        cap: usize,
    },

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("unsupported alphabet size {found}: {context}")]
    UnsupportedAlphabet { found: usize, context: &'static str },

    #[error("invalid word: {0}")]
    InvalidWord(String),

    #[error("value out of range: {0}")]
    Range(String),

    #[error("argument outside domain: {0}")]
    Domain(String),

    #[error("non-finite matrix entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    /// A numerical routine produced an unusable result (singular solve, overflow).
    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("search space too large: {0}")]
    Guard(String),

    #[error("function is not non-decreasing: {0}")]
    NonMonotone(String),
}

impl Error {
    pub(crate) fn shape(msg: impl Into<String>) -> Self {
        Error::Shape(msg.into())
    }

    /// Whether the error stems from a numerical breakdown rather than bad input.
    pub fn is_numerical(&self) -> bool {
        matches!(self, Error::Numerical(_))
    }
}
