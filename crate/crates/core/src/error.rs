use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation (e.g. log of a series
    /// whose constant term is not 1).
    #[error("domain error: {0}")]
    Domain(String),
    /// Input that could not be parsed or violates a format rule.
    #[error("malformed input: {0}")]
    Malformed(String),
    /// A diagram whose dart structure is inconsistent.
    #[error("structural error: {0}")]
    Structure(String),
    #[error("normalization error: {0}")]
    Normalization(String),
    #[error("unsupported input: {0}")]
    Unsupported(String),
    #[error("degree mismatch: expected {expected}, found {found}")]
    DegreeMismatch { expected: usize, found: usize },
    #[error("out of supported range: {0}")]
    OutOfRange(String),
    #[error("not in image: {0}")]
    NotInImage(String),
    #[error("span error: {0}")]
    Span(String),
    #[error("internal consistency error: {0}")]
    Inconsistent(String),
}

impl Error {
    /// True for errors caused by input that could not be understood at all, as
    /// opposed to well-formed input rejected by the mathematics.
    pub fn is_malformed(&self) -> bool {
        matches!(self, Error::Malformed(_) | Error::Structure(_))
    }
}
