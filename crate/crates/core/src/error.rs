use thiserror::Error;

/// Errors across the crate. Cap/budget overruns are kept distinct from
/// malformed input so callers can map them to different exit codes.
#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("signature mismatch: {0}")]
    Signature(String),
    #[error("evaluation error: {0}")]
    Eval(String),
    #[error("identity scheme error: {0}")]
    Scheme(String),
    #[error("free algebra cap exceeded: {0}")]
    FreeCap(String),
    #[error("cap exceeded: {0}")]
    Cap(String),
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

impl Error {
    /// True for errors that mean "the requested computation is too large",
    /// as opposed to malformed input.
    pub fn is_cap(&self) -> bool {
        matches!(self, Error::FreeCap(_) | Error::Cap(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
