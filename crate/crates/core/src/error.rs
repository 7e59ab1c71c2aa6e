use thiserror::Error;

use crate::certreal::{CertError, ParseError, Retryable};

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Cert(#[from] CertError),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("unsupported recurrence pair: {0}")]
    UnsupportedFamily(String),
    #[error("continued fraction table too short: {0}")]
    TableTooShort(String),
    #[error("Legendre cross-check disagreement: {0}")]
    LegendreMismatch(String),
    #[error("precision exhausted at the {ceiling}-bit ceiling for shift s = {s}")]
    SweepExhausted { s: u64, ceiling: u32 },
    #[error("reduction failed: {0}")]
    StructuralFailure(String),
    #[error("invariant violated: {0}")]
    Invariant(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub fn is_precision_exhausted(&self) -> bool {
        matches!(
            self,
            Error::Cert(CertError::PrecisionExhausted { .. }) | Error::SweepExhausted { .. }
        )
    }
}

impl Retryable for Error {
    fn is_retryable(&self) -> bool {
        matches!(self, Error::Cert(e) if e.is_retryable())
    }

    fn exhausted(ceiling: u32) -> Self {
        Error::Cert(CertError::PrecisionExhausted { ceiling })
    }
}
