//! Library-wide error type.

use thiserror::Error;

use crate::exact::ArithError;
use crate::heis::ParseError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CrError {
    #[error("{0}")]
    Domain(String),
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Arith(#[from] ArithError),
    #[error("basis overflow: {0}")]
    BasisOverflow(String),
    #[error(
        "indicial factor vanishes at order {order} in channel {channel} with nonzero residual"
    )]
    Indicial { channel: String, order: usize },
    #[error("verification failed: {0}")]
    Verification(String),
}

pub type Result<T> = std::result::Result<T, CrError>;
