use thiserror::Error;

use crate::digits::SignificanceOrder;

#[derive(Error, Debug, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch on axis pair ({left}, {right}): {left_extent} != {right_extent}")]
    Dimension {
        left: usize,
        right: usize,
        left_extent: usize,
        right_extent: usize,
    },

    #[error("invalid argument: {0}")]
    Argument(String),

    #[error("outside the domain of the bound: {0}")]
    Domain(String),

    #[error("significance order mismatch: expected {}, got {}", expected.as_str(), found.as_str())]
    Convention {
        expected: SignificanceOrder,
        found: SignificanceOrder,
    },

    #[error("dense size {requested} exceeds the guard of {limit} entries")]
    SizeGuard { requested: u128, limit: u128 },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn arg<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Argument(msg.into()))
}
