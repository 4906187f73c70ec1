use thiserror::Error;

/// Errors raised by graph construction, counting and the measure routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("size cap exceeded: {what} = {value} > {cap}")]
    CapExceeded {
        what: &'static str,
        value: u128,
        cap: u128,
    },
    #[error("pair is not admissible: max degree {max_degree} exceeds d = {d}")]
    Inadmissible { max_degree: usize, d: u64 },
    #[error("pattern must be connected")]
    DisconnectedPattern,
    #[error("pattern must be a forest")]
    NotAForest,
    #[error("pattern is empty")]
    EmptyPattern,
    #[error("count overflowed 128 bits")]
    Overflow,
    #[error("instance infeasible for exact computation: {0}")]
    Infeasible(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    pub(crate) fn cap(what: &'static str, value: impl Into<u128>, cap: impl Into<u128>) -> Self {
        Error::CapExceeded {
            what,
            value: value.into(),
            cap: cap.into(),
        }
    }

    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
