//! Extended genus fields of Kummer extensions of `F_q(T)`.
//!
//! Finite field and polynomial arithmetic, factorization, the radicand
//! lattice of a Kummer extension, and the genus field constructions built on
//! it. The `kgenus` binary wraps [`report::run`].

pub mod batch;
pub mod factor;
pub mod ff;
pub mod genus;
pub mod group;
pub mod input;
pub mod kummer;
pub mod oracle;
pub mod par;
pub mod poly;
pub mod report;
pub mod selftest;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(#[from] input::ParseError),
    #[error("invalid descriptor: {0}")]
    Descriptor(String),
    #[error("internal invariant violated: {0}")]
    Invariant(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Process exit status for this error.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Parse(_) => 2,
            Error::Descriptor(_) => 3,
            Error::Invariant(_) => 4,
            Error::Io(_) => 1,
        }
    }
}

impl From<kummer::DescriptorError> for Error {
    fn from(e: kummer::DescriptorError) -> Self {
        Error::Descriptor(e.to_string())
    }
}

impl From<genus::GenusError> for Error {
    fn from(e: genus::GenusError) -> Self {
        match e {
            genus::GenusError::Descriptor(d) => d.into(),
            other => Error::Invariant(other.to_string()),
        }
    }
}

impl From<group::GroupError> for Error {
    fn from(e: group::GroupError) -> Self {
        Error::Invariant(e.to_string())
    }
}
