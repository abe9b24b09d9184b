//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Malformed decimal literal.
    #[error("cannot parse `{0}` as a decimal number")]
    Parse(String),

    /// Argument outside the mathematical domain of the operation.
    #[error("domain error in {op}: {msg}")]
    Domain { op: &'static str, msg: String },

    /// Evaluation point on or across a branch cut / divergence boundary.
    #[error("branch/divergence error in {op}: {msg}")]
    Branch { op: &'static str, msg: String },

    /// Outside the disk of convergence of the s=1 expansion.
    #[error("s = {s} is outside the |s-1| < 1/2 disk of the expansion")]
    OutOfDisk { s: String },

    /// Index beyond what bundled data supports.
    #[error("order {n} not supported: {msg}")]
    UnsupportedOrder { n: usize, msg: String },

    /// Argument beyond a table/sieve limit.
    #[error("argument {x} out of range (limit {limit})")]
    OutOfRange { x: String, limit: u64 },

    /// Bundled or external data file failed validation.
    #[error("data error: {0}")]
    Data(String),

    /// I/O failure on an external file (sieve cache, reports).
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn domain(op: &'static str, msg: impl Into<String>) -> Self {
        Error::Domain { op, msg: msg.into() }
    }

    pub fn branch(op: &'static str, msg: impl Into<String>) -> Self {
        Error::Branch { op, msg: msg.into() }
    }

    /// True for errors caused by the caller's argument values rather than
    /// by internal failures. The CLI maps these to exit code 2.
    pub fn is_domain(&self) -> bool {
        matches!(
            self,
            Error::Parse(_)
                | Error::Domain { .. }
                | Error::Branch { .. }
                | Error::OutOfDisk { .. }
                | Error::UnsupportedOrder { .. }
                | Error::OutOfRange { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
