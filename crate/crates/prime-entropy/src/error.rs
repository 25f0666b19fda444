//! Error type shared across the crate.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// An argument violated a precondition (non-prime `p`, `mu < 0`, ...).
    #[error("domain error: {0}")]
    Domain(String),

    /// A query point lies outside the range covered by the prime table.
    #[error("n = {n} is outside the table range 2..={limit}")]
    OutOfRange { n: u64, limit: u64 },

    /// The requested sieve limit would exceed the configured memory budget.
    #[error("sieve limit {limit} needs ~{needed} bytes of prime storage, budget is {budget}")]
    BudgetExceeded {
        limit: u64,
        needed: usize,
        budget: usize,
    },

    /// A brute-force enumeration was asked to exceed its cap.
    #[error("brute-force size {requested} exceeds cap {cap}")]
    CapExceeded { requested: u64, cap: u64 },

    /// The joint-law cell budget for an independence probe was exceeded.
    #[error("joint law needs {cells} cells, budget is {budget}")]
    CellBudgetExceeded { cells: u128, budget: u64 },

    /// A prime cache file failed validation.
    #[error("prime cache {path}: {reason}")]
    Cache { path: String, reason: String },

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
