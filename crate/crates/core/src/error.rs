use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("modulus {0} is too large for table-based arithmetic")]
    FieldTooLarge(u64),
    #[error("F_{p} has no element of order {m}")]
    IncompatibleField { p: u64, m: u64 },
    #[error("domain error: {0}")]
    Domain(String),
    #[error("characteristic {p} divides the degree {d}")]
    UnsupportedCharacteristic { p: u64, d: u32 },
    #[error("degree mismatch: expected {expected}, got {got}")]
    DegreeMismatch { expected: u32, got: u32 },
    #[error("group exceeds bound {0}")]
    TooLarge(usize),
    #[error("search budget {budget} exceeded ({needed} candidates)")]
    BudgetExceeded { budget: u64, needed: u64 },
    #[error("no smooth member found after {0} draws")]
    Exhausted(u64),
    #[error("matrix is not diagonalizable over any extension")]
    NonDiagonalizable,
    #[error("inconsistent branch data: {0}")]
    InconsistentBranchData(String),
    #[error("could not decide smoothness: {0}")]
    Undetermined(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invariance check failed: {0}")]
    NotInvariant(String),
}

pub type Result<T> = std::result::Result<T, Error>;
