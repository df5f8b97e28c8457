//! Error type shared across the crate.

/// Errors produced by construction, parsing, and exact computation.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("modulus mismatch: F_{0} vs F_{1}")]
    ModulusMismatch(u64, u64),
    #[error("integer overflow in {0}")]
    Overflow(&'static str),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("divided-power order {order} is not below p^{level}")]
    InvalidLevel { order: u64, level: u32 },
    #[error("generator sequence too short: index {needed} requested, {have} entries available")]
    ShortSequence { needed: u32, have: usize },
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("closed formula undefined for i = {i} < p = {p}")]
    FormulaUndefined { i: u128, p: u64 },
}

pub type Result<T> = std::result::Result<T, Error>;
