use thiserror::Error;

use crate::halfint::HalfInt;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("charge rank mismatch: {left} vs {right}")]
    ChargeRankMismatch { left: usize, right: usize },

    #[error("charge vector has length {got}, series has charge rank {expected}")]
    ChargeLength { expected: usize, got: usize },

    #[error("coefficient of q^{qexp} requested but series is truncated at q^{order}")]
    OutOfRange { qexp: HalfInt, order: HalfInt },

    #[error("factor (q^{shift}; q^{step}) does not converge: shift and step must be >= 1")]
    DivergentFactor { shift: i64, step: i64 },

    #[error("unbound symbol `{0}`")]
    UnboundSymbol(String),

    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),

    #[error("invalid form: {0}")]
    InvalidForm(String),

    #[error("quadratic form is neither nonnegative with positive diagonal nor positive definite; refusing to enumerate")]
    NotCoercive,

    #[error("unsupported root system {kind}{rank}")]
    UnsupportedType { kind: char, rank: usize },

    #[error("algebras differ")]
    AlgebraMismatch,

    #[error("budget exceeded: {what} reached {count} (cap {cap})")]
    BudgetExceeded { what: String, count: u64, cap: u64 },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
