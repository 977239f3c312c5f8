use num_bigint::BigUint;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),

    #[error(
        "type is not admissible: entry {size} occurs {count} times but C(N,{size}) = {capacity}"
    )]
    NotAdmissible {
        size: u32,
        count: BigUint,
        capacity: BigUint,
    },

    #[error("type is not full: entry {size} occurs {count} times, C(N,{size}) = {capacity}")]
    NotFull {
        size: u32,
        count: BigUint,
        capacity: BigUint,
    },

    #[error("N = {n} exceeds the {what} cap of {cap} (raise it with --cap-n)")]
    CapExceeded {
        what: &'static str,
        n: usize,
        cap: usize,
    },

    #[error("no locating array exists for N = {n}, v = {v}, variant {variant}")]
    NoArray { n: usize, v: usize, variant: String },

    #[error("malformed spread system: {0}")]
    MalformedSpread(String),

    #[error("malformed array: {0}")]
    MalformedArray(String),

    #[error("realization step infeasible at tau = {tau}: {reason}")]
    Infeasible { tau: usize, reason: String },

    #[error("parse error: {0}")]
    Parse(String),
}
