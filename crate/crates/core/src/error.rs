use thiserror::Error;

use crate::recursion::Signature;

#[derive(Debug, Error)]
pub enum Error {
    #[error("signature ({g},{n}) is not stable: need 2g - 2 + n > 0")]
    Unstable { g: u32, n: u32 },

    #[error("signature {0} is not a base case of the recursion")]
    NotBaseCase(Signature),

    #[error("signature {0} has no boundary; use the compact volume instead")]
    NoBoundary(Signature),

    #[error("volume {0} is missing from the table; compute its dependencies first")]
    MissingVolume(Signature),

    #[error("variable sets overlap in a disjoint product")]
    VariableOverlap,

    #[error("multi-index has length {got}, expected {expected}")]
    ArityMismatch { expected: usize, got: usize },

    #[error("invariant violated for {sig}: {what}")]
    Invariant { sig: Signature, what: String },

    #[error("compact volume needs genus >= 2, got {0}")]
    CompactGenus(u32),

    #[error("outside the oracle's documented domain: {0}")]
    OracleDomain(String),

    #[error("value does not fit in double precision")]
    FloatOverflow,

    #[error("malformed rational {0:?}")]
    ParseRational(String),

    #[error("cache rejected: {0}")]
    Cache(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
