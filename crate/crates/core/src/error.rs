use thiserror::Error;

use crate::algebra::{BasisKey, GradedKey, Parity};

#[derive(Debug, Error)]
pub enum Error {
    #[error("malformed configuration: {0}")]
    Structure(String),

    #[error("failed to parse {what}: {source}")]
    Parse {
        what: String,
        #[source]
        source: serde_json::Error,
    },

    #[error("operation not available for {class} algebras: {detail}")]
    ClassMismatch { class: &'static str, detail: String },

    #[error("key {key} is not a valid basis key for this profile: {reason}")]
    InvalidKey { key: BasisKey, reason: String },

    #[error("key {key} ({parity:?}) is not a verified central element")]
    NotCentral { key: BasisKey, parity: Parity },

    #[error("key {0} lies outside the window")]
    OutsideWindow(GradedKey),

    #[error("seed is zero after quotient projection")]
    EmptySeed,

    #[error("element is not in the span of the closure")]
    NotInSpan,

    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

pub type Result<T> = std::result::Result<T, Error>;
