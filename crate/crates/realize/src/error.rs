use thiserror::Error;

#[derive(Debug, Error)]
pub enum RealizeError {
    #[error("monomial {monomial} has a negative power of {variable}, which the ring forbids")]
    Restriction { variable: String, monomial: String },

    #[error("monomial {monomial} is excluded from the space")]
    Excluded { monomial: String },

    #[error("polynomial shape (vars, denominator) {found:?} does not match the ring's {expected:?}")]
    Shape { expected: (usize, i64), found: (usize, i64) },

    #[error("exponent map is not injective: {first} and {second} both map to {monomial}")]
    NotInjective { first: String, second: String, monomial: String },

    #[error("exponent of {key} is not a multiple of 1/{denom}")]
    Denominator { key: String, denom: i64 },

    #[error("quotient monomials {spec:?} do not match the verified central keys {engine:?}")]
    QuotientMismatch { spec: Vec<String>, engine: Vec<String> },

    #[error("key {key} uses multi-index direction {direction}, which has no variable")]
    Unmapped { key: String, direction: usize },

    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("unknown realization family {0:?}")]
    UnknownFamily(String),

    #[error("invalid parameters for {family}: {reason}")]
    Parameters { family: String, reason: String },

    #[error("failed to parse realization spec: {0}")]
    Parse(#[from] serde_json::Error),

    #[error(transparent)]
    Engine(#[from] blockforge_core::Error),
}

pub type Result<T> = std::result::Result<T, RealizeError>;
