//! Exact structure-constant engine for generalized Block Lie algebras and
//! the associated Lie superalgebras.
//!
//! Elements are sparse rational combinations of basis keys `x^(α, i)` with
//! `α ∈ Z^r` and `i` a multi-index. Brackets are evaluated from expanded
//! structure constants; spans, centers, derived algebras and ideal
//! closures are computed exactly on finite windows of the basis.

pub mod algebra;
pub mod brackets;
pub mod config;
pub mod error;
pub mod ideal;
pub mod identities;
pub mod linalg;
pub mod random;
pub mod rational;
pub mod structure;

pub use algebra::{BasisKey, Element, GradedKey, Parity, SuperElement, Window};
pub use brackets::BracketKernel;
pub use config::{AlgebraClass, AlgebraConfig, IndexKind, Profile};
pub use error::{Error, Result};
pub use rational::Rational;

/// Version string embedded in reports.
pub const ENGINE_VERSION: &str = concat!("blockforge-core ", env!("CARGO_PKG_VERSION"));
