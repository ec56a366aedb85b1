//! Polynomial differential-operator realizations of the generalized Block
//! algebras, used as an oracle independent of the structure-constant engine.
//!
//! A [`RealizationSpec`] pairs an engine configuration with an exponent map
//! `E` sending basis keys to monomials. [`cross_check`] evaluates brackets of
//! random key pairs both ways and compares `E(engine bracket)` with the
//! operator formula applied to the images.

pub mod check;
pub mod error;
pub mod poly;
pub mod registry;
pub mod spec;

pub use check::{cross_check, CrossCheckReport};
pub use error::{RealizeError, Result};
pub use poly::{FracLaurentPoly, Ring};
pub use registry::Family;
pub use spec::{realized_bracket, Params, RealizationSpec, SpecFile, SuperPoly};
