//! Seeded random elements.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::algebra::{BasisKey, Element, GradedKey, Parity, SuperElement};
use crate::rational::Rational;

/// Identifier recorded in reports; bump it whenever sampling changes.
pub const RNG_ALGORITHM: &str = "chacha8-v1";

pub type Rng64 = ChaCha8Rng;

pub fn rng_from_seed(seed: u64) -> Rng64 {
    ChaCha8Rng::seed_from_u64(seed)
}

/// One of `±1, ±2, ±1/2`.
pub fn random_coeff(rng: &mut Rng64) -> Rational {
    let magnitude = match rng.gen_range(0..3) {
        0 => Rational::one(),
        1 => Rational::from_integer(2),
        _ => Rational::new(1, 2),
    };
    if rng.gen_bool(0.5) {
        -magnitude
    } else {
        magnitude
    }
}

/// A nonzero element with between 1 and `max_terms` distinct keys.
pub fn random_element(rng: &mut Rng64, keys: &[BasisKey], max_terms: usize) -> Element {
    assert!(!keys.is_empty(), "no keys to sample from");
    let count = rng.gen_range(1..=max_terms.min(keys.len()).max(1));
    let mut out = Element::zero();
    while out.len() < count {
        let k = &keys[rng.gen_range(0..keys.len())];
        if out.coeff(k).is_zero() {
            out.add_term(k.clone(), random_coeff(rng));
        }
    }
    out
}

/// A nonzero element over graded keys with between 1 and `max_terms` terms.
pub fn random_graded(rng: &mut Rng64, keys: &[GradedKey], max_terms: usize) -> SuperElement {
    assert!(!keys.is_empty(), "no keys to sample from");
    let count = rng.gen_range(1..=max_terms.min(keys.len()).max(1));
    let mut out = SuperElement::zero();
    while out.len() < count {
        let g = &keys[rng.gen_range(0..keys.len())];
        if out.coeff(g).is_zero() {
            out.add_term(g.clone(), random_coeff(rng));
        }
    }
    out
}

/// A nonzero homogeneous element of the given parity.
pub fn random_homogeneous(rng: &mut Rng64, keys: &[BasisKey], parity: Parity, max_terms: usize) -> SuperElement {
    SuperElement::homogeneous(parity, random_element(rng, keys, max_terms))
}
