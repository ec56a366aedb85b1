//! Brackets evaluated by composing products and derivations.
//!
//! This path shares no code with the expanded structure constants and is
//! used to cross-check them. It is much slower.

use crate::algebra::{BasisKey, Element, SuperElement};
use crate::config::{AlgebraClass, AlgebraConfig};
use crate::rational::Rational;

fn d(cfg: &AlgebraConfig, p: usize, u: &Element) -> Element {
    u.derivation(&cfg.phi, p)
}

/// `∂_p(u)∂_q(v) - ∂_p(v)∂_q(u)`.
fn poisson(cfg: &AlgebraConfig, p: usize, q: usize, u: &Element, v: &Element) -> Element {
    d(cfg, p, u).multiply(&d(cfg, q, v)).sub(&d(cfg, p, v).multiply(&d(cfg, q, u)))
}

/// `u∂_p(v) - ∂_p(u)v`.
fn witt(cfg: &AlgebraConfig, p: usize, u: &Element, v: &Element) -> Element {
    u.multiply(&d(cfg, p, v)).sub(&d(cfg, p, u).multiply(v))
}

fn alpha0_monomial(cfg: &AlgebraConfig) -> Element {
    let a0 = cfg.alpha0().expect("class has alpha0");
    Element::basis(BasisKey::pure(a0, cfg.n()))
}

/// Class I: `∂_1u∂_2v - ∂_1v∂_2u + u∂_1v - ∂_1u v`, or only the last two
/// terms when `∂_2 = 0`.
pub fn class1(cfg: &AlgebraConfig, u: &Element, v: &Element) -> Element {
    assert_eq!(cfg.class, AlgebraClass::ClassI);
    if cfg.degenerate_witt {
        return witt(cfg, 0, u, v);
    }
    poisson(cfg, 0, 1, u, v).add(&witt(cfg, 0, u, v))
}

/// Class II: `x^α0(∂_1u∂_2v - ∂_1v∂_2u) + (∂_3u∂_4v - ∂_3v∂_4u)
/// + φ_3(α0)(u∂_4v - ∂_4u v) - φ_4(α0)(u∂_3v - ∂_3u v)`.
pub fn class2(cfg: &AlgebraConfig, u: &Element, v: &Element) -> Element {
    assert_eq!(cfg.class, AlgebraClass::ClassII);
    let mut out = alpha0_monomial(cfg).multiply(&poisson(cfg, 0, 1, u, v));
    out.add_scaled(&poisson(cfg, 2, 3, u, v), &Rational::one());
    out.add_scaled(&witt(cfg, 3, u, v), &cfg.phi_alpha0(2));
    out.add_scaled(&witt(cfg, 2, u, v), &-cfg.phi_alpha0(3));
    out
}

/// Class III on two even elements: `∂_1u∂_2v - ∂_1v∂_2u + ε(u∂_1v - ∂_1u v)`.
pub fn class3_even_even(cfg: &AlgebraConfig, u: &Element, v: &Element) -> Element {
    let mut out = poisson(cfg, 0, 1, u, v);
    out.add_scaled(&witt(cfg, 0, u, v), &cfg.epsilon_value());
    out
}

/// Class III on two odd elements: `x^α0 u v`, landing in the even part.
pub fn class3_odd_odd(cfg: &AlgebraConfig, u: &Element, v: &Element) -> Element {
    alpha0_monomial(cfg).multiply(u).multiply(v)
}

/// Class III on an even `u` and odd `v`:
/// `∂_1u∂_2v - ∂_1v∂_2u + ε(u∂_1v - ½∂_1(u)v)
///  + ½(φ_2(α0)∂_1(u)v + φ_1(α0)(εuv - ∂_2(u)v))`, landing in the odd part.
pub fn class3_even_odd(cfg: &AlgebraConfig, u: &Element, v: &Element) -> Element {
    let half = Rational::new(1, 2);
    let eps = cfg.epsilon_value();
    let (c1, c2) = (cfg.phi_alpha0(0), cfg.phi_alpha0(1));
    let d1u_v = d(cfg, 0, u).multiply(v);
    let mut out = poisson(cfg, 0, 1, u, v);
    out.add_scaled(&u.multiply(&d(cfg, 0, v)), &eps);
    out.add_scaled(&d1u_v, &-(&eps * &half));
    out.add_scaled(&d1u_v, &(&c2 * &half));
    out.add_scaled(&u.multiply(v), &(&(&c1 * &eps) * &half));
    out.add_scaled(&d(cfg, 1, u).multiply(v), &-(&c1 * &half));
    out
}

/// The full graded bracket for Class III.
pub fn class3(cfg: &AlgebraConfig, u: &SuperElement, v: &SuperElement) -> SuperElement {
    assert_eq!(cfg.class, AlgebraClass::ClassIII);
    let even = class3_even_even(cfg, &u.even, &v.even).add(&class3_odd_odd(cfg, &u.odd, &v.odd));
    let odd = class3_even_odd(cfg, &u.even, &v.odd).sub(&class3_even_odd(cfg, &v.even, &u.odd));
    SuperElement { even, odd }
}
