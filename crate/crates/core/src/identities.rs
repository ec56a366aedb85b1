//! Randomized exact checks of the Jacobi identity and its graded form.

use rand::Rng;
use serde::Serialize;

use crate::algebra::{GradedKey, Multi, Parity, SuperElement, Window};
use crate::brackets::BracketKernel;
use crate::config::AlgebraClass;
use crate::random::{random_homogeneous, rng_from_seed};
use crate::rational::Rational;

/// Default number of terms per random element.
pub const DEFAULT_MAX_TERMS: usize = 3;

/// `(-1)^{|U||W|}[[U,V],W] + (-1)^{|V||U|}[[V,W],U] + (-1)^{|W||V|}[[W,U],V]`
/// for homogeneous arguments; all signs are `+1` in the Lie classes.
pub fn jacobiator(kernel: &BracketKernel, u: &SuperElement, v: &SuperElement, w: &SuperElement) -> SuperElement {
    let (pu, pv, pw) = (parity_of(u), parity_of(v), parity_of(w));
    let sign = |a: Parity, b: Parity| {
        if a.is_odd() && b.is_odd() {
            -Rational::one()
        } else {
            Rational::one()
        }
    };
    let br = |a: &SuperElement, b: &SuperElement| kernel.bracket_unchecked(a, b);
    let mut out = br(&br(u, v), w).scale(&sign(pu, pw));
    out.add_scaled(&br(&br(v, w), u), &sign(pv, pu));
    out.add_scaled(&br(&br(w, u), v), &sign(pw, pv));
    out
}

fn parity_of(u: &SuperElement) -> Parity {
    u.parity().unwrap_or(Parity::Even)
}

/// A failing triple, narrowed to basis keys.
#[derive(Clone, Debug, Serialize)]
pub struct JacobiFailure {
    pub trial: usize,
    pub u: SuperElement,
    pub v: SuperElement,
    pub w: SuperElement,
    pub residual: SuperElement,
    /// A key triple on which the identity already fails.
    pub keys: Option<[GradedKey; 3]>,
    /// Bracket blocks used by the failing key triple, e.g. `even_odd`.
    pub blocks: Vec<&'static str>,
    /// For each residual term, how far its multi-index sits below the sum of
    /// the three input multi-indices. Each offset names the coefficient
    /// family of the expanded bracket that is implicated.
    pub residual_offsets: Vec<Multi>,
}

#[derive(Clone, Debug, Serialize)]
pub struct JacobiReport {
    pub class: AlgebraClass,
    pub window: Window,
    pub seed: u64,
    pub trials: usize,
    pub failures: usize,
    pub first_failure: Option<JacobiFailure>,
}

impl JacobiReport {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

/// Checks the identity on `trials` random homogeneous triples drawn from
/// `window` with the given seed.
pub fn jacobi_suite(kernel: &BracketKernel, window: &Window, trials: usize, seed: u64) -> JacobiReport {
    let mut rng = rng_from_seed(seed);
    let keys = window.keys(kernel.rank(), &kernel.config().profile);
    let mut failures = 0;
    let mut first_failure = None;
    for trial in 0..trials {
        let mut pick = || {
            let parity = if kernel.has_odd() && rng.gen_bool(0.5) { Parity::Odd } else { Parity::Even };
            random_homogeneous(&mut rng, &keys, parity, DEFAULT_MAX_TERMS)
        };
        let (u, v, w) = (pick(), pick(), pick());
        let residual = jacobiator(kernel, &u, &v, &w);
        if residual.is_zero() {
            continue;
        }
        failures += 1;
        if first_failure.is_none() {
            first_failure = Some(localize(kernel, trial, u, v, w, residual));
        }
    }
    JacobiReport { class: kernel.class(), window: *window, seed, trials, failures, first_failure }
}

fn localize(
    kernel: &BracketKernel,
    trial: usize,
    u: SuperElement,
    v: SuperElement,
    w: SuperElement,
    residual: SuperElement,
) -> JacobiFailure {
    let mut found = None;
    'search: for (a, _) in u.terms() {
        for (b, _) in v.terms() {
            for (c, _) in w.terms() {
                let r =
                    jacobiator(kernel, &SuperElement::basis(&a), &SuperElement::basis(&b), &SuperElement::basis(&c));
                if !r.is_zero() {
                    found = Some(([a.clone(), b.clone(), c.clone()], r));
                    break 'search;
                }
            }
        }
    }
    let (keys, blocks, residual_offsets) = match found {
        Some((keys, r)) => {
            let top: Multi = keys.iter().fold(Multi::from_elem(0, kernel.n()), |acc, g| {
                acc.iter().zip(&g.key.idx).map(|(x, y)| x + y).collect()
            });
            let offsets = r
                .terms()
                .map(|(g, _)| top.iter().zip(&g.key.idx).map(|(t, i)| t.saturating_sub(*i)).collect())
                .collect();
            (Some(keys.clone()), blocks_used(&keys), offsets)
        }
        None => (None, Vec::new(), Vec::new()),
    };
    JacobiFailure { trial, u, v, w, residual, keys, blocks, residual_offsets }
}

fn blocks_used(keys: &[GradedKey; 3]) -> Vec<&'static str> {
    let name = |a: Parity, b: Parity| match (a, b) {
        (Parity::Even, Parity::Even) => "even_even",
        (Parity::Odd, Parity::Odd) => "odd_odd",
        _ => "even_odd",
    };
    let p = [keys[0].parity, keys[1].parity, keys[2].parity];
    let mut out = Vec::new();
    for (x, y, z) in [(0, 1, 2), (1, 2, 0), (2, 0, 1)] {
        out.push(name(p[x], p[y]));
        out.push(name(p[x].sum(p[y]), p[z]));
    }
    out.sort_unstable();
    out.dedup();
    out
}
