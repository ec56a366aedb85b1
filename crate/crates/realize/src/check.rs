//! Dual-path agreement between the engine and a realization.

use blockforge_core::random::{rng_from_seed, RNG_ALGORITHM};
use blockforge_core::{BracketKernel, GradedKey, Parity, Rational, SuperElement, Window};
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::Result;
use crate::poly::FracLaurentPoly;
use crate::spec::{realized_bracket, RealizationSpec, SuperPoly};

/// One coefficient on which the two paths differ.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TermDiff {
    pub parity: Parity,
    pub monomial: String,
    pub engine: Rational,
    pub realized: Rational,
}

#[derive(Clone, Debug, Serialize)]
pub struct Mismatch {
    pub trial: usize,
    pub u: GradedKey,
    pub v: GradedKey,
    pub engine: SuperPoly,
    pub realized: SuperPoly,
    pub diff: Vec<TermDiff>,
    /// Set when the realized side could not be evaluated at all.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CrossCheckReport {
    pub spec: String,
    pub family: String,
    pub window: Window,
    pub trials: usize,
    pub seed: u64,
    pub rng: &'static str,
    pub sample_keys: usize,
    pub mismatches: usize,
    pub first_mismatch: Option<Mismatch>,
}

impl CrossCheckReport {
    pub fn passed(&self) -> bool {
        self.mismatches == 0
    }
}

/// Every coefficient where `a` and `b` differ, even part first.
pub fn diff(a: &SuperPoly, b: &SuperPoly) -> Vec<TermDiff> {
    let mut out = Vec::new();
    for parity in [Parity::Even, Parity::Odd] {
        let (x, y) = (a.part(parity), b.part(parity));
        let mut exps: Vec<_> = x.terms().map(|(e, _)| e.clone()).chain(y.terms().map(|(e, _)| e.clone())).collect();
        exps.sort();
        exps.dedup();
        for e in exps {
            let (cx, cy) = (x.coeff(&e), y.coeff(&e));
            if cx != cy {
                out.push(TermDiff { parity, monomial: x.monomial_string(&e), engine: cx, realized: cy });
            }
        }
    }
    out
}

/// Both sides of one pair, after the quotient.
pub fn both_paths(
    spec: &RealizationSpec,
    kernel: &BracketKernel,
    u: &GradedKey,
    v: &GradedKey,
) -> Result<(SuperPoly, Result<SuperPoly>)> {
    let engine = kernel.quotient_project(&kernel.bracket_keys(u, v), kernel.quotient_keys())?;
    let engine = spec.exponents.super_element(&engine)?;
    let image = |g: &GradedKey| -> Result<SuperPoly> {
        let m = spec.exponents.monomial(&g.key)?;
        Ok(match g.parity {
            Parity::Even => SuperPoly::even(m),
            Parity::Odd => SuperPoly::odd(m),
        })
    };
    let realized = realized_bracket(spec, &image(u)?, &image(v)?);
    Ok((engine, realized))
}

/// Compares `E([u, v])` with the realized bracket of `E(u)` and `E(v)` on
/// `trials` random pairs of window keys. Pairs are drawn up front from one
/// seeded generator, so the report does not depend on thread count.
pub fn cross_check(spec: &RealizationSpec, trials: usize, seed: u64) -> Result<CrossCheckReport> {
    let kernel = spec.kernel();
    spec.check_injective(&kernel)?;
    spec.check_quotient(&kernel)?;
    let keys = spec.sample_keys(&kernel)?;
    let mut rng = rng_from_seed(seed);
    let pairs: Vec<(GradedKey, GradedKey)> = (0..trials)
        .map(|_| (keys[rng.gen_range(0..keys.len())].clone(), keys[rng.gen_range(0..keys.len())].clone()))
        .collect();
    let outcomes: Vec<Result<Option<Mismatch>>> = pairs
        .par_iter()
        .enumerate()
        .map(|(trial, (u, v))| {
            let (engine, realized) = both_paths(spec, &kernel, u, v)?;
            Ok(match realized {
                Ok(realized) if realized == engine => None,
                Ok(realized) => {
                    let diff = diff(&engine, &realized);
                    Some(Mismatch { trial, u: u.clone(), v: v.clone(), engine, realized, diff, error: None })
                }
                Err(e) => {
                    let realized = SuperPoly::even(FracLaurentPoly::zero(spec.ring.vars, spec.ring.denom));
                    Some(Mismatch {
                        trial,
                        u: u.clone(),
                        v: v.clone(),
                        engine,
                        realized,
                        diff: Vec::new(),
                        error: Some(e.to_string()),
                    })
                }
            })
        })
        .collect();
    let mut mismatches = 0;
    let mut first_mismatch = None;
    for outcome in outcomes {
        if let Some(m) = outcome? {
            mismatches += 1;
            first_mismatch.get_or_insert(m);
        }
    }
    Ok(CrossCheckReport {
        spec: spec.name.clone(),
        family: spec.family.name().into(),
        window: spec.window,
        trials,
        seed,
        rng: RNG_ALGORITHM,
        sample_keys: keys.len(),
        mismatches,
        first_mismatch,
    })
}

/// `E(u)` for an element of the algebra.
pub fn image(spec: &RealizationSpec, u: &SuperElement) -> Result<SuperPoly> {
    spec.exponents.super_element(u)
}
