//! Realization specs: an engine configuration, the exponent map into a
//! polynomial ring, and the operators realizing each derivation.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use blockforge_core::config::ConfigFile;
use blockforge_core::{
    AlgebraConfig, BasisKey, BracketKernel, Element, GradedKey, Parity, Rational, SuperElement, Window,
};
use serde::{Deserialize, Serialize};

use crate::error::{RealizeError, Result};
use crate::poly::{Exponent, FracLaurentPoly, Ring};
use crate::registry::Family;

/// One summand `euler * t_q ∂/∂t_q + shift * ∂/∂t_q` of a realized derivation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DerivationTerm {
    /// 0-based variable.
    pub var: usize,
    pub euler: Rational,
    pub shift: Rational,
}

impl DerivationTerm {
    pub fn euler(var: usize) -> Self {
        DerivationTerm { var, euler: Rational::one(), shift: Rational::zero() }
    }

    pub fn shift(var: usize) -> Self {
        DerivationTerm { var, euler: Rational::zero(), shift: Rational::one() }
    }
}

/// Applies a derivation table row to a polynomial.
pub fn apply_derivation(row: &[DerivationTerm], f: &FracLaurentPoly) -> FracLaurentPoly {
    let mut out = FracLaurentPoly::zero(f.vars(), f.denom());
    for t in row {
        if !t.euler.is_zero() {
            out = out + f.euler(t.var).scale(&t.euler);
        }
        if !t.shift.is_zero() {
            out = out + f.partial(t.var).scale(&t.shift);
        }
    }
    out
}

/// `E: x^(α, i) ↦ t^(Σ_j α_j g_j) · Π_p t_{v_p}^{i_p}`, linear in `α`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExponentMap {
    pub vars: usize,
    pub denom: i64,
    /// Exponent vector of each lattice generator.
    pub generators: Vec<Vec<Rational>>,
    /// Variable carrying each multi-index direction, if that direction is used.
    pub idx_vars: Vec<Option<usize>>,
}

impl ExponentMap {
    /// Exponent numerators of `E(x^key)` over the common denominator.
    pub fn exponent(&self, key: &BasisKey) -> Result<Exponent> {
        let mut exp = vec![Rational::zero(); self.vars];
        for (a, g) in key.alpha.iter().zip(&self.generators) {
            let a = Rational::from_integer(*a);
            for (x, y) in exp.iter_mut().zip(g) {
                *x += &(&a * y);
            }
        }
        for (p, i) in key.idx.iter().enumerate() {
            if *i == 0 {
                continue;
            }
            match self.idx_vars.get(p).copied().flatten() {
                Some(q) => exp[q] += &Rational::from(*i),
                None => return Err(RealizeError::Unmapped { key: key.to_string(), direction: p + 1 }),
            }
        }
        let d = Rational::from_integer(self.denom);
        exp.iter()
            .map(|x| {
                (x * &d).to_i64().ok_or_else(|| RealizeError::Denominator { key: key.to_string(), denom: self.denom })
            })
            .collect()
    }

    pub fn monomial(&self, key: &BasisKey) -> Result<FracLaurentPoly> {
        Ok(FracLaurentPoly::monomial(self.vars, self.denom, self.exponent(key)?, Rational::one()))
    }

    pub fn element(&self, u: &Element) -> Result<FracLaurentPoly> {
        let mut out = FracLaurentPoly::zero(self.vars, self.denom);
        for (k, c) in u.terms() {
            out.add_term(self.exponent(k)?, c.clone());
        }
        Ok(out)
    }

    pub fn super_element(&self, u: &SuperElement) -> Result<SuperPoly> {
        Ok(SuperPoly { even: self.element(&u.even)?, odd: self.element(&u.odd)? })
    }
}

/// A pair `f_[0] + g_[1]`; Lie realizations leave `odd` at zero.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SuperPoly {
    pub even: FracLaurentPoly,
    pub odd: FracLaurentPoly,
}

impl SuperPoly {
    pub fn zero(ring: &Ring) -> Self {
        SuperPoly { even: ring.zero(), odd: ring.zero() }
    }

    pub fn even(f: FracLaurentPoly) -> Self {
        let odd = FracLaurentPoly::zero(f.vars(), f.denom());
        SuperPoly { even: f, odd }
    }

    pub fn odd(f: FracLaurentPoly) -> Self {
        let even = FracLaurentPoly::zero(f.vars(), f.denom());
        SuperPoly { even, odd: f }
    }

    pub fn part(&self, parity: Parity) -> &FracLaurentPoly {
        match parity {
            Parity::Even => &self.even,
            Parity::Odd => &self.odd,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.even.is_zero() && self.odd.is_zero()
    }
}

impl fmt::Display for SuperPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.odd.is_zero() {
            write!(f, "{}", self.even)
        } else {
            write!(f, "({})_[0] + ({})_[1]", self.even, self.odd)
        }
    }
}

/// Integer parameters of a family; unused ones are ignored.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Params {
    #[serde(default = "one")]
    pub m: i64,
    #[serde(default = "one")]
    pub n: i64,
    #[serde(default = "one")]
    pub k: i64,
}

fn one() -> i64 {
    1
}

impl Default for Params {
    fn default() -> Self {
        Params { m: 1, n: 1, k: 1 }
    }
}

/// On-disk registry entry.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpecFile {
    pub name: String,
    pub family: String,
    #[serde(default)]
    pub params: Params,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub window: Option<Window>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
}

/// Window used when a spec file does not name one.
pub const DEFAULT_WINDOW: Window = Window { radius: 2, degree: 2 };

#[derive(Clone, Debug, Serialize)]
pub struct RealizationSpec {
    pub name: String,
    pub family: Family,
    pub params: Params,
    pub description: String,
    /// How the configuration was read off the operator formulas.
    pub note: String,
    /// Set when the implemented formula differs from its commonly printed form.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub correction: Option<String>,
    #[serde(serialize_with = "serialize_config")]
    pub config: AlgebraConfig,
    pub exponents: ExponentMap,
    /// `derivations[p]` realizes `∂_{p+1}`.
    pub derivations: Vec<Vec<DerivationTerm>>,
    pub ring: Ring,
    /// Monomials deleted by the quotient, with their parity.
    pub quotient: Vec<(Parity, Exponent)>,
    pub window: Window,
}

fn serialize_config<S: serde::Serializer>(cfg: &AlgebraConfig, s: S) -> std::result::Result<S::Ok, S::Error> {
    cfg.to_file().serialize(s)
}

impl RealizationSpec {
    pub fn from_file(file: &SpecFile) -> Result<Self> {
        let family = Family::from_name(&file.family)?;
        let mut spec = family.build(file.params)?;
        spec.name = file.name.clone();
        if let Some(w) = file.window {
            spec.window = w;
        }
        if let Some(d) = &file.description {
            spec.description = d.clone();
        }
        Ok(spec)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: SpecFile = serde_json::from_str(text)?;
        Self::from_file(&file)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|source| RealizeError::Io { path: path.display().to_string(), source })?;
        Self::from_json(&text)
    }

    pub fn kernel(&self) -> BracketKernel {
        BracketKernel::new(self.config.clone())
    }

    pub fn is_super(&self) -> bool {
        self.config.is_super()
    }

    /// Window keys that name elements of the realized space: excluded
    /// monomials and quotient keys are left out.
    pub fn sample_keys(&self, kernel: &BracketKernel) -> Result<Vec<GradedKey>> {
        let quotient = kernel.quotient_keys();
        let mut out = Vec::new();
        for g in kernel.window_keys(&self.window) {
            if quotient.contains(&g) || self.ring.excluded.contains(&self.exponents.exponent(&g.key)?) {
                continue;
            }
            out.push(g);
        }
        Ok(out)
    }

    /// Rejects maps that send two window keys of the same parity to one
    /// monomial.
    pub fn check_injective(&self, kernel: &BracketKernel) -> Result<()> {
        let mut seen: BTreeMap<(Parity, Exponent), BasisKey> = BTreeMap::new();
        for g in kernel.window_keys(&self.window) {
            let e = self.exponents.exponent(&g.key)?;
            if let Some(prev) = seen.insert((g.parity, e.clone()), g.key.clone()) {
                let f = FracLaurentPoly::zero(self.exponents.vars, self.exponents.denom);
                return Err(RealizeError::NotInjective {
                    first: prev.to_string(),
                    second: g.key.to_string(),
                    monomial: f.monomial_string(&e),
                });
            }
        }
        Ok(())
    }

    /// The spec's quotient must be the image of the engine's verified
    /// central keys.
    pub fn check_quotient(&self, kernel: &BracketKernel) -> Result<()> {
        let mut engine = Vec::new();
        for g in kernel.quotient_keys() {
            engine.push((g.parity, self.exponents.exponent(&g.key)?));
        }
        let mut spec = self.quotient.clone();
        engine.sort();
        spec.sort();
        if engine == spec {
            return Ok(());
        }
        let f = FracLaurentPoly::zero(self.exponents.vars, self.exponents.denom);
        let show =
            |xs: &[(Parity, Exponent)]| xs.iter().map(|(p, e)| format!("{:?} {}", p, f.monomial_string(e))).collect();
        Err(RealizeError::QuotientMismatch { spec: show(&spec), engine: show(&engine) })
    }

    /// Deletes the quotient monomials.
    pub fn project(&self, u: &SuperPoly) -> SuperPoly {
        let mut out = u.clone();
        for (p, e) in &self.quotient {
            match p {
                Parity::Even => out.even = out.even.without(e),
                Parity::Odd => out.odd = out.odd.without(e),
            }
        }
        out
    }

    /// The realized operator for `∂_{p+1}` applied to `f`.
    pub fn derivation(&self, p: usize, f: &FracLaurentPoly) -> FracLaurentPoly {
        apply_derivation(&self.derivations[p], f)
    }
}

/// Evaluates the family's bracket formula on `f` and `g`, then applies the
/// quotient.
pub fn realized_bracket(spec: &RealizationSpec, f: &SuperPoly, g: &SuperPoly) -> Result<SuperPoly> {
    for part in [&f.even, &f.odd, &g.even, &g.odd] {
        spec.ring.check(part)?;
    }
    let raw = spec.family.bracket(spec, f, g)?;
    spec.ring.check(&raw.even)?;
    spec.ring.check(&raw.odd)?;
    Ok(spec.project(&raw))
}

/// A config file record for a spec's engine configuration, handy for
/// writing it to disk.
pub fn config_file(spec: &RealizationSpec) -> ConfigFile {
    let mut file = spec.config.to_file();
    file.name = Some(spec.name.clone());
    file.description = Some(spec.description.clone());
    file
}
