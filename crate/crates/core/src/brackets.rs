//! Bracket evaluation from expanded structure constants.

pub mod composed;

use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::{Alpha, BasisKey, Element, GradedKey, Parity, SuperElement, Window};
use crate::config::{AlgebraClass, AlgebraConfig};
use crate::error::{Error, Result};
use crate::linalg::SparseVec;
use crate::rational::Rational;

/// Distinguished lattice points of a configuration. Each is `None` when
/// it does not exist in the lattice.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SpecialElements {
    /// `φ_1 = 0, φ_2 = 1` (Classes I and III).
    pub sigma1: Option<Alpha>,
    /// `φ_1 = 0, φ_2 = 2` (Classes I and III).
    pub sigma2: Option<Alpha>,
    /// `φ_1 = φ_2 = 0, φ_3 = -φ_3(α0), φ_4 = -φ_4(α0)` (Class II).
    pub sigma: Option<Alpha>,
    /// `φ_1 = φ_1(α0), φ_2 = φ_2(α0), φ_3 = -2φ_3(α0), φ_4 = -2φ_4(α0)`
    /// (Class II).
    pub rho: Option<Alpha>,
    /// `φ_1 = -φ_1(α0)/2, φ_2 = (3 - φ_2(α0))/2` (Class III).
    pub kappa: Option<Alpha>,
    /// `-α0/2` (Class III).
    pub half_neg_alpha0: Option<Alpha>,
    /// `φ = 0, φ_1 = -1` for the Block algebra.
    pub block_center: Option<Alpha>,
    /// Set when the joint kernel is nontrivial, so the defining systems
    /// have no unique solution.
    pub underdetermined: bool,
}

impl SpecialElements {
    fn compute(cfg: &AlgebraConfig) -> SpecialElements {
        let q = Rational::from_integer;
        let c = |p| cfg.phi_alpha0(p);
        let mut s = SpecialElements::default();
        let mut solve = |cons: &[(usize, Rational)]| match cfg.find_special_element(cons) {
            Ok(x) => x,
            Err(_) => {
                s.underdetermined = true;
                None
            }
        };
        let mut sigma1 = None;
        let mut sigma2 = None;
        let mut sigma = None;
        let mut rho = None;
        let mut kappa = None;
        let mut block_center = None;
        match cfg.class {
            AlgebraClass::Block0 => {
                if !cfg.phi.is_zero_row(0) {
                    block_center = solve(&[(0, q(0)), (1, q(-1))]);
                }
            }
            AlgebraClass::ClassI | AlgebraClass::ClassIII => {
                sigma1 = solve(&[(0, q(0)), (1, q(1))]);
                sigma2 = solve(&[(0, q(0)), (1, q(2))]);
                if cfg.class == AlgebraClass::ClassIII {
                    let half = Rational::new(1, 2);
                    kappa = solve(&[(0, -&(&c(0) * &half)), (1, &(&q(3) - &c(1)) * &half)]);
                }
            }
            AlgebraClass::ClassII => {
                sigma = solve(&[(0, q(0)), (1, q(0)), (2, -c(2)), (3, -c(3))]);
                let m2 = q(-2);
                rho = solve(&[(0, c(0)), (1, c(1)), (2, &m2 * &c(2)), (3, &m2 * &c(3))]);
            }
        }
        s.sigma1 = sigma1;
        s.sigma2 = sigma2;
        s.sigma = sigma;
        s.rho = rho;
        s.kappa = kappa;
        s.block_center = block_center;
        if cfg.class == AlgebraClass::ClassIII {
            let a0 = cfg.alpha0().expect("class_iii has alpha0");
            if a0.iter().all(|x| x % 2 == 0) {
                s.half_neg_alpha0 = Some(a0.iter().map(|x| -x / 2).collect());
            }
        }
        s
    }
}

/// Matrix of `ad_u` on a window basis.
#[derive(Clone, Debug, Serialize)]
pub struct AdjointMatrix {
    pub window: Window,
    /// One column per window key, in window order: the image restricted to
    /// the window.
    pub columns: Vec<(GradedKey, SparseVec<GradedKey>)>,
    /// Columns whose image had support outside the window.
    pub truncated: Vec<GradedKey>,
}

/// A configuration together with its cached special elements and the
/// central keys verified for quotienting.
#[derive(Clone, Debug)]
pub struct BracketKernel {
    cfg: AlgebraConfig,
    specials: SpecialElements,
    central: Vec<GradedKey>,
    rejected_central: Vec<GradedKey>,
}

/// Window used to confirm centrality of predicted central keys.
const CENTRALITY_CHECK: Window = Window { radius: 2, degree: 2 };

impl BracketKernel {
    pub fn new(cfg: AlgebraConfig) -> Self {
        let specials = SpecialElements::compute(&cfg);
        let mut kernel = BracketKernel { cfg, specials, central: Vec::new(), rejected_central: Vec::new() };
        let checks = kernel.window_keys(&CENTRALITY_CHECK);
        for g in kernel.predicted_center() {
            let central = checks.iter().all(|k| kernel.bracket_keys(&g, k).is_zero());
            if central {
                kernel.central.push(g);
            } else {
                kernel.rejected_central.push(g);
            }
        }
        kernel
    }

    pub fn config(&self) -> &AlgebraConfig {
        &self.cfg
    }

    pub fn class(&self) -> AlgebraClass {
        self.cfg.class
    }

    pub fn specials(&self) -> &SpecialElements {
        &self.specials
    }

    pub fn has_odd(&self) -> bool {
        self.cfg.is_super()
    }

    pub fn rank(&self) -> usize {
        self.cfg.rank()
    }

    pub fn n(&self) -> usize {
        self.cfg.n()
    }

    pub fn unit_key(&self) -> BasisKey {
        BasisKey::unit(self.rank(), self.n())
    }

    pub fn pure_key(&self, alpha: &[i64]) -> BasisKey {
        BasisKey::pure(alpha, self.n())
    }

    /// All graded basis keys of `window` for this algebra.
    pub fn window_keys(&self, window: &Window) -> Vec<GradedKey> {
        window.graded_keys(self.rank(), &self.cfg.profile, self.has_odd())
    }

    /// The central lines the theory predicts: `σ_1` for Class I, `σ` for
    /// Class II, `1` in the even part (ε = 0) or `x^σ_1` in the even part
    /// (ε = 1) for Class III, and `φ = 0, φ_1 = -1` for the Block algebra.
    pub fn predicted_center(&self) -> Vec<GradedKey> {
        let s = &self.specials;
        let alpha = match self.cfg.class {
            AlgebraClass::Block0 => s.block_center.clone(),
            AlgebraClass::ClassI => s.sigma1.clone(),
            AlgebraClass::ClassII => s.sigma.clone(),
            AlgebraClass::ClassIII => {
                if self.cfg.epsilon == Some(0) {
                    Some(Alpha::from_elem(0, self.rank()))
                } else {
                    s.sigma1.clone()
                }
            }
        };
        alpha.map(|a| GradedKey::even(self.pure_key(&a))).into_iter().collect()
    }

    /// Central keys confirmed by direct bracket checks; the keys a quotient
    /// may remove.
    pub fn quotient_keys(&self) -> &[GradedKey] {
        &self.central
    }

    /// Predicted central keys that failed the bracket check.
    pub fn rejected_central(&self) -> &[GradedKey] {
        &self.rejected_central
    }

    /// The odd key missing from `[even, odd]` brackets in the all-zero
    /// profile, when it exists: `-α0/2` for ε = 0 and `κ` for ε = 1.
    pub fn odd_exceptional(&self) -> Option<GradedKey> {
        if !self.has_odd() || !self.cfg.profile.all_zero() {
            return None;
        }
        let alpha = if self.cfg.epsilon == Some(0) { &self.specials.half_neg_alpha0 } else { &self.specials.kappa };
        alpha.as_ref().map(|a| GradedKey::odd(self.pure_key(a)))
    }

    /// Removes the coefficients on `keys`, each of which must be a verified
    /// central key.
    pub fn quotient_project(&self, u: &SuperElement, keys: &[GradedKey]) -> Result<SuperElement> {
        if let Some(bad) = keys.iter().find(|k| !self.central.contains(k)) {
            return Err(Error::NotCentral { key: bad.key.clone(), parity: bad.parity });
        }
        let mut out = u.clone();
        for k in keys {
            let c = out.coeff(k);
            if !c.is_zero() {
                out.add_term(k.clone(), -c);
            }
        }
        Ok(out)
    }

    fn check_element(&self, u: &Element) -> Result<()> {
        u.keys().try_for_each(|k| self.cfg.check_key(k))
    }

    fn require(&self, class: AlgebraClass) -> Result<()> {
        if self.cfg.class == class {
            Ok(())
        } else {
            Err(Error::ClassMismatch { class: self.cfg.class.name(), detail: format!("expected {class}") })
        }
    }

    /// The Lie bracket of two elements. For Class III this is the bracket of
    /// the even parts.
    pub fn bracket(&self, u: &Element, v: &Element) -> Result<Element> {
        self.check_element(u)?;
        self.check_element(v)?;
        let mut out = Element::zero();
        for (a, ca) in u.terms() {
            for (b, cb) in v.terms() {
                self.even_pair(a, b, &(ca * cb), &mut out);
            }
        }
        Ok(out)
    }

    pub fn bracket_block0(&self, u: &Element, v: &Element) -> Result<Element> {
        self.require(AlgebraClass::Block0)?;
        self.bracket(u, v)
    }

    pub fn bracket_class1(&self, u: &Element, v: &Element) -> Result<Element> {
        self.require(AlgebraClass::ClassI)?;
        self.bracket(u, v)
    }

    pub fn bracket_class2(&self, u: &Element, v: &Element) -> Result<Element> {
        self.require(AlgebraClass::ClassII)?;
        self.bracket(u, v)
    }

    /// The graded bracket. Lie classes reject nonzero odd parts.
    pub fn superbracket(&self, u: &SuperElement, v: &SuperElement) -> Result<SuperElement> {
        if !self.has_odd() && !(u.odd.is_zero() && v.odd.is_zero()) {
            return Err(Error::ClassMismatch {
                class: self.cfg.class.name(),
                detail: "odd components exist only in class_iii".into(),
            });
        }
        for part in [&u.even, &u.odd, &v.even, &v.odd] {
            self.check_element(part)?;
        }
        Ok(self.bracket_unchecked(u, v))
    }

    /// The graded bracket without key validation.
    pub fn bracket_unchecked(&self, u: &SuperElement, v: &SuperElement) -> SuperElement {
        let mut out = SuperElement::zero();
        for (a, ca) in u.terms() {
            for (b, cb) in v.terms() {
                self.graded_pair(&a, &b, &(ca * cb), &mut out);
            }
        }
        out
    }

    pub fn bracket_keys(&self, a: &GradedKey, b: &GradedKey) -> SuperElement {
        let mut out = SuperElement::zero();
        self.graded_pair(a, b, &Rational::one(), &mut out);
        out
    }

    /// Every key on which `[a, b]` can be nonzero, for keys `a`, `b` of the
    /// given parities with `a.alpha + b.alpha = alpha` and
    /// `a.idx + b.idx = idx`.
    pub fn output_support(&self, pa: Parity, pb: Parity, alpha: &[i64], idx: &[u32]) -> Vec<GradedKey> {
        let sum = BasisKey::new(alpha, idx);
        let lowerings = |base: BasisKey, p: usize, q: Option<usize>| {
            let mut out = vec![base.clone()];
            if let Some(k) = base.lowered(p) {
                out.push(k);
            }
            if let Some(q) = q {
                if let Some(k) = base.lowered(q) {
                    out.push(k.clone());
                    if let Some(k) = k.lowered(p) {
                        out.push(k);
                    }
                }
            }
            out
        };
        let keys = match (pa, pb) {
            (Parity::Odd, Parity::Odd) => {
                let a0 = self.cfg.alpha0().expect("odd keys only exist in class_iii");
                return vec![GradedKey::even(sum.shifted(a0))];
            }
            (Parity::Even, Parity::Odd) | (Parity::Odd, Parity::Even) => {
                return lowerings(sum, 0, Some(1)).into_iter().map(GradedKey::odd).collect();
            }
            (Parity::Even, Parity::Even) => match self.cfg.class {
                AlgebraClass::Block0 => vec![sum],
                AlgebraClass::ClassI | AlgebraClass::ClassIII if self.cfg.degenerate_witt => lowerings(sum, 0, None),
                AlgebraClass::ClassI | AlgebraClass::ClassIII => lowerings(sum, 0, Some(1)),
                AlgebraClass::ClassII => {
                    let a0 = self.cfg.alpha0().expect("class_ii has alpha0");
                    let mut out = lowerings(sum.shifted(a0), 0, Some(1));
                    out.extend(lowerings(sum, 2, Some(3)));
                    out
                }
            },
        };
        keys.into_iter().map(GradedKey::even).collect()
    }

    /// Adds `c [a, b]` to `out`.
    pub fn graded_pair(&self, a: &GradedKey, b: &GradedKey, c: &Rational, out: &mut SuperElement) {
        match (a.parity, b.parity) {
            (Parity::Even, Parity::Even) => self.even_pair(&a.key, &b.key, c, &mut out.even),
            (Parity::Odd, Parity::Odd) => {
                let a0 = self.cfg.alpha0().expect("odd keys only exist in class_iii");
                out.even.add_term(a.key.add(&b.key).shifted(a0), c.clone());
            }
            (Parity::Even, Parity::Odd) => self.even_odd_pair(&a.key, &b.key, c, &mut out.odd),
            (Parity::Odd, Parity::Even) => self.even_odd_pair(&b.key, &a.key, &-c, &mut out.odd),
        }
    }

    /// Adds `c [a, b]` for two even keys.
    fn even_pair(&self, a: &BasisKey, b: &BasisKey, c: &Rational, out: &mut Element) {
        let phi = &self.cfg.phi;
        let q = |x: u32| Rational::from(x);
        let sum = a.add(b);
        match self.cfg.class {
            AlgebraClass::Block0 => {
                let (fa, fb) = (phi.eval(0, &a.alpha), phi.eval(0, &b.alpha));
                let (ga, gb) = (phi.eval(1, &a.alpha), phi.eval(1, &b.alpha));
                // φ(α)φ_1(β) - φ(β)φ_1(α) + φ(α - β)
                let coeff = &(&(&fa * &gb) - &(&fb * &ga)) + &(&fa - &fb);
                push(out, Some(sum), &coeff, c);
            }
            AlgebraClass::ClassI | AlgebraClass::ClassIII => {
                let eps =
                    if self.cfg.class == AlgebraClass::ClassI { Rational::one() } else { self.cfg.epsilon_value() };
                let (f1a, f1b) = (phi.eval(0, &a.alpha), phi.eval(0, &b.alpha));
                let (i1, j1) = (q(a.idx[0]), q(b.idx[0]));
                let first = &eps * &(&f1b - &f1a);
                let lower1 = &eps * &(&j1 - &i1);
                if self.cfg.degenerate_witt {
                    push(out, Some(sum.clone()), &first, c);
                    push(out, sum.lowered(0), &lower1, c);
                    return;
                }
                let (f2a, f2b) = (phi.eval(1, &a.alpha), phi.eval(1, &b.alpha));
                let (i2, j2) = (q(a.idx[1]), q(b.idx[1]));
                let x = &(&(&f1a * &f2b) - &(&f1b * &f2a)) + &first;
                let x1 = &(&(&i1 * &f2b) - &(&j1 * &f2a)) + &lower1;
                let x2 = &(&j2 * &f1a) - &(&i2 * &f1b);
                let x12 = &(&i1 * &j2) - &(&i2 * &j1);
                push(out, sum.lowered(0).and_then(|k| k.lowered(1)), &x12, c);
                push(out, sum.lowered(0), &x1, c);
                push(out, sum.lowered(1), &x2, c);
                push(out, Some(sum), &x, c);
            }
            AlgebraClass::ClassII => {
                let a0 = self.cfg.alpha0().expect("class_ii has alpha0");
                let f = |p: usize, k: &BasisKey| phi.eval(p, &k.alpha);
                let i = |p: usize| q(a.idx[p]);
                let j = |p: usize| q(b.idx[p]);
                // First group, shifted by alpha0.
                let shifted = sum.shifted(a0);
                let (f1a, f1b, f2a, f2b) = (f(0, a), f(0, b), f(1, a), f(1, b));
                let x = &(&f1a * &f2b) - &(&f1b * &f2a);
                let x1 = &(&i(0) * &f2b) - &(&j(0) * &f2a);
                let x2 = &(&j(1) * &f1a) - &(&i(1) * &f1b);
                let x12 = &(&i(0) * &j(1)) - &(&i(1) * &j(0));
                push(out, Some(shifted.clone()), &x, c);
                push(out, shifted.lowered(0), &x1, c);
                push(out, shifted.lowered(1), &x2, c);
                push(out, shifted.lowered(0).and_then(|k| k.lowered(1)), &x12, c);
                // Second group, evaluated at alpha + alpha0 and beta + alpha0.
                let (c3, c4) = (self.cfg.phi_alpha0(2), self.cfg.phi_alpha0(3));
                let (g3a, g3b) = (&f(2, a) + &c3, &f(2, b) + &c3);
                let (g4a, g4b) = (&f(3, a) + &c4, &f(3, b) + &c4);
                let y = &(&g3a * &g4b) - &(&g3b * &g4a);
                let y3 = &(&i(2) * &g4b) - &(&j(2) * &g4a);
                let y4 = &(&j(3) * &g3a) - &(&i(3) * &g3b);
                let y34 = &(&i(2) * &j(3)) - &(&i(3) * &j(2));
                push(out, sum.lowered(2), &y3, c);
                push(out, sum.lowered(3), &y4, c);
                push(out, sum.lowered(2).and_then(|k| k.lowered(3)), &y34, c);
                push(out, Some(sum), &y, c);
            }
        }
    }

    /// Adds `c [a_even, b_odd]` to the odd accumulator.
    fn even_odd_pair(&self, a: &BasisKey, b: &BasisKey, c: &Rational, out: &mut Element) {
        let phi = &self.cfg.phi;
        let q = |x: u32| Rational::from(x);
        let half = Rational::new(1, 2);
        let eps = self.cfg.epsilon_value();
        let (c1, c2) = (self.cfg.phi_alpha0(0), self.cfg.phi_alpha0(1));
        let (f1a, f1b) = (phi.eval(0, &a.alpha), phi.eval(0, &b.alpha));
        let (f2a, f2b) = (phi.eval(1, &a.alpha), phi.eval(1, &b.alpha));
        let (i1, j1, i2, j2) = (q(a.idx[0]), q(b.idx[0]), q(a.idx[1]), q(b.idx[1]));
        let sum = a.add(b);

        let poisson = &(&f1a * &f2b) - &(&f1b * &f2a);
        let eps_part = &eps * &(&f1b + &(&(&c1 - &f1a) * &half));
        let twist = &(&(&c2 * &f1a) - &(&c1 * &f2a)) * &half;
        let x = &(&poisson + &eps_part) + &twist;

        let x1 = &(&(&(&i1 * &f2b) - &(&j1 * &f2a)) + &(&eps * &(&j1 - &(&i1 * &half)))) + &(&(&i1 * &c2) * &half);
        let x12 = &(&i1 * &j2) - &(&i2 * &j1);
        let x2 = &(&(&j2 * &f1a) - &(&i2 * &f1b)) - &(&(&i2 * &c1) * &half);

        push(out, sum.lowered(0).and_then(|k| k.lowered(1)), &x12, c);
        push(out, sum.lowered(0), &x1, c);
        push(out, sum.lowered(1), &x2, c);
        push(out, Some(sum), &x, c);
    }

    /// Matrix of `ad_u` on the basis of `window`.
    pub fn adjoint(&self, u: &SuperElement, window: &Window) -> AdjointMatrix {
        let keys = self.window_keys(window);
        let columns: Vec<(GradedKey, SparseVec<GradedKey>, bool)> = keys
            .par_iter()
            .map(|k| {
                let image = self.bracket_unchecked(u, &SuperElement::basis(k));
                let mut col = SparseVec::new();
                let mut leaked = false;
                for (g, x) in image.terms() {
                    if window.contains(&g.key) {
                        col.insert(g, x.clone());
                    } else {
                        leaked = true;
                    }
                }
                (k.clone(), col, leaked)
            })
            .collect();
        let truncated = columns.iter().filter(|c| c.2).map(|c| c.0.clone()).collect();
        AdjointMatrix { window: *window, columns: columns.into_iter().map(|(k, c, _)| (k, c)).collect(), truncated }
    }
}

fn push(out: &mut Element, key: Option<BasisKey>, coeff: &Rational, scale: &Rational) {
    if let Some(k) = key {
        if !coeff.is_zero() {
            out.add_term(k, coeff * scale);
        }
    }
}

/// Converts a super element to a coordinate vector.
pub fn to_vector(u: &SuperElement) -> SparseVec<GradedKey> {
    u.terms().map(|(g, c)| (g, c.clone())).collect()
}

/// Converts a coordinate vector back to a super element.
pub fn from_vector(v: &SparseVec<GradedKey>) -> SuperElement {
    let mut out = SuperElement::zero();
    for (g, c) in v {
        out.add_term(g.clone(), c.clone());
    }
    out
}
