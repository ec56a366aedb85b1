//! The shipped realization families: for each, the engine configuration it
//! corresponds to and the bracket formula written directly in polynomial
//! operations.
//!
//! Variables are numbered from 1 in this file to match the usual `t1, t2, ...`
//! notation. Every formula is transcribed term by term and never goes through
//! the derivation table, so agreement with the engine is a real check.

use std::fmt;

use blockforge_core::config::{ConfigFile, IndexKind};
use blockforge_core::{AlgebraClass, AlgebraConfig, Parity, Rational};
use serde::{Serialize, Serializer};

use crate::error::{RealizeError, Result};
use crate::poly::{FracLaurentPoly, Ring};
use crate::spec::{DerivationTerm, ExponentMap, Params, RealizationSpec, SuperPoly, DEFAULT_WINDOW};

type P = FracLaurentPoly;

macro_rules! families {
    ($($variant:ident => $name:literal,)*) => {
        /// A realization family. Parameters `m`, `n`, `k` are bound at build time.
        #[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
        pub enum Family {
            $($variant,)*
        }

        impl Family {
            pub const ALL: &'static [Family] = &[$(Family::$variant,)*];

            pub fn name(self) -> &'static str {
                match self {
                    $(Family::$variant => $name,)*
                }
            }

            pub fn from_name(name: &str) -> Result<Family> {
                match name {
                    $($name => Ok(Family::$variant),)*
                    _ => Err(RealizeError::UnknownFamily(name.to_string())),
                }
            }
        }
    };
}

families! {
    LiePlane => "lie_plane",
    LieCylinder => "lie_cylinder",
    LieCylinderModT1 => "lie_cylinder_mod_t1",
    LieCylinder3 => "lie_cylinder3",
    LieCylinder3ModT1 => "lie_cylinder3_mod_t1",
    LieTorusModT2 => "lie_torus_mod_t2",
    LieTorusModT2Alt => "lie_torus_mod_t2_alt",
    LieFractionalModT2 => "lie_fractional_mod_t2",
    ShiftedTorus4 => "shifted_torus4",
    ShiftedTorus4T5 => "shifted_torus4_t5",
    ShiftedTorus4T56 => "shifted_torus4_t56",
    ShiftedTorus4T56Alt => "shifted_torus4_t56_alt",
    ShiftedTorus4T567 => "shifted_torus4_t567",
    ShiftedTorus4T5678 => "shifted_torus4_t5678",
    SuperLine => "super_line",
    SuperVirasoro => "super_virasoro",
    SuperPlane => "super_plane",
    SuperCylinder => "super_cylinder",
    SuperCylinderAlt => "super_cylinder_alt",
    SuperCylinderMod1 => "super_cylinder_mod_1",
    SuperCylinderModT1 => "super_cylinder_mod_t1",
    SuperCylinder3 => "super_cylinder3",
    SuperCylinder3Mod1 => "super_cylinder3_mod_1",
    SuperCylinder3ModT1 => "super_cylinder3_mod_t1",
    SuperTorusMod1 => "super_torus_mod_1",
    SuperTorusModT2 => "super_torus_mod_t2",
    SuperTorus3Mod1 => "super_torus3_mod_1",
    SuperTorus3ModT1 => "super_torus3_mod_t1",
    SuperTorus3ModT2 => "super_torus3_mod_t2",
    SuperFractionalMod1 => "super_fractional_mod_1",
    SuperFractionalModT2 => "super_fractional_mod_t2",
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl Serialize for Family {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.name())
    }
}

fn r(n: i64, d: i64) -> Rational {
    Rational::new(n, d)
}

fn z(n: i64) -> Rational {
    Rational::from_integer(n)
}

/// `t_q ∂/∂t_q`, 1-based.
fn eu(q: usize) -> DerivationTerm {
    DerivationTerm::euler(q - 1)
}

/// `∂/∂t_q`, 1-based.
fn sh(q: usize) -> DerivationTerm {
    DerivationTerm::shift(q - 1)
}

use IndexKind::{Full as F, Zero as Z};

/// Everything a family fixes before naming and windowing.
struct Layout {
    class: AlgebraClass,
    phi: Vec<Vec<Rational>>,
    profile: Vec<IndexKind>,
    alpha0: Option<Vec<i64>>,
    epsilon: Option<u8>,
    witnesses: Vec<Vec<i64>>,
    /// Per variable: negative powers allowed.
    laurent: Vec<bool>,
    denom: i64,
    generators: Vec<Vec<Rational>>,
    /// 1-based variable per multi-index direction.
    idx_vars: Vec<Option<usize>>,
    derivations: Vec<Vec<DerivationTerm>>,
    excluded: Vec<Vec<Rational>>,
    quotient: Vec<(Parity, Vec<Rational>)>,
    description: String,
    note: String,
    correction: Option<&'static str>,
}

impl Layout {
    fn new(class: AlgebraClass, laurent: Vec<bool>) -> Self {
        Layout {
            class,
            phi: Vec::new(),
            profile: Vec::new(),
            alpha0: None,
            epsilon: None,
            witnesses: Vec::new(),
            laurent,
            denom: 1,
            generators: Vec::new(),
            idx_vars: Vec::new(),
            derivations: Vec::new(),
            excluded: Vec::new(),
            quotient: Vec::new(),
            description: String::new(),
            note: String::new(),
            correction: None,
        }
    }

    /// Integer unit vector exponent for variable `q` (1-based).
    fn unit(&self, q: usize) -> Vec<Rational> {
        let mut e = vec![z(0); self.laurent.len()];
        e[q - 1] = z(1);
        e
    }

    fn quotient_unit(mut self) -> Self {
        self.quotient.push((Parity::Even, vec![z(0); self.laurent.len()]));
        self
    }

    fn quotient_var(mut self, q: usize) -> Self {
        let e = self.unit(q);
        self.quotient.push((Parity::Even, e));
        self
    }

    fn text(mut self, description: &str, note: &str) -> Self {
        self.description = description.into();
        self.note = note.into();
        self
    }
}

const N: bool = false;
const L: bool = true;

fn ints(rows: &[&[i64]]) -> Vec<Vec<Rational>> {
    rows.iter().map(|row| row.iter().map(|x| z(*x)).collect()).collect()
}

fn check_positive(family: Family, what: &str, v: i64) -> Result<()> {
    if v >= 1 {
        Ok(())
    } else {
        Err(RealizeError::Parameters {
            family: family.name().into(),
            reason: format!("{what} must be positive, got {v}"),
        })
    }
}

fn check_nonzero(family: Family, what: &str, v: i64) -> Result<()> {
    if v != 0 {
        Ok(())
    } else {
        Err(RealizeError::Parameters { family: family.name().into(), reason: format!("{what} must be nonzero") })
    }
}

/// Rank-4 lattice for the shifted-torus family: coordinates `(c0, c1, c2, c3)`
/// give exponents `c0/m (1,1,1,1) + (c1, c2, c3, 0)` in `t1..t4`; further
/// variables carry multi-indices. `full` lists the directions (1-based) with
/// a degree variable, in the order the extra variables are assigned.
fn shifted_torus(m: i64, n: i64, full: &[usize]) -> Layout {
    let vars = 4 + full.len();
    let mut laurent = vec![L; 4];
    laurent.extend(std::iter::repeat(N).take(full.len()));
    let mut lay = Layout::new(AlgebraClass::ClassII, laurent);
    lay.denom = m;
    let mut g0 = vec![r(1, m); 4];
    g0.resize(vars, z(0));
    lay.generators = vec![g0, lay.unit(1), lay.unit(2), lay.unit(3)];
    lay.phi = vec![
        vec![r(1, m), z(1), z(0), z(0)],
        vec![r(1, m), z(0), z(1), z(0)],
        vec![r(1, m), z(0), z(0), z(1)],
        vec![r(1, m), z(0), z(0), z(0)],
    ];
    lay.alpha0 = Some(vec![m * n, 0, 0, 0]);
    lay.profile = vec![Z; 4];
    lay.idx_vars = vec![None; 4];
    lay.derivations = (1..=4).map(|p| vec![eu(p)]).collect();
    for (slot, &p) in full.iter().enumerate() {
        let q = 5 + slot;
        lay.profile[p - 1] = F;
        lay.idx_vars[p - 1] = Some(q);
        lay.derivations[p - 1].push(sh(q));
    }
    // One element per direction killed by the other three, then elements
    // realizing phi_p(alpha0) inside the opposite pair of kernels.
    lay.witnesses = vec![
        vec![0, 1, 0, 0],
        vec![0, 0, 1, 0],
        vec![0, 0, 0, 1],
        vec![m, -1, -1, -1],
        vec![0, n, n, 0],
        vec![0, 0, 0, n],
        vec![m * n, -n, -n, 0],
    ];
    lay.quotient.push((Parity::Even, {
        let mut e = vec![z(0); vars];
        e[2] = z(-n);
        e[3] = z(-n);
        e
    }));
    if full.is_empty() {
        let mut e = vec![z(n), z(n), z(-2 * n), z(-2 * n)];
        e.resize(vars, z(0));
        lay.excluded.push(e);
    }
    lay
}

impl Family {
    fn layout(self, p: Params) -> Result<Layout> {
        use Family::*;
        let (m, n, k) = (p.m, p.n, p.k);
        let lay = match self {
            LiePlane => {
                let mut lay = Layout::new(AlgebraClass::ClassI, vec![N, N]);
                lay.phi = vec![vec![], vec![]];
                lay.profile = vec![F, F];
                lay.idx_vars = vec![Some(1), Some(2)];
                lay.derivations = vec![vec![sh(1)], vec![sh(2)]];
                lay.text(
                    "Lie algebra on R[t1,t2]",
                    "Trivial lattice, both directions full: d1 = d/dt1, d2 = d/dt2, x^(0,(i,j)) = t1^i t2^j.",
                )
            }
            LieCylinder => {
                let mut lay = Layout::new(AlgebraClass::ClassI, vec![L, N]);
                lay.phi = ints(&[&[1], &[0]]);
                lay.profile = vec![Z, F];
                lay.generators = vec![lay.unit(1)];
                lay.idx_vars = vec![None, Some(2)];
                lay.derivations = vec![vec![eu(1)], vec![sh(2)]];
                lay.text(
                    "Lie algebra on R[t1,t2,1/t1]",
                    "d1 = t1 d/dt1 reads off phi_1 = (1); d2 = d/dt2 is a pure degree direction with phi_2 = 0.",
                )
            }
            LieCylinderModT1 => {
                let mut lay = Layout::new(AlgebraClass::ClassI, vec![L, N]);
                lay.phi = ints(&[&[0], &[1]]);
                lay.profile = vec![F, Z];
                lay.generators = vec![lay.unit(1)];
                lay.idx_vars = vec![Some(2), None];
                lay.derivations = vec![vec![sh(2)], vec![eu(1)]];
                lay.quotient_var(1).text(
                    "Lie algebra on R[t1,t2,1/t1] modulo t1",
                    "The roles swap: d1 = d/dt2, d2 = t1 d/dt1, so sigma_1 = 1 and the central line is t1.",
                )
            }
            LieCylinder3 => {
                let mut lay = Layout::new(AlgebraClass::ClassI, vec![L, N, N]);
                lay.phi = ints(&[&[1], &[0]]);
                lay.profile = vec![F, F];
                lay.generators = vec![lay.unit(1)];
                lay.idx_vars = vec![Some(3), Some(2)];
                lay.derivations = vec![vec![eu(1), sh(3)], vec![sh(2)]];
                lay.text(
                    "Lie algebra on R[t1,t2,t3,1/t1]",
                    "d1 = t1 d/dt1 + d/dt3 with its degree variable t3; d2 = d/dt2.",
                )
            }
            LieCylinder3ModT1 => {
                let mut lay = Layout::new(AlgebraClass::ClassI, vec![L, N, N]);
                lay.phi = ints(&[&[0], &[1]]);
                lay.profile = vec![F, F];
                lay.generators = vec![lay.unit(1)];
                lay.idx_vars = vec![Some(2), Some(3)];
                lay.derivations = vec![vec![sh(2)], vec![eu(1), sh(3)]];
                lay.quotient_var(1).text(
                    "Lie algebra on R[t1,t2,t3,1/t1] modulo t1",
                    "d1 = d/dt2, d2 = t1 d/dt1 + d/dt3; sigma_1 = 1 maps to t1.",
                )
            }
            LieTorusModT2 => {
                let mut lay = Layout::new(AlgebraClass::ClassI, vec![L, L, N]);
                lay.phi = ints(&[&[1, 0], &[0, 1]]);
                lay.profile = vec![F, Z];
                lay.generators = vec![lay.unit(1), lay.unit(2)];
                lay.idx_vars = vec![Some(3), None];
                lay.derivations = vec![vec![eu(1), sh(3)], vec![eu(2)]];
                lay.quotient_var(2).text(
                    "Lie algebra on R[t1,t2,t3,1/t1,1/t2] modulo t2, first direction full",
                    "d1 = t1 d/dt1 + d/dt3, d2 = t2 d/dt2; sigma_1 = (0,1) maps to t2.",
                )
            }
            LieTorusModT2Alt => {
                let mut lay = Layout::new(AlgebraClass::ClassI, vec![L, L, N]);
                lay.phi = ints(&[&[1, 0], &[0, 1]]);
                lay.profile = vec![Z, F];
                lay.generators = vec![lay.unit(1), lay.unit(2)];
                lay.idx_vars = vec![None, Some(3)];
                lay.derivations = vec![vec![eu(1)], vec![eu(2), sh(3)]];
                lay.quotient_var(2).text(
                    "Lie algebra on R[t1,t2,t3,1/t1,1/t2] modulo t2, second direction full",
                    "d1 = t1 d/dt1, d2 = t2 d/dt2 + d/dt3; sigma_1 = (0,1) maps to t2.",
                )
            }
            LieFractionalModT2 => {
                check_positive(self, "m", m)?;
                let mut lay = Layout::new(AlgebraClass::ClassI, vec![L, L, N, N]);
                lay.denom = m;
                lay.phi = vec![vec![r(1, m), z(1)], vec![r(1, m), z(0)]];
                lay.profile = vec![F, F];
                lay.generators = vec![vec![r(1, m), r(1, m), z(0), z(0)], lay.unit(1)];
                lay.idx_vars = vec![Some(3), Some(4)];
                lay.derivations = vec![vec![eu(1), sh(3)], vec![eu(2), sh(4)]];
                lay.correction = Some(
                    "The first factor is (t2 g_t2 + g_t4 - g). With - g_t4 in its place the formula is not antisymmetric.",
                );
                lay.quotient_var(2).text(
                    "Lie algebra on the ring generated by t1,t2,t3,t4,(t1t2)^(1/m),1/t1,1/t2, modulo t2",
                    "Lattice generators (t1t2)^(1/m) and t1 give phi_1 = (1/m, 1), phi_2 = (1/m, 0); \
                     d1 = t1 d/dt1 + d/dt3, d2 = t2 d/dt2 + d/dt4; sigma_1 = (m,-1) maps to t2.",
                )
            }
            ShiftedTorus4 | ShiftedTorus4T5 | ShiftedTorus4T56 | ShiftedTorus4T56Alt | ShiftedTorus4T567
            | ShiftedTorus4T5678 => {
                check_positive(self, "m", m)?;
                check_nonzero(self, "n", n)?;
                let full: &[usize] = match self {
                    ShiftedTorus4 => &[],
                    ShiftedTorus4T5 => &[3],
                    ShiftedTorus4T56 => &[3, 4],
                    ShiftedTorus4T56Alt => &[1, 3],
                    ShiftedTorus4T567 => &[1, 3, 4],
                    _ => &[1, 2, 3, 4],
                };
                let lay = shifted_torus(m, n, full);
                let described = match self {
                    ShiftedTorus4 => "without degree variables, the monomial (t1t2)^n (t3t4)^(-2n) excluded",
                    ShiftedTorus4T5 => "with t5 carrying the third direction",
                    ShiftedTorus4T56 => "with t5, t6 carrying the third and fourth directions",
                    ShiftedTorus4T56Alt => "with t5, t6 carrying the first and third directions",
                    ShiftedTorus4T567 => "with t5, t6, t7 carrying the first, third and fourth directions",
                    _ => "with t5..t8 carrying all four directions",
                };
                lay.text(
                    &format!("Lie algebra on Laurent polynomials in (t1t2t3t4)^(1/m), t1..t4, {described}, modulo (t3t4)^(-n)"),
                    "d_p = t_p d/dt_p (plus d/dt_q for a degree variable) gives phi_p = p-th exponent; \
                     matching the leading factor (t1t2t3t4)^n gives alpha0 = (n,n,n,n); \
                     sigma = (0,0,-n,-n) and rho = (n,n,-2n,-2n).",
                )
            }
            SuperLine => {
                let mut lay = Layout::new(AlgebraClass::ClassIII, vec![N]);
                lay.phi = vec![vec![], vec![]];
                lay.profile = vec![F, Z];
                lay.alpha0 = Some(vec![]);
                lay.epsilon = Some(1);
                lay.idx_vars = vec![Some(1), None];
                lay.derivations = vec![vec![sh(1)], vec![]];
                lay.text(
                    "Superalgebra on R[t] x R[t]",
                    "d1 = d/dt, d2 = 0, epsilon = 1, odd-odd bracket fg gives alpha0 = 0.",
                )
            }
            SuperVirasoro => {
                let mut lay = Layout::new(AlgebraClass::ClassIII, vec![L]);
                lay.phi = ints(&[&[1], &[0]]);
                lay.profile = vec![Z, Z];
                lay.alpha0 = Some(vec![1]);
                lay.epsilon = Some(1);
                lay.generators = vec![lay.unit(1)];
                lay.idx_vars = vec![None, None];
                lay.derivations = vec![vec![eu(1)], vec![]];
                lay.text(
                    "Centerless super Virasoro algebra on R[t,1/t] x R[t,1/t]",
                    "d1 = t d/dt, d2 = 0, epsilon = 1; the odd-odd bracket t f g gives alpha0 = 1.",
                )
            }
            SuperPlane => {
                let mut lay = Layout::new(AlgebraClass::ClassIII, vec![N, N]);
                lay.phi = vec![vec![], vec![]];
                lay.profile = vec![F, F];
                lay.alpha0 = Some(vec![]);
                lay.epsilon = Some(1);
                lay.idx_vars = vec![Some(1), Some(2)];
                lay.derivations = vec![vec![sh(1)], vec![sh(2)]];
                lay.text(
                    "Superalgebra on R[t1,t2] x R[t1,t2]",
                    "d1 = d/dt1, d2 = d/dt2, epsilon = 1, alpha0 = 0. The ring is polynomial in t1: \
                     a negative power of t1 would not be closed under d/dt1 with a degree index.",
                )
            }
            SuperCylinder => {
                let mut lay = Layout::new(AlgebraClass::ClassIII, vec![L, N]);
                lay.phi = ints(&[&[1], &[0]]);
                lay.profile = vec![F, Z];
                lay.alpha0 = Some(vec![n]);
                lay.epsilon = Some(1);
                lay.generators = vec![lay.unit(1)];
                lay.idx_vars = vec![Some(2), None];
                lay.derivations = vec![vec![eu(1), sh(2)], vec![]];
                lay.text(
                    "Superalgebra on R[t1,t2,1/t1] x R[t1,t2,1/t1], d2 = 0",
                    "d1 = t1 d/dt1 + d/dt2, d2 = 0, epsilon = 1; the odd-odd factor t1^n gives alpha0 = n.",
                )
            }
            SuperCylinderAlt | SuperCylinderMod1 => {
                let mut lay = Layout::new(AlgebraClass::ClassIII, vec![L, N]);
                lay.phi = ints(&[&[1], &[0]]);
                lay.profile = vec![Z, F];
                lay.alpha0 = Some(vec![n]);
                lay.generators = vec![lay.unit(1)];
                lay.idx_vars = vec![None, Some(2)];
                lay.derivations = vec![vec![eu(1)], vec![sh(2)]];
                let note = "d1 = t1 d/dt1, d2 = d/dt2; the odd-odd factor t1^n gives alpha0 = n.";
                if self == SuperCylinderAlt {
                    lay.epsilon = Some(1);
                    lay.text("Superalgebra on R[t1,t2,1/t1] x R[t1,t2,1/t1], epsilon = 1", note)
                } else {
                    lay.epsilon = Some(0);
                    lay.quotient_unit().text("Superalgebra on R[t1,t2,1/t1] x R[t1,t2,1/t1] modulo 1_[0]", note)
                }
            }
            SuperCylinderModT1 => {
                let mut lay = Layout::new(AlgebraClass::ClassIII, vec![L, N]);
                lay.phi = ints(&[&[0], &[1]]);
                lay.profile = vec![F, Z];
                lay.alpha0 = Some(vec![n]);
                lay.epsilon = Some(1);
                lay.generators = vec![lay.unit(1)];
                lay.idx_vars = vec![Some(2), None];
                lay.derivations = vec![vec![sh(2)], vec![eu(1)]];
                lay.quotient_var(1).text(
                    "Superalgebra on R[t1,t2,1/t1] x R[t1,t2,1/t1] modulo (t1)_[0]",
                    "d1 = d/dt2, d2 = t1 d/dt1, epsilon = 1, alpha0 = n; sigma_1 = 1 maps to t1.",
                )
            }
            SuperCylinder3 | SuperCylinder3Mod1 => {
                let mut lay = Layout::new(AlgebraClass::ClassIII, vec![L, N, N]);
                lay.phi = ints(&[&[1], &[0]]);
                lay.profile = vec![F, F];
                lay.alpha0 = Some(vec![n]);
                lay.generators = vec![lay.unit(1)];
                lay.idx_vars = vec![Some(3), Some(2)];
                lay.derivations = vec![vec![eu(1), sh(3)], vec![sh(2)]];
                let note = "d1 = t1 d/dt1 + d/dt3, d2 = d/dt2; the odd-odd factor t1^n gives alpha0 = n.";
                if self == SuperCylinder3 {
                    lay.epsilon = Some(1);
                    lay.text("Superalgebra on R[t1,t2,t3,1/t1] x R[t1,t2,t3,1/t1]", note)
                } else {
                    lay.epsilon = Some(0);
                    lay.quotient_unit().text("Superalgebra on R[t1,t2,t3,1/t1] x R[t1,t2,t3,1/t1] modulo 1_[0]", note)
                }
            }
            SuperCylinder3ModT1 => {
                let mut lay = Layout::new(AlgebraClass::ClassIII, vec![L, N, N]);
                lay.phi = ints(&[&[0], &[1]]);
                lay.profile = vec![F, F];
                lay.alpha0 = Some(vec![n]);
                lay.epsilon = Some(1);
                lay.generators = vec![lay.unit(1)];
                lay.idx_vars = vec![Some(2), Some(3)];
                lay.derivations = vec![vec![sh(2)], vec![eu(1), sh(3)]];
                lay.quotient_var(1).text(
                    "Superalgebra on R[t1,t2,t3,1/t1] x R[t1,t2,t3,1/t1] modulo (t1)_[0]",
                    "d1 = d/dt2, d2 = t1 d/dt1 + d/dt3, epsilon = 1, alpha0 = n; sigma_1 = 1 maps to t1. \
                     The ring must contain t3, which carries the second direction.",
                )
            }
            SuperTorusMod1 | SuperTorusModT2 => {
                let mut lay = Layout::new(AlgebraClass::ClassIII, vec![L, L]);
                lay.phi = ints(&[&[1, 0], &[0, 1]]);
                lay.profile = vec![Z, Z];
                lay.alpha0 = Some(vec![1, 1]);
                lay.generators = vec![lay.unit(1), lay.unit(2)];
                lay.idx_vars = vec![None, None];
                lay.derivations = vec![vec![eu(1)], vec![eu(2)]];
                let note = "d1 = t1 d/dt1, d2 = t2 d/dt2; the odd-odd factor t1t2 gives alpha0 = (1,1).";
                if self == SuperTorusMod1 {
                    lay.epsilon = Some(0);
                    lay.quotient_unit().text("Superalgebra on R[t1,t2,1/t1,1/t2]^2 modulo 1_[0]", note)
                } else {
                    lay.epsilon = Some(1);
                    lay.quotient_var(2).text("Superalgebra on R[t1,t2,1/t1,1/t2]^2 modulo (t2)_[0]", note)
                }
            }
            SuperTorus3Mod1 | SuperTorus3ModT2 => {
                let mut lay = Layout::new(AlgebraClass::ClassIII, vec![L, L, N]);
                lay.phi = ints(&[&[1, 0], &[0, 1]]);
                lay.profile = vec![F, Z];
                lay.alpha0 = Some(vec![m, n]);
                lay.generators = vec![lay.unit(1), lay.unit(2)];
                lay.idx_vars = vec![Some(3), None];
                lay.derivations = vec![vec![eu(1), sh(3)], vec![eu(2)]];
                let note = "d1 = t1 d/dt1 + d/dt3, d2 = t2 d/dt2; the odd-odd factor t1^m t2^n gives alpha0 = (m,n).";
                if self == SuperTorus3Mod1 {
                    lay.epsilon = Some(0);
                    lay.quotient_unit().text("Superalgebra on R[t1,t2,t3,1/t1,1/t2]^2 modulo 1_[0]", note)
                } else {
                    lay.epsilon = Some(1);
                    lay.quotient_var(2).text("Superalgebra on R[t1,t2,t3,1/t1,1/t2]^2 modulo (t2)_[0]", note)
                }
            }
            SuperTorus3ModT1 => {
                let mut lay = Layout::new(AlgebraClass::ClassIII, vec![L, L, N]);
                lay.phi = ints(&[&[0, 1], &[1, 0]]);
                lay.profile = vec![Z, F];
                lay.alpha0 = Some(vec![m, n]);
                lay.epsilon = Some(1);
                lay.generators = vec![lay.unit(1), lay.unit(2)];
                lay.idx_vars = vec![None, Some(3)];
                lay.derivations = vec![vec![eu(2)], vec![eu(1), sh(3)]];
                lay.quotient_var(1).text(
                    "Superalgebra on R[t1,t2,t3,1/t1,1/t2]^2 modulo (t1)_[0]",
                    "d1 = t2 d/dt2, d2 = t1 d/dt1 + d/dt3, epsilon = 1, alpha0 = (m,n); sigma_1 = (1,0) maps to t1.",
                )
            }
            SuperFractionalMod1 | SuperFractionalModT2 => {
                check_positive(self, "k", k)?;
                let mut lay = Layout::new(AlgebraClass::ClassIII, vec![L, L, N, N]);
                lay.denom = k;
                lay.phi = vec![vec![r(1, k), z(1)], vec![r(1, k), z(0)]];
                lay.profile = vec![F, F];
                lay.alpha0 = Some(vec![k * n, m - n]);
                lay.generators = vec![vec![r(1, k), r(1, k), z(0), z(0)], lay.unit(1)];
                lay.idx_vars = vec![Some(3), Some(4)];
                lay.derivations = vec![vec![eu(1), sh(3)], vec![eu(2), sh(4)]];
                let note = "Lattice generators (t1t2)^(1/k) and t1 give phi_1 = (1/k, 1), phi_2 = (1/k, 0); \
                            d1 = t1 d/dt1 + d/dt3, d2 = t2 d/dt2 + d/dt4; t1^m t2^n gives alpha0 = (kn, m-n).";
                if self == SuperFractionalMod1 {
                    lay.epsilon = Some(0);
                    lay.correction = Some(
                        "The even-odd bracket uses (t1 g_t1 + g_t3 + m g/2) in its last factor; \
                         without g_t3 it disagrees with the even-even bracket's operators.",
                    );
                    lay.quotient_unit().text(
                        "Superalgebra on A x A modulo 1_[0], A generated by t1,t2,t3,t4,(t1t2)^(1/k),1/t1,1/t2",
                        note,
                    )
                } else {
                    lay.epsilon = Some(1);
                    lay.quotient_var(2).text(
                        "Superalgebra on A x A modulo (t2)_[0], A generated by t1,t2,t3,t4,(t1t2)^(1/k),1/t1,1/t2",
                        note,
                    )
                }
            }
        };
        Ok(lay)
    }

    /// Builds the spec for these parameters, with the default window.
    pub fn build(self, params: Params) -> Result<RealizationSpec> {
        let lay = self.layout(params)?;
        let file = ConfigFile {
            name: Some(self.name().into()),
            description: Some(lay.description.clone()),
            class: lay.class,
            rank: lay.generators.len(),
            phi: lay.phi,
            profile: lay.profile,
            alpha0: lay.alpha0,
            epsilon: lay.epsilon,
            witnesses: lay.witnesses,
            degenerate_witt: false,
        };
        let config = AlgebraConfig::from_file(file)?;
        let d = Rational::from_integer(lay.denom);
        let numerators = |e: &[Rational]| -> Vec<i64> {
            e.iter().map(|x| (x * &d).to_i64().expect("exponent fits the denominator")).collect()
        };
        let mut ring = Ring::new(lay.laurent.clone(), lay.denom);
        ring.excluded = lay.excluded.iter().map(|e| numerators(e)).collect();
        Ok(RealizationSpec {
            name: self.name().into(),
            family: self,
            params,
            description: lay.description,
            note: lay.note,
            correction: lay.correction.map(str::to_string),
            config,
            exponents: ExponentMap {
                vars: lay.laurent.len(),
                denom: lay.denom,
                generators: lay.generators,
                idx_vars: lay.idx_vars.iter().map(|q| q.map(|q| q - 1)).collect(),
            },
            derivations: lay.derivations,
            ring,
            quotient: lay.quotient.iter().map(|(p, e)| (*p, numerators(e))).collect(),
            window: DEFAULT_WINDOW,
        })
    }

    pub fn is_super(self) -> bool {
        self.name().starts_with("super_")
    }

    /// The bracket of two (possibly inhomogeneous) elements, without the
    /// quotient.
    pub fn bracket(self, spec: &RealizationSpec, f: &SuperPoly, g: &SuperPoly) -> Result<SuperPoly> {
        let cx = Cx::new(&spec.ring, spec.params);
        let ee = self.even_even(&cx, &f.even, &g.even);
        if !self.is_super() {
            if !(f.odd.is_zero() && g.odd.is_zero()) {
                return Err(RealizeError::Parameters {
                    family: self.name().into(),
                    reason: "odd components exist only in superalgebra realizations".into(),
                });
            }
            return Ok(SuperPoly::even(ee));
        }
        let even = ee + self.odd_odd(&cx, &f.odd, &g.odd);
        let odd = self.even_odd(&cx, &f.even, &g.odd) - self.even_odd(&cx, &g.even, &f.odd);
        Ok(SuperPoly { even, odd })
    }
}

/// Formula helpers; variable numbers are 1-based.
struct Cx<'a> {
    ring: &'a Ring,
    m: Rational,
    n: Rational,
    mi: i64,
    ni: i64,
}

impl<'a> Cx<'a> {
    fn new(ring: &'a Ring, p: Params) -> Self {
        Cx { ring, m: z(p.m), n: z(p.n), mi: p.m, ni: p.n }
    }

    /// `f_{t_q}`.
    fn d(&self, f: &P, q: usize) -> P {
        f.partial(q - 1)
    }

    fn t(&self, q: usize) -> P {
        self.ring.var(q - 1)
    }

    fn pow(&self, exps: &[i64]) -> P {
        let mut e = exps.to_vec();
        e.resize(self.ring.vars, 0);
        self.ring.power(&e)
    }

    fn half(&self, f: &P) -> P {
        f.scale(&r(1, 2))
    }

    fn n(&self, f: &P) -> P {
        f.scale(&self.n)
    }

    fn m(&self, f: &P) -> P {
        f.scale(&self.m)
    }
}

impl Family {
    fn even_even(self, cx: &Cx<'_>, f: &P, g: &P) -> P {
        use Family::*;
        let (d, t) = (|f: &P, q| cx.d(f, q), |q| cx.t(q));
        match self {
            LiePlane | SuperPlane => d(f, 1) * (d(g, 2) - g) + (f - d(f, 2)) * d(g, 1),
            LieCylinder => t(1) * (d(f, 1) * (d(g, 2) - g) + (f - d(f, 2)) * d(g, 1)),
            LieCylinderModT1 | SuperCylinderModT1 => d(f, 2) * (t(1) * d(g, 1) - g) + (f - t(1) * d(f, 1)) * d(g, 2),
            LieCylinder3 | SuperCylinder3 => {
                (t(1) * d(f, 1) + d(f, 3)) * (d(g, 2) - g) + (f - d(f, 2)) * (t(1) * d(g, 1) + d(g, 3))
            }
            LieCylinder3ModT1 | SuperCylinder3ModT1 => {
                d(f, 2) * (t(1) * d(g, 1) + d(g, 3) - g) + (f - t(1) * d(f, 1) - d(f, 3)) * d(g, 2)
            }
            LieTorusModT2 | SuperTorus3ModT2 => {
                (t(1) * d(f, 1) + d(f, 3)) * (t(2) * d(g, 2) - g) + (f - t(2) * d(f, 2)) * (t(1) * d(g, 1) + d(g, 3))
            }
            LieTorusModT2Alt => {
                t(1) * (d(f, 1) * (t(2) * d(g, 2) + d(g, 3) - g) + (f - t(2) * d(f, 2) - d(f, 3)) * d(g, 1))
            }
            LieFractionalModT2 | SuperFractionalModT2 => {
                (t(1) * d(f, 1) + d(f, 3)) * (t(2) * d(g, 2) + d(g, 4) - g)
                    + (f - t(2) * d(f, 2) - d(f, 4)) * (t(1) * d(g, 1) + d(g, 3))
            }
            ShiftedTorus4 | ShiftedTorus4T5 | ShiftedTorus4T56 | ShiftedTorus4T56Alt | ShiftedTorus4T567
            | ShiftedTorus4T5678 => self.shifted_torus(cx, f, g),
            SuperLine => f * d(g, 1) - d(f, 1) * g,
            SuperVirasoro => t(1) * f * d(g, 1) - t(1) * d(f, 1) * g,
            SuperCylinder => (t(1) * d(g, 1) + d(g, 2)) * f - (t(1) * d(f, 1) + d(f, 2)) * g,
            SuperCylinderAlt => t(1) * d(f, 1) * (d(g, 2) - g) + t(1) * (f - d(f, 2)) * d(g, 1),
            SuperCylinderMod1 => t(1) * d(f, 1) * d(g, 2) - t(1) * d(f, 2) * d(g, 1),
            SuperCylinder3Mod1 => (t(1) * d(f, 1) + d(f, 3)) * d(g, 2) - d(f, 2) * (t(1) * d(g, 1) + d(g, 3)),
            SuperTorusMod1 => t(1) * t(2) * (d(f, 1) * d(g, 2) - d(f, 2) * d(g, 1)),
            SuperTorusModT2 => t(1) * d(f, 1) * (t(2) * d(g, 2) - g) + t(1) * (f - t(2) * d(f, 2)) * d(g, 1),
            SuperTorus3Mod1 => {
                t(2) * (t(1) * d(f, 1) + d(f, 3)) * d(g, 2) - t(2) * d(f, 2) * (t(1) * d(g, 1) + d(g, 3))
            }
            SuperTorus3ModT1 => {
                t(2) * d(f, 2) * (t(1) * d(g, 1) + d(g, 3) - g) + t(2) * (f - t(1) * d(f, 1) - d(f, 3)) * d(g, 2)
            }
            SuperFractionalMod1 => {
                (t(1) * d(f, 1) + d(f, 3)) * (t(2) * d(g, 2) + d(g, 4))
                    - (t(2) * d(f, 2) + d(f, 4)) * (t(1) * d(g, 1) + d(g, 3))
            }
        }
    }

    fn shifted_torus(self, cx: &Cx<'_>, f: &P, g: &P) -> P {
        use Family::*;
        let (d, t) = (|f: &P, q| cx.d(f, q), |q| cx.t(q));
        let nn = cx.ni;
        let lead = cx.pow(&[nn, nn, nn, nn]);
        let first = match self {
            ShiftedTorus4 | ShiftedTorus4T5 | ShiftedTorus4T56 => {
                t(1) * t(2) * lead * (d(f, 1) * d(g, 2) - d(f, 2) * d(g, 1))
            }
            ShiftedTorus4T56Alt | ShiftedTorus4T567 => {
                t(2) * lead * ((t(1) * d(f, 1) + d(f, 5)) * d(g, 2) - d(f, 2) * (t(1) * d(g, 1) + d(g, 5)))
            }
            _ => {
                lead * ((t(1) * d(f, 1) + d(f, 5)) * (t(2) * d(g, 2) + d(g, 6))
                    - (t(2) * d(f, 2) + d(f, 6)) * (t(1) * d(g, 1) + d(g, 5)))
            }
        };
        // Degree variables attached to the third and fourth directions.
        let (x3, x4) = match self {
            ShiftedTorus4 => (None, None),
            ShiftedTorus4T5 => (Some(5), None),
            ShiftedTorus4T56 => (Some(5), Some(6)),
            ShiftedTorus4T56Alt => (Some(6), None),
            ShiftedTorus4T567 => (Some(6), Some(7)),
            _ => (Some(7), Some(8)),
        };
        let op = |h: &P, q: usize, extra: Option<usize>| match extra {
            Some(e) => t(q) * d(h, q) + d(h, e),
            None => t(q) * d(h, q),
        };
        let third = |h: &P| op(h, 3, x3);
        let fourth = |h: &P| op(h, 4, x4);
        first + (third(f) + cx.n(f)) * (fourth(g) + cx.n(g)) - (fourth(f) + cx.n(f)) * (third(g) + cx.n(g))
    }

    fn odd_odd(self, cx: &Cx<'_>, f: &P, g: &P) -> P {
        use Family::*;
        let t = |q| cx.t(q);
        let (mi, ni) = (cx.mi, cx.ni);
        match self {
            SuperLine | SuperPlane => f * g,
            SuperVirasoro => t(1) * f * g,
            SuperCylinder | SuperCylinderAlt | SuperCylinderMod1 | SuperCylinderModT1 | SuperCylinder3
            | SuperCylinder3Mod1 | SuperCylinder3ModT1 => cx.pow(&[ni]) * f * g,
            SuperTorusMod1 | SuperTorusModT2 => t(1) * t(2) * f * g,
            SuperTorus3Mod1 | SuperTorus3ModT1 | SuperTorus3ModT2 | SuperFractionalMod1 | SuperFractionalModT2 => {
                cx.pow(&[mi, ni]) * f * g
            }
            _ => cx.ring.zero(),
        }
    }

    /// `[f_[0], g_[1]]` as an odd polynomial.
    fn even_odd(self, cx: &Cx<'_>, f: &P, g: &P) -> P {
        use Family::*;
        let (d, t) = (|f: &P, q| cx.d(f, q), |q| cx.t(q));
        let h = |x: &P| cx.half(x);
        let n_half = |x: &P| cx.half(&cx.n(x));
        let m_half = |x: &P| cx.half(&cx.m(x));
        // (n - 1) g / 2 and (m - 1) g / 2
        let n1_half = |x: &P| cx.half(&(cx.n(x) - x));
        let m1_half = |x: &P| cx.half(&(cx.m(x) - x));
        match self {
            SuperLine => f * d(g, 1) - h(&(d(f, 1) * g)),
            SuperVirasoro => t(1) * f * d(g, 1) + h(&((f - t(1) * d(f, 1)) * g)),
            SuperPlane => d(f, 1) * (d(g, 2) - h(g)) + (f - d(f, 2)) * d(g, 1),
            SuperCylinder => (t(1) * d(g, 1) + d(g, 2)) * f + h(&((cx.n(f) - t(1) * d(f, 1) - d(f, 2)) * g)),
            SuperCylinderAlt => t(1) * d(f, 1) * (d(g, 2) - h(g)) + (f - d(f, 2)) * (t(1) * d(g, 1) + n_half(g)),
            SuperCylinderMod1 => t(1) * d(f, 1) * d(g, 2) - d(f, 2) * (t(1) * d(g, 1) + n_half(g)),
            SuperCylinderModT1 => d(f, 2) * (t(1) * d(g, 1) + n1_half(g)) + (f - t(1) * d(f, 1)) * d(g, 2),
            SuperCylinder3 => {
                (t(1) * d(f, 1) + d(f, 3)) * (d(g, 2) - h(g)) + (f - d(f, 2)) * (t(1) * d(g, 1) + d(g, 3) + n_half(g))
            }
            SuperCylinder3Mod1 => {
                (t(1) * d(f, 1) + d(f, 3)) * d(g, 2) - d(f, 2) * (t(1) * d(g, 1) + d(g, 3) + n_half(g))
            }
            SuperCylinder3ModT1 => {
                d(f, 2) * (t(1) * d(g, 1) + d(g, 3) + n1_half(g)) + (f - t(1) * d(f, 1) - d(f, 3)) * d(g, 2)
            }
            SuperTorusMod1 => t(1) * d(f, 1) * (t(2) * d(g, 2) + h(g)) - t(2) * d(f, 2) * (t(1) * d(g, 1) + h(g)),
            SuperTorusModT2 => t(1) * t(2) * d(f, 1) * d(g, 2) + (f - t(2) * d(f, 2)) * (t(1) * d(g, 1) + h(g)),
            SuperTorus3Mod1 => {
                (t(1) * d(f, 1) + d(f, 3)) * (t(2) * d(g, 2) + n_half(g))
                    - t(2) * d(f, 2) * (t(1) * d(g, 1) + d(g, 3) + m_half(g))
            }
            SuperTorus3ModT1 => {
                t(2) * d(f, 2) * (t(1) * d(g, 1) + d(g, 3) + m1_half(g))
                    + (f - t(1) * d(f, 1) - d(f, 3)) * (t(2) * d(g, 2) + n_half(g))
            }
            SuperTorus3ModT2 => {
                (t(1) * d(f, 1) + d(f, 3)) * (t(2) * d(g, 2) + n1_half(g))
                    + (f - t(2) * d(f, 2)) * (t(1) * d(g, 1) + d(g, 3) + m_half(g))
            }
            SuperFractionalMod1 => {
                (t(1) * d(f, 1) + d(f, 3)) * (t(2) * d(g, 2) + d(g, 4) + n_half(g))
                    - (t(2) * d(f, 2) + d(f, 4)) * (t(1) * d(g, 1) + d(g, 3) + m_half(g))
            }
            SuperFractionalModT2 => {
                (t(1) * d(f, 1) + d(f, 3)) * (t(2) * d(g, 2) + d(g, 4) + n1_half(g))
                    + (f - t(2) * d(f, 2) - d(f, 4)) * (t(1) * d(g, 1) + d(g, 3) + m_half(g))
            }
            _ => cx.ring.zero(),
        }
    }
}
