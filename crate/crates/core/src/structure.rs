//! Centers, derived algebras and the odd generated part on finite windows.
//!
//! Spans are generated from a margin-extended window and then intersected
//! with the requested window, so brackets that leave the window through the
//! `α0` shift are never silently cut.

use std::collections::{BTreeSet, HashMap};

use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::{box_points, multi_indices, Alpha, BasisKey, GradedKey, Multi, Parity, SuperElement, Window};
use crate::brackets::{BracketKernel, SpecialElements};
use crate::config::AlgebraClass;
use crate::linalg::{Echelon, SparseVec, SubspaceBasis};
use crate::rational::Rational;

/// Extra degree added to every generation window.
pub const DEGREE_MARGIN: u32 = 2;

/// Radius margin: `|α0|_∞ + 1`, or 1 without `α0`.
pub fn radius_margin(kernel: &BracketKernel) -> u32 {
    let a0 = kernel.config().alpha0().map_or(0, |a| a.iter().map(|x| x.unsigned_abs()).max().unwrap_or(0));
    a0 as u32 + 1
}

/// The window used to generate spans whose assertions live on `window`.
pub fn generation_window(kernel: &BracketKernel, window: &Window) -> Window {
    window.expanded(radius_margin(kernel), DEGREE_MARGIN)
}

/// Basis keys of `window` ordered small first: by radius, then degree, then
/// key order. The unit comes first.
pub fn ordered_generators(kernel: &BracketKernel, window: &Window) -> Vec<GradedKey> {
    let mut keys = kernel.window_keys(window);
    keys.sort_by(|a, b| (a.key.radius(), a.key.degree(), a).cmp(&(b.key.radius(), b.key.degree(), b)));
    keys
}

/// Column type that orders keys outside a window before keys inside it, so
/// echelon rows with an inside pivot span the intersection with the window.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Zoned {
    Outer(GradedKey),
    Inner(GradedKey),
}

impl Zoned {
    pub fn new(window: &Window, g: GradedKey) -> Zoned {
        if window.contains(&g.key) {
            Zoned::Inner(g)
        } else {
            Zoned::Outer(g)
        }
    }

    pub fn key(&self) -> &GradedKey {
        match self {
            Zoned::Outer(g) | Zoned::Inner(g) => g,
        }
    }

    pub fn is_inner(&self) -> bool {
        matches!(self, Zoned::Inner(_))
    }
}

pub fn zoned(window: &Window, v: SparseVec<GradedKey>) -> SparseVec<Zoned> {
    v.into_iter().map(|(g, x)| (Zoned::new(window, g), x)).collect()
}

/// The rows of `ech` lying entirely inside the window, as a canonical basis.
pub fn inner_part(window: Window, ech: &Echelon<Zoned>) -> SubspaceBasis {
    let rows = ech
        .rows()
        .iter()
        .filter(|r| r.keys().next().is_some_and(Zoned::is_inner))
        .map(|r| r.iter().map(|(z, x)| (z.key().clone(), x.clone())).collect());
    SubspaceBasis::from_vectors(window, rows)
}

/// `[v, g]` for a coordinate vector `v` and a basis key `g`.
pub fn bracket_with_key(kernel: &BracketKernel, v: &SparseVec<GradedKey>, g: &GradedKey) -> SparseVec<GradedKey> {
    let mut out = SuperElement::zero();
    for (a, c) in v {
        kernel.graded_pair(a, g, c, &mut out);
    }
    crate::brackets::to_vector(&out)
}

/// Outcome of a structural claim.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ClaimStatus {
    Pass,
    Fail,
    NotApplicable,
    OutOfWindow,
}

#[derive(Clone, Debug, Serialize)]
pub struct Claim {
    pub id: &'static str,
    pub status: ClaimStatus,
    pub detail: String,
    pub witnesses: Vec<GradedKey>,
}

impl Claim {
    fn new(id: &'static str, status: ClaimStatus, detail: impl Into<String>, witnesses: Vec<GradedKey>) -> Claim {
        Claim { id, status, detail: detail.into(), witnesses }
    }

    fn check(id: &'static str, ok: bool, detail: impl Into<String>, witnesses: Vec<GradedKey>) -> Claim {
        let status = if ok { ClaimStatus::Pass } else { ClaimStatus::Fail };
        Claim::new(id, status, detail, witnesses)
    }
}

fn unit_vector(g: &GradedKey) -> SparseVec<GradedKey> {
    let mut v = SparseVec::new();
    v.insert(g.clone(), Rational::one());
    v
}

/// Coordinate subspace spanned by `keys`.
fn coordinate_span(window: Window, keys: &[GradedKey]) -> SubspaceBasis {
    SubspaceBasis::from_vectors(window, keys.iter().map(unit_vector))
}

#[derive(Clone, Debug, Serialize)]
pub struct CenterReport {
    pub window: Window,
    pub generation_window: Window,
    pub basis: SubspaceBasis,
    pub predicted: Vec<GradedKey>,
    pub status: ClaimStatus,
    pub detail: String,
    /// Generators bracketed before the candidate space stopped changing.
    pub generators_used: usize,
}

impl CenterReport {
    pub fn passed(&self) -> bool {
        matches!(self.status, ClaimStatus::Pass | ClaimStatus::OutOfWindow)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
enum Tagged {
    Image(GradedKey),
    Tag(usize),
}

/// Combinations of `cands` that `images` sends to zero.
fn null_combinations(cands: &[SparseVec<GradedKey>], images: &[SparseVec<GradedKey>]) -> Vec<SparseVec<GradedKey>> {
    let mut ech: Echelon<Tagged> = Echelon::new();
    for (i, img) in images.iter().enumerate() {
        let mut row: SparseVec<Tagged> = img.iter().map(|(g, x)| (Tagged::Image(g.clone()), x.clone())).collect();
        row.insert(Tagged::Tag(i), Rational::one());
        ech.insert(row);
    }
    ech.rows()
        .iter()
        .filter(|r| matches!(r.keys().next(), Some(Tagged::Tag(_))))
        .map(|r| {
            let mut out = SparseVec::new();
            for (col, x) in r {
                if let Tagged::Tag(i) = col {
                    crate::linalg::axpy(&mut out, x, &cands[*i]);
                }
            }
            out
        })
        .collect()
}

/// Elements supported in `window` that commute with every basis key of the
/// generation window.
///
/// Candidates start as the whole window and are cut down one generator at a
/// time, smallest generators first, by exact null-space computations.
pub fn central_elements(kernel: &BracketKernel, window: &Window) -> CenterReport {
    let gen_window = generation_window(kernel, window);
    let mut cands: Vec<SparseVec<GradedKey>> = kernel.window_keys(window).iter().map(unit_vector).collect();
    let generators = ordered_generators(kernel, &gen_window);
    let mut generators_used = 0;
    for g in &generators {
        if cands.is_empty() {
            break;
        }
        let images: Vec<SparseVec<GradedKey>> = cands.par_iter().map(|b| bracket_with_key(kernel, b, g)).collect();
        generators_used += 1;
        if images.iter().all(|v| v.is_empty()) {
            continue;
        }
        let kept = null_combinations(&cands, &images);
        cands = SubspaceBasis::from_vectors(*window, kept).rows().to_vec();
    }
    let basis = SubspaceBasis::from_vectors(*window, cands);
    let predicted = kernel.predicted_center();
    let (inside, outside): (Vec<_>, Vec<_>) = predicted.iter().cloned().partition(|g| window.contains(&g.key));
    let (status, detail) = if !outside.is_empty() {
        if basis.rank() == 0 {
            (ClaimStatus::OutOfWindow, format!("predicted center {} lies outside the window", outside[0]))
        } else {
            (ClaimStatus::Fail, "predicted center lies outside the window but the computed center is nonzero".into())
        }
    } else if basis == coordinate_span(*window, &inside) {
        let what = if inside.is_empty() {
            "computed center is zero as predicted".to_string()
        } else {
            format!("center is the line through {}", inside[0])
        };
        (ClaimStatus::Pass, what)
    } else {
        (ClaimStatus::Fail, format!("computed center has rank {}, predicted {}", basis.rank(), inside.len()))
    };
    CenterReport { window: *window, generation_window: gen_window, basis, predicted, status, detail, generators_used }
}

/// Which key pairs contribute to a bracket span.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PairFilter {
    /// Every pair: the derived algebra.
    All,
    /// Even with odd: the odd generated part.
    EvenOdd,
}

/// Pairs sharing parities and index sums, which is what decides the keys
/// their brackets can reach.
struct PairGroup {
    pa: Parity,
    pb: Parity,
    alpha: Alpha,
    idx: Multi,
}

/// Lazily walks the points of the box `[lo, hi]` (inclusive) in
/// lexicographic order.
struct BoxWalk {
    lo: Vec<i64>,
    hi: Vec<i64>,
    next: Option<Alpha>,
}

impl BoxWalk {
    fn new(lo: Vec<i64>, hi: Vec<i64>) -> BoxWalk {
        let next = if lo.iter().zip(&hi).all(|(l, h)| l <= h) { Some(lo.iter().copied().collect()) } else { None };
        BoxWalk { lo, hi, next }
    }
}

impl Iterator for BoxWalk {
    type Item = Alpha;

    fn next(&mut self) -> Option<Alpha> {
        let current = self.next.take()?;
        let mut succ = current.clone();
        for k in (0..succ.len()).rev() {
            if succ[k] < self.hi[k] {
                succ[k] += 1;
                self.next = Some(succ);
                return Some(current);
            }
            succ[k] = self.lo[k];
        }
        Some(current)
    }
}

fn parity_pairs(kernel: &BracketKernel, filter: PairFilter) -> Vec<(Parity, Parity)> {
    match (filter, kernel.has_odd()) {
        (PairFilter::EvenOdd, _) => vec![(Parity::Even, Parity::Odd)],
        (PairFilter::All, false) => vec![(Parity::Even, Parity::Even)],
        (PairFilter::All, true) => {
            vec![(Parity::Even, Parity::Even), (Parity::Odd, Parity::Odd), (Parity::Even, Parity::Odd)]
        }
    }
}

/// Local span of one pair group, stopping once it fills every reachable key.
///
/// For a fixed split of the multi-index, every structure constant is a
/// polynomial of degree at most two in each coordinate of `α` (with
/// `β = sum - α`). Tensor-product interpolation then writes each image as a
/// combination of the images at three points per coordinate, so a 3-point
/// grid spans the same space as the whole box.
fn group_span(kernel: &BracketKernel, gen: &Window, multis: &[Multi], group: &PairGroup) -> Vec<SparseVec<GradedKey>> {
    let radius = gen.radius as i64;
    let reachable = kernel.output_support(group.pa, group.pb, &group.alpha, &group.idx).len();
    let lo: Vec<i64> = group.alpha.iter().map(|s| (s - radius).max(-radius)).collect();
    let hi: Vec<i64> = group.alpha.iter().zip(&lo).map(|(s, l)| (s + radius).min(radius).min(l + 2)).collect();
    let mut ech: Echelon<GradedKey> = Echelon::new();
    for i in multis {
        if i.iter().zip(&group.idx).any(|(a, m)| a > m) {
            continue;
        }
        let j: Multi = group.idx.iter().zip(i).map(|(m, a)| m - a).collect();
        if j.iter().sum::<u32>() > gen.degree {
            continue;
        }
        for alpha in BoxWalk::new(lo.clone(), hi.clone()) {
            let beta: Alpha = group.alpha.iter().zip(&alpha).map(|(s, a)| s - a).collect();
            let a = GradedKey { parity: group.pa, key: BasisKey { alpha, idx: i.clone() } };
            let b = GradedKey { parity: group.pb, key: BasisKey { alpha: beta, idx: j.clone() } };
            let image = crate::brackets::to_vector(&kernel.bracket_keys(&a, &b));
            if ech.insert(image) && ech.rank() == reachable {
                return ech.to_rref();
            }
        }
    }
    ech.to_rref()
}

/// Span of the brackets of generation-window key pairs admitted by
/// `filter`, intersected with `window`.
pub fn bracket_span(kernel: &BracketKernel, window: &Window, filter: PairFilter) -> SubspaceBasis {
    let gen = generation_window(kernel, window);
    let profile = &kernel.config().profile;
    let multis = multi_indices(profile, gen.degree);
    let mut groups = Vec::new();
    for (pa, pb) in parity_pairs(kernel, filter) {
        for alpha in box_points(kernel.rank(), 2 * gen.radius as i64) {
            for idx in multi_indices(profile, 2 * gen.degree) {
                groups.push(PairGroup { pa, pb, alpha: alpha.clone(), idx });
            }
        }
    }
    let groups = groups_touching_window(kernel, window, groups);
    let local: Vec<Vec<SparseVec<GradedKey>>> =
        groups.par_iter().map(|g| group_span(kernel, &gen, &multis, g)).collect();
    let mut ech: Echelon<Zoned> = Echelon::new();
    for rows in local {
        for r in rows {
            ech.insert(zoned(window, r));
        }
    }
    inner_part(*window, &ech)
}

/// Keeps the groups whose reachable keys connect, through chains of shared
/// keys, to a key of `window`. Vectors from the other groups have supports
/// disjoint from everything that touches the window, so they cannot change
/// the intersection of the span with it.
fn groups_touching_window(kernel: &BracketKernel, window: &Window, groups: Vec<PairGroup>) -> Vec<PairGroup> {
    let mut parent: Vec<usize> = (0..groups.len()).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    let mut owner: HashMap<GradedKey, usize> = HashMap::new();
    let mut touches = vec![false; groups.len()];
    for (gi, g) in groups.iter().enumerate() {
        for key in kernel.output_support(g.pa, g.pb, &g.alpha, &g.idx) {
            if window.contains(&key.key) {
                touches[gi] = true;
            }
            match owner.get(&key) {
                Some(&other) => {
                    let (ra, rb) = (find(&mut parent, gi), find(&mut parent, other));
                    parent[ra] = rb;
                }
                None => {
                    owner.insert(key, gi);
                }
            }
        }
    }
    let mut live = vec![false; groups.len()];
    for (gi, _) in touches.iter().enumerate().filter(|(_, t)| **t) {
        let r = find(&mut parent, gi);
        live[r] = true;
    }
    let keep: Vec<bool> = (0..groups.len()).map(|gi| live[find(&mut parent, gi)]).collect();
    groups.into_iter().zip(keep).filter(|(_, k)| *k).map(|(g, _)| g).collect()
}

/// `[L, L]` on the window.
pub fn derived_subalgebra(kernel: &BracketKernel, window: &Window) -> SubspaceBasis {
    bracket_span(kernel, window, PairFilter::All)
}

/// Window keys not contained in `span`.
pub fn missing_keys(span: &SubspaceBasis, keys: &[GradedKey]) -> Vec<GradedKey> {
    keys.iter().filter(|g| !span.contains_key(g)).cloned().collect()
}

/// Which closed form describes the odd generated part.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum OddClosedForm {
    /// Some index direction is full: every odd key is generated.
    AllOdd,
    /// ε = 0, no index directions: every odd key except `2α = -α0`.
    HalfNegAlpha0Excluded,
    /// ε = 1, `φ_1(α0) = 0`: excluded keys have `φ_1 = 0` and
    /// `2φ_2 = 3 - φ_2(α0)`.
    FlatKappaExcluded,
    /// ε = 1, `φ_1(α0) ≠ 0`: only `κ` is excluded.
    KappaExcluded,
}

#[derive(Clone, Debug, Serialize)]
pub struct OddPartReport {
    pub window: Window,
    pub basis: SubspaceBasis,
    pub closed_form: OddClosedForm,
    /// Odd window keys the closed form excludes.
    pub predicted_excluded: Vec<GradedKey>,
    /// Odd window keys the brute-force span does not contain.
    pub computed_excluded: Vec<GradedKey>,
    /// Whether the span has a nonzero coordinate on a predicted exclusion.
    pub touches_excluded: bool,
    /// Codimension of `A_0 + B_1` in the window.
    pub codimension: usize,
}

impl OddPartReport {
    pub fn matches(&self) -> bool {
        self.predicted_excluded == self.computed_excluded && !self.touches_excluded
    }
}

pub fn odd_closed_form(kernel: &BracketKernel) -> OddClosedForm {
    let cfg = kernel.config();
    if !cfg.profile.all_zero() {
        OddClosedForm::AllOdd
    } else if cfg.epsilon == Some(0) {
        OddClosedForm::HalfNegAlpha0Excluded
    } else if cfg.phi_alpha0(0).is_zero() {
        OddClosedForm::FlatKappaExcluded
    } else {
        OddClosedForm::KappaExcluded
    }
}

/// `[A_0, A_1]` on the window, compared with its closed form. Requires a
/// superalgebra configuration.
pub fn odd_generated_part(kernel: &BracketKernel, window: &Window) -> crate::Result<OddPartReport> {
    if !kernel.has_odd() {
        return Err(crate::Error::ClassMismatch {
            class: kernel.class().name(),
            detail: "the odd generated part needs odd keys".into(),
        });
    }
    let basis = bracket_span(kernel, window, PairFilter::EvenOdd);
    let odd_keys: Vec<GradedKey> = kernel.window_keys(window).into_iter().filter(|g| g.parity == Parity::Odd).collect();
    let predicted_excluded: Vec<GradedKey> =
        kernel.odd_exceptional().into_iter().filter(|g| window.contains(&g.key)).collect();
    let computed_excluded = missing_keys(&basis, &odd_keys);
    let touches_excluded = predicted_excluded.iter().any(|g| basis.touches(g));
    let codimension = odd_keys.len() - basis.rank();
    Ok(OddPartReport {
        window: *window,
        basis,
        closed_form: odd_closed_form(kernel),
        predicted_excluded,
        computed_excluded,
        touches_excluded,
        codimension,
    })
}

/// The exceptional key the derived algebra misses in the index-free case:
/// `σ_2` for Class I, `ρ` for Class II.
pub fn derived_exceptional(kernel: &BracketKernel) -> Option<GradedKey> {
    let cfg = kernel.config();
    if !cfg.profile.all_zero() || cfg.degenerate_witt {
        return None;
    }
    let s = kernel.specials();
    let alpha = match kernel.class() {
        AlgebraClass::ClassI => s.sigma2.as_ref(),
        AlgebraClass::ClassII => s.rho.as_ref(),
        _ => None,
    };
    alpha.map(|a| GradedKey::even(kernel.pure_key(a)))
}

#[derive(Clone, Debug, Serialize)]
pub struct DecompositionReport {
    pub class: AlgebraClass,
    pub window: Window,
    pub specials: SpecialElements,
    pub derived_rank: usize,
    pub window_keys: usize,
    pub claims: Vec<Claim>,
}

impl DecompositionReport {
    /// No claim failed.
    pub fn passed(&self) -> bool {
        self.claims.iter().all(|c| c.status != ClaimStatus::Fail)
    }

    pub fn claim(&self, id: &str) -> Option<&Claim> {
        self.claims.iter().find(|c| c.id == id)
    }
}

/// Checks the direct-sum decompositions of the derived algebra (Lie classes)
/// and the odd-part codimension bound (superalgebras) on the window.
pub fn decomposition_check(kernel: &BracketKernel, window: &Window) -> DecompositionReport {
    let keys = kernel.window_keys(window);
    let mut claims = Vec::new();
    let mut derived_rank = 0;
    match kernel.class() {
        AlgebraClass::Block0 => {
            claims.push(Claim::new(
                "decomposition",
                ClaimStatus::NotApplicable,
                "no decomposition statement for the Block algebra",
                vec![],
            ));
        }
        AlgebraClass::ClassI | AlgebraClass::ClassII => {
            let derived = derived_subalgebra(kernel, window);
            derived_rank = derived.rank();
            lie_claims(kernel, window, &keys, &derived, &mut claims);
        }
        AlgebraClass::ClassIII => {
            let odd = odd_generated_part(kernel, window).expect("class_iii has odd keys");
            claims.push(Claim::check(
                "odd_part_closed_form",
                odd.matches(),
                format!("{:?}: {} odd keys missing", odd.closed_form, odd.computed_excluded.len()),
                odd.computed_excluded.clone(),
            ));
            claims.push(Claim::check(
                "codimension_at_most_one",
                odd.codimension <= 1,
                format!("codimension {}", odd.codimension),
                odd.computed_excluded.clone(),
            ));
            derived_rank = odd.basis.rank();
        }
    }
    DecompositionReport {
        class: kernel.class(),
        window: *window,
        specials: kernel.specials().clone(),
        derived_rank,
        window_keys: keys.len(),
        claims,
    }
}

fn lie_claims(
    kernel: &BracketKernel,
    window: &Window,
    keys: &[GradedKey],
    derived: &SubspaceBasis,
    claims: &mut Vec<Claim>,
) {
    let center: Vec<GradedKey> = kernel.quotient_keys().to_vec();
    match derived_exceptional(kernel) {
        Some(exc) if !window.contains(&exc.key) => {
            claims.push(Claim::new(
                "direct_sum",
                ClaimStatus::OutOfWindow,
                format!("exceptional key {exc} lies outside the window"),
                vec![exc],
            ));
        }
        Some(exc) => {
            let others: Vec<GradedKey> = keys.iter().filter(|g| **g != exc).cloned().collect();
            let missing = missing_keys(derived, &others);
            let touches = derived.touches(&exc);
            claims.push(Claim::check(
                "derived_misses_exceptional",
                !touches,
                format!("coordinate {exc} is {}", if touches { "reached" } else { "never reached" }),
                vec![exc.clone()],
            ));
            claims.push(Claim::check(
                "derived_contains_other_keys",
                missing.is_empty(),
                format!("{} of {} other window keys missing", missing.len(), others.len()),
                missing,
            ));
            claims.push(Claim::check(
                "direct_sum",
                !touches && derived.rank() + 1 == keys.len(),
                format!("rank {} + 1 against {} window keys", derived.rank(), keys.len()),
                vec![],
            ));
            let inside: Vec<GradedKey> = center.iter().filter(|g| window.contains(&g.key)).cloned().collect();
            if inside.is_empty() {
                claims.push(Claim::new(
                    "center_in_derived",
                    ClaimStatus::NotApplicable,
                    "no central key in window",
                    vec![],
                ));
            } else {
                let out: Vec<GradedKey> = inside.iter().filter(|g| !derived.contains_key(g)).cloned().collect();
                claims.push(Claim::check(
                    "center_in_derived",
                    out.is_empty(),
                    "central line lies in the derived algebra",
                    out,
                ));
            }
        }
        None => {
            let mut span = derived.rows().to_vec();
            span.extend(center.iter().filter(|g| window.contains(&g.key)).map(unit_vector));
            let total = SubspaceBasis::from_vectors(*window, span);
            let missing = missing_keys(&total, keys);
            claims.push(Claim::new(
                "direct_sum",
                ClaimStatus::NotApplicable,
                "no exceptional key: the algebra modulo its center is claimed simple",
                vec![],
            ));
            claims.push(Claim::check(
                "perfect_modulo_center",
                missing.is_empty(),
                format!("{} window keys outside derived span plus center", missing.len()),
                missing,
            ));
        }
    }
}

/// Keys of `keys` not in `exclude`.
pub fn keys_without(keys: Vec<GradedKey>, exclude: &BTreeSet<GradedKey>) -> Vec<GradedKey> {
    keys.into_iter().filter(|g| !exclude.contains(g)).collect()
}
