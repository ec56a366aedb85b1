//! Window-truncated ideal closures and the simplicity probe built on them.
//!
//! A closure is the smallest subspace of the margin window that contains the
//! seed and is closed under bracketing with the generators, where bracket
//! terms falling outside the margin window are dropped and logged. Verdicts
//! are therefore statements about window closures; the probe backs them by
//! recomputing on a larger window.

use std::cmp::Reverse;
use std::collections::{BTreeMap, BTreeSet, BinaryHeap};

use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::{GradedKey, Parity, SuperElement, Window};
use crate::brackets::{from_vector, to_vector, BracketKernel};
use crate::config::{validate_config, AlgebraClass, CheckStatus};
use crate::error::{Error, Result};
use crate::linalg::{Echelon, SparseVec, SubspaceBasis};
use crate::random::{random_coeff, random_graded, rng_from_seed};
use crate::rational::Rational;
use crate::structure::{
    derived_exceptional, generation_window, inner_part, ordered_generators, zoned, ClaimStatus, Zoned,
};

/// Bracket evaluations handed to the thread pool at once.
const BATCH: usize = 64;
/// Leakage events kept verbatim in the log.
const LEAK_SAMPLES: usize = 8;

/// What the closure brackets with.
#[derive(Clone, Debug)]
pub enum GeneratorSet {
    /// Every basis key of the margin window, smallest first.
    MarginWindow,
    /// A fixed list of elements, e.g. only the unit for `ad_1`-closures.
    Explicit(Vec<SuperElement>),
}

#[derive(Clone, Debug)]
pub struct ClosureOptions {
    pub generators: GeneratorSet,
    /// Keys removed from `MarginWindow` generators.
    pub exclude_generators: Vec<GradedKey>,
    /// Project every vector away from the kernel's verified central keys.
    pub quotient: bool,
    /// Window keys whose coverage is tracked.
    pub target: Vec<GradedKey>,
    /// Stop as soon as every target key lies in the span.
    pub stop_on_coverage: bool,
    /// Stop as soon as the span contains this vector.
    pub stop_when_contains: Option<SparseVec<GradedKey>>,
}

impl ClosureOptions {
    /// Margin-window generators, quotient on, stop once `target` is covered.
    pub fn covering(target: Vec<GradedKey>) -> Self {
        ClosureOptions {
            generators: GeneratorSet::MarginWindow,
            exclude_generators: Vec::new(),
            quotient: true,
            target,
            stop_on_coverage: true,
            stop_when_contains: None,
        }
    }

    /// Runs to the fixpoint under margin-window generators.
    pub fn exhaustive(quotient: bool) -> Self {
        ClosureOptions {
            generators: GeneratorSet::MarginWindow,
            exclude_generators: Vec::new(),
            quotient,
            target: Vec::new(),
            stop_on_coverage: false,
            stop_when_contains: None,
        }
    }

    /// The `ad_u` Krylov closure: the single generator `u`, run to the
    /// fixpoint without quotienting.
    pub fn krylov(u: SuperElement) -> Self {
        ClosureOptions {
            generators: GeneratorSet::Explicit(vec![u]),
            exclude_generators: Vec::new(),
            quotient: false,
            target: Vec::new(),
            stop_on_coverage: false,
            stop_when_contains: None,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct LeakEvent {
    pub item: usize,
    pub generator: usize,
    pub dropped: Vec<GradedKey>,
}

/// Bracket terms dropped for leaving the margin window.
#[derive(Clone, Debug, Default, Serialize)]
pub struct LeakageLog {
    pub events: usize,
    pub dropped_terms: usize,
    pub samples: Vec<LeakEvent>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ClosureOutcome {
    /// Every item was bracketed with every generator.
    Fixpoint,
    /// Stopped early with every target key covered.
    Covered,
    /// Stopped early after reaching the requested vector.
    ReachedVector,
}

#[derive(Clone, Debug, Serialize)]
pub struct ClosureState {
    pub window: Window,
    pub margin_window: Window,
    /// The span intersected with `window`, canonical.
    pub current: SubspaceBasis,
    /// Rank of the whole span in the margin window.
    pub rank: usize,
    /// Largest bracket depth of an item over the seed.
    pub generations: usize,
    /// Items added at each bracket depth; the partial sums are the rank
    /// after each generation.
    pub added_per_generation: Vec<usize>,
    pub pairs_processed: usize,
    pub leakage: LeakageLog,
    pub outcome: ClosureOutcome,
    /// Target keys not in `current`.
    pub uncovered: Vec<GradedKey>,
    pub quotient_keys: Vec<GradedKey>,
}

impl ClosureState {
    pub fn covers_target(&self) -> bool {
        self.uncovered.is_empty() && self.outcome != ClosureOutcome::ReachedVector
    }

    /// Rank after each generation.
    pub fn rank_history(&self) -> Vec<usize> {
        self.added_per_generation
            .iter()
            .scan(0, |acc, x| {
                *acc += x;
                Some(*acc)
            })
            .collect()
    }
}

fn bracket_vectors(kernel: &BracketKernel, u: &SparseVec<GradedKey>, v: &SparseVec<GradedKey>) -> SparseVec<GradedKey> {
    let mut out = SuperElement::zero();
    for (a, x) in u {
        for (b, y) in v {
            kernel.graded_pair(a, b, &(x * y), &mut out);
        }
    }
    to_vector(&out)
}

fn project(v: &mut SparseVec<GradedKey>, keys: &[GradedKey]) {
    for k in keys {
        v.remove(k);
    }
}

fn unit(g: &GradedKey) -> SparseVec<GradedKey> {
    let mut v = SparseVec::new();
    v.insert(g.clone(), Rational::one());
    v
}

struct Closure {
    window: Window,
    margin: Window,
    gens: Vec<SparseVec<GradedKey>>,
    qkeys: Vec<GradedKey>,
    ech: Echelon<Zoned>,
    items: Vec<SparseVec<GradedKey>>,
    depth: Vec<usize>,
    inner_rank: usize,
    uncovered: BTreeSet<GradedKey>,
    checked_at: usize,
    leakage: LeakageLog,
}

impl Closure {
    /// Inserts `v`; returns the new item index when the rank grew.
    fn add(&mut self, v: SparseVec<GradedKey>, depth: usize) -> Option<usize> {
        if !self.ech.insert(zoned(&self.window, v)) {
            return None;
        }
        let row = self.ech.rows().last().expect("just inserted");
        if row.keys().next().is_some_and(Zoned::is_inner) {
            self.inner_rank += 1;
        }
        self.items.push(row.iter().map(|(z, x)| (z.key().clone(), x.clone())).collect());
        self.depth.push(depth);
        Some(self.items.len() - 1)
    }

    fn in_span(&self, v: &SparseVec<GradedKey>) -> bool {
        self.ech.contains(&zoned(&self.window, v.clone()))
    }

    /// Drops covered keys from `uncovered` once the inner rank makes full
    /// coverage possible.
    fn refresh_coverage(&mut self, target_len: usize) {
        if self.inner_rank < target_len || self.inner_rank == self.checked_at {
            return;
        }
        self.checked_at = self.inner_rank;
        let still: BTreeSet<GradedKey> = self.uncovered.iter().filter(|g| !self.in_span(&unit(g))).cloned().collect();
        self.uncovered = still;
    }

    fn truncate(&mut self, mut v: SparseVec<GradedKey>, item: usize, generator: usize) -> SparseVec<GradedKey> {
        let dropped: Vec<GradedKey> = v.keys().filter(|g| !self.margin.contains(&g.key)).cloned().collect();
        if !dropped.is_empty() {
            self.leakage.events += 1;
            self.leakage.dropped_terms += dropped.len();
            for g in &dropped {
                v.remove(g);
            }
            if self.leakage.samples.len() < LEAK_SAMPLES {
                self.leakage.samples.push(LeakEvent { item, generator, dropped });
            }
        }
        project(&mut v, &self.qkeys);
        v
    }
}

/// Closes `seed` under the configured generators on `window`.
pub fn ideal_closure(
    kernel: &BracketKernel,
    seed: &SuperElement,
    window: &Window,
    options: &ClosureOptions,
) -> Result<ClosureState> {
    let margin = generation_window(kernel, window);
    let qkeys: Vec<GradedKey> = if options.quotient { kernel.quotient_keys().to_vec() } else { Vec::new() };
    let mut seed_vec = to_vector(seed);
    project(&mut seed_vec, &qkeys);
    if seed_vec.is_empty() {
        return Err(Error::EmptySeed);
    }
    if let Some(g) = seed_vec.keys().find(|g| !window.contains(&g.key)) {
        return Err(Error::OutsideWindow(g.clone()));
    }
    let gens: Vec<SparseVec<GradedKey>> = match &options.generators {
        GeneratorSet::MarginWindow => ordered_generators(kernel, &margin)
            .into_iter()
            .filter(|g| !options.exclude_generators.contains(g))
            .map(|g| unit(&g))
            .collect(),
        GeneratorSet::Explicit(list) => list.iter().map(to_vector).filter(|v| !v.is_empty()).collect(),
    };
    let target_len = options.target.len();
    let mut c = Closure {
        window: *window,
        margin,
        gens,
        qkeys: qkeys.clone(),
        ech: Echelon::new(),
        items: Vec::new(),
        depth: Vec::new(),
        inner_rank: 0,
        uncovered: options.target.iter().cloned().collect(),
        checked_at: usize::MAX,
        leakage: LeakageLog::default(),
    };
    // Pairs are visited along diagonals of (generator, item) so that a
    // generator far down the list is tried before every item has met every
    // earlier one.
    let pri = |g: usize, i: usize| g + i;
    let mut heap: BinaryHeap<Reverse<(usize, usize, usize)>> = BinaryHeap::new();
    let first = c.add(seed_vec, 0).expect("nonzero seed");
    if !c.gens.is_empty() {
        heap.push(Reverse((pri(0, first), 0, first)));
    }
    let mut pairs = 0;
    let mut outcome = ClosureOutcome::Fixpoint;
    let done = |c: &mut Closure| -> Option<ClosureOutcome> {
        if let Some(v) = &options.stop_when_contains {
            if c.in_span(v) {
                return Some(ClosureOutcome::ReachedVector);
            }
        }
        if options.stop_on_coverage {
            c.refresh_coverage(target_len);
            if c.uncovered.is_empty() {
                return Some(ClosureOutcome::Covered);
            }
        }
        None
    };
    if let Some(o) = done(&mut c) {
        outcome = o;
        heap.clear();
    }
    while !heap.is_empty() {
        let mut batch = Vec::with_capacity(BATCH);
        while batch.len() < BATCH {
            match heap.pop() {
                Some(Reverse((_, g, i))) => batch.push((g, i)),
                None => break,
            }
        }
        let images: Vec<SparseVec<GradedKey>> =
            batch.par_iter().map(|&(g, i)| bracket_vectors(kernel, &c.items[i], &c.gens[g])).collect();
        let mut stop = None;
        for (&(g, i), img) in batch.iter().zip(images) {
            pairs += 1;
            let v = c.truncate(img, i, g);
            if let Some(j) = c.add(v, c.depth[i] + 1) {
                heap.push(Reverse((pri(0, j), 0, j)));
                if stop.is_none() {
                    stop = done(&mut c);
                }
            }
            if g + 1 < c.gens.len() {
                heap.push(Reverse((pri(g + 1, i), g + 1, i)));
            }
        }
        if let Some(o) = stop {
            outcome = o;
            break;
        }
    }
    let current = inner_part(*window, &c.ech);
    let uncovered = match outcome {
        ClosureOutcome::Covered => Vec::new(),
        _ => options.target.iter().filter(|g| !current.contains_key(g)).cloned().collect(),
    };
    let generations = c.depth.iter().copied().max().unwrap_or(0);
    let mut added_per_generation = vec![0; generations + 1];
    for d in &c.depth {
        added_per_generation[*d] += 1;
    }
    Ok(ClosureState {
        window: *window,
        margin_window: margin,
        current,
        rank: c.ech.rank(),
        generations,
        added_per_generation,
        pairs_processed: pairs,
        leakage: c.leakage,
        outcome,
        uncovered,
        quotient_keys: qkeys,
    })
}

/// Membership of each generalized `ad_1` eigencomponent of an element.
#[derive(Clone, Debug, Serialize)]
pub struct ComponentMembership {
    pub eigenvalue: Rational,
    pub component: SuperElement,
    pub member: bool,
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "snake_case", tag = "verdict")]
pub enum Membership {
    /// The span is not known to be `ad_1`-stable, so no conclusion follows.
    Indeterminate {
        reason: String,
        leaked: Vec<GradedKey>,
    },
    Components {
        components: Vec<ComponentMembership>,
    },
}

impl Membership {
    pub fn all_members(&self) -> Option<bool> {
        match self {
            Membership::Indeterminate { .. } => None,
            Membership::Components { components } => Some(components.iter().all(|c| c.member)),
        }
    }
}

/// Diagonal entry of `ad_1` on a key; `ad_1` is this scalar plus a strictly
/// index-lowering part on keys sharing `α` and parity.
pub fn unit_eigenvalue(kernel: &BracketKernel, g: &GradedKey) -> Rational {
    let one = GradedKey::even(kernel.unit_key());
    kernel.bracket_keys(&one, g).coeff(g)
}

/// Splits `u` into generalized eigencomponents of `ad_1` and reports whether
/// each lies in the closure. The closure must be `ad_1`-stable on its window
/// (modulo its quotient keys); otherwise the answer is indeterminate.
pub fn eigencomponent_membership(kernel: &BracketKernel, state: &ClosureState, u: &SuperElement) -> Result<Membership> {
    let uv = to_vector(u);
    if !state.current.contains(&uv) {
        return Err(Error::NotInSpan);
    }
    let one = SuperElement::even(crate::algebra::Element::unit(kernel.rank(), kernel.n()));
    let mut leaked = BTreeSet::new();
    let mut unstable = false;
    for row in state.current.rows() {
        let mut img = to_vector(&kernel.bracket_unchecked(&one, &from_vector(row)));
        project(&mut img, &state.quotient_keys);
        let outside: Vec<GradedKey> = img.keys().filter(|g| !state.window.contains(&g.key)).cloned().collect();
        if !outside.is_empty() {
            leaked.extend(outside);
        } else if !state.current.contains(&img) {
            unstable = true;
        }
    }
    if !leaked.is_empty() {
        return Ok(Membership::Indeterminate {
            reason: "brackets with 1 leave the window".into(),
            leaked: leaked.into_iter().collect(),
        });
    }
    if unstable {
        return Ok(Membership::Indeterminate { reason: "span is not ad_1-stable".into(), leaked: Vec::new() });
    }
    let mut parts: BTreeMap<Rational, SuperElement> = BTreeMap::new();
    for (g, x) in u.terms() {
        let lambda = unit_eigenvalue(kernel, &g);
        parts.entry(lambda).or_insert_with(SuperElement::zero).add_term(g, x.clone());
    }
    let components = parts
        .into_iter()
        .map(|(eigenvalue, component)| {
            let member = state.current.contains(&to_vector(&component));
            ComponentMembership { eigenvalue, component, member }
        })
        .collect();
    Ok(Membership::Components { components })
}

/// Evidence that no bracket of a key other than `key` with any key of the
/// window has a nonzero `key` coordinate. The hyperplane `key = 0` is then
/// invariant, so no closure seeded inside it can reach `key`.
#[derive(Clone, Debug, Serialize)]
pub struct HyperplaneCertificate {
    pub key: GradedKey,
    pub window: Window,
    pub pairs_checked: usize,
    pub holds: bool,
    pub counterexample: Option<(GradedKey, GradedKey)>,
}

pub fn hyperplane_certificate(kernel: &BracketKernel, window: &Window, key: &GradedKey) -> HyperplaneCertificate {
    let cfg = kernel.config();
    let n = kernel.n();
    let mut shifts = vec![vec![0i64; kernel.rank()]];
    if let Some(a0) = cfg.alpha0() {
        shifts.push(a0.to_vec());
    }
    let parities: &[Parity] = if kernel.has_odd() { &[Parity::Even, Parity::Odd] } else { &[Parity::Even] };
    let mut pairs_checked = 0;
    let mut counterexample = None;
    let keys = kernel.window_keys(window);
    let index: BTreeSet<&GradedKey> = keys.iter().collect();
    'outer: for a in keys.iter().filter(|a| *a != key) {
        let mut seen = BTreeSet::new();
        for shift in &shifts {
            for mask in 0..(1u32 << n) {
                for &pb in parities {
                    let alpha: Vec<i64> =
                        key.key.alpha.iter().zip(&a.key.alpha).zip(shift).map(|((k, x), s)| k - x - s).collect();
                    let idx: Option<Vec<u32>> =
                        (0..n).map(|p| (key.key.idx[p] + ((mask >> p) & 1)).checked_sub(a.key.idx[p])).collect();
                    let Some(idx) = idx else { continue };
                    let g = GradedKey { parity: pb, key: crate::algebra::BasisKey::new(&alpha, &idx) };
                    if !index.contains(&g) || !seen.insert(g.clone()) {
                        continue;
                    }
                    pairs_checked += 1;
                    if !kernel.bracket_keys(a, &g).coeff(key).is_zero() {
                        counterexample = Some((a.clone(), g));
                        break 'outer;
                    }
                }
            }
        }
    }
    HyperplaneCertificate {
        key: key.clone(),
        window: *window,
        pairs_checked,
        holds: counterexample.is_none(),
        counterexample,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ProbeMode {
    /// The quotient by the center is claimed simple.
    Simple,
    /// The derived algebra modulo the center is claimed simple and the
    /// exceptional key is never reached.
    Derived,
}

#[derive(Clone, Debug, Serialize)]
pub struct SeedOutcome {
    pub label: String,
    pub seed: SuperElement,
    pub covered: bool,
    /// Coverage inferred from reaching the reference key, whose own closure
    /// covers the target.
    pub via_reference: bool,
    pub rank: usize,
    pub pairs: usize,
    pub leakage_events: usize,
    /// Target keys outside the span when the run stopped.
    pub uncovered_at_stop: usize,
    /// Whether the span has a nonzero exceptional coordinate.
    pub touches_exceptional: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct ProbeRun {
    pub window: Window,
    pub margin_window: Window,
    pub target_size: usize,
    pub reference: Option<SeedOutcome>,
    pub random: Vec<SeedOutcome>,
    pub targeted: Vec<SeedOutcome>,
}

impl ProbeRun {
    pub fn covered(&self) -> usize {
        self.random.iter().chain(&self.targeted).filter(|s| s.covered).count()
    }

    pub fn verdicts(&self) -> Vec<bool> {
        self.random.iter().chain(&self.targeted).map(|s| s.covered).collect()
    }

    fn touches(&self) -> bool {
        self.random.iter().chain(&self.targeted).chain(&self.reference).any(|s| s.touches_exceptional)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ProbeReport {
    pub class: AlgebraClass,
    pub status: ClaimStatus,
    pub mode: Option<ProbeMode>,
    pub detail: String,
    pub trials: usize,
    pub rng_seed: u64,
    pub exceptional: Option<GradedKey>,
    pub run: Option<ProbeRun>,
    /// The same seeds recomputed with the window grown by one, targeting the
    /// original window.
    pub growth: Option<ProbeRun>,
    pub stable: Option<bool>,
    pub certificate: Option<HyperplaneCertificate>,
    /// Unquotiented closures seeded in the derived algebra, which must never
    /// reach the exceptional key.
    pub unquotiented: Vec<SeedOutcome>,
}

#[derive(Clone, Debug)]
pub struct ProbeSettings {
    pub window: Window,
    pub trials: usize,
    pub seed: u64,
    /// Recompute at radius + 1 and compare verdicts.
    pub check_growth: bool,
}

struct ProbePlan {
    mode: ProbeMode,
    exclude: Vec<GradedKey>,
    exceptional: Option<GradedKey>,
}

fn plan(kernel: &BracketKernel) -> std::result::Result<ProbePlan, String> {
    if validate_config(kernel.config()).overall() == CheckStatus::Fail {
        return Err("configuration fails validation".into());
    }
    match kernel.class() {
        AlgebraClass::Block0 => Err("no simplicity statement for the Block algebra".into()),
        AlgebraClass::ClassI | AlgebraClass::ClassII => match derived_exceptional(kernel) {
            Some(exc) => Ok(ProbePlan { mode: ProbeMode::Derived, exclude: vec![exc.clone()], exceptional: Some(exc) }),
            None => Ok(ProbePlan { mode: ProbeMode::Simple, exclude: Vec::new(), exceptional: None }),
        },
        AlgebraClass::ClassIII => {
            let exclude: Vec<GradedKey> = kernel.odd_exceptional().into_iter().collect();
            Ok(ProbePlan { mode: ProbeMode::Simple, exceptional: exclude.first().cloned(), exclude })
        }
    }
}

/// Keys a seed may use on `window`: everything but the quotient keys and
/// the excluded keys.
fn seed_keys(kernel: &BracketKernel, window: &Window, exclude: &[GradedKey]) -> Vec<GradedKey> {
    kernel
        .window_keys(window)
        .into_iter()
        .filter(|g| !kernel.quotient_keys().contains(g) && !exclude.contains(g))
        .collect()
}

/// Seeds suggested by the reduction arguments: a few pure keys of small
/// radius, and mixtures of two keys from distinct `ad_1` eigenvalues.
fn targeted_seeds(kernel: &BracketKernel, keys: &[GradedKey]) -> Vec<(String, SuperElement)> {
    let mut ordered: Vec<&GradedKey> = keys.iter().filter(|g| g.key.is_pure()).collect();
    ordered.sort_by_key(|g| (g.key.radius(), *g));
    let mut out: Vec<(String, SuperElement)> = Vec::new();
    for g in ordered.iter().filter(|g| g.key.radius() == 1).take(3) {
        out.push((format!("key {g}"), SuperElement::basis(g)));
    }
    let mut by_value: BTreeMap<Rational, &GradedKey> = BTreeMap::new();
    for g in keys.iter().filter(|g| g.key.radius() <= 1) {
        by_value.entry(unit_eigenvalue(kernel, g)).or_insert(g);
    }
    let reps: Vec<&GradedKey> = by_value.values().copied().collect();
    for pair in reps.windows(2).take(2) {
        let mut u = SuperElement::basis(pair[0]);
        u.add_term(pair[1].clone(), Rational::from_integer(2));
        out.push((format!("mixture {} + 2 {}", pair[0], pair[1]), u));
    }
    out
}

fn outcome(label: String, seed: SuperElement, state: &ClosureState, exceptional: Option<&GradedKey>) -> SeedOutcome {
    SeedOutcome {
        label,
        seed,
        covered: state.covers_target() || state.outcome == ClosureOutcome::ReachedVector,
        via_reference: state.outcome == ClosureOutcome::ReachedVector,
        rank: state.rank,
        pairs: state.pairs_processed,
        leakage_events: state.leakage.events,
        uncovered_at_stop: state.uncovered.len(),
        touches_exceptional: exceptional.is_some_and(|e| state.current.touches(e)),
    }
}

fn probe_run(
    kernel: &BracketKernel,
    closure_window: &Window,
    target: Vec<GradedKey>,
    plan: &ProbePlan,
    seeds: &[(String, SuperElement)],
    targeted: &[(String, SuperElement)],
) -> Result<ProbeRun> {
    let mut options = ClosureOptions::covering(target.clone());
    options.exclude_generators = plan.exclude.clone();
    let exc = plan.exceptional.as_ref();

    // A reference key whose closure covers the target lets every other seed
    // stop once its own span contains that key.
    let reference_key = target
        .iter()
        .find(|g| **g == GradedKey::even(kernel.unit_key()))
        .or_else(|| target.iter().min_by_key(|g| (g.key.radius(), g.key.degree(), *g)))
        .cloned();
    let mut reference = None;
    if let Some(r) = reference_key {
        let seed = SuperElement::basis(&r);
        let state = ideal_closure(kernel, &seed, closure_window, &options)?;
        let out = outcome(format!("reference {r}"), seed, &state, exc);
        if out.covered {
            options.stop_when_contains = Some(unit(&r));
        }
        reference = Some(out);
    }
    let run_all = |list: &[(String, SuperElement)]| -> Result<Vec<SeedOutcome>> {
        list.iter()
            .map(|(label, seed)| {
                let state = ideal_closure(kernel, seed, closure_window, &options)?;
                Ok(outcome(label.clone(), seed.clone(), &state, exc))
            })
            .collect()
    };
    Ok(ProbeRun {
        window: *closure_window,
        margin_window: generation_window(kernel, closure_window),
        target_size: target.len(),
        reference,
        random: run_all(seeds)?,
        targeted: run_all(targeted)?,
    })
}

/// Runs closures from `trials` random seeds and from targeted seeds, and
/// reports how many cover every target key of the window.
pub fn simplicity_probe(kernel: &BracketKernel, settings: &ProbeSettings) -> Result<ProbeReport> {
    let mut report = ProbeReport {
        class: kernel.class(),
        status: ClaimStatus::NotApplicable,
        mode: None,
        detail: String::new(),
        trials: settings.trials,
        rng_seed: settings.seed,
        exceptional: None,
        run: None,
        growth: None,
        stable: None,
        certificate: None,
        unquotiented: Vec::new(),
    };
    let plan = match plan(kernel) {
        Ok(p) => p,
        Err(why) => {
            report.detail = why;
            return Ok(report);
        }
    };
    report.mode = Some(plan.mode);
    report.exceptional = plan.exceptional.clone();
    let window = settings.window;
    let keys = seed_keys(kernel, &window, &plan.exclude);
    if keys.is_empty() {
        report.detail = "window has no admissible keys".into();
        return Ok(report);
    }
    let mut rng = rng_from_seed(settings.seed);
    let seeds: Vec<(String, SuperElement)> =
        (0..settings.trials).map(|t| (format!("random {t}"), random_graded(&mut rng, &keys, 4))).collect();
    let targeted = targeted_seeds(kernel, &keys);

    let run = probe_run(kernel, &window, keys.clone(), &plan, &seeds, &targeted)?;
    let mut ok = run.covered() == seeds.len() + targeted.len();
    let mut notes =
        vec![format!("{}/{} seeds cover {} target keys", run.covered(), seeds.len() + targeted.len(), keys.len())];

    if settings.check_growth {
        let grown = window.expanded(1, 0);
        let growth = probe_run(kernel, &grown, keys.clone(), &plan, &seeds, &targeted)?;
        let stable = growth.verdicts() == run.verdicts();
        ok &= stable;
        notes.push(format!("verdicts {} at radius {}", if stable { "stable" } else { "change" }, grown.radius));
        report.stable = Some(stable);
        report.growth = Some(growth);
    }

    if plan.mode == ProbeMode::Derived {
        let exc = plan.exceptional.clone().expect("derived mode has an exceptional key");
        let cert = hyperplane_certificate(kernel, &generation_window(kernel, &window), &exc);
        ok &= cert.holds;
        notes.push(format!(
            "hyperplane certificate {} over {} pairs",
            if cert.holds { "holds" } else { "fails" },
            cert.pairs_checked
        ));
        let mut options = ClosureOptions::covering(keys.clone());
        options.quotient = false;
        options.exclude_generators = plan.exclude.clone();
        for (label, seed) in seeds.iter().take(3) {
            let state = ideal_closure(kernel, seed, &window, &options)?;
            report.unquotiented.push(outcome(format!("unquotiented {label}"), seed.clone(), &state, Some(&exc)));
        }
        let touched = run.touches() || report.unquotiented.iter().any(|s| s.touches_exceptional);
        ok &= !touched;
        notes.push(format!("exceptional key {exc} {}", if touched { "reached" } else { "never reached" }));
        report.certificate = Some(cert);
    }
    report.run = Some(run);
    report.status = if ok { ClaimStatus::Pass } else { ClaimStatus::Fail };
    report.detail = notes.join("; ");
    Ok(report)
}

/// A random element of the span with coefficients in `±1, ±2, ±1/2`.
pub fn random_member(rng: &mut crate::random::Rng64, span: &SubspaceBasis) -> SuperElement {
    let mut out = SparseVec::new();
    for row in span.rows() {
        if rand::Rng::gen_bool(rng, 0.5) {
            crate::linalg::axpy(&mut out, &random_coeff(rng), row);
        }
    }
    from_vector(&out)
}
