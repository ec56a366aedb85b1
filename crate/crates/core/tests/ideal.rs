mod common;

use blockforge_core::brackets::to_vector;
use blockforge_core::ideal::*;
use blockforge_core::random::rng_from_seed;
use blockforge_core::structure::ClaimStatus;
use blockforge_core::{Element, Error, GradedKey, SuperElement, Window};
use common::*;
use proptest::prelude::*;

fn ev(alpha: &[i64], idx: &[u32]) -> SuperElement {
    SuperElement::even(x(alpha, idx))
}

fn unit_key(n: usize, rank: usize) -> GradedKey {
    GradedKey::even(key(&vec![0; rank], &vec![0; n]))
}

fn settings(radius: u32, degree: u32, trials: usize, growth: bool) -> ProbeSettings {
    ProbeSettings { window: Window::new(radius, degree), trials, seed: 3, check_growth: growth }
}

#[test]
fn class1_seed_reaches_the_unit() {
    let k = kernel("class1_standard");
    let w = Window::new(2, 1);
    let opts = ClosureOptions::covering(vec![unit_key(2, 2)]);
    let state = ideal_closure(&k, &ev(&[1, 1], &[0, 0]), &w, &opts).unwrap();
    assert!(state.current.contains_key(&unit_key(2, 2)));
    assert_eq!(state.outcome, ClosureOutcome::Covered);
}

#[test]
fn central_seed_spans_a_single_line() {
    let k = kernel("class1_standard");
    let w = Window::new(2, 1);
    let state = ideal_closure(&k, &ev(&[0, 1], &[0, 0]), &w, &ClosureOptions::exhaustive(false)).unwrap();
    assert_eq!(state.outcome, ClosureOutcome::Fixpoint);
    assert_eq!(state.rank, 1);
    assert_eq!(state.current.rank(), 1);
    assert_eq!(state.generations, 0);
    // Under the quotient the same seed vanishes.
    let err = ideal_closure(&k, &ev(&[0, 1], &[0, 0]), &w, &ClosureOptions::exhaustive(true)).unwrap_err();
    assert!(matches!(err, Error::EmptySeed));
}

#[test]
fn seeds_must_be_nonzero_and_inside_the_window() {
    let k = kernel("class1_standard");
    let w = Window::new(1, 1);
    let opts = ClosureOptions::exhaustive(true);
    assert!(matches!(ideal_closure(&k, &SuperElement::zero(), &w, &opts), Err(Error::EmptySeed)));
    assert!(matches!(ideal_closure(&k, &ev(&[2, 0], &[0, 0]), &w, &opts), Err(Error::OutsideWindow(_))));
}

#[test]
fn class2_random_seed_covers_all_but_the_center() {
    let k = kernel("class2_mixed");
    let w = Window::new(1, 1);
    let keys: Vec<GradedKey> = k.window_keys(&w).into_iter().filter(|g| !k.quotient_keys().contains(g)).collect();
    assert_eq!(keys.len() + 1, k.window_keys(&w).len());
    let mut rng = rng_from_seed(17);
    let seed = blockforge_core::random::random_graded(&mut rng, &keys, 4);
    let state = ideal_closure(&k, &seed, &w, &ClosureOptions::covering(keys)).unwrap();
    assert!(state.covers_target());
    assert!(state.leakage.events > 0);
    assert!(!state.current.touches(&k.quotient_keys()[0]));
}

#[test]
fn rank_history_is_monotone_and_sums_to_rank() {
    let k = kernel("class3_eps0");
    let state =
        ideal_closure(&k, &ev(&[1, 0], &[0, 0]), &Window::new(1, 0), &ClosureOptions::exhaustive(true)).unwrap();
    let hist = state.rank_history();
    assert!(hist.windows(2).all(|p| p[0] <= p[1]));
    assert_eq!(*hist.last().unwrap(), state.rank);
    assert_eq!(hist.len(), state.generations + 1);
}

#[test]
fn krylov_closure_of_two_eigenvalues_contains_both_components() {
    let k = kernel("class1_standard");
    let w = Window::new(2, 1);
    let u = ev(&[1, 0], &[0, 0]).add(&ev(&[2, 0], &[0, 0]));
    let one = SuperElement::even(Element::unit(2, 2));
    let state = ideal_closure(&k, &u, &w, &ClosureOptions::krylov(one)).unwrap();
    assert_eq!(state.rank, 2);
    let m = eigencomponent_membership(&k, &state, &u).unwrap();
    let Membership::Components { components } = &m else { panic!("{m:?}") };
    assert_eq!(components.len(), 2);
    assert_eq!(m.all_members(), Some(true));
    let single = eigencomponent_membership(&k, &state, &ev(&[2, 0], &[0, 0])).unwrap();
    assert_eq!(single.all_members(), Some(true));
    assert!(matches!(eigencomponent_membership(&k, &state, &ev(&[1, 1], &[0, 0])), Err(Error::NotInSpan)));
}

#[test]
fn krylov_membership_with_lowering_terms() {
    let k = kernel("class1_standard");
    let w = Window::new(2, 2);
    // ad_1 acts as φ_1 plus index lowering, so a generalized eigenvector
    // pulls in its lowered keys.
    let u = ev(&[1, 0], &[1, 0]).add(&ev(&[0, 1], &[0, 1]));
    let one = SuperElement::even(Element::unit(2, 2));
    let state = ideal_closure(&k, &u, &w, &ClosureOptions::krylov(one)).unwrap();
    let m = eigencomponent_membership(&k, &state, &u).unwrap();
    assert_eq!(m.all_members(), Some(true));
}

#[test]
fn unstable_spans_are_indeterminate() {
    let k = kernel("class1_standard");
    let w = Window::new(2, 1);
    // Bracketing with the central σ_1 adds nothing, so the closure is the
    // seed line, which ad_1 moves onto a lowered key.
    let u = ev(&[1, 0], &[1, 0]);
    let state = ideal_closure(&k, &u, &w, &ClosureOptions::krylov(ev(&[0, 1], &[0, 0]))).unwrap();
    assert_eq!(state.rank, 1);
    let m = eigencomponent_membership(&k, &state, &u).unwrap();
    let Membership::Indeterminate { leaked, .. } = &m else { panic!("{m:?}") };
    assert!(leaked.is_empty());
    assert_eq!(m.all_members(), None);
}

#[test]
fn unit_brackets_never_leave_the_window() {
    // ad_1 keeps α and lowers indices, so the leakage branch stays unused
    // on every shipped config.
    for name in SHIPPED {
        let k = kernel(name);
        let w = Window::new(1, 1);
        let one = GradedKey::even(k.unit_key());
        for g in k.window_keys(&w) {
            for (h, _) in k.bracket_keys(&one, &g).terms() {
                assert!(w.contains(&h.key) && h.key.alpha == g.key.alpha, "{name} {g} -> {h}");
            }
        }
    }
}

#[test]
fn hyperplane_certificates() {
    let k = kernel("class1_zero");
    let w = Window::new(3, 0);
    let sigma2 = GradedKey::even(key(&[0, 2], &[0, 0]));
    let cert = hyperplane_certificate(&k, &w, &sigma2);
    assert!(cert.holds && cert.pairs_checked > 0);
    let other = GradedKey::even(key(&[1, 1], &[0, 0]));
    let bad = hyperplane_certificate(&k, &w, &other);
    assert!(!bad.holds);
    let (a, g) = bad.counterexample.unwrap();
    assert!(!k.bracket_keys(&a, &g).coeff(&other).is_zero());
}

#[test]
fn probes_pass_on_small_windows() {
    for (name, radius, degree, mode) in [
        ("class1_standard", 2, 1, ProbeMode::Simple),
        ("class1_zero", 2, 0, ProbeMode::Derived),
        ("class1_witt", 2, 0, ProbeMode::Simple),
        ("class2_zero", 1, 0, ProbeMode::Derived),
        ("class3_eps0", 2, 0, ProbeMode::Simple),
        ("class3_eps1_flat", 2, 0, ProbeMode::Simple),
        ("class3_eps1_kappa", 2, 0, ProbeMode::Simple),
        ("class3_full", 1, 1, ProbeMode::Simple),
    ] {
        let k = kernel(name);
        let rep = simplicity_probe(&k, &settings(radius, degree, 5, true)).unwrap();
        assert_eq!(rep.status, ClaimStatus::Pass, "{name}: {}", rep.detail);
        assert_eq!(rep.mode, Some(mode), "{name}");
        assert_eq!(rep.stable, Some(true), "{name}");
        let run = rep.run.as_ref().unwrap();
        assert!(run.targeted.len() >= 2, "{name}");
        assert_eq!(run.covered(), 5 + run.targeted.len(), "{name}");
        if mode == ProbeMode::Derived {
            assert!(rep.certificate.as_ref().unwrap().holds);
            assert!(rep.unquotiented.iter().all(|s| !s.touches_exceptional));
        }
    }
}

#[test]
fn probe_is_not_applicable_to_block_or_invalid_configs() {
    let rep = simplicity_probe(&kernel("block0_standard"), &settings(1, 0, 3, false)).unwrap();
    assert_eq!(rep.status, ClaimStatus::NotApplicable);
    let invalid = inline(r#"{"class":"class_i","rank":1,"phi":[["0"],["1"]],"profile":["zero","full"]}"#);
    let rep = simplicity_probe(&invalid, &settings(1, 1, 3, false)).unwrap();
    assert_eq!(rep.status, ClaimStatus::NotApplicable);
    assert!(rep.detail.contains("validation"));
}

#[test]
fn probe_reports_are_deterministic() {
    let k = kernel("class3_eps1_kappa");
    let a = simplicity_probe(&k, &settings(2, 0, 4, false)).unwrap();
    let b = simplicity_probe(&k, &settings(2, 0, 4, false)).unwrap();
    assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
}

fn seed_in(name: &'static str, w: Window) -> impl Strategy<Value = SuperElement> {
    let keys = kernel(name).window_keys(&w);
    let n = keys.len();
    prop::collection::vec(
        (0..n, prop::sample::select(vec![-2i64, -1, 1, 2]), prop::sample::select(vec![1i64, 2])),
        1..4,
    )
    .prop_map(move |terms| {
        let mut u = SuperElement::zero();
        for (i, a, b) in terms {
            u.add_term(keys[i].clone(), q(a, b));
        }
        u
    })
    .prop_filter("nonzero", |u| !u.is_zero())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn scaling_the_seed_does_not_change_the_closure(
        u in seed_in("class3_eps0", Window::new(1, 0)),
        c in prop::sample::select(vec![(-1i64, 1i64), (3, 1), (1, 2), (-5, 3)]),
    ) {
        let k = kernel("class3_eps0");
        let w = Window::new(1, 0);
        let opts = ClosureOptions::exhaustive(false);
        let a = ideal_closure(&k, &u, &w, &opts).unwrap();
        let b = ideal_closure(&k, &u.scale(&q(c.0, c.1)), &w, &opts).unwrap();
        prop_assert_eq!(a.current, b.current);
        prop_assert_eq!(a.rank, b.rank);
    }

    #[test]
    fn closures_of_members_are_contained(
        u in seed_in("class1_zero", Window::new(2, 0)),
        pick in 0u64..1000,
    ) {
        let k = kernel("class1_zero");
        let w = Window::new(2, 0);
        let opts = ClosureOptions::exhaustive(false);
        let big = ideal_closure(&k, &u, &w, &opts).unwrap();
        let mut rng = rng_from_seed(pick);
        let v = random_member(&mut rng, &big.current);
        prop_assume!(!v.is_zero());
        let small = ideal_closure(&k, &v, &w, &opts).unwrap();
        for row in small.current.rows() {
            prop_assert!(big.current.contains(row));
        }
        prop_assert!(big.current.contains(&to_vector(&v)));
    }
}
