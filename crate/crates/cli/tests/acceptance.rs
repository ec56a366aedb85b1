//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any
//! criterion fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use blockforge_core::brackets::composed;
use blockforge_core::ideal::{
    eigencomponent_membership, ideal_closure, random_member, simplicity_probe, ClosureOptions, Membership, ProbeMode,
    ProbeSettings,
};
use blockforge_core::identities::jacobi_suite;
use blockforge_core::random::{random_element, random_graded, rng_from_seed};
use blockforge_core::structure::{
    central_elements, decomposition_check, derived_subalgebra, missing_keys, odd_generated_part, ClaimStatus,
    OddClosedForm,
};
use blockforge_core::{AlgebraConfig, BasisKey, BracketKernel, Element, GradedKey, Rational, SuperElement, Window};
use blockforge_realize::{cross_check, Family, RealizationSpec};

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

fn root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn config_path(name: &str) -> PathBuf {
    root().join("configs").join(format!("{name}.json"))
}

fn kernel(name: &str) -> BracketKernel {
    let text = std::fs::read_to_string(config_path(name)).expect("shipped config");
    BracketKernel::new(AlgebraConfig::from_json(&text).expect("config parses"))
}

fn key(alpha: &[i64], idx: &[u32]) -> BasisKey {
    BasisKey::new(alpha, idx)
}

fn x(alpha: &[i64], idx: &[u32]) -> Element {
    Element::basis(key(alpha, idx))
}

fn int(n: i64) -> Rational {
    Rational::from_integer(n)
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

/// Jacobi suite on 1000 random triples per config.
fn jacobi() -> Check {
    let configs = [
        ("block0_standard", Window::new(3, 0)),
        ("class1_standard", Window::new(3, 2)),
        ("class1_mixed", Window::new(3, 2)),
        ("class2_zero", Window::new(2, 0)),
        ("class2_mixed", Window::new(2, 2)),
        ("class3_eps0", Window::new(3, 0)),
        ("class3_eps1_kappa", Window::new(3, 0)),
        ("class3_full", Window::new(3, 2)),
    ];
    let mut slowest = Duration::ZERO;
    for (name, w) in configs {
        let start = Instant::now();
        let r = jacobi_suite(&kernel(name), &w, 1000, 2024);
        let took = start.elapsed();
        slowest = slowest.max(took);
        ensure(r.passed(), || format!("{name}: {} of 1000 triples fail", r.failures))?;
        ensure(took <= Duration::from_secs(60), || format!("{name} took {took:?}"))?;
    }
    Ok(format!("{} configs x 1000 triples, slowest {:.1}s", configs.len(), slowest.as_secs_f64()))
}

/// Expanded brackets against operator composition, 500 pairs per class.
fn dual_path() -> Check {
    let mut rng = rng_from_seed(77);
    for name in ["class1_standard", "class1_mixed"] {
        let k = kernel(name);
        let keys = Window::new(3, 2).keys(k.rank(), &k.config().profile);
        for _ in 0..250 {
            let (u, v) = (random_element(&mut rng, &keys, 3), random_element(&mut rng, &keys, 3));
            let want = composed::class1(k.config(), &u, &v);
            ensure(k.bracket(&u, &v).map_err(|e| e.to_string())? == want, || format!("{name}: [{u}, {v}]"))?;
        }
    }
    for name in ["class2_zero", "class2_mixed"] {
        let k = kernel(name);
        let keys = Window::new(2, 2).keys(k.rank(), &k.config().profile);
        for _ in 0..250 {
            let (u, v) = (random_element(&mut rng, &keys, 3), random_element(&mut rng, &keys, 3));
            let want = composed::class2(k.config(), &u, &v);
            ensure(k.bracket(&u, &v).map_err(|e| e.to_string())? == want, || format!("{name}: [{u}, {v}]"))?;
        }
    }
    for (name, w, pairs) in [
        ("class3_full", Window::new(3, 2), 200),
        ("class3_eps0", Window::new(3, 0), 100),
        ("class3_eps1_flat", Window::new(3, 0), 100),
        ("class3_eps1_kappa", Window::new(3, 0), 100),
    ] {
        let k = kernel(name);
        let keys = k.window_keys(&w);
        for _ in 0..pairs {
            let (u, v) = (random_graded(&mut rng, &keys, 3), random_graded(&mut rng, &keys, 3));
            let want = composed::class3(k.config(), &u, &v);
            ensure(k.superbracket(&u, &v).map_err(|e| e.to_string())? == want, || format!("{name}: [{u}, {v}]"))?;
        }
    }
    Ok("500 pairs each for Class I, II, III".into())
}

/// Worked instances: the unit acting on a key, the σ_1 pair hitting the
/// unit, an opposite pair in Class II, the unit on an odd key, and the
/// central even σ_1 line killing odd keys.
fn golden() -> Check {
    let k = kernel("class1_standard");
    let one = Element::unit(2, 2);
    let got = k.bracket(&one, &x(&[2, 3], &[1, 1])).map_err(|e| e.to_string())?;
    let want = x(&[2, 3], &[1, 1]).scale(&int(2)).add(&x(&[2, 3], &[0, 1]));
    ensure(got == want, || format!("unit on x^((2,3),(1,1)) gave {got}"))?;

    let got = k.bracket(&x(&[0, -1], &[0, 0]), &x(&[0, 1], &[1, 0])).map_err(|e| e.to_string())?;
    ensure(got == x(&[0, 0], &[0, 0]).scale(&int(2)), || format!("σ_1 pair gave {got}"))?;

    let k2 = kernel("class2_zero");
    let got = k2.bracket(&x(&[0, 0, 1, 0], &[0; 4]), &x(&[0, 0, -1, 0], &[0; 4])).map_err(|e| e.to_string())?;
    ensure(got == x(&[0; 4], &[0; 4]).scale(&int(2)), || format!("Class II opposite pair gave {got}"))?;

    // ε(φ_1(β) + φ_1(α0)/2) on the key and ε j_1 on the lowered key.
    let k3 = kernel("class3_full");
    let unit = GradedKey::even(k3.unit_key());
    for (alpha, j) in [([2, -1], 2u32), ([-1, 3], 1), ([0, 0], 3)] {
        let v = GradedKey::odd(key(&alpha, &[j, 0]));
        let got = k3.bracket_keys(&unit, &v);
        let diag = Rational::from_integer(alpha[0]) + Rational::new(1, 2);
        let want =
            SuperElement::odd(x(&alpha, &[j, 0]).scale(&diag).add(&x(&alpha, &[j - 1, 0]).scale(&int(j as i64))));
        ensure(got == want, || format!("unit on odd {v} gave {got}"))?;
    }

    let mut zero_checks = 0;
    for name in ["class3_eps1_flat", "class3_eps1_kappa", "class3_full"] {
        let k = kernel(name);
        let sigma1 = GradedKey::even(k.pure_key(k.specials().sigma1.as_deref().ok_or("no σ_1")?));
        let w = if name == "class3_full" { Window::new(3, 2) } else { Window::new(3, 0) };
        for v in k.window_keys(&w).iter().filter(|g| g.parity.is_odd()) {
            ensure(k.bracket_keys(&sigma1, v).is_zero(), || format!("{name}: [σ_1, {v}] ≠ 0"))?;
            zero_checks += 1;
        }
    }
    Ok(format!("5 instances exact, σ_1 kills {zero_checks} odd keys"))
}

/// Computed centers equal the predicted lines on window (3, 2).
fn centrality() -> Check {
    let w = Window::new(3, 2);
    let expected: &[(&str, Option<&[i64]>)] = &[
        ("block0_standard", Some(&[0, -1])),
        ("class1_standard", Some(&[0, 1])),
        ("class1_zero", Some(&[0, 1])),
        ("class1_mixed", Some(&[0, 1])),
        ("class1_witt", None),
        ("class2_zero", Some(&[0, 0, -1, -1])),
        ("class2_mixed", Some(&[0, 0, -1, -1])),
        ("class3_eps0", Some(&[0, 0])),
        ("class3_eps1_flat", Some(&[0, 1])),
        ("class3_eps1_kappa", Some(&[0, 1])),
        ("class3_full", Some(&[0, 1])),
    ];
    for (name, line) in expected {
        let k = kernel(name);
        let r = central_elements(&k, &w);
        ensure(r.status == ClaimStatus::Pass, || format!("{name}: {}", r.detail))?;
        let want: Vec<GradedKey> = line.iter().map(|a| GradedKey::even(k.pure_key(a))).collect();
        ensure(r.predicted == want, || format!("{name}: predicted {:?}", r.predicted))?;
        ensure(r.basis.rank() == want.len(), || format!("{name}: center rank {}", r.basis.rank()))?;
    }
    Ok(format!("{} configs, centers exact", expected.len()))
}

/// Derived spans miss exactly the exceptional key.
fn derived() -> Check {
    for (name, w, exceptional) in
        [("class1_zero", Window::new(3, 0), vec![0, 2]), ("class2_zero", Window::new(2, 0), vec![1, 1, -2, -2])]
    {
        let k = kernel(name);
        let d = derived_subalgebra(&k, &w);
        let keys = k.window_keys(&w);
        let exc = GradedKey::even(k.pure_key(&exceptional));
        let missing = missing_keys(&d, &keys);
        ensure(missing == vec![exc.clone()], || format!("{name}: derived span misses {missing:?}"))?;
        ensure(!d.touches(&exc), || format!("{name}: derived span touches {exc}"))?;
        ensure(d.rank() + 1 == keys.len(), || format!("{name}: rank {} of {}", d.rank(), keys.len()))?;
        let rep = decomposition_check(&k, &w);
        ensure(rep.passed(), || format!("{name}: {:?}", rep.claims))?;
        ensure(rep.claim("direct_sum").map(|c| c.status) == Some(ClaimStatus::Pass), || format!("{name}: direct sum"))?;
    }
    Ok("σ_2 and ρ are the only missing keys; rank = keys - 1".into())
}

/// The brute-force odd part against its closed forms.
fn odd_part() -> Check {
    let cases = [
        ("class3_eps0", OddClosedForm::HalfNegAlpha0Excluded, Some(vec![-1, 0])),
        ("class3_eps1_flat", OddClosedForm::FlatKappaExcluded, Some(vec![0, 1])),
        ("class3_eps1_kappa", OddClosedForm::KappaExcluded, Some(vec![-1, 1])),
        ("class3_full", OddClosedForm::AllOdd, None),
    ];
    for (name, form, excluded) in cases {
        let k = kernel(name);
        let w = if name == "class3_full" { Window::new(2, 2) } else { Window::new(3, 0) };
        let rep = odd_generated_part(&k, &w).map_err(|e| e.to_string())?;
        ensure(rep.closed_form == form, || format!("{name}: closed form {:?}", rep.closed_form))?;
        ensure(rep.matches(), || format!("{name}: {:?} vs {:?}", rep.predicted_excluded, rep.computed_excluded))?;
        let want: Vec<GradedKey> = excluded.iter().map(|a| GradedKey::odd(key(a, &vec![0; k.n()]))).collect();
        ensure(rep.computed_excluded == want, || format!("{name}: excluded {:?}", rep.computed_excluded))?;
        ensure(rep.codimension <= 1, || format!("{name}: codimension {}", rep.codimension))?;
        let dec = decomposition_check(&k, &w);
        ensure(dec.passed(), || format!("{name}: {:?}", dec.claims))?;
    }
    Ok("4 closed forms match, codimension <= 1".into())
}

/// Closure probes from 20 random seeds, with the window grown by one.
fn simplicity() -> Check {
    let cases = [
        ("class1_standard", Window::new(3, 2), ProbeMode::Simple),
        ("class1_mixed", Window::new(3, 2), ProbeMode::Simple),
        ("class1_witt", Window::new(3, 0), ProbeMode::Simple),
        ("class2_mixed", Window::new(2, 1), ProbeMode::Simple),
        ("class3_eps0", Window::new(3, 0), ProbeMode::Simple),
        ("class3_eps1_flat", Window::new(3, 0), ProbeMode::Simple),
        ("class3_eps1_kappa", Window::new(3, 0), ProbeMode::Simple),
        ("class3_full", Window::new(3, 2), ProbeMode::Simple),
        ("class1_zero", Window::new(3, 0), ProbeMode::Derived),
        ("class2_zero", Window::new(2, 0), ProbeMode::Derived),
    ];
    for (name, window, mode) in cases {
        let k = kernel(name);
        let r = simplicity_probe(&k, &ProbeSettings { window, trials: 20, seed: 31, check_growth: true })
            .map_err(|e| e.to_string())?;
        ensure(r.status == ClaimStatus::Pass, || format!("{name}: {}", r.detail))?;
        ensure(r.mode == Some(mode), || format!("{name}: mode {:?}", r.mode))?;
        let run = r.run.as_ref().ok_or("no run")?;
        ensure(run.random.len() >= 20 && run.random.iter().all(|s| s.covered), || format!("{name}: {}", r.detail))?;
        ensure(r.stable == Some(true), || format!("{name}: verdicts change at radius + 1"))?;
        if mode == ProbeMode::Derived {
            let touched = run.random.iter().chain(&r.unquotiented).any(|s| s.touches_exceptional);
            ensure(!touched && !r.unquotiented.is_empty(), || format!("{name}: exceptional key reached"))?;
        }
    }
    Ok(format!("{} configs, 20 seeds each, verdicts stable", cases.len()))
}

/// Every realization agrees with the engine on 200 random pairs.
fn realizations() -> Check {
    let start = Instant::now();
    let mut paths: Vec<PathBuf> = std::fs::read_dir(root().join("realizations"))
        .map_err(|e| e.to_string())?
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    paths.sort();
    let mut families = std::collections::BTreeSet::new();
    for path in &paths {
        let spec = RealizationSpec::load(path).map_err(|e| format!("{}: {e}", path.display()))?;
        let r = cross_check(&spec, 200, 20260101).map_err(|e| format!("{}: {e}", spec.name))?;
        ensure(r.passed(), || format!("{}: {} mismatches, first {:?}", spec.name, r.mismatches, r.first_mismatch))?;
        families.insert(spec.family);
    }
    ensure(families.len() == Family::ALL.len(), || {
        format!("{} of {} families shipped", families.len(), Family::ALL.len())
    })?;
    let took = start.elapsed();
    ensure(took <= Duration::from_secs(600), || format!("took {took:?}"))?;
    Ok(format!("{} specs, {} families, 0 mismatches, {:.1}s", paths.len(), families.len(), took.as_secs_f64()))
}

/// Members of `ad_1`-stable closures have every eigencomponent inside.
fn eigencomponents() -> Check {
    let (mut checked, mut mixed) = (0, 0);
    for (name, w) in [
        ("class1_standard", Window::new(2, 2)),
        ("class1_zero", Window::new(3, 0)),
        ("class2_mixed", Window::new(1, 1)),
        ("class3_full", Window::new(2, 2)),
        ("class3_eps1_kappa", Window::new(3, 0)),
    ] {
        let k = kernel(name);
        let keys = k.window_keys(&w);
        let one = SuperElement::even(Element::unit(k.rank(), k.n()));
        let mut rng = rng_from_seed(4);
        let mut members = 0;
        while members < 100 {
            let seed = random_graded(&mut rng, &keys, 4);
            let state =
                ideal_closure(&k, &seed, &w, &ClosureOptions::krylov(one.clone())).map_err(|e| e.to_string())?;
            for _ in 0..25 {
                let u = random_member(&mut rng, &state.current);
                if u.is_zero() {
                    continue;
                }
                let m = eigencomponent_membership(&k, &state, &u).map_err(|e| e.to_string())?;
                ensure(m.all_members() == Some(true), || format!("{name}: {m:?}"))?;
                if let Membership::Components { components } = &m {
                    mixed += usize::from(components.len() > 1);
                }
                members += 1;
            }
        }
        checked += members;
    }
    ensure(mixed > 0, || "no member had two eigencomponents".into())?;
    Ok(format!("{checked} members over 5 configs, {mixed} with several eigencomponents"))
}

/// Two probe runs with one manifest write identical bytes.
fn reproducibility() -> Check {
    let bin = env!("CARGO_BIN_EXE_blockforge");
    let dir = std::env::temp_dir().join(format!("blockforge-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).map_err(|e| e.to_string())?;
    let out = dir.join("probe.json");
    let cfg = config_path("class1_standard");
    let args = [
        "probe",
        cfg.to_str().unwrap(),
        "--window",
        "3",
        "2",
        "--trials",
        "20",
        "--seed",
        "99",
        "--out",
        out.to_str().unwrap(),
    ];
    let mut runs = Vec::new();
    for threads in ["1", "2"] {
        let run =
            Command::new(bin).args(args).env("BLOCKFORGE_THREADS", threads).output().map_err(|e| e.to_string())?;
        ensure(run.status.success(), || format!("probe exited with {}", run.status))?;
        runs.push(std::fs::read(&out).map_err(|e| e.to_string())?);
    }
    let _ = std::fs::remove_dir_all(&dir);
    ensure(runs[0] == runs[1], || "reports differ".into())?;
    Ok(format!("{} bytes, identical", runs[0].len()))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("jacobi suite", jacobi),
        ("dual-path brackets", dual_path),
        ("golden instances", golden),
        ("centrality", centrality),
        ("derived decomposition", derived),
        ("odd part", odd_part),
        ("simplicity probes", simplicity),
        ("realization oracle", realizations),
        ("eigencomponent membership", eigencomponents),
        ("reproducibility", reproducibility),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or(p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default())
        });
        let secs = start.elapsed().as_secs_f64();
        match result {
            Ok(detail) => println!("criterion {:>2} {name}: PASS ({detail}; {secs:.1}s)", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} {name}: FAIL ({why}; {secs:.1}s)", i + 1);
            }
        }
    }
    println!("{} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
