mod common;

use blockforge_core::algebra::box_points;
use blockforge_core::config::{validate_config, validate_config_with_radius, CheckStatus};
use blockforge_core::{AlgebraClass, AlgebraConfig, Rational};
use common::*;

fn cfg(json: &str) -> AlgebraConfig {
    AlgebraConfig::from_json(json).expect("config parses")
}

const CLASS2_PROJECTIONS: &str = r#"{"class":"class_ii","rank":4,
  "phi":[["1","0","0","0"],["0","1","0","0"],["0","0","1","0"],["0","0","0","1"]],
  "profile":["zero","zero","zero","zero"],"alpha0":[1,1,1,1]}"#;

#[test]
fn identity_class_one_passes_every_check() {
    let c = cfg(r#"{"class":"class_i","rank":2,"phi":[["1","0"],["0","1"]],"profile":["full","full"]}"#);
    let rep = validate_config(&c);
    assert_eq!(rep.overall(), CheckStatus::Pass);
    assert!(rep.checks.iter().all(|c| c.status != CheckStatus::Fail));
    assert_eq!(rep.get("trivial_joint_kernel").unwrap().status, CheckStatus::Pass);
}

#[test]
fn zero_row_on_pinned_direction_fails() {
    let c = cfg(r#"{"class":"class_i","rank":1,"phi":[["0"],["1"]],"profile":["zero","full"]}"#);
    let rep = validate_config(&c);
    assert_eq!(rep.get("nonzero_phi_1").unwrap().status, CheckStatus::Fail);
    assert_eq!(rep.overall(), CheckStatus::Fail);
}

#[test]
fn class2_projections_pass_with_box_witnesses() {
    let rep = validate_config(&cfg(CLASS2_PROJECTIONS));
    assert_eq!(rep.overall(), CheckStatus::Pass, "{rep:#?}");
    for p in 1..=4 {
        let sep = rep.get(&format!("separating_element_{p}")).unwrap();
        let w = sep.witness.as_ref().unwrap();
        // A separating witness is a nonzero multiple of the p-th unit vector.
        assert!(w.iter().enumerate().all(|(i, &x)| (i + 1 == p) != (x == 0)), "{w:?}");
        assert!(rep.get(&format!("alpha0_value_{p}")).unwrap().witness.is_some());
    }
}

#[test]
fn supplied_witnesses_are_used_first() {
    let rep = validate_config(&load("class2_zero"));
    assert_eq!(rep.overall(), CheckStatus::Pass);
    assert_eq!(rep.get("separating_element_1").unwrap().witness.as_deref(), Some(&[1, 0, 0, 0][..]));
    assert_eq!(rep.get("alpha0_value_1").unwrap().witness.as_deref(), Some(&[1, 0, 0, 0][..]));
    assert!(rep.get("alpha0_value_3").unwrap().detail.contains("supplied witness"));
}

#[test]
fn far_alpha0_without_witnesses_is_undecided_not_failed() {
    let json = CLASS2_PROJECTIONS.replace("[1,1,1,1]", "[7,7,7,7]");
    let c = cfg(&json);
    let rep = validate_config(&c);
    assert_eq!(rep.get("alpha0_value_1").unwrap().status, CheckStatus::Undecided);
    assert_eq!(rep.overall(), CheckStatus::Undecided);
    // A larger box or an explicit witness settles it.
    assert_eq!(validate_config_with_radius(&c, 7).overall(), CheckStatus::Pass);
    let with = json.replace("\"alpha0\"", "\"witnesses\":[[7,7,0,0],[0,0,7,7]],\"alpha0\"");
    assert_eq!(validate_config(&cfg(&with)).overall(), CheckStatus::Pass);
}

#[test]
fn alpha0_in_a_joint_kernel_fails() {
    let json = CLASS2_PROJECTIONS.replace("[1,1,1,1]", "[0,0,1,1]");
    let rep = validate_config(&cfg(&json));
    assert_eq!(rep.get("alpha0_generic").unwrap().status, CheckStatus::Fail);
}

#[test]
fn class3_relaxation_only_enforces_the_first_direction() {
    let relaxed = r#"{"class":"class_iii","rank":2,"phi":[["1","0"],["0","0"]],"profile":["zero","zero"],"alpha0":[1,0],"epsilon":1}"#;
    let rep = validate_config(&cfg(relaxed));
    assert_eq!(rep.get("nonzero_phi_2").unwrap().status, CheckStatus::Info);
    let strict = relaxed.replace("\"epsilon\":1", "\"epsilon\":0");
    let rep = validate_config(&cfg(&strict));
    assert_eq!(rep.get("nonzero_phi_2").unwrap().status, CheckStatus::Fail);
}

#[test]
fn class3_kernel_containment_is_decided_exactly() {
    // ker φ_1 = span(0,1) lies inside ker φ_2 when φ_2 = (2, 0).
    let bad = r#"{"class":"class_iii","rank":2,"phi":[["1","0"],["2","0"]],"profile":["full","full"],"alpha0":[1,1],"epsilon":0}"#;
    let rep = validate_config(&cfg(bad));
    assert_eq!(rep.get("kernel_not_contained_1_2").unwrap().status, CheckStatus::Fail);
    let good = bad.replace(r#"["2","0"]"#, r#"["1","1"]"#);
    let rep = validate_config(&cfg(&good));
    assert_eq!(rep.get("kernel_not_contained_1_2").unwrap().status, CheckStatus::Pass);
}

#[test]
fn zero_alpha0_fails_at_epsilon_zero() {
    let c = r#"{"class":"class_iii","rank":2,"phi":[["1","0"],["0","1"]],"profile":["zero","zero"],"alpha0":[0,0],"epsilon":0}"#;
    assert_eq!(validate_config(&cfg(c)).get("alpha0_nonzero").unwrap().status, CheckStatus::Fail);
}

#[test]
fn special_elements_solve_exactly() {
    let c = cfg(r#"{"class":"class_i","rank":2,"phi":[["1","0"],["0","1"]],"profile":["zero","zero"]}"#);
    let s = c.find_special_element(&[(0, Rational::zero()), (1, Rational::one())]).unwrap().unwrap();
    assert_eq!(s.to_vec(), vec![0, 1]);
    assert_eq!(c.phi.eval(1, &s), Rational::one());
    let half = cfg(r#"{"class":"class_i","rank":2,"phi":[["1","0"],["0","2"]],"profile":["zero","zero"]}"#);
    assert_eq!(half.find_special_element(&[(0, Rational::zero()), (1, Rational::one())]).unwrap(), None);
    let z = c.find_special_element(&[(0, Rational::zero()), (1, Rational::zero())]).unwrap().unwrap();
    assert!(z.iter().all(|&x| x == 0));
}

#[test]
fn rational_rows_substitute_exactly() {
    let c = cfg(r#"{"class":"class_i","rank":2,"phi":[["1/2","0"],["1/3","1"]],"profile":["zero","zero"]}"#);
    let s = c.find_special_element(&[(0, Rational::zero()), (1, Rational::from_integer(2))]).unwrap().unwrap();
    assert_eq!(c.phi.eval(0, &s), Rational::zero());
    assert_eq!(c.phi.eval(1, &s), Rational::from_integer(2));
}

#[test]
fn rank_test_agrees_with_brute_force_kernel_search() {
    for name in SHIPPED {
        let c = load(name);
        if c.class == AlgebraClass::Block0 {
            continue;
        }
        let rank_ok = validate_config(&c).get("trivial_joint_kernel").unwrap().status == CheckStatus::Pass;
        let brute_ok = box_points(c.rank(), 3)
            .iter()
            .filter(|a| a.iter().any(|&x| x != 0))
            .all(|a| (0..c.n()).any(|p| !c.phi.eval(p, a).is_zero()));
        assert_eq!(rank_ok, brute_ok, "{name}");
        assert!(rank_ok, "{name}");
    }
    let degenerate = cfg(r#"{"class":"class_i","rank":2,"phi":[["1","1"],["2","2"]],"profile":["full","full"]}"#);
    assert_eq!(validate_config(&degenerate).get("trivial_joint_kernel").unwrap().status, CheckStatus::Fail);
}

#[test]
fn validation_is_idempotent_and_shipped_configs_pass() {
    for name in SHIPPED {
        let c = load(name);
        let first = validate_config(&c);
        assert_eq!(first, validate_config(&c), "{name}");
        assert_ne!(first.overall(), CheckStatus::Fail, "{name}: {first:#?}");
    }
}

#[test]
fn json_round_trip_is_canonical() {
    for name in SHIPPED {
        let mut c = load(name);
        let again = AlgebraConfig::from_json(&c.canonical_json()).unwrap();
        // The canonical form carries only the mathematical content.
        c.name = None;
        assert_eq!(c, again, "{name}");
        assert_eq!(c.canonical_json(), again.canonical_json());
    }
}

#[test]
fn malformed_configs_are_rejected() {
    for bad in [
        r#"{"class":"class_i","rank":2,"phi":[["1","0"]],"profile":["full","full"]}"#,
        r#"{"class":"class_ii","rank":1,"phi":[["1"],["1"],["1"],["1"]],"profile":["zero","zero","zero","zero"]}"#,
        r#"{"class":"class_i","rank":1,"phi":[[0.5],["1"]],"profile":["full","full"]}"#,
        r#"{"class":"class_i","rank":1,"phi":[["1"],["0"]],"profile":["full"]}"#,
        r#"{"class":"class_iii","rank":1,"phi":[["1"],["0"]],"profile":["zero","zero"],"alpha0":[1],"epsilon":2}"#,
    ] {
        assert!(AlgebraConfig::from_json(bad).is_err(), "{bad}");
    }
}
