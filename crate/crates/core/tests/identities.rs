mod common;

use blockforge_core::identities::{jacobi_suite, jacobiator};
use blockforge_core::{GradedKey, SuperElement, Window};
use common::*;

#[test]
fn jacobi_holds_on_every_shipped_config() {
    for name in SHIPPED {
        let k = kernel(name);
        let w = if name.starts_with("class2") { Window::new(2, 2) } else { Window::new(3, 2) };
        let rep = jacobi_suite(&k, &w, 200, 11);
        assert!(rep.passed(), "{name}: {:#?}", rep.first_failure);
        assert_eq!(rep.trials, 200);
    }
}

#[test]
fn suite_is_deterministic() {
    let k = kernel("class3_full");
    let a = jacobi_suite(&k, &Window::new(2, 2), 50, 5);
    let b = jacobi_suite(&k, &Window::new(2, 2), 50, 5);
    assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
}

#[test]
fn graded_signs_on_odd_triples() {
    let k = kernel("class3_eps0");
    let odd = |a: &[i64]| SuperElement::basis(&GradedKey::odd(key(a, &[0, 0])));
    let ev = |a: &[i64]| SuperElement::basis(&GradedKey::even(key(a, &[0, 0])));
    assert!(jacobiator(&k, &odd(&[1, 0]), &odd(&[0, 1]), &odd(&[-1, 2])).is_zero());
    assert!(jacobiator(&k, &ev(&[1, 0]), &odd(&[0, 1]), &odd(&[2, -1])).is_zero());
    assert!(jacobiator(&k, &ev(&[1, 1]), &ev(&[0, 1]), &odd(&[2, -1])).is_zero());
}
