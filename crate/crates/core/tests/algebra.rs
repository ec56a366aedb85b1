mod common;

use blockforge_core::algebra::SupportDiagnostics;
use blockforge_core::brackets::to_vector;
use blockforge_core::linalg::{Echelon, SubspaceBasis};
use blockforge_core::{BasisKey, Element, GradedKey, Rational, SuperElement, Window};
use common::*;
use proptest::prelude::*;

fn element(rank: usize, n: usize) -> impl Strategy<Value = Element> {
    let term = (
        prop::collection::vec(-3i64..=3, rank),
        prop::collection::vec(0u32..=2, n),
        -3i64..=3,
        prop::sample::select(vec![1i64, 2, 3]),
    );
    prop::collection::vec(term, 0..5).prop_map(|terms| {
        Element::from_terms(terms.into_iter().map(|(a, i, num, den)| (BasisKey::new(&a, &i), q(num, den))))
    })
}

#[test]
fn product_adds_keys() {
    assert_eq!(x(&[1, 0], &[1, 0]).multiply(&x(&[0, 1], &[0, 2])), x(&[1, 1], &[1, 2]));
    let u = x(&[2, -1], &[0, 1]).add(&x(&[0, 0], &[1, 0]).scale(&q(1, 2)));
    assert_eq!(u.multiply(&Element::unit(2, 2)), u);
}

#[test]
fn derivation_example_and_unit() {
    let phi = load("class1_standard").phi;
    let d = x(&[2, 3], &[1, 1]).derivation(&phi, 0);
    assert_eq!(d, x(&[2, 3], &[1, 1]).scale(&int(2)).add(&x(&[2, 3], &[0, 1])));
    assert!(Element::unit(2, 2).derivation(&phi, 0).is_zero());
    assert!(Element::unit(2, 2).derivation(&phi, 1).is_zero());
}

#[test]
fn eigendecomposition_examples() {
    let phi = load("class1_standard").phi;
    let u = x(&[1, 0], &[0, 0]).add(&x(&[0, 5], &[0, 0]));
    let parts = u.eigendecompose(&phi, 0);
    assert_eq!(parts.len(), 2);
    assert_eq!(parts[&int(1)], x(&[1, 0], &[0, 0]));
    assert_eq!(parts[&int(0)], x(&[0, 5], &[0, 0]));
    assert!(Element::zero().eigendecompose(&phi, 0).is_empty());
    assert_eq!(x(&[3, 3], &[0, 1]).eigendecompose(&phi, 0).len(), 1);
}

#[test]
fn quotient_projection_deletes_central_coordinates() {
    let k = kernel("class1_standard");
    let sigma1 = GradedKey::even(key(&[0, 1], &[0, 0]));
    let mut u = SuperElement::even(x(&[1, 1], &[0, 0]));
    u.add_term(sigma1.clone(), int(3));
    let p = k.quotient_project(&u, std::slice::from_ref(&sigma1)).unwrap();
    assert_eq!(p, SuperElement::even(x(&[1, 1], &[0, 0])));
    assert_eq!(k.quotient_project(&p, std::slice::from_ref(&sigma1)).unwrap(), p);
    let off = SuperElement::even(x(&[2, 0], &[1, 0]));
    assert_eq!(k.quotient_project(&off, &[sigma1]).unwrap(), off);
}

#[test]
fn support_diagnostics_examples() {
    let u = x(&[0, 0], &[0, 2]).add(&x(&[1, 0], &[0, 1]));
    assert_eq!(
        u.support_diagnostics(),
        SupportDiagnostics { max_i2: 2, max_total_degree: 2, distinct_alpha_at_top: 1 }
    );
    assert_eq!(
        Element::zero().support_diagnostics(),
        SupportDiagnostics { max_i2: 0, max_total_degree: 0, distinct_alpha_at_top: 0 }
    );
    let two = x(&[0, 0], &[1, 1]).add(&x(&[3, 1], &[2, 0]));
    assert_eq!(two.support_diagnostics().distinct_alpha_at_top, 2);
}

#[test]
fn json_uses_term_records() {
    let u = x(&[1, -2], &[0, 1]).scale(&q(-3, 4));
    let text = serde_json::to_string(&u).unwrap();
    assert_eq!(text, r#"[{"alpha":[1,-2],"idx":[0,1],"coeff":"-3/4"}]"#);
    assert_eq!(serde_json::from_str::<Element>(&text).unwrap(), u);
}

/// The diagonal map `u -> Σ λ u_λ` for the `φ_1` eigencomponents.
fn diagonal(phi: &blockforge_core::config::HomomorphismFamily, u: &Element) -> Element {
    let mut out = Element::zero();
    for (lambda, part) in u.eigendecompose(phi, 0) {
        out.add_scaled(&part, &lambda);
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn canonical_cancellation(u in element(2, 2)) {
        prop_assert!(u.add(&u.neg()).is_empty());
        prop_assert!(u.sub(&u).is_zero());
    }

    #[test]
    fn leibniz_rule(u in element(2, 2), v in element(2, 2), p in 0usize..2) {
        let phi = load("class1_standard").phi;
        let lhs = u.multiply(&v).derivation(&phi, p);
        let rhs = u.derivation(&phi, p).multiply(&v).add(&u.multiply(&v.derivation(&phi, p)));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn derivations_commute(u in element(2, 2)) {
        let phi = load("class3_full").phi;
        prop_assert_eq!(u.derivation(&phi, 0).derivation(&phi, 1), u.derivation(&phi, 1).derivation(&phi, 0));
    }

    #[test]
    fn product_is_a_commutative_ring(u in element(2, 2), v in element(2, 2), w in element(2, 2)) {
        prop_assert_eq!(u.multiply(&v), v.multiply(&u));
        prop_assert_eq!(u.multiply(&v).multiply(&w), u.multiply(&v.multiply(&w)));
        prop_assert_eq!(u.add(&v).multiply(&w), u.multiply(&w).add(&v.multiply(&w)));
        prop_assert_eq!(u.multiply(&Element::unit(2, 2)), u);
    }

    #[test]
    fn eigencomponents_partition(u in element(2, 2)) {
        let phi = load("class1_standard").phi;
        let parts = u.eigendecompose(&phi, 0);
        let mut total = Element::zero();
        for (lambda, part) in &parts {
            prop_assert!(part.keys().all(|k| phi.eval(0, &k.alpha) == *lambda));
            total = total.add(part);
        }
        prop_assert_eq!(total, u);
    }

    #[test]
    fn json_round_trip(u in element(3, 2)) {
        let text = serde_json::to_string(&u).unwrap();
        prop_assert_eq!(serde_json::from_str::<Element>(&text).unwrap(), u);
    }

    #[test]
    fn diagonal_stable_spans_contain_eigencomponents(
        gens in prop::collection::vec(element(2, 2), 1..4),
        mix in prop::collection::vec(-2i64..=2, 16),
    ) {
        let phi = load("class1_standard").phi;
        let window = Window::new(3, 4);
        // Close the generators under the diagonal map.
        let mut ech = Echelon::new();
        let mut vectors = Vec::new();
        for g in &gens {
            let mut v = g.clone();
            while !v.is_zero() && ech.insert(to_vector(&SuperElement::even(v.clone()))) {
                vectors.push(v.clone());
                v = diagonal(&phi, &v);
            }
        }
        let span = SubspaceBasis::from_vectors(window, vectors.iter().map(|v| to_vector(&SuperElement::even(v.clone()))));
        let mut u = Element::zero();
        for (v, c) in vectors.iter().zip(&mix) {
            u.add_scaled(v, &Rational::from_integer(*c));
        }
        prop_assert!(span.contains(&to_vector(&SuperElement::even(u.clone()))));
        for part in u.eigendecompose(&phi, 0).values() {
            prop_assert!(span.contains(&to_vector(&SuperElement::even(part.clone()))));
        }
    }
}
