use blockforge_core::Rational;
use blockforge_realize::{FracLaurentPoly, RealizeError, Ring};
use proptest::prelude::*;

fn q(n: i64, d: i64) -> Rational {
    Rational::new(n, d)
}

#[test]
fn t1_times_its_inverse_is_one() {
    let ring = Ring::new(vec![true, false], 1);
    let inv = ring.power(&[-1, 0]);
    assert_eq!(ring.mul(&ring.var(0), &inv).unwrap(), ring.one());
}

#[test]
fn square_root_monomials_multiply_to_integer_exponents() {
    let ring = Ring::new(vec![true, true], 2);
    let root = FracLaurentPoly::monomial(2, 2, vec![1, 1], Rational::one());
    let product = ring.mul(&root, &root).unwrap();
    assert_eq!(product, ring.power(&[1, 1]));
    assert_eq!(product.to_string(), "t1*t2");
}

#[test]
fn negative_power_of_a_polynomial_variable_is_rejected() {
    let ring = Ring::new(vec![true, true, false], 1);
    let bad = ring.power(&[0, 0, -1]);
    let err = ring.mul(&ring.one(), &bad).unwrap_err();
    match &err {
        RealizeError::Restriction { variable, .. } => assert_eq!(variable, "t3"),
        other => panic!("unexpected error {other}"),
    }
    assert!(err.to_string().contains("t3"));
}

#[test]
fn excluded_monomials_are_rejected() {
    let mut ring = Ring::new(vec![true, true], 1);
    ring.excluded.push(vec![1, -2]);
    assert!(matches!(ring.check(&ring.power(&[1, -2])), Err(RealizeError::Excluded { .. })));
    assert!(ring.check(&ring.power(&[1, -1])).is_ok());
}

#[test]
fn shape_mismatch_is_an_error() {
    let ring = Ring::new(vec![true, true], 1);
    let other = FracLaurentPoly::one(2, 3);
    assert!(matches!(ring.check(&other), Err(RealizeError::Shape { .. })));
}

#[test]
fn partial_derivative_examples() {
    let ring = Ring::new(vec![false, false], 1);
    let f = ring.power(&[2, 1]);
    assert_eq!(ring.partial(&f, 0).unwrap(), ring.power(&[1, 1]).scale(&q(2, 1)));
    assert!(ring.partial(&ring.var(0), 1).unwrap().is_zero());

    let root = FracLaurentPoly::monomial(1, 2, vec![1], Rational::one());
    let d = root.partial(0);
    assert_eq!(d, FracLaurentPoly::monomial(1, 2, vec![-1], q(1, 2)));
    assert_eq!(d.to_string(), "1/2*t1^(-1/2)");
}

#[test]
fn display_orders_terms_and_signs() {
    let ring = Ring::new(vec![false, false], 1);
    let f = ring.one() - ring.var(1);
    assert_eq!(f.to_string(), "1 - t2");
    assert_eq!(ring.zero().to_string(), "0");
    assert_eq!((-ring.power(&[0, 3])).to_string(), "-t2^3");
}

fn poly(vars: usize, denom: i64) -> impl Strategy<Value = FracLaurentPoly> {
    let term = (prop::collection::vec(-4i64..=4, vars), -3i64..=3, 1i64..=2);
    prop::collection::vec(term, 0..5).prop_map(move |terms| {
        let mut f = FracLaurentPoly::zero(vars, denom);
        for (e, n, d) in terms {
            f.add_term(e, Rational::new(n, d));
        }
        f
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn partials_obey_leibniz(f in poly(3, 2), g in poly(3, 2), v in 0usize..3) {
        let lhs = (&f * &g).partial(v);
        let rhs = &f.partial(v) * &g + &f * &g.partial(v);
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn euler_is_t_times_partial(f in poly(3, 2), v in 0usize..3) {
        let t = FracLaurentPoly::var(3, 2, v);
        prop_assert_eq!(f.euler(v), &t * &f.partial(v));
    }

    #[test]
    fn product_is_commutative_and_associative(f in poly(2, 3), g in poly(2, 3), h in poly(2, 3)) {
        prop_assert_eq!(&f * &g, &g * &f);
        prop_assert_eq!(&(&f * &g) * &h, &f * &(&g * &h));
        prop_assert_eq!(&f * &(&g + &h), &f * &g + &f * &h);
    }

    #[test]
    fn partials_commute(f in poly(3, 1), a in 0usize..3, b in 0usize..3) {
        prop_assert_eq!(f.partial(a).partial(b), f.partial(b).partial(a));
    }

    #[test]
    fn no_zero_coefficients_survive(f in poly(2, 1), g in poly(2, 1)) {
        let h = &(&f * &g) - &(&g * &f);
        prop_assert!(h.is_zero());
        prop_assert!((&f - &f).terms().next().is_none());
    }
}
