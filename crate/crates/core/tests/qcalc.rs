use num_bigint::BigInt;
use proptest::prelude::*;
use sl3_pretzel::qcalc::*;

fn q(p: i64) -> QLaurent {
    QLaurent::from_int_powers([(p, 1)])
}

fn poly(terms: &[(i64, i64)]) -> QLaurent {
    QLaurent::from_int_powers(terms.iter().copied())
}

/// Floating-point evaluation at a real `x > 0`, used as an independent check.
fn eval(f: &QLaurent, x: f64) -> f64 {
    f.terms().map(|(e, c)| c.to_string().parse::<f64>().unwrap() * x.powf(e as f64 / 6.0)).sum()
}

fn qint_float(n: i64, x: f64) -> f64 {
    (x.powf(n as f64 / 2.0) - x.powf(-n as f64 / 2.0)) / (x.sqrt() - 1.0 / x.sqrt())
}

#[test]
fn quantum_integers() {
    assert!(qint(0).unwrap().is_zero());
    assert_eq!(qint(1).unwrap(), QLaurent::one());
    assert_eq!(qint(2).unwrap(), QLaurent::from_terms([(3, 1), (-3, 1)]));
    assert!(qint(-2).is_err());
    for n in 1..=15 {
        let x = 1.7;
        assert!((eval(&qint(n).unwrap(), x) - qint_float(n, x)).abs() < 1e-6 * qint_float(n, x));
    }
}

#[test]
fn quantum_factorials() {
    assert_eq!(qfact(0).unwrap(), QLaurent::one());
    assert_eq!(qfact(2).unwrap(), qint(2).unwrap());
    // (q^{1/2}+q^{-1/2})(q+1+q^{-1}) expanded by hand.
    let expected = QLaurent::from_terms([(9, 1), (3, 2), (-3, 2), (-9, 1)]);
    assert_eq!(qfact(3).unwrap(), expected);
    assert!(qfact(-1).is_err());
}

#[test]
fn quantum_binomials() {
    for n in 0..=6 {
        assert_eq!(qbinom(n, 0).unwrap(), QLaurent::one());
        assert_eq!(qbinom(n, n).unwrap(), QLaurent::one());
    }
    assert_eq!(qbinom(2, 1).unwrap(), qint(2).unwrap());
    // [4][3]/[2] = (q + q^{-1})(q + 1 + q^{-1}).
    assert_eq!(qbinom(4, 2).unwrap(), poly(&[(2, 1), (1, 1), (0, 2), (-1, 1), (-2, 1)]));
    assert!(qbinom(3, 4).is_err());
    assert!(qbinom(3, -1).is_err());
    // At q = 1 the quantum binomial becomes the ordinary one.
    for n in 0..=10i64 {
        for k in 0..=n {
            let ordinary: u64 = (1..=k as u64).fold(1, |acc, i| acc * (n as u64 - k as u64 + i) / i);
            assert_eq!(qbinom(n, k).unwrap().eval_at_one(), BigInt::from(ordinary));
        }
    }
}

#[test]
fn pochhammer_symbols() {
    assert_eq!(pochhammer(0).unwrap(), QLaurent::one());
    assert_eq!(pochhammer(1).unwrap(), poly(&[(0, 1), (1, -1)]));
    assert_eq!(pochhammer(2).unwrap(), poly(&[(0, 1), (1, -1), (2, -1), (3, 1)]));
    assert!(pochhammer(-1).is_err());
    let x: f64 = 0.6;
    let direct: f64 = (1..=7).map(|i| 1.0 - x.powi(i)).product();
    assert!((eval(&pochhammer(7).unwrap(), x) - direct).abs() < 1e-12);
}

#[test]
fn exact_division() {
    let a = &qint(2).unwrap() * &qint(3).unwrap();
    assert_eq!(exact_div(&a, &qint(2).unwrap()).unwrap(), qint(3).unwrap());
    assert_eq!(exact_div(&a, &QLaurent::one()).unwrap(), a);
    assert_eq!(exact_div(&pochhammer(3).unwrap(), &pochhammer(2).unwrap()).unwrap(), poly(&[(0, 1), (3, -1)]));
    assert!(matches!(exact_div(&qint(3).unwrap(), &qint(2).unwrap()), Err(sl3_pretzel::Error::InexactDivision { .. })));
    assert!(matches!(exact_div(&a, &QLaurent::zero()), Err(sl3_pretzel::Error::DivisionByZero)));
}

#[test]
fn normalization() {
    assert_eq!(hat(&poly(&[(-3, 1), (-2, -1)])).unwrap(), poly(&[(0, 1), (1, -1)]));
    assert_eq!(hat(&poly(&[(2, -1), (3, 1)])).unwrap(), poly(&[(0, 1), (1, -1)]));
    assert_eq!(hat(&QLaurent::from_int(5)).unwrap(), QLaurent::from_int(5));
    assert!(hat(&QLaurent::zero()).is_err());
}

#[test]
fn congruence() {
    let f = poly(&[(0, 1), (1, -1)]);
    let g = poly(&[(0, 1), (1, -1), (5, 1)]);
    assert!(congruent_mod(&f, &g, 4));
    assert!(!congruent_mod(&f, &g, 5));
    for n in 0..10 {
        assert!(congruent_mod(&g, &g, n));
    }
}

#[test]
fn json_format() {
    let f = &q(-2) - &QLaurent::from_terms([(1, 3)]);
    let s = serde_json::to_string(&f).unwrap();
    assert_eq!(s, r#"{"terms":[[-12,"1"],[1,"-3"]]}"#);
    assert_eq!(serde_json::from_str::<QLaurent>(&s).unwrap(), f);
    assert!(serde_json::from_str::<QLaurent>(r#"{"terms":[[0,"0"]]}"#).is_err());
    assert!(serde_json::from_str::<QLaurent>(r#"{"terms":[[0,"x"]]}"#).is_err());
}

#[test]
fn series_never_claim_beyond_their_order() {
    let a = QSeries::truncate_int(&poly(&[(0, 1), (1, -1), (4, 2)]), 2);
    assert_eq!(a.terms, poly(&[(0, 1), (1, -1)]));
    let b = QSeries::truncate_int(&poly(&[(0, 1), (3, 1)]), 5);
    assert_eq!(a.add(&b).truncation_order, 12);
    assert_eq!(a.mul(&b).int_coeffs(), vec![BigInt::from(1), BigInt::from(-1), BigInt::from(0)]);
}

#[test]
fn product_and_difference_identities_hold() {
    let r = run_identity_suite(12).unwrap();
    assert!(r.passed(), "{r:?}");
    assert_eq!(r.product_checked, 144);
    assert_eq!(r.difference_checked, 650);
    // The difference identity also holds with c = 0.
    for a in 1..=12 {
        for b in 1..=12 {
            assert!(difference_identity_holds(a, b, 0).unwrap());
        }
    }
}

#[test]
fn third_identity_region() {
    let r = run_identity_suite(12).unwrap();
    assert!(r.third_region_is_b_eq_c);
    assert_eq!(r.third_holds.len(), 78);
    // Outside b = c it fails already at the smallest case.
    assert!(!third_identity_holds(2, 3, 1).unwrap());
    assert!(third_identity_holds(5, 3, 3).unwrap());
}

fn arb_laurent() -> impl Strategy<Value = QLaurent> {
    prop::collection::vec((-30i64..30, -5i64..6), 0..6).prop_map(|v| QLaurent::from_terms(v))
}

proptest! {
    #[test]
    fn ring_laws(a in arb_laurent(), b in arb_laurent(), c in arb_laurent()) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
    }

    #[test]
    fn division_inverts_multiplication(a in arb_laurent(), b in arb_laurent()) {
        prop_assume!(!b.is_zero());
        prop_assert_eq!(exact_div(&(&a * &b), &b).unwrap(), a);
    }

    #[test]
    fn hat_is_idempotent_and_sign_free(a in arb_laurent(), c in -9i64..10) {
        prop_assume!(!a.is_zero() && c != 0);
        let h = hat(&a).unwrap();
        prop_assert_eq!(hat(&h).unwrap(), h.clone());
        prop_assert_eq!(hat(&-a.clone()).unwrap(), h.clone());
        // Only the shift and the sign are normalized, not the content.
        prop_assert_eq!(hat(&a.scale(&BigInt::from(c))).unwrap(), h.scale(&BigInt::from(c.abs())));
        prop_assert!(h.coeff(0) > BigInt::from(0));
    }
}
