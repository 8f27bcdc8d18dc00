use num_bigint::BigInt;
use sl3_pretzel::links::{jones, Family, PretzelSpec};
use sl3_pretzel::qcalc::{congruent_mod, QLaurent, QSeries};
use sl3_pretzel::tails::*;

fn pretzel(a: i64, b: i64, c: i64) -> PretzelSpec {
    PretzelSpec::new(Family::OddOddEven, vec![a, b, c]).unwrap()
}

fn poly(terms: &[(i64, i64)]) -> QLaurent {
    QLaurent::from_int_powers(terms.iter().copied())
}

#[test]
fn normalized_first_row_of_8_5() {
    let expected = poly(&[(0, 1), (1, -1), (2, 1), (4, -2), (5, 1), (6, -2), (7, 1), (8, 1), (10, 1)]);
    assert_eq!(jones_hat(1, &pretzel(1, 1, 1)).unwrap(), expected);
}

#[test]
fn normalized_fourth_row_prefix_of_8_5() {
    let expected = poly(&[(0, 1), (1, -1), (4, -2), (5, 2), (6, 1), (8, -2), (9, -4), (10, 4)]);
    let row = jones_hat(4, &pretzel(1, 1, 1)).unwrap();
    assert_eq!(QSeries::truncate_int(&row, 10).terms, expected);
}

#[test]
fn unknot_normalizes_to_one() {
    for n in 1..=4 {
        assert_eq!(jones_hat(n, &PretzelSpec::torus(1).unwrap()).unwrap(), QLaurent::one());
    }
}

#[test]
fn mindeg_law() {
    for a in 1..=2 {
        for b in 1..=2 {
            for c in 1..=2 {
                for n in 1..=5 {
                    let j = jones(n, &pretzel(a, b, c)).unwrap().value;
                    assert_eq!(j.mindeg6(), Some(6 * mindeg_odd_odd_even(n, a, b)), "({a},{b},{c}) n={n}");
                }
            }
        }
    }
}

#[test]
fn stability_examples() {
    assert!(check_stability(&pretzel(1, 1, 1), 1).unwrap());
    assert!(check_stability(&pretzel(1, 1, 1), 4).unwrap());
    assert!(check_stability(&pretzel(1, 2, 1), 2).unwrap());
    assert!(check_stability(&pretzel(1, 1, 1), 0).is_err());
}

#[test]
fn stability_holds_on_a_grid() {
    for a in 1..=2 {
        for b in 1..=2 {
            for c in 1..=2 {
                for n in 1..=4 {
                    assert!(check_stability(&pretzel(a, b, c), n).unwrap(), "({a},{b},{c}) n={n}");
                }
            }
        }
    }
}

#[test]
fn agreement_stops_exactly_at_the_next_power() {
    // Consecutive rows agree through q^n and then differ, as in the first
    // rows of the 8_5 table (q^2: +1 for n = 1, 0 for n = 2).
    for spec in [pretzel(1, 1, 1), pretzel(1, 2, 1), pretzel(2, 1, 1)] {
        for n in 1..=4 {
            let f = jones_hat(n, &spec).unwrap();
            let g = jones_hat(n + 1, &spec).unwrap();
            assert_eq!(agreement_order(&f, &g, n + 3), n, "{spec} n={n}");
        }
    }
}

#[test]
fn tail_of_8_5() {
    let spec = pretzel(1, 1, 1);
    let seven = extract_tail(&spec, 7).unwrap();
    assert_eq!(seven.terms, poly(&[(0, 1), (1, -1), (4, -2), (5, 1), (6, 1), (7, 1)]));
    assert_eq!(seven.truncation_order, 42);
    assert_eq!(extract_tail(&spec, 1).unwrap().terms, poly(&[(0, 1), (1, -1)]));
    assert_eq!(extract_tail(&spec, 0).unwrap().terms, QLaurent::one());
}

#[test]
fn successive_tails_agree() {
    for spec in [pretzel(1, 1, 1), pretzel(2, 1, 2)] {
        for order in 1..=5 {
            let a = extract_tail(&spec, order).unwrap();
            let b = extract_tail(&spec, order + 1).unwrap();
            assert!(congruent_mod(&a.terms, &b.terms, order), "{spec} order={order}");
        }
    }
}

#[test]
fn normalized_rows_have_positive_constant_term() {
    for a in 1..=2 {
        for b in 1..=2 {
            for n in 1..=4 {
                assert!(jones_hat(n, &pretzel(a, b, 1)).unwrap().coeff(0) > BigInt::from(0));
            }
        }
    }
}

#[test]
fn rejects_specs_outside_the_knot_family() {
    assert!(extract_tail(&pretzel(1, -1, 1), 2).is_err());
    assert!(tail_report(&PretzelSpec::torus(3).unwrap(), 2).is_err());
    assert!(extract_tail(&pretzel(1, 1, 1), -1).is_err());
}

#[test]
fn report_json_schema() {
    let r = tail_report(&pretzel(1, 1, 1), 3).unwrap();
    assert_eq!(r.rows.len(), 3);
    assert_eq!(r.verified_order, 3);
    assert_eq!(r.stable_prefix, vec!["1", "-1", "0", "0"]);
    for row in &r.rows {
        assert_eq!(row.coeffs.len(), 4);
        // every row agrees with the prefix through its own n
        assert_eq!(row.coeffs[..=row.n as usize], r.stable_prefix[..=row.n as usize]);
    }
    let v: serde_json::Value = serde_json::to_value(&r).unwrap();
    for key in ["spec", "rows", "stable_prefix", "verified_order"] {
        assert!(v.get(key).is_some(), "{key}");
    }
    assert_eq!(v["rows"][0]["n"], 1);
    let back: TailReport = serde_json::from_value(v).unwrap();
    assert_eq!(back, r);
}

/// The stability statement read with agreement through `q^{n+1}`. It is
/// false (see `agreement_stops_exactly_at_the_next_power`) and kept as an
/// opt-in record: `cargo test --test tails -- --ignored`.
#[test]
#[ignore = "fails: consecutive rows agree only through q^n"]
fn stability_through_the_next_power() {
    for spec in [pretzel(1, 1, 1), pretzel(1, 2, 1), pretzel(2, 1, 1)] {
        for n in 1..=5 {
            let f = jones_hat(n, &spec).unwrap();
            let g = jones_hat(n + 1, &spec).unwrap();
            assert!(congruent_mod(&f, &g, n + 1), "{spec} n={n}");
        }
    }
}
