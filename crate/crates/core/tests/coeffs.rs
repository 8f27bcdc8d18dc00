use sl3_pretzel::coeffs::*;
use sl3_pretzel::links::Strands;
use sl3_pretzel::qcalc::*;
use sl3_pretzel::webs::{braid_closure, normalized_bracket, pretzel_diagram, OracleOptions};

fn chain(n: i64, ks: &[i64]) -> TwistChain {
    TwistChain::new(n, ks.to_vec()).unwrap()
}

fn poly(terms: &[(i64, i64)]) -> QLaurent {
    QLaurent::from_int_powers(terms.iter().copied())
}

#[test]
fn delta_values() {
    assert_eq!(delta(0).unwrap(), QLaurent::one());
    assert_eq!(delta(1).unwrap(), poly(&[(1, 1), (0, 1), (-1, 1)]));
    // [3][4]/[2] = [3](q + q^{-1})
    assert_eq!(delta(2).unwrap(), poly(&[(2, 1), (1, 1), (0, 2), (-1, 1), (-2, 1)]));
    assert!(delta(-1).is_err());
    // At q = 1 the loop value is the dimension (n+1)(n+2)/2.
    for n in 0..=8i64 {
        assert_eq!(delta(n).unwrap().eval_at_one(), ((n + 1) * (n + 2) / 2).into());
    }
}

#[test]
fn framing_factors() {
    assert_eq!(framing(4, 0), QLaurent::one());
    assert_eq!(framing(1, 1), QLaurent::q_pow(-8));
    assert_eq!(framing(2, -3), poly(&[(10, 1)]));
}

#[test]
fn twist_chains() {
    assert!(TwistChain::new(2, vec![1, 2]).is_err());
    assert!(TwistChain::new(2, vec![3]).is_err());
    assert!(TwistChain::new(2, vec![2, 0, -1]).is_err());
    assert_eq!(TwistChain::new(2, vec![]).unwrap().last(), 2);
    // Nonincreasing chains of length m in [0, n]: C(n+m, m).
    assert_eq!(TwistChain::enumerate(3, 2).len(), 10);
    assert_eq!(TwistChain::enumerate(4, 3).len(), 35);
}

#[test]
fn full_twist_hand_values() {
    assert_eq!(phi(&chain(1, &[1]), Sign::Plus).unwrap(), QLaurent::q_pow(2));
    assert_eq!(phi(&chain(1, &[0]), Sign::Plus).unwrap(), poly(&[(0, 1), (1, -1)]).shift(-10));
    assert!(phi(&chain(1, &[]), Sign::Plus).is_err());
    for n in 0..=4 {
        for m in 1..=3 {
            for c in TwistChain::enumerate(n, m) {
                assert_eq!(phi(&c, Sign::Minus).unwrap(), phi(&c, Sign::Plus).unwrap().invert_q());
            }
        }
    }
}

#[test]
fn half_twist_hand_values() {
    assert_eq!(chi(&chain(1, &[1]), Sign::Plus).unwrap(), QLaurent::q_pow(2));
    assert_eq!(chi(&chain(1, &[0]), Sign::Plus).unwrap(), QLaurent::monomial(-1, -1));
    assert!(chi(&chain(1, &[]), Sign::Minus).is_err());
}

#[test]
fn bubble_hand_values() {
    for n in 0..=5 {
        assert_eq!(psi(n, 0, 0, 0).unwrap(), QFrac::one());
        assert_eq!(omega(n, 0, 0, 0).unwrap(), QFrac::one());
        for k in 0..=n {
            assert_eq!(psi(n, k, k, 0).unwrap(), QFrac::one());
            // Ω(n,k,k,0)·(1 − q^{n+1−k}) = q^{−k/2}(1 − q^{n+1}), by cancelling by hand.
            let lhs = omega(n, k, k, 0).unwrap().mul_laurent(&one_minus_q_pow(n + 1 - k)).into_laurent().unwrap();
            assert_eq!(lhs, one_minus_q_pow(n + 1).shift(-3 * k));
        }
    }
    assert!(psi(2, 3, 1, 1).is_err());
    assert!(omega(2, 0, 1, 0).is_err());
}

#[test]
fn closure_reproduces_loop_value_at_full_index() {
    for n in 0..=6 {
        assert_eq!(closure_antiparallel(n, n).unwrap(), QFrac::one());
    }
}

/// `Σ_chains coeff · closure`, i.e. the normalized bracket of one closed column.
fn column_sum(n: i64, m: usize, parallel: bool, sign: Sign) -> QLaurent {
    let mut total = QFrac::zero();
    for c in TwistChain::enumerate(n, m) {
        let (coeff, close) = if parallel {
            (chi(&c, sign).unwrap(), closure_parallel(n, c.last()).unwrap())
        } else {
            (phi(&c, sign).unwrap(), closure_antiparallel(n, c.last()).unwrap())
        };
        total.add_assign(&close.mul_laurent(&coeff));
    }
    total.into_laurent().unwrap()
}

#[test]
fn half_twists_match_the_oracle() {
    for n in 1..=2usize {
        for m in 1..=3i64 {
            for sign in [Sign::Plus, Sign::Minus] {
                let word = vec![sign.value(); m as usize];
                let d = braid_closure(2, &word).unwrap();
                let oracle = normalized_bracket(n, &d, OracleOptions::default()).unwrap();
                assert_eq!(column_sum(n as i64, m as usize, true, sign), oracle, "n={n} m={m} {sign:?}");
            }
        }
    }
}

#[test]
fn full_twists_match_the_oracle() {
    for n in 1..=2usize {
        for f in 1..=2i64 {
            for sign in [Sign::Plus, Sign::Minus] {
                let d = pretzel_diagram(&[2 * f * sign.value()], Some(&[Strands::Antiparallel])).unwrap();
                let oracle = normalized_bracket(n, &d, OracleOptions::default()).unwrap();
                assert_eq!(column_sum(n as i64, f as usize, false, sign), oracle, "n={n} f={f} {sign:?}");
            }
        }
    }
}

#[test]
fn every_parameter_on_the_grid_evaluates() {
    for n in 0..=6 {
        for k in 0..=n {
            for l in 0..=n {
                for t in k.max(l)..=(k + l).min(n) {
                    psi(n, t, k, l).unwrap();
                    omega(n, t, k, l).unwrap();
                }
            }
        }
        for m in 1..=3 {
            for c in TwistChain::enumerate(n, m) {
                for s in [Sign::Plus, Sign::Minus] {
                    phi(&c, s).unwrap();
                    chi(&c, s).unwrap();
                }
            }
        }
    }
}
