//! Normalized colored polynomials, minimum degrees and stable tails of the
//! alternating pretzel knots `P(2α+1, 2β+1, 2γ)`.
//!
//! For these knots consecutive normalized polynomials `Ĵ_n` and `Ĵ_{n+1}`
//! agree through `q^n`, so the limit series (the tail) agrees with `Ĵ_n`
//! through `q^n`. Agreement through `q^{n+1}` does *not* hold in general:
//! already for `8_5 = P(3,3,2)` the rows `n = 1, 2` differ at `q^2`.

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::links::{jones, Family, PretzelSpec};
use crate::qcalc::{congruent_mod, hat, QLaurent, QSeries};

/// Predicted minimum degree of `J_{(n,0)}(P(2α+1, 2β+1, 2γ))`.
pub fn mindeg_odd_odd_even(n: i64, alpha: i64, beta: i64) -> i64 {
    -(alpha + beta + 1) * n * n - (3 * alpha + 3 * beta + 2) * n
}

/// `Ĵ_n`: the invariant shifted to start at `q^0` with positive constant term.
pub fn jones_hat(n: i64, spec: &PretzelSpec) -> Result<QLaurent> {
    let j = jones(n, spec)?.value;
    if j.is_zero() {
        return Err(Error::ZeroInput("jones_hat (the invariant vanished)"));
    }
    hat(&j)
}

fn require_tail_class(spec: &PretzelSpec) -> Result<()> {
    if spec.family != Family::OddOddEven || spec.params.iter().any(|p| *p < 1) {
        return Err(Error::InvalidSpec(format!(
            "tails are established for odd-odd-even with positive parameters, not {spec}"
        )));
    }
    Ok(())
}

/// Largest `k` such that `f` and `g` agree on `q^0 … q^k` (`-1` if they
/// already differ at `q^0`), searched up to `limit`.
pub fn agreement_order(f: &QLaurent, g: &QLaurent, limit: i64) -> i64 {
    (0..=limit).find(|k| f.coeff_int(*k) != g.coeff_int(*k)).map_or(limit, |k| k - 1)
}

/// Whether `Ĵ_n ≡ Ĵ_{n+1}` through `q^n` (coefficients of `q^0 … q^n`
/// agree), the stability underlying the tail.
pub fn check_stability(spec: &PretzelSpec, n: i64) -> Result<bool> {
    require_tail_class(spec)?;
    if n < 1 {
        return Err(Error::OutOfRange(format!("stability is checked from n = 1, got {n}")));
    }
    let (a, b) = rayon::join(|| jones_hat(n, spec), || jones_hat(n + 1, spec));
    Ok(congruent_mod(&a?, &b?, n))
}

/// One normalized row of a [`TailReport`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TailRow {
    pub n: i64,
    /// Coefficients of `q^0 … q^N` as decimal strings.
    pub coeffs: Vec<String>,
}

/// Normalized rows, the verified stable prefix and its order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TailReport {
    pub spec: PretzelSpec,
    pub rows: Vec<TailRow>,
    pub stable_prefix: Vec<String>,
    pub verified_order: i64,
}

fn coeff_strings(s: &QSeries) -> Vec<String> {
    s.int_coeffs().iter().map(BigInt::to_string).collect()
}

/// All rows `Ĵ_1 … Ĵ_order`, computed in parallel.
fn rows(spec: &PretzelSpec, order: i64) -> Result<Vec<QLaurent>> {
    (1..=order).into_par_iter().map(|n| jones_hat(n, spec)).collect()
}

fn verify_rows(spec: &PretzelSpec, hats: &[QLaurent]) -> Result<()> {
    for (i, pair) in hats.windows(2).enumerate() {
        let n = i as i64 + 1;
        if !congruent_mod(&pair[0], &pair[1], n) {
            let k = agreement_order(&pair[0], &pair[1], n);
            return Err(Error::StabilityFailure {
                spec: spec.to_string(),
                n,
                next: n + 1,
                detail: format!("rows agree only through q^{k}"),
            });
        }
    }
    Ok(())
}

/// The tail through `q^order`, i.e. `Ĵ_order` truncated at `q^order`, after
/// checking stability for every `n < order`.
pub fn extract_tail(spec: &PretzelSpec, order: i64) -> Result<QSeries> {
    if order < 0 {
        return Err(Error::OutOfRange(format!("tail order must be non-negative, got {order}")));
    }
    if order == 0 {
        return Ok(QSeries::truncate_int(&QLaurent::one(), 0));
    }
    require_tail_class(spec)?;
    let hats = rows(spec, order)?;
    verify_rows(spec, &hats)?;
    Ok(QSeries::truncate_int(&hats[hats.len() - 1], order))
}

/// Full report for `tail`: every row truncated at `q^order`, the verified
/// prefix and the order through which it is verified. Order `0` gives no
/// rows and the prefix `1`.
pub fn tail_report(spec: &PretzelSpec, order: i64) -> Result<TailReport> {
    if order < 0 {
        return Err(Error::OutOfRange(format!("tail order must be non-negative, got {order}")));
    }
    if order == 0 {
        let one = extract_tail(spec, 0)?;
        return Ok(TailReport { spec: spec.clone(), rows: vec![], stable_prefix: coeff_strings(&one), verified_order: 0 });
    }
    require_tail_class(spec)?;
    let hats = rows(spec, order)?;
    verify_rows(spec, &hats)?;
    let truncated: Vec<QSeries> = hats.iter().map(|h| QSeries::truncate_int(h, order)).collect();
    Ok(TailReport {
        spec: spec.clone(),
        rows: truncated
            .iter()
            .enumerate()
            .map(|(i, s)| TailRow { n: i as i64 + 1, coeffs: coeff_strings(s) })
            .collect(),
        stable_prefix: coeff_strings(&truncated[truncated.len() - 1]),
        verified_order: order,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mindeg_substitution() {
        assert_eq!(mindeg_odd_odd_even(1, 1, 1), -11);
        assert_eq!(mindeg_odd_odd_even(2, 1, 1), -28);
        assert_eq!(mindeg_odd_odd_even(3, 2, 1), -69);
    }

    #[test]
    fn agreement_order_counts_leading_matches() {
        let f = QLaurent::from_int_powers([(0, 1), (1, -1)]);
        let g = QLaurent::from_int_powers([(0, 1), (1, -1), (5, 1)]);
        assert_eq!(agreement_order(&f, &g, 10), 4);
        assert_eq!(agreement_order(&f, &f, 10), 10);
    }

    #[test]
    fn order_zero_tail_is_one() {
        let spec = PretzelSpec::new(Family::OddOddEven, vec![1, 1, 1]).unwrap();
        assert_eq!(extract_tail(&spec, 0).unwrap().terms, QLaurent::one());
    }

    #[test]
    fn tails_outside_the_knot_family_are_rejected() {
        let spec = PretzelSpec::new(Family::OddOddEven, vec![0, 0, 1]).unwrap();
        assert!(extract_tail(&spec, 3).is_err());
        let link = PretzelSpec::new(Family::EvenEvenEven, vec![1, 1, 1]).unwrap();
        assert!(check_stability(&link, 1).is_err());
    }
}
