//! Scalar coefficients of the twist and bubble expansions.
//!
//! Every coefficient is a ratio of q-Pochhammer products times a monomial.
//! Ratios are evaluated by cancelling common `(1 - q^i)` factors first and
//! then dividing the leftover denominator factors out of the numerator one
//! at a time; a nonzero remainder is reported as an error.
//!
//! All public functions are memoized in process-wide concurrent maps.

use std::hash::Hash;

use dashmap::DashMap;
use num_bigint::BigInt;
use num_traits::Zero;
use once_cell::sync::Lazy;

use crate::error::{Error, Result};
use crate::qcalc::{exact_div, qint, Exponent6, QFrac, QLaurent, WHOLE};

/// Sign of a twist: `+1` or `-1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    /// Sign of a nonzero integer.
    pub fn of(x: i64) -> Option<Sign> {
        match x.signum() {
            1 => Some(Sign::Plus),
            -1 => Some(Sign::Minus),
            _ => None,
        }
    }

    pub fn value(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }
}

/// A nonincreasing chain `n = k_0 ≥ k_1 ≥ … ≥ k_m ≥ 0`; `k_0` is implicit.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TwistChain {
    pub n: i64,
    pub ks: Vec<i64>,
}

impl TwistChain {
    pub fn new(n: i64, ks: Vec<i64>) -> Result<Self> {
        if n < 0 {
            return Err(Error::NegativeArgument { what: "TwistChain", value: n });
        }
        let mut prev = n;
        for &k in &ks {
            if k < 0 || k > prev {
                return Err(Error::OutOfRange(format!("chain {ks:?} is not nonincreasing within [0, {n}]")));
            }
            prev = k;
        }
        Ok(TwistChain { n, ks })
    }

    /// Last index `k_m`, or `n` for the empty chain.
    pub fn last(&self) -> i64 {
        self.ks.last().copied().unwrap_or(self.n)
    }

    /// Consecutive differences `k_{i-1} - k_i` for `i = 1..=m`.
    fn steps(&self) -> impl Iterator<Item = i64> + '_ {
        std::iter::once(self.n).chain(self.ks.iter().copied()).zip(self.ks.iter()).map(|(a, b)| a - b)
    }

    /// Every chain of length `m` for color `n`, in lexicographic order.
    pub fn enumerate(n: i64, m: usize) -> Vec<TwistChain> {
        let mut out = Vec::new();
        let mut cur = Vec::with_capacity(m);
        fn rec(n: i64, m: usize, prev: i64, cur: &mut Vec<i64>, out: &mut Vec<TwistChain>) {
            if cur.len() == m {
                out.push(TwistChain { n, ks: cur.clone() });
                return;
            }
            for k in (0..=prev).rev() {
                cur.push(k);
                rec(n, m, k, cur, out);
                cur.pop();
            }
        }
        rec(n, m, n, &mut cur, &mut out);
        out
    }
}

/// `(n² + 3n)` — three times the framing exponent of the color `(n,0)`.
pub fn casimir3(n: i64) -> i64 {
    n * n + 3 * n
}

/// Evaluates `q^{e/6} · Π_num (1-q^i) / Π_den (1-q^j)` where the arguments
/// list Pochhammer subscripts `(q)_k` and `extra_*` list single factors.
///
/// The result must be a Laurent polynomial; see [`pochhammer_ratio_frac`]
/// for ratios that are only rational.
pub fn pochhammer_ratio(
    e6: Exponent6,
    num: &[i64],
    den: &[i64],
    extra_num: &[i64],
    extra_den: &[i64],
) -> Result<QLaurent> {
    pochhammer_ratio_frac(e6, num, den, extra_num, extra_den)?.into_laurent().map_err(|_| Error::InexactDivision {
        numerator: format!("Pochhammer product {num:?}·{extra_num:?}"),
        denominator: format!("{den:?}·{extra_den:?}"),
    })
}

/// Same product as [`pochhammer_ratio`], returned as an exact fraction whose
/// denominator keeps only the factors that do not divide the numerator.
pub fn pochhammer_ratio_frac(
    e6: Exponent6,
    num: &[i64],
    den: &[i64],
    extra_num: &[i64],
    extra_den: &[i64],
) -> Result<QFrac> {
    let mut mult: std::collections::BTreeMap<i64, i64> = Default::default();
    let mut bump = |i: i64, by: i64| -> Result<()> {
        if i < 0 {
            return Err(Error::OutOfRange(format!("negative Pochhammer index {i}")));
        }
        if i > 0 {
            *mult.entry(i).or_default() += by;
        }
        Ok(())
    };
    for &k in num {
        if k < 0 {
            return Err(Error::OutOfRange(format!("(q)_{k} with negative subscript")));
        }
        for i in 1..=k {
            bump(i, 1)?;
        }
    }
    for &k in den {
        if k < 0 {
            return Err(Error::OutOfRange(format!("(q)_{k} with negative subscript")));
        }
        for i in 1..=k {
            bump(i, -1)?;
        }
    }
    for &i in extra_num {
        if i == 0 {
            return Ok(QFrac::zero());
        }
        bump(i, 1)?;
    }
    for &i in extra_den {
        if i == 0 {
            return Err(Error::DivisionByZero);
        }
        bump(i, -1)?;
    }
    // Dense integer polynomial for the numerator leftovers.
    let mut poly: Vec<BigInt> = vec![BigInt::from(1)];
    for (&i, &m) in &mult {
        for _ in 0..m.max(0) {
            let i = i as usize;
            let mut next = vec![BigInt::zero(); poly.len() + i];
            for (d, c) in poly.iter().enumerate() {
                next[d] += c;
                next[d + i] -= c;
            }
            poly = next;
        }
    }
    let mut leftover = Vec::new();
    for (&j, &m) in &mult {
        for _ in 0..(-m).max(0) {
            match div_one_minus_q_pow(&poly, j as usize) {
                Some(r) => poly = r,
                None => leftover.push(j),
            }
        }
    }
    let num = QLaurent::from_terms(poly.into_iter().enumerate().map(|(d, c)| (d as i64 * WHOLE + e6, c)));
    QFrac::new(num, &leftover)
}

/// Divides a dense polynomial by `1 - q^j`, or `None` on a remainder.
fn div_one_minus_q_pow(p: &[BigInt], j: usize) -> Option<Vec<BigInt>> {
    let deg = p.len() - 1;
    if deg < j {
        return if p.iter().all(Zero::is_zero) { Some(vec![BigInt::zero()]) } else { None };
    }
    // p = (1 - q^j) r  ⇔  r_i = p_i + r_{i-j}.
    let mut r: Vec<BigInt> = Vec::with_capacity(deg - j + 1);
    for i in 0..=deg - j {
        let prev = if i >= j { r[i - j].clone() } else { BigInt::zero() };
        r.push(&p[i] + prev);
    }
    for i in deg - j + 1..=deg {
        let prev = if i >= j { r[i - j].clone() } else { BigInt::zero() };
        // Here r_i must vanish, so p_i = -r_{i-j}.
        if p[i] != -prev {
            return None;
        }
    }
    Some(r)
}

fn memo<K, V, F>(map: &DashMap<K, V>, key: K, f: F) -> Result<V>
where
    K: Eq + Hash,
    V: Clone,
    F: FnOnce() -> Result<V>,
{
    if let Some(v) = map.get(&key) {
        return Ok(v.clone());
    }
    let v = f()?;
    map.insert(key, v.clone());
    Ok(v)
}

static DELTA: Lazy<DashMap<i64, QLaurent>> = Lazy::new(DashMap::new);
static PHI: Lazy<DashMap<(TwistChain, Sign), QLaurent>> = Lazy::new(DashMap::new);
static CHI: Lazy<DashMap<(TwistChain, Sign), QLaurent>> = Lazy::new(DashMap::new);
static PSI: Lazy<DashMap<(i64, i64, i64, i64), QFrac>> = Lazy::new(DashMap::new);
static OMEGA: Lazy<DashMap<(i64, i64, i64, i64), QFrac>> = Lazy::new(DashMap::new);

/// Value of the clasped `(n,0)` loop, `Δ(n,0) = [n+1][n+2]/[2]`.
pub fn delta(n: i64) -> Result<QLaurent> {
    if n < 0 {
        return Err(Error::NegativeArgument { what: "delta", value: n });
    }
    memo(&DELTA, n, || exact_div(&(&qint(n + 1)? * &qint(n + 2)?), &qint(2)?))
}

/// Framing correction `q^{-w(n²+3n)/3}` for writhe `w`.
pub fn framing(n: i64, w: i64) -> QLaurent {
    QLaurent::q_pow(-2 * w * casimir3(n))
}

/// Coefficient of the `m`-fold full twist of two oppositely oriented
/// `n`-cables, indexed by a chain of length `m ≥ 1`; `eps = Minus` applies
/// `q ↦ q^{-1}`.
pub fn phi(chain: &TwistChain, eps: Sign) -> Result<QLaurent> {
    if chain.ks.is_empty() {
        return Err(Error::OutOfRange("phi needs a nonempty chain".into()));
    }
    memo(&PHI, (chain.clone(), eps), || {
        let n = chain.n;
        let m = chain.ks.len() as i64;
        let km = chain.last();
        let sq: i64 = chain.ks.iter().map(|k| k * k + 2 * k).sum();
        let e6 = -4 * m * casimir3(n) + WHOLE * (n - km) + WHOLE * sq;
        let mut den: Vec<i64> = chain.steps().collect();
        den.push(km);
        den.push(km);
        let v = pochhammer_ratio(e6, &[n, n], &den, &[], &[])?;
        Ok(match eps {
            Sign::Plus => v,
            Sign::Minus => v.invert_q(),
        })
    })
}

/// Coefficient of `m` half twists of two parallel `n`-cables.
///
/// The negative version is the bar image of the positive one; it is written
/// out explicitly here and the two are cross-checked in the tests.
pub fn chi(chain: &TwistChain, s: Sign) -> Result<QLaurent> {
    if chain.ks.is_empty() {
        return Err(Error::OutOfRange("chi needs a nonempty chain".into()));
    }
    memo(&CHI, (chain.clone(), s), || {
        let n = chain.n;
        let m = chain.ks.len() as i64;
        let km = chain.last();
        let ksum: i64 = chain.ks.iter().sum();
        let negative = (n * m + ksum) % 2 != 0;
        let e6 = match s {
            Sign::Plus => {
                let sq: i64 = chain.ks.iter().map(|k| k * k + k).sum();
                -casimir3(n) * m + 3 * (n - km) + 3 * sq
            }
            Sign::Minus => {
                let sq: i64 = chain.ks.iter().map(|k| k * k - k).sum();
                let cross: i64 = std::iter::once(n)
                    .chain(chain.ks.iter().copied())
                    .zip(chain.ks.iter())
                    .map(|(a, b)| a * b)
                    .sum();
                casimir3(n) * m - 3 * (n - km) + 3 * sq - WHOLE * cross
            }
        };
        let mut den: Vec<i64> = chain.steps().collect();
        den.push(km);
        let v = pochhammer_ratio(e6, &[n], &den, &[], &[])?;
        Ok(if negative { -v } else { v })
    })
}

fn check_bubble_range(n: i64, t: i64, k: i64, l: i64) -> Result<()> {
    if !(0..=n).contains(&k) || !(0..=n).contains(&l) || t < k.max(l) || t > (k + l).min(n) {
        return Err(Error::OutOfRange(format!(
            "bubble index t={t} outside [max(k,l), min(k+l,n)] for n={n}, k={k}, l={l}"
        )));
    }
    Ok(())
}

/// Bubble coefficient merging two antiparallel twist webs with through
/// indices `k`, `l` into one with through index `t`.
///
/// Like [`omega`] this is rational in general (`ψ(2,1,1,1)` has a surviving
/// `1 + q` in the denominator), hence the fraction return type.
pub fn psi(n: i64, t: i64, k: i64, l: i64) -> Result<QFrac> {
    check_bubble_range(n, t, k, l)?;
    memo(&PSI, (n, t, k, l), || {
        let e6 = WHOLE * ((t + 1) * (t - k - l) + k * l);
        pochhammer_ratio_frac(
            e6,
            &[k, l, n - k, n - k, n - l, n - l, 2 * n - t + 2],
            &[n, n, n - t, n - t, t - k, t - l, 2 * n - k - l + 2, k + l - t],
            &[],
            &[],
        )
    })
}

/// Junction coefficient merging two parallel half-twist webs, as used by the
/// pretzel families with two same-direction twist regions side by side.
///
/// Equal to `q^{(k+l)/2 - t} ψ(n,t,k,l) (1-q^{n+1-k})(1-q^{n+1-l}) /
/// (1-q^{n+1-t})²`, i.e. `[n-k+1][n-l+1]/[n-t+1]² · ψ`. It is rational in
/// general (e.g. `n=2, t=1, k=0, l=1` gives `[3]/[2]`), so it is returned as
/// an exact fraction; the assembled invariants are Laurent polynomials.
pub fn omega(n: i64, t: i64, k: i64, l: i64) -> Result<QFrac> {
    check_bubble_range(n, t, k, l)?;
    memo(&OMEGA, (n, t, k, l), || {
        let e6 = WHOLE * ((t + 1) * (t - k - l) + k * l) + 3 * (k + l - 2 * t);
        pochhammer_ratio_frac(
            e6,
            &[k, l, n - k, n - k, n - l, n - l, 2 * n - t + 2],
            &[n, n, n - t, n - t, t - k, t - l, 2 * n - k - l + 2, k + l - t],
            &[n + 1 - k, n + 1 - l],
            &[n + 1 - t, n + 1 - t],
        )
    })
}

/// Closure of an antiparallel twist web with through index `t`, divided by
/// `Δ(n,0)`: `q^{-(n-t)} (1-q^{n+1})(1-q^{n+2}) / ((1-q^{t+1})(1-q^{t+2}))`.
pub fn closure_antiparallel(n: i64, t: i64) -> Result<QFrac> {
    if !(0..=n).contains(&t) {
        return Err(Error::OutOfRange(format!("closure index {t} outside [0, {n}]")));
    }
    pochhammer_ratio_frac(-WHOLE * (n - t), &[], &[], &[n + 1, n + 2], &[t + 1, t + 2])
}

/// Braid-like closure of a parallel half-twist web with through index `k`,
/// divided by `Δ(n,0)`: `[n+1][n+2]/[n-k+2]`, i.e.
/// `q^{-(n+k)/2} (1-q^{n+1})(1-q^{n+2}) / ((1-q)(1-q^{n-k+2}))`.
pub fn closure_parallel(n: i64, k: i64) -> Result<QFrac> {
    if !(0..=n).contains(&k) {
        return Err(Error::OutOfRange(format!("closure index {k} outside [0, {n}]")));
    }
    pochhammer_ratio_frac(-3 * (n + k), &[], &[], &[n + 1, n + 2], &[1, n - k + 2])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcalc::pochhammer;

    fn chain(n: i64, ks: &[i64]) -> TwistChain {
        TwistChain::new(n, ks.to_vec()).unwrap()
    }

    #[test]
    fn delta_small() {
        assert_eq!(delta(0).unwrap(), QLaurent::one());
        assert_eq!(delta(1).unwrap(), qint(3).unwrap());
    }

    #[test]
    fn framing_monomials() {
        assert_eq!(framing(3, 0), QLaurent::one());
        assert_eq!(framing(1, 1), QLaurent::q_pow(-8));
        assert_eq!(framing(2, -3), QLaurent::q_pow(60));
    }

    #[test]
    fn hand_evaluated_twists() {
        assert_eq!(phi(&chain(1, &[1]), Sign::Plus).unwrap(), QLaurent::q_pow(2));
        let one_minus_q = QLaurent::from_int_powers([(0, 1), (1, -1)]);
        assert_eq!(phi(&chain(1, &[0]), Sign::Plus).unwrap(), one_minus_q.shift(-10));
        assert_eq!(chi(&chain(1, &[1]), Sign::Plus).unwrap(), QLaurent::q_pow(2));
        assert_eq!(chi(&chain(1, &[0]), Sign::Plus).unwrap(), QLaurent::monomial(-1, -1));
        assert_eq!(chi(&chain(1, &[1]), Sign::Minus).unwrap(), QLaurent::q_pow(-2));
        assert_eq!(chi(&chain(1, &[0]), Sign::Minus).unwrap(), QLaurent::monomial(1, -1));
    }

    #[test]
    fn negative_half_twist_is_bar_image() {
        for n in 0..=5 {
            for m in 1..=3 {
                for c in TwistChain::enumerate(n, m) {
                    let plus = chi(&c, Sign::Plus).unwrap();
                    assert_eq!(chi(&c, Sign::Minus).unwrap(), plus.invert_q(), "{c:?}");
                }
            }
        }
    }

    #[test]
    fn bubble_boundary_cases() {
        for n in 0..=6 {
            assert_eq!(psi(n, 0, 0, 0).unwrap(), QFrac::one());
            assert_eq!(omega(n, 0, 0, 0).unwrap(), QFrac::one());
            for k in 0..=n {
                assert_eq!(psi(n, k, k, 0).unwrap(), QFrac::one());
            }
        }
        assert!(psi(2, 0, 1, 1).is_err());
    }

    #[test]
    fn coefficients_are_defined_on_grid() {
        for n in 0..=6 {
            for k in 0..=n {
                for l in 0..=n {
                    for t in k.max(l)..=(k + l).min(n) {
                        psi(n, t, k, l).unwrap();
                        omega(n, t, k, l).unwrap();
                    }
                }
                closure_antiparallel(n, k).unwrap();
                closure_parallel(n, k).unwrap();
            }
            for m in 1..=3 {
                for c in TwistChain::enumerate(n, m) {
                    phi(&c, Sign::Plus).unwrap();
                    chi(&c, Sign::Plus).unwrap();
                }
            }
        }
    }

    #[test]
    fn ratio_matches_direct_division() {
        // (q)_5 / ((q)_2 (q)_3) is the Gaussian binomial [5 choose 2]_q.
        let direct = exact_div(
            &pochhammer(5).unwrap(),
            &(&pochhammer(2).unwrap() * &pochhammer(3).unwrap()),
        )
        .unwrap();
        assert_eq!(pochhammer_ratio(0, &[5], &[2, 3], &[], &[]).unwrap(), direct);
        assert!(pochhammer_ratio(0, &[2], &[3], &[], &[]).is_err());
    }

    #[test]
    fn closures_at_full_index() {
        for n in 0..=5 {
            assert_eq!(closure_antiparallel(n, n).unwrap(), QFrac::one());
            // Braid closure of two untwisted parallel cables is a split pair.
            assert_eq!(closure_parallel(n, n).unwrap(), QFrac::from(delta(n).unwrap()));
        }
    }
}
