//! Exact Laurent polynomials in `q^{1/6}` and the q-combinatorial primitives
//! (quantum integers, factorials, binomials, q-Pochhammer symbols).
//!
//! Exponents are stored as integers counting sixths of a power of `q`, so
//! `q^{-4/3}` has exponent `-8`. Coefficients are arbitrary precision.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// An exponent of `q` measured in units of `1/6`.
pub type Exponent6 = i64;

/// Number of sixths in one whole power of `q`.
pub const WHOLE: Exponent6 = 6;

/// Exact Laurent polynomial in `q^{1/6}` with big-integer coefficients.
///
/// Zero coefficients are never stored, so structural equality is
/// mathematical equality.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct QLaurent {
    terms: BTreeMap<Exponent6, BigInt>,
}

impl QLaurent {
    pub fn zero() -> Self {
        QLaurent::default()
    }

    pub fn one() -> Self {
        QLaurent::monomial(0, 1)
    }

    /// `c · q^{e/6}`.
    pub fn monomial(e: Exponent6, c: impl Into<BigInt>) -> Self {
        let c = c.into();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(e, c);
        }
        QLaurent { terms }
    }

    /// `q^{e/6}`.
    pub fn q_pow(e: Exponent6) -> Self {
        QLaurent::monomial(e, 1)
    }

    pub fn from_int(c: impl Into<BigInt>) -> Self {
        QLaurent::monomial(0, c)
    }

    /// Builds a value from `(exponent_sixths, coefficient)` pairs; repeated
    /// exponents are summed.
    pub fn from_terms<I, C>(it: I) -> Self
    where
        I: IntoIterator<Item = (Exponent6, C)>,
        C: Into<BigInt>,
    {
        let mut out = QLaurent::zero();
        for (e, c) in it {
            out.add_term(e, c.into());
        }
        out
    }

    /// Builds a value with integral exponents from `(power_of_q, coefficient)`.
    pub fn from_int_powers<I, C>(it: I) -> Self
    where
        I: IntoIterator<Item = (i64, C)>,
        C: Into<BigInt>,
    {
        QLaurent::from_terms(it.into_iter().map(|(e, c)| (e * WHOLE, c)))
    }

    pub fn add_term(&mut self, e: Exponent6, c: BigInt) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Iterates `(exponent_sixths, coefficient)` in ascending exponent order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (Exponent6, &BigInt)> + '_ {
        self.terms.iter().map(|(e, c)| (*e, c))
    }

    pub fn coeff(&self, e: Exponent6) -> BigInt {
        self.terms.get(&e).cloned().unwrap_or_default()
    }

    /// Coefficient of the integral power `q^p`.
    pub fn coeff_int(&self, p: i64) -> BigInt {
        self.coeff(p * WHOLE)
    }

    pub fn mindeg6(&self) -> Option<Exponent6> {
        self.terms.keys().next().copied()
    }

    pub fn maxdeg6(&self) -> Option<Exponent6> {
        self.terms.keys().next_back().copied()
    }

    /// Lowest exponent as an integer power of `q`, if it is integral.
    pub fn mindeg(&self) -> Option<i64> {
        self.mindeg6().filter(|e| e % WHOLE == 0).map(|e| e / WHOLE)
    }

    pub fn maxdeg(&self) -> Option<i64> {
        self.maxdeg6().filter(|e| e % WHOLE == 0).map(|e| e / WHOLE)
    }

    /// True when every exponent is a whole power of `q`.
    pub fn has_integral_exponents(&self) -> bool {
        self.terms.keys().all(|e| e % WHOLE == 0)
    }

    /// Multiplies by `q^{e/6}`.
    pub fn shift(&self, e: Exponent6) -> QLaurent {
        QLaurent {
            terms: self.terms.iter().map(|(k, c)| (k + e, c.clone())).collect(),
        }
    }

    /// The substitution `q ↦ q^{-1}`.
    pub fn invert_q(&self) -> QLaurent {
        QLaurent {
            terms: self.terms.iter().map(|(k, c)| (-k, c.clone())).collect(),
        }
    }

    pub fn scale(&self, c: &BigInt) -> QLaurent {
        if c.is_zero() {
            return QLaurent::zero();
        }
        QLaurent {
            terms: self.terms.iter().map(|(k, v)| (*k, v * c)).collect(),
        }
    }

    pub fn pow(&self, k: u32) -> QLaurent {
        let mut acc = QLaurent::one();
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// Sum of all coefficients, i.e. the value at `q = 1`.
    pub fn eval_at_one(&self) -> BigInt {
        self.terms.values().sum()
    }

    /// Exact quotient in the Laurent ring; errors if `b` does not divide `self`.
    pub fn exact_div(&self, b: &QLaurent) -> Result<QLaurent> {
        exact_div(self, b)
    }
}

impl fmt::Debug for QLaurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "QLaurent({self})")
    }
}

/// Formats an exponent in sixths as a reduced fraction, e.g. `-8 → "-4/3"`.
pub fn exponent_string(e: Exponent6) -> String {
    let g = e.gcd(&WHOLE);
    let (num, den) = (e / g, WHOLE / g);
    if den == 1 {
        format!("{num}")
    } else {
        format!("{num}/{den}")
    }
}

impl fmt::Display for QLaurent {
    /// Ascending terms, exponents as reduced fractions: `q^{-4/3} - 2q + 3`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            let mono = match *e {
                0 => String::new(),
                6 => "q".to_string(),
                e => format!("q^{{{}}}", exponent_string(e)),
            };
            if mono.is_empty() {
                write!(f, "{abs}")?;
            } else if abs.is_one() {
                write!(f, "{mono}")?;
            } else {
                write!(f, "{abs}{mono}")?;
            }
        }
        Ok(())
    }
}

impl Serialize for QLaurent {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Wire {
            terms: Vec<(Exponent6, String)>,
        }
        Wire {
            terms: self.terms.iter().map(|(e, c)| (*e, c.to_string())).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for QLaurent {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Wire {
            terms: Vec<(Exponent6, String)>,
        }
        let w = Wire::deserialize(d)?;
        let mut out = QLaurent::zero();
        let mut last = None;
        for (e, c) in w.terms {
            if last.is_some_and(|l| l >= e) {
                return Err(D::Error::custom("terms must be strictly ascending"));
            }
            last = Some(e);
            let c: BigInt = c.parse().map_err(D::Error::custom)?;
            if c.is_zero() {
                return Err(D::Error::custom("zero coefficient stored"));
            }
            out.add_term(e, c);
        }
        Ok(out)
    }
}

impl Add<&QLaurent> for &QLaurent {
    type Output = QLaurent;
    fn add(self, rhs: &QLaurent) -> QLaurent {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Add for QLaurent {
    type Output = QLaurent;
    fn add(mut self, rhs: QLaurent) -> QLaurent {
        self += &rhs;
        self
    }
}

impl AddAssign<&QLaurent> for QLaurent {
    fn add_assign(&mut self, rhs: &QLaurent) {
        for (e, c) in &rhs.terms {
            self.add_term(*e, c.clone());
        }
    }
}

impl AddAssign for QLaurent {
    fn add_assign(&mut self, rhs: QLaurent) {
        for (e, c) in rhs.terms {
            self.add_term(e, c);
        }
    }
}

impl SubAssign<&QLaurent> for QLaurent {
    fn sub_assign(&mut self, rhs: &QLaurent) {
        for (e, c) in &rhs.terms {
            self.add_term(*e, -c);
        }
    }
}

impl Sub<&QLaurent> for &QLaurent {
    type Output = QLaurent;
    fn sub(self, rhs: &QLaurent) -> QLaurent {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Sub for QLaurent {
    type Output = QLaurent;
    fn sub(mut self, rhs: QLaurent) -> QLaurent {
        self -= &rhs;
        self
    }
}

impl Neg for &QLaurent {
    type Output = QLaurent;
    fn neg(self) -> QLaurent {
        QLaurent {
            terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect(),
        }
    }
}

impl Neg for QLaurent {
    type Output = QLaurent;
    fn neg(self) -> QLaurent {
        -&self
    }
}

impl Mul<&QLaurent> for &QLaurent {
    type Output = QLaurent;
    fn mul(self, rhs: &QLaurent) -> QLaurent {
        let mut out = QLaurent::zero();
        if self.is_zero() || rhs.is_zero() {
            return out;
        }
        // Monomial fast path: just shift and scale.
        if rhs.terms.len() == 1 {
            let (e, c) = rhs.terms.iter().next().unwrap();
            return self.shift(*e).scale(c);
        }
        if self.terms.len() == 1 {
            return rhs * self;
        }
        for (e1, c1) in &self.terms {
            for (e2, c2) in &rhs.terms {
                out.add_term(e1 + e2, c1 * c2);
            }
        }
        out
    }
}

impl Mul for QLaurent {
    type Output = QLaurent;
    fn mul(self, rhs: QLaurent) -> QLaurent {
        &self * &rhs
    }
}

impl std::iter::Sum for QLaurent {
    fn sum<I: Iterator<Item = QLaurent>>(iter: I) -> QLaurent {
        let mut acc = QLaurent::zero();
        for x in iter {
            acc += x;
        }
        acc
    }
}

impl std::iter::Product for QLaurent {
    fn product<I: Iterator<Item = QLaurent>>(iter: I) -> QLaurent {
        let mut acc = QLaurent::one();
        for x in iter {
            acc = &acc * &x;
        }
        acc
    }
}

/// Exact division in the Laurent ring `Z[q^{±1/6}]`.
///
/// Long division from the lowest-degree term up. A nonzero remainder means
/// the quotient is not a Laurent polynomial, which in this crate always
/// indicates a wrong summand or a misread formula.
pub fn exact_div(a: &QLaurent, b: &QLaurent) -> Result<QLaurent> {
    if b.is_zero() {
        return Err(Error::DivisionByZero);
    }
    if a.is_zero() {
        return Ok(QLaurent::zero());
    }
    let (bmin, bmax) = (b.mindeg6().unwrap(), b.maxdeg6().unwrap());
    let blow = b.terms[&bmin].clone();
    // The quotient cannot have terms above this exponent.
    let qmax = a.maxdeg6().unwrap() - bmax;
    let mut rem = a.clone();
    let mut quot = QLaurent::zero();
    while let Some(rmin) = rem.mindeg6() {
        let e = rmin - bmin;
        let c = &rem.terms[&rmin];
        let (qc, r) = c.div_rem(&blow);
        if e > qmax || !r.is_zero() {
            return Err(Error::InexactDivision {
                numerator: a.to_string(),
                denominator: b.to_string(),
            });
        }
        for (be, bc) in &b.terms {
            rem.add_term(be + e, -(bc * &qc));
        }
        quot.add_term(e, qc);
    }
    Ok(quot)
}

/// Quantum integer `[n] = Σ_{i=0}^{n-1} q^{(n-1-2i)/2}`.
pub fn qint(n: i64) -> Result<QLaurent> {
    if n < 0 {
        return Err(Error::NegativeArgument { what: "qint", value: n });
    }
    Ok(QLaurent::from_terms((0..n).map(|i| (3 * (n - 1 - 2 * i), 1))))
}

/// Quantum factorial `[n]! = [n][n-1]⋯[1]`.
pub fn qfact(n: i64) -> Result<QLaurent> {
    if n < 0 {
        return Err(Error::NegativeArgument { what: "qfact", value: n });
    }
    (1..=n).map(qint).product()
}

/// Quantum binomial `[n]! / ([k]! [n-k]!)`, computed by exact division.
pub fn qbinom(n: i64, k: i64) -> Result<QLaurent> {
    if n < 0 || k < 0 || k > n {
        return Err(Error::OutOfRange(format!("qbinom({n}, {k}) needs 0 <= k <= n")));
    }
    let den = &qfact(k)? * &qfact(n - k)?;
    exact_div(&qfact(n)?, &den)
}

/// q-Pochhammer symbol `(q)_k = Π_{i=1}^{k} (1 - q^i)`.
pub fn pochhammer(k: i64) -> Result<QLaurent> {
    if k < 0 {
        return Err(Error::NegativeArgument { what: "pochhammer", value: k });
    }
    Ok((1..=k).map(one_minus_q_pow).product())
}

/// `1 - q^i` for an integral power `i`.
pub fn one_minus_q_pow(i: i64) -> QLaurent {
    QLaurent::from_int_powers([(0, 1), (i, -1)])
}

/// Normalization `f̂ = ± q^{-mindeg f} f` with the sign making the constant
/// coefficient positive.
pub fn hat(f: &QLaurent) -> Result<QLaurent> {
    let m = f.mindeg6().ok_or(Error::ZeroInput("hat"))?;
    let shifted = f.shift(-m);
    Ok(if shifted.coeff(0).is_negative() { -shifted } else { shifted })
}

/// `f ≡_n g`: the coefficients of `q^0, …, q^n` agree.
pub fn congruent_mod(f: &QLaurent, g: &QLaurent, n: i64) -> bool {
    (0..=n).all(|p| f.coeff_int(p) == g.coeff_int(p))
}

/// A power series known only through `truncation_order` (inclusive, in
/// sixths); every coefficient above it is unspecified.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QSeries {
    pub terms: QLaurent,
    pub truncation_order: Exponent6,
}

impl QSeries {
    /// Truncates `f` so it only claims coefficients through `order` (sixths).
    pub fn truncate(f: &QLaurent, order: Exponent6) -> QSeries {
        QSeries {
            terms: QLaurent {
                terms: f.terms.range(..=order).map(|(e, c)| (*e, c.clone())).collect(),
            },
            truncation_order: order,
        }
    }

    /// Truncation at the integral power `q^order`.
    pub fn truncate_int(f: &QLaurent, order: i64) -> QSeries {
        QSeries::truncate(f, order * WHOLE)
    }

    pub fn add(&self, other: &QSeries) -> QSeries {
        let order = self.truncation_order.min(other.truncation_order);
        QSeries::truncate(&(&self.terms + &other.terms), order)
    }

    /// Product of truncated series. For series with nonnegative valuation the
    /// known range is the minimum of the operands' orders; a positive
    /// valuation in one factor can only extend it.
    pub fn mul(&self, other: &QSeries) -> QSeries {
        let v1 = self.terms.mindeg6().unwrap_or(self.truncation_order).min(self.truncation_order);
        let v2 = other.terms.mindeg6().unwrap_or(other.truncation_order).min(other.truncation_order);
        let order = (self.truncation_order + v2.max(0)).min(other.truncation_order + v1.max(0));
        let order = order.max(self.truncation_order.min(other.truncation_order));
        QSeries::truncate(&(&self.terms * &other.terms), order)
    }

    /// Coefficients of `q^0..=q^{order}` as integers (for integral series).
    pub fn int_coeffs(&self) -> Vec<BigInt> {
        (0..=self.truncation_order / WHOLE).map(|p| self.terms.coeff_int(p)).collect()
    }
}

/// `[n]` extended to negative `n` by `[-n] = -[n]`, which is what the
/// formula `(q^{n/2} - q^{-n/2}) / (q^{1/2} - q^{-1/2})` gives.
fn qint_signed(n: i64) -> QLaurent {
    let v = qint(n.abs()).expect("nonnegative argument");
    if n < 0 {
        -v
    } else {
        v
    }
}

/// Checks `[a][b] = Σ_{i=1}^{a} [a+b−(2i−1)]`. When `a > b` some summands
/// have nonpositive index; they are read with `[-m] = -[m]` and cancel.
pub fn product_expansion_holds(a: i64, b: i64) -> Result<bool> {
    let lhs = &qint(a)? * &qint(b)?;
    let rhs: QLaurent = (1..=a).map(|i| qint_signed(a + b - (2 * i - 1))).sum();
    Ok(lhs == rhs)
}

/// Checks `[a][b] − [a−c][b−c] = [a+b−c][c]` (needs `c ≤ a, b`).
pub fn difference_identity_holds(a: i64, b: i64, c: i64) -> Result<bool> {
    let lhs = &(&qint(a)? * &qint(b)?) - &(&qint(a - c)? * &qint(b - c)?);
    Ok(lhs == &qint(a + b - c)? * &qint(c)?)
}

/// Checks `[a][b−c] + [c][a−c] = [b][a−c]` exactly as stated (needs
/// `c ≤ a, b`). This only holds on part of the parameter range; see
/// [`run_identity_suite`].
pub fn third_identity_holds(a: i64, b: i64, c: i64) -> Result<bool> {
    let lhs = &(&qint(a)? * &qint(b - c)?) + &(&qint(c)? * &qint(a - c)?);
    Ok(lhs == &qint(b)? * &qint(a - c)?)
}

/// Outcome of the quantum-integer identity suite over `1 ≤ c ≤ a, b ≤ max`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdentityReport {
    pub max: i64,
    /// Pairs `(a, b)` checked for the product expansion and the failures.
    pub product_checked: usize,
    pub product_failures: Vec<(i64, i64)>,
    /// Triples `(a, b, c)` checked for the difference identity and failures.
    pub difference_checked: usize,
    pub difference_failures: Vec<(i64, i64, i64)>,
    /// Triples on which the third identity holds, out of `difference_checked`.
    pub third_holds: Vec<(i64, i64, i64)>,
    /// True when the third identity holds exactly on the triples with `b = c`.
    pub third_region_is_b_eq_c: bool,
}

impl IdentityReport {
    /// The first two identities hold everywhere.
    pub fn passed(&self) -> bool {
        self.product_failures.is_empty() && self.difference_failures.is_empty()
    }
}

/// Runs the three identities over `1 ≤ c ≤ a, b ≤ max`.
pub fn run_identity_suite(max: i64) -> Result<IdentityReport> {
    let mut r = IdentityReport {
        max,
        product_checked: 0,
        product_failures: vec![],
        difference_checked: 0,
        difference_failures: vec![],
        third_holds: vec![],
        third_region_is_b_eq_c: true,
    };
    for a in 1..=max {
        for b in 1..=max {
            r.product_checked += 1;
            if !product_expansion_holds(a, b)? {
                r.product_failures.push((a, b));
            }
            for c in 1..=a.min(b) {
                r.difference_checked += 1;
                if !difference_identity_holds(a, b, c)? {
                    r.difference_failures.push((a, b, c));
                }
                let holds = third_identity_holds(a, b, c)?;
                if holds {
                    r.third_holds.push((a, b, c));
                }
                if holds != (b == c) {
                    r.third_region_is_b_eq_c = false;
                }
            }
        }
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(p: i64) -> QLaurent {
        QLaurent::q_pow(p * WHOLE)
    }

    #[test]
    fn small_quantum_integers() {
        assert!(qint(0).unwrap().is_zero());
        assert_eq!(qint(1).unwrap(), QLaurent::one());
        assert_eq!(qint(2).unwrap(), QLaurent::from_terms([(3, 1), (-3, 1)]));
        assert_eq!(qint(3).unwrap(), &(&q(1) + &QLaurent::one()) + &q(-1));
        assert!(qint(-1).is_err());
    }

    #[test]
    fn display_uses_reduced_fractions() {
        let f = QLaurent::from_terms([(-8, 1), (6, -2), (0, 3), (3, 1)]);
        assert_eq!(f.to_string(), "q^{-4/3} + 3 + q^{1/2} - 2q");
    }

    #[test]
    fn json_round_trip() {
        let f = QLaurent::from_terms([(-8, 12345678901234567890_i128), (6, -2)]);
        let s = serde_json::to_string(&f).unwrap();
        assert_eq!(s, r#"{"terms":[[-8,"12345678901234567890"],[6,"-2"]]}"#);
        let g: QLaurent = serde_json::from_str(&s).unwrap();
        assert_eq!(f, g);
        assert!(serde_json::from_str::<QLaurent>(r#"{"terms":[[1,"1"],[0,"1"]]}"#).is_err());
    }

    #[test]
    fn exact_division_detects_remainders() {
        let a = &qint(2).unwrap() * &qint(3).unwrap();
        assert_eq!(exact_div(&a, &qint(2).unwrap()).unwrap(), qint(3).unwrap());
        assert!(exact_div(&qint(3).unwrap(), &qint(2).unwrap()).is_err());
        assert_eq!(
            exact_div(&pochhammer(3).unwrap(), &pochhammer(2).unwrap()).unwrap(),
            one_minus_q_pow(3)
        );
    }

    #[test]
    fn series_truncation_propagates() {
        let a = QSeries::truncate_int(&QLaurent::from_int_powers([(0, 1), (1, -1), (5, 7)]), 3);
        let b = QSeries::truncate_int(&QLaurent::from_int_powers([(0, 1), (2, 1)]), 6);
        assert_eq!(a.add(&b).truncation_order, 18);
        let p = a.mul(&b);
        assert_eq!(p.truncation_order, 18);
        assert_eq!(p.int_coeffs().len(), 4);
    }
}

/// Exact quotient `num / Π_j (1 - q^j)^{m_j}` used while summing
/// coefficients that are individually rational but whose total is a Laurent
/// polynomial.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct QFrac {
    num: QLaurent,
    den: BTreeMap<i64, u32>,
}

impl QFrac {
    pub fn zero() -> Self {
        QFrac::default()
    }

    pub fn one() -> Self {
        QFrac::from(QLaurent::one())
    }

    /// `num / Π (1 - q^j)` over the listed `j ≥ 1` (repeats allowed).
    pub fn new(num: QLaurent, den_factors: &[i64]) -> Result<Self> {
        let mut den = BTreeMap::new();
        for &j in den_factors {
            if j < 1 {
                return Err(Error::OutOfRange(format!("denominator factor 1 - q^{j} needs j >= 1")));
            }
            *den.entry(j).or_insert(0) += 1;
        }
        let mut f = QFrac { num, den };
        f.reduce();
        Ok(f)
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn numerator(&self) -> &QLaurent {
        &self.num
    }

    /// Denominator factors `(j, multiplicity)` of `Π (1 - q^j)^m`.
    pub fn denominator(&self) -> impl Iterator<Item = (i64, u32)> + '_ {
        self.den.iter().map(|(j, m)| (*j, *m))
    }

    /// Cancels every denominator factor that divides the numerator.
    pub fn reduce(&mut self) {
        if self.num.is_zero() {
            self.den.clear();
            return;
        }
        let js: Vec<i64> = self.den.keys().copied().collect();
        for j in js {
            let f = one_minus_q_pow(j);
            while self.den.get(&j).copied().unwrap_or(0) > 0 {
                match exact_div(&self.num, &f) {
                    Ok(q) => {
                        self.num = q;
                        let m = self.den.get_mut(&j).unwrap();
                        *m -= 1;
                        if *m == 0 {
                            self.den.remove(&j);
                        }
                    }
                    Err(_) => break,
                }
            }
        }
    }

    /// The value as a Laurent polynomial, or an error if a denominator
    /// survives.
    pub fn into_laurent(mut self) -> Result<QLaurent> {
        self.reduce();
        if self.den.is_empty() {
            Ok(self.num)
        } else {
            let den: QLaurent = self.denominator().flat_map(|(j, m)| std::iter::repeat_n(j, m as usize)).map(one_minus_q_pow).product();
            Err(Error::InexactDivision { numerator: self.num.to_string(), denominator: den.to_string() })
        }
    }

    pub fn mul(&self, other: &QFrac) -> QFrac {
        if self.is_zero() || other.is_zero() {
            return QFrac::zero();
        }
        let mut den = self.den.clone();
        for (j, m) in &other.den {
            *den.entry(*j).or_insert(0) += m;
        }
        QFrac { num: &self.num * &other.num, den }
    }

    pub fn mul_laurent(&self, other: &QLaurent) -> QFrac {
        if other.is_zero() {
            return QFrac::zero();
        }
        QFrac { num: &self.num * other, den: self.den.clone() }
    }

    /// In-place sum; denominators are brought to their least common multiple
    /// without reducing (call [`QFrac::reduce`] when convenient).
    pub fn add_assign(&mut self, other: &QFrac) {
        if other.is_zero() {
            return;
        }
        if self.is_zero() {
            *self = other.clone();
            return;
        }
        if self.den == other.den {
            self.num += &other.num;
            if self.num.is_zero() {
                self.den.clear();
            }
            return;
        }
        let mut lcm = self.den.clone();
        for (j, m) in &other.den {
            let e = lcm.entry(*j).or_insert(0);
            *e = (*e).max(*m);
        }
        let lift = |f: &QFrac| -> QLaurent {
            let mut x = f.num.clone();
            for (j, m) in &lcm {
                let have = f.den.get(j).copied().unwrap_or(0);
                for _ in have..*m {
                    x = &x * &one_minus_q_pow(*j);
                }
            }
            x
        };
        let num = &lift(self) + &lift(other);
        self.num = num;
        self.den = if self.num.is_zero() { BTreeMap::new() } else { lcm };
    }
}

impl From<QLaurent> for QFrac {
    fn from(num: QLaurent) -> Self {
        QFrac { num, den: BTreeMap::new() }
    }
}
