//! A₂ clasps of type `(n,0)` as integral combinations of H-words.
//!
//! `H_i` is the web on parallel strands `i, i+1` that fuses them through a
//! sink and a source joined by a rung. The clasp satisfies
//! `P_1 = 1`, `P_n = A − ([n−1]/[n])·A·H_{n−1}·A` with `A = P_{n−1} ⊗ 1`.
//! To stay in Laurent polynomials we expand `S_n·P_n` where
//! `S_1 = 1`, `S_n = [n]·S_{n−1}²`.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::qcalc::{qint, QLaurent};

/// A word in the generators `H_0 … H_{n−2}` (left to right = bottom to top).
pub type HWord = Vec<u8>;

/// `scale · P_n = Σ coeff · word`.
#[derive(Clone, Debug, PartialEq)]
pub struct ClaspExpansion {
    pub n: usize,
    pub scale: QLaurent,
    pub terms: Vec<(QLaurent, HWord)>,
}

/// Default bound on the clasp size accepted by the oracle.
pub const DEFAULT_CLASP_BOUND: usize = 3;

fn multiply(
    a: &BTreeMap<HWord, QLaurent>,
    b: &BTreeMap<HWord, QLaurent>,
    two: &QLaurent,
) -> BTreeMap<HWord, QLaurent> {
    let mut out: BTreeMap<HWord, QLaurent> = BTreeMap::new();
    for (wa, ca) in a {
        for (wb, cb) in b {
            let mut w = wa.clone();
            let mut c = ca * cb;
            for x in wb {
                // H_i H_i = [2] H_i
                if w.last() == Some(x) {
                    c = &c * two;
                } else {
                    w.push(*x);
                }
            }
            let e = out.entry(w).or_insert_with(QLaurent::zero);
            *e += &c;
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

/// Expands the `(n,0)` clasp. `bound` guards against the exponential growth
/// of the expansion.
pub fn expand_clasp(n: usize, bound: usize) -> Result<ClaspExpansion> {
    if n == 0 {
        return Err(Error::OutOfRange("clasp size must be at least 1".into()));
    }
    if n > bound {
        return Err(Error::ClaspTooLarge { n, bound });
    }
    let two = qint(2)?;
    let mut scale = QLaurent::one();
    let mut cur: BTreeMap<HWord, QLaurent> = BTreeMap::from([(Vec::new(), QLaurent::one())]);
    for m in 2..=n {
        let qm = qint(m as i64)?;
        let qm1 = qint(m as i64 - 1)?;
        let h = BTreeMap::from([(vec![(m - 2) as u8], QLaurent::one())]);
        let ah = multiply(&cur, &h, &two);
        let aha = multiply(&ah, &cur, &two);
        let mut next: BTreeMap<HWord, QLaurent> = BTreeMap::new();
        for (w, c) in &cur {
            next.insert(w.clone(), &(&qm * &scale) * c);
        }
        for (w, c) in aha {
            let e = next.entry(w).or_insert_with(QLaurent::zero);
            *e -= &(&qm1 * &c);
        }
        next.retain(|_, c| !c.is_zero());
        scale = &qm * &(&scale * &scale);
        cur = next;
    }
    Ok(ClaspExpansion { n, scale, terms: cur.into_iter().map(|(w, c)| (c, w)).collect() })
}

impl ClaspExpansion {
    /// `(scale·P)·(scale'·P')` as words, with the product scale.
    pub fn compose(&self, other: &ClaspExpansion) -> Result<ClaspExpansion> {
        if self.n != other.n {
            return Err(Error::OutOfRange("composing clasps of different sizes".into()));
        }
        let two = qint(2)?;
        let a: BTreeMap<HWord, QLaurent> = self.terms.iter().map(|(c, w)| (w.clone(), c.clone())).collect();
        let b: BTreeMap<HWord, QLaurent> = other.terms.iter().map(|(c, w)| (w.clone(), c.clone())).collect();
        let prod = multiply(&a, &b, &two);
        Ok(ClaspExpansion {
            n: self.n,
            scale: &self.scale * &other.scale,
            terms: prod.into_iter().map(|(w, c)| (c, w)).collect(),
        })
    }
}
