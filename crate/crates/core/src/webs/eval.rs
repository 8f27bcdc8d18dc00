//! Skein evaluation: crossing resolution, web reduction and link invariants.

use std::collections::HashMap;

use dashmap::DashMap;
use once_cell::sync::Lazy;
use rayon::prelude::*;

use crate::coeffs::framing;
use crate::error::{Error, Result};
use crate::qcalc::{exact_div, qint, QLaurent};

use super::clasp::{expand_clasp, ClaspExpansion, HWord};
use super::diagram::{word_tangle, LinkDiagram};
use super::map::{Face, SquareSide, Web, WebCode};

/// A linear combination of webs with structurally identical webs merged.
#[derive(Clone, Debug, Default)]
pub struct WebSum {
    terms: HashMap<WebCode, (Web, QLaurent)>,
}

impl WebSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn single(web: Web) -> Self {
        let mut s = Self::new();
        s.add(QLaurent::one(), web);
        s
    }

    /// Adds `coeff · web` (canonicalizing the web, without reducing it).
    pub fn add(&mut self, coeff: QLaurent, web: Web) {
        let (code, web) = web.canonical();
        self.add_canonical(code, web, coeff);
    }

    fn add_canonical(&mut self, code: WebCode, web: Web, coeff: QLaurent) {
        match self.terms.entry(code) {
            std::collections::hash_map::Entry::Occupied(mut e) => {
                e.get_mut().1 += &coeff;
                if e.get().1.is_zero() {
                    e.remove();
                }
            }
            std::collections::hash_map::Entry::Vacant(e) => {
                if !coeff.is_zero() {
                    e.insert((web, coeff));
                }
            }
        }
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn scale(&self, c: &QLaurent) -> WebSum {
        WebSum { terms: self.terms.iter().map(|(k, (w, x))| (k.clone(), (w.clone(), x * c))).collect() }
    }

    pub fn sub(&self, other: &WebSum) -> WebSum {
        let mut out = self.clone();
        for (k, (w, c)) in &other.terms {
            out.add_canonical(k.clone(), w.clone(), -c);
        }
        out
    }

    /// Coefficient of the empty web (the scalar part).
    pub fn scalar(&self) -> QLaurent {
        self.terms.values().filter(|(w, _)| w.is_empty()).map(|(_, c)| c.clone()).sum()
    }

    /// True when every term is the empty web.
    pub fn is_scalar(&self) -> bool {
        self.terms.values().all(|(w, _)| w.is_empty())
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Web, &QLaurent)> {
        self.terms.values().map(|(w, c)| (w, c))
    }

    fn merge_all(parts: Vec<Vec<(QLaurent, Web)>>) -> WebSum {
        let canon: Vec<(WebCode, Web, QLaurent)> = parts
            .into_par_iter()
            .flat_map_iter(|v| v.into_iter())
            .map(|(c, w)| {
                let (code, w) = w.canonical();
                (code, w, c)
            })
            .collect();
        let mut out = WebSum::new();
        for (code, w, c) in canon {
            out.add_canonical(code, w, c);
        }
        out
    }
}

impl PartialEq for WebSum {
    fn eq(&self, other: &Self) -> bool {
        self.terms.len() == other.terms.len()
            && self.terms.iter().all(|(k, (_, c))| other.terms.get(k).map_or(false, |(_, d)| c == d))
    }
}

static CLOSED: Lazy<DashMap<WebCode, QLaurent>> = Lazy::new(DashMap::new);

fn q3() -> QLaurent {
    qint(3).expect("[3] is defined")
}

fn q2() -> QLaurent {
    qint(2).expect("[2] is defined")
}

/// Evaluates a web made only of trivalent vertices and free loops.
pub fn evaluate_closed(mut w: Web) -> Result<QLaurent> {
    let mut c = q3().pow(w.take_loops());
    let (rest, comps) = w.split_closed();
    if !rest.is_empty() {
        return Err(Error::Diagram("closed evaluation of a web with crossings or boundary".into()));
    }
    for comp in comps {
        c = &c * &evaluate_connected(comp)?;
    }
    Ok(c)
}

fn evaluate_connected(w: Web) -> Result<QLaurent> {
    let (code, mut w) = w.canonical();
    if let Some(v) = CLOSED.get(&code) {
        return Ok(v.clone());
    }
    let value = match w.find_face(None) {
        Some(Face::Bigon(b)) => {
            w.reduce_bigon(b);
            &q2() * &evaluate_closed(w)?
        }
        Some(Face::Square(s)) => {
            evaluate_closed(w.reduce_square(s, SquareSide::First))?
                + evaluate_closed(w.reduce_square(s, SquareSide::Second))?
        }
        None => {
            return Err(Error::Diagram("closed web without a reducible face (broken planarity data)".into()));
        }
    };
    CLOSED.insert(code, value.clone());
    Ok(value)
}

/// Applies loop, bigon and square removal until no reducible face remains,
/// evaluating closed components to scalars. Pushes the resulting terms.
fn simplify(mut w: Web, mut c: QLaurent, out: &mut Vec<(QLaurent, Web)>) -> Result<()> {
    loop {
        let l = w.take_loops();
        if l > 0 {
            c = &c * &q3().pow(l);
        }
        let face = w.find_face(None);
        if let Some(Face::Bigon(b)) = face {
            w.reduce_bigon(b);
            c = &c * &q2();
            continue;
        }
        let (rest, closed) = w.split_closed();
        if !closed.is_empty() {
            for cw in closed {
                c = &c * &evaluate_closed(cw)?;
            }
            w = rest;
            continue;
        }
        if let Some(Face::Square(s)) = face {
            let first = w.reduce_square(s, SquareSide::First);
            let second = w.reduce_square(s, SquareSide::Second);
            simplify(first, c.clone(), out)?;
            return simplify(second, c, out);
        }
        out.push((c, w));
        return Ok(());
    }
}

/// Reduces every term of a crossing-free web sum to non-elliptic webs
/// (closed parts become scalars).
pub fn reduce_web(ws: &WebSum) -> Result<WebSum> {
    let parts: Vec<Vec<(QLaurent, Web)>> = ws
        .terms
        .values()
        .par_bridge()
        .map(|(w, c)| {
            let mut out = Vec::new();
            simplify(w.clone(), c.clone(), &mut out)?;
            Ok(out)
        })
        .collect::<Result<_>>()?;
    Ok(WebSum::merge_all(parts))
}

/// Coefficients of (smoothing, H-web) in the resolution of a crossing.
fn resolution_coefficients(positive: bool) -> (QLaurent, QLaurent) {
    if positive {
        (QLaurent::q_pow(2), -QLaurent::q_pow(-1))
    } else {
        (QLaurent::q_pow(-2), -QLaurent::q_pow(1))
    }
}

/// Resolves the lowest-labelled crossing of every term and reduces.
pub fn resolve_crossing(ws: &WebSum) -> Result<WebSum> {
    let parts: Vec<Vec<(QLaurent, Web)>> = ws
        .terms
        .values()
        .par_bridge()
        .map(|(w, c)| {
            let mut out = Vec::new();
            match w.next_crossing() {
                None => out.push((c.clone(), w.clone())),
                Some(x) => {
                    let positive = w.is_positive_crossing(x);
                    let (a, b) = resolution_coefficients(positive);
                    let (smooth, web) = w.resolve(x);
                    simplify(smooth, c * &a, &mut out)?;
                    simplify(web, c * &b, &mut out)?;
                }
            }
            Ok(out)
        })
        .collect::<Result<_>>()?;
    Ok(WebSum::merge_all(parts))
}

/// Resolves all crossings.
pub fn resolve_all(ws: &WebSum) -> Result<WebSum> {
    let mut cur = reduce_web(ws)?;
    while cur.terms.values().any(|(w, _)| w.next_crossing().is_some()) {
        cur = resolve_crossing(&cur)?;
    }
    Ok(cur)
}

/// Options for [`evaluate_link_with`].
#[derive(Clone, Copy, Debug)]
pub struct OracleOptions {
    /// Largest clasp size that may be expanded.
    pub clasp_bound: usize,
}

impl Default for OracleOptions {
    fn default() -> Self {
        OracleOptions { clasp_bound: super::clasp::DEFAULT_CLASP_BOUND }
    }
}

/// The unnormalized bracket of the `n`-cabled, clasped diagram, multiplied
/// by `S_n^c` where `c` is the number of components (see [`expand_clasp`]).
/// Returns the scaled bracket and the scale.
pub fn scaled_bracket(n: usize, d: &LinkDiagram, opts: OracleOptions) -> Result<(QLaurent, QLaurent)> {
    let clasp = expand_clasp(n, opts.clasp_bound)?;
    let k = d.component_count()?;
    let mut combos: Vec<(QLaurent, Vec<HWord>)> = vec![(QLaurent::one(), Vec::new())];
    for _ in 0..k {
        combos = combos
            .into_iter()
            .flat_map(|(c, ws)| {
                clasp.terms.iter().map(move |(tc, tw)| {
                    let mut ws = ws.clone();
                    ws.push(tw.clone());
                    (&c * tc, ws)
                })
            })
            .collect();
    }
    let parts: Vec<Vec<(QLaurent, Web)>> = combos
        .into_par_iter()
        .map(|(c, words)| {
            let web = d.cable(n, &words)?;
            let mut out = Vec::new();
            simplify(web, c, &mut out)?;
            Ok(out)
        })
        .collect::<Result<_>>()?;
    let start = WebSum::merge_all(parts);
    let done = resolve_all(&start)?;
    if !done.is_scalar() {
        return Err(Error::Diagram("closed diagram did not reduce to a scalar".into()));
    }
    Ok((done.scalar(), clasp.scale.pow(k as u32)))
}

/// `Σ coeff · word` of a clasp expansion as a reduced web sum on the box
/// with `closed` strands closed up on the right (see [`word_tangle`]).
pub fn clasp_sum(clasp: &ClaspExpansion, closed: usize) -> Result<WebSum> {
    let mut parts = Vec::new();
    for (c, w) in &clasp.terms {
        let mut out = Vec::new();
        simplify(word_tangle(clasp.n, closed, w)?, c.clone(), &mut out)?;
        parts.push(out);
    }
    Ok(WebSum::merge_all(parts))
}

/// `⟨L(n,0)⟩ / Δ(n,0)` without the framing correction.
pub fn normalized_bracket(n: usize, d: &LinkDiagram, opts: OracleOptions) -> Result<QLaurent> {
    let (bracket, scale) = scaled_bracket(n, d, opts)?;
    let ni = n as i64;
    // Δ(n,0) = [n+1][n+2]/[2]
    let num = &bracket * &q2();
    let den = &scale * &(&qint(ni + 1)? * &qint(ni + 2)?);
    exact_div(&num, &den)
}

/// `J_{(n,0)}` of an oriented link diagram by brute-force skein evaluation:
/// framing correction times the clasped bracket divided by `Δ(n,0)`.
pub fn evaluate_link_with(n: usize, d: &LinkDiagram, opts: OracleOptions) -> Result<QLaurent> {
    Ok(&normalized_bracket(n, d, opts)? * &framing(n as i64, d.writhe()))
}

/// [`evaluate_link_with`] under the default clasp bound.
pub fn evaluate_link(n: usize, d: &LinkDiagram) -> Result<QLaurent> {
    evaluate_link_with(n, d, OracleOptions::default())
}
