//! Colored sl₃ invariants of pretzel links and `(2,m)`-torus knots from the
//! closed multi-sum formulas.
//!
//! A pretzel diagram is a cyclic row of twist regions ("columns"). Each
//! column carries two `n`-cables that are either parallel (same direction)
//! or antiparallel. Expanding a column gives a sum over a twist chain of
//! coefficients times a basis web indexed by the chain's last entry:
//!
//! * parallel, `c` half twists: `χ_{sign c}` over chains of length `|c|`;
//! * antiparallel, `c = 2f` half twists: `φ_{sign f}` over chains of length `|f|`.
//!
//! Adjacent columns are then merged pairwise around the cycle:
//!
//! * antiparallel + antiparallel → antiparallel, weight `ψ(n, t, k, l)`,
//!   `max(k,l) ≤ t ≤ min(k+l,n)`;
//! * parallel + parallel → antiparallel, weight `Ω(n, s, k, l)` spread over
//!   every index `a` with `s ≤ a ≤ n`.
//!
//! A single remaining antiparallel web is closed with
//! [`closure_antiparallel`]. Every family of the five three-column
//! orientation patterns and the four-/five-column appendix knots is a
//! [`Plan`] interpreted by the same engine.
//!
//! Two evaluators are provided: [`evaluate_plan`] folds each column's chain
//! sum into a vector indexed by the last chain entry before merging, which
//! keeps the cost polynomial in `n`; [`evaluate_plan_nested`] enumerates the
//! full multi-index literally and exists to check the first one.

use std::fmt;

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::coeffs::{
    chi, closure_antiparallel, closure_parallel, framing, omega, phi, psi, Sign, TwistChain,
};
use crate::error::{Error, Result};
use crate::qcalc::{QFrac, QLaurent};

/// Which formula family a [`PretzelSpec`] belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    /// `P(↓2α↑, ↓2β↑, ↓2γ↑)`: three antiparallel even columns.
    EvenEvenEven,
    /// `P(↓2α↓, ↑2β↑, ↓2γ↑)`: two parallel even columns and one antiparallel.
    EvenEvenEvenMixed,
    /// `P(↓2α+1↓, ↑2β+1↑, ↓2γ↑)`: the knot family with stable tails.
    OddOddEven,
    /// `P(↓2α+1↓, ↑2β↑, ↓2γ↑)`.
    OddEvenEven,
    /// `P(↓2α+1↓, ↑2β↓, ↑2γ↑)`.
    OddEvenEvenAlt,
    /// Torus knot `T(2,m)`, `m` odd.
    Torus2m,
    /// `8_10 = P(-3,-2,3,-1)`.
    #[serde(rename = "8_10")]
    Appendix8_10,
    /// `8_15 = P(3,-1,-2,-1,3)`.
    #[serde(rename = "8_15")]
    Appendix8_15,
    /// `8_20 = P(3,-2,-3,1)`.
    #[serde(rename = "8_20")]
    Appendix8_20,
    /// `8_21 = P(3,3,-1,-2)`.
    #[serde(rename = "8_21")]
    Appendix8_21,
}

impl Family {
    pub const ALL: [Family; 10] = [
        Family::EvenEvenEven,
        Family::EvenEvenEvenMixed,
        Family::OddOddEven,
        Family::OddEvenEven,
        Family::OddEvenEvenAlt,
        Family::Torus2m,
        Family::Appendix8_10,
        Family::Appendix8_15,
        Family::Appendix8_20,
        Family::Appendix8_21,
    ];

    /// Number of integer parameters the family takes.
    pub fn arity(self) -> usize {
        match self {
            Family::Torus2m => 1,
            Family::Appendix8_10 | Family::Appendix8_15 | Family::Appendix8_20 | Family::Appendix8_21 => 0,
            _ => 3,
        }
    }

    /// Command-line name, e.g. `odd-odd-even`.
    pub fn name(self) -> &'static str {
        match self {
            Family::EvenEvenEven => "even-even-even",
            Family::EvenEvenEvenMixed => "even-even-even-mixed",
            Family::OddOddEven => "odd-odd-even",
            Family::OddEvenEven => "odd-even-even",
            Family::OddEvenEvenAlt => "odd-even-even-alt",
            Family::Torus2m => "torus",
            Family::Appendix8_10 => "8_10",
            Family::Appendix8_15 => "8_15",
            Family::Appendix8_20 => "8_20",
            Family::Appendix8_21 => "8_21",
        }
    }

    pub fn from_name(s: &str) -> Option<Family> {
        Family::ALL.into_iter().find(|f| f.name() == s)
    }
}

/// A family together with its integer parameters.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PretzelSpec {
    pub family: Family,
    pub params: Vec<i64>,
}

impl fmt::Display for PretzelSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.family {
            Family::Torus2m => write!(f, "T(2,{})", self.params[0]),
            _ => {
                let twists: Vec<String> =
                    self.plan().map(|p| p.columns.iter().map(|c| c.twists.to_string()).collect()).unwrap_or_default();
                write!(f, "{}:P({})", self.family.name(), twists.join(","))
            }
        }
    }
}

/// Whether the two cables of a column run the same way.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Strands {
    Parallel,
    Antiparallel,
}

/// One twist region: `twists` signed half twists (positive = right-handed).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Column {
    pub twists: i64,
    pub strands: Strands,
}

impl Column {
    pub fn parallel(twists: i64) -> Column {
        Column { twists, strands: Strands::Parallel }
    }

    pub fn antiparallel(twists: i64) -> Column {
        Column { twists, strands: Strands::Antiparallel }
    }

    /// Signed crossing count. A right-handed twist has positive crossings on
    /// parallel strands and negative crossings on antiparallel ones.
    pub fn writhe(&self) -> i64 {
        match self.strands {
            Strands::Parallel => self.twists,
            Strands::Antiparallel => -self.twists,
        }
    }

    /// Length of the twist chain summed over for this column.
    pub fn chain_len(&self) -> usize {
        match self.strands {
            Strands::Parallel => self.twists.unsigned_abs() as usize,
            Strands::Antiparallel => (self.twists / 2).unsigned_abs() as usize,
        }
    }

    /// Coefficient of one chain.
    fn coeff(&self, chain: &TwistChain) -> Result<QLaurent> {
        if chain.ks.is_empty() {
            return Ok(QLaurent::one());
        }
        let s = Sign::of(self.twists).expect("nonempty chain implies nonzero twist");
        match self.strands {
            Strands::Parallel => chi(chain, s),
            Strands::Antiparallel => phi(chain, s),
        }
    }
}

/// The closure used once a single web remains.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Closure {
    /// Pretzel closure: cyclic row of columns joined at top and bottom.
    Pretzel,
    /// Braid closure of a single parallel column (torus knots).
    Braid,
}

/// Declarative description of a formula: columns in cyclic order plus the
/// closure.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Plan {
    pub columns: Vec<Column>,
    pub closure: Closure,
}

impl Plan {
    pub fn writhe(&self) -> i64 {
        self.columns.iter().map(Column::writhe).sum()
    }
}

impl PretzelSpec {
    pub fn new(family: Family, params: Vec<i64>) -> Result<Self> {
        let spec = PretzelSpec { family, params };
        spec.plan()?;
        Ok(spec)
    }

    pub fn torus(m: i64) -> Result<Self> {
        PretzelSpec::new(Family::Torus2m, vec![m])
    }

    pub fn appendix(family: Family) -> Result<Self> {
        PretzelSpec::new(family, vec![])
    }

    /// Translates the family into columns, validating arity and parity.
    pub fn plan(&self) -> Result<Plan> {
        use Column as C;
        let p = &self.params;
        if p.len() != self.family.arity() {
            return Err(Error::InvalidSpec(format!(
                "{} takes {} parameters, got {}",
                self.family.name(),
                self.family.arity(),
                p.len()
            )));
        }
        let pretzel = |columns: Vec<Column>| Plan { columns, closure: Closure::Pretzel };
        Ok(match self.family {
            Family::EvenEvenEven => pretzel(vec![C::antiparallel(2 * p[0]), C::antiparallel(2 * p[1]), C::antiparallel(2 * p[2])]),
            Family::EvenEvenEvenMixed => pretzel(vec![C::parallel(2 * p[0]), C::parallel(2 * p[1]), C::antiparallel(2 * p[2])]),
            Family::OddOddEven => pretzel(vec![C::parallel(2 * p[0] + 1), C::parallel(2 * p[1] + 1), C::antiparallel(2 * p[2])]),
            Family::OddEvenEven => pretzel(vec![C::parallel(2 * p[0] + 1), C::parallel(2 * p[1]), C::antiparallel(2 * p[2])]),
            Family::OddEvenEvenAlt => pretzel(vec![C::parallel(2 * p[0] + 1), C::antiparallel(2 * p[1]), C::parallel(2 * p[2])]),
            Family::Torus2m => {
                if p[0] % 2 == 0 {
                    return Err(Error::InvalidSpec(format!("T(2,{}) is a link; m must be odd", p[0])));
                }
                Plan { columns: vec![C::parallel(p[0])], closure: Closure::Braid }
            }
            Family::Appendix8_10 => pretzel(vec![C::parallel(-3), C::parallel(-2), C::parallel(3), C::parallel(-1)]),
            Family::Appendix8_15 => pretzel(vec![
                C::parallel(3),
                C::parallel(-1),
                C::antiparallel(-2),
                C::parallel(-1),
                C::parallel(3),
            ]),
            Family::Appendix8_20 => pretzel(vec![C::parallel(3), C::parallel(-2), C::parallel(-3), C::parallel(1)]),
            Family::Appendix8_21 => pretzel(vec![C::parallel(3), C::parallel(3), C::parallel(-1), C::parallel(-2)]),
        })
    }

    /// Number of link components of the pretzel diagram.
    pub fn components(&self) -> Result<usize> {
        let plan = self.plan()?;
        if plan.closure == Closure::Braid {
            return Ok(if plan.columns[0].twists % 2 == 0 { 2 } else { 1 });
        }
        let twists: Vec<i64> = plan.columns.iter().map(|c| c.twists).collect();
        Ok(crate::webs::pretzel_components(&twists))
    }

    pub fn is_knot(&self) -> Result<bool> {
        Ok(self.components()? == 1)
    }
}

/// Result of evaluating a formula.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InvariantResult {
    pub value: QLaurent,
    pub n: i64,
    pub writhe_used: i64,
    /// Number of admissible multi-indices of the fully expanded nested sum.
    pub summand_count: u64,
}

/// A partially merged web: coefficient per index plus the number of literal
/// summands feeding each index.
#[derive(Clone, Debug)]
struct Node {
    strands: Strands,
    weights: Vec<QFrac>,
    counts: Vec<BigInt>,
}

fn leaf(n: i64, col: &Column) -> Result<Node> {
    if col.strands == Strands::Antiparallel && col.twists % 2 != 0 {
        return Err(Error::InvalidSpec("antiparallel columns need an even number of half twists".into()));
    }
    let size = (n + 1) as usize;
    let mut weights = vec![QLaurent::zero(); size];
    let mut counts = vec![BigInt::from(0); size];
    let chains = TwistChain::enumerate(n, col.chain_len());
    let coeffs: Vec<(usize, QLaurent)> = chains
        .par_iter()
        .map(|c| Ok((c.last() as usize, col.coeff(c)?)))
        .collect::<Result<_>>()?;
    for (k, c) in coeffs {
        weights[k] += c;
        counts[k] += 1;
    }
    let weights = weights.into_iter().map(QFrac::from).collect();
    Ok(Node { strands: col.strands, weights, counts })
}

fn merge(n: i64, a: &Node, b: &Node) -> Result<Node> {
    let size = (n + 1) as usize;
    let both = |s| a.strands == s && b.strands == s;
    let parallel = if both(Strands::Antiparallel) {
        false
    } else if both(Strands::Parallel) {
        true
    } else {
        return Err(Error::InvalidSpec("cannot merge a parallel column with an antiparallel one".into()));
    };
    // Parallelize over the first index; each task returns its own partial
    // vectors which are added in index order for a deterministic result.
    let partials: Vec<(Vec<QFrac>, Vec<BigInt>)> = (0..=n)
        .into_par_iter()
        .map(|k| -> Result<(Vec<QFrac>, Vec<BigInt>)> {
            let mut w = vec![QFrac::zero(); size];
            let mut c = vec![BigInt::from(0); size];
            let (uk, ck) = (&a.weights[k as usize], &a.counts[k as usize]);
            if ck == &BigInt::from(0) {
                return Ok((w, c));
            }
            for l in 0..=n {
                let (vl, cl) = (&b.weights[l as usize], &b.counts[l as usize]);
                if cl == &BigInt::from(0) {
                    continue;
                }
                let prod = uk.mul(vl);
                let cnt = ck * cl;
                for t in k.max(l)..=(k + l).min(n) {
                    if parallel {
                        let term = prod.mul(&omega(n, t, k, l)?);
                        for a_idx in t..=n {
                            w[a_idx as usize].add_assign(&term);
                            c[a_idx as usize] += &cnt;
                        }
                    } else {
                        w[t as usize].add_assign(&prod.mul(&psi(n, t, k, l)?));
                        c[t as usize] += &cnt;
                    }
                }
            }
            Ok((w, c))
        })
        .collect::<Result<_>>()?;
    let mut weights = vec![QFrac::zero(); size];
    let mut counts = vec![BigInt::from(0); size];
    for (w, c) in partials {
        for i in 0..size {
            weights[i].add_assign(&w[i]);
            counts[i] += &c[i];
        }
    }
    weights.par_iter_mut().for_each(QFrac::reduce);
    Ok(Node { strands: Strands::Antiparallel, weights, counts })
}

/// Order in which adjacent columns are merged: indices into the current
/// cyclic list, always merging position `i` with `i+1 (mod len)`.
fn merge_schedule(columns: &[Column]) -> Result<Vec<usize>> {
    let mut kinds: Vec<Strands> = columns.iter().map(|c| c.strands).collect();
    let mut schedule = Vec::new();
    while kinds.len() > 1 {
        let len = kinds.len();
        let i = (0..len)
            .find(|&i| kinds[i] == kinds[(i + 1) % len])
            .ok_or_else(|| Error::InvalidSpec("no mergeable pair of adjacent columns".into()))?;
        schedule.push(i);
        let j = (i + 1) % len;
        kinds[i] = Strands::Antiparallel;
        kinds.remove(j);
    }
    Ok(schedule)
}

fn closure_of(n: i64, node: &Node, closure: Closure) -> Result<(QLaurent, BigInt)> {
    let mut total = QFrac::zero();
    let mut count = BigInt::from(0);
    for t in 0..=n {
        let w = &node.weights[t as usize];
        count += &node.counts[t as usize];
        if w.is_zero() {
            continue;
        }
        let c = match (closure, node.strands) {
            (Closure::Pretzel, Strands::Antiparallel) => closure_antiparallel(n, t)?,
            (Closure::Braid, Strands::Parallel) => closure_parallel(n, t)?,
            _ => return Err(Error::InvalidSpec("closure does not match the remaining web".into())),
        };
        total.add_assign(&w.mul(&c));
    }
    Ok((total.into_laurent()?, count))
}

/// Evaluates a plan with per-column chain sums folded into index vectors.
pub fn evaluate_plan(n: i64, plan: &Plan) -> Result<InvariantResult> {
    if n < 1 {
        return Err(Error::OutOfRange(format!("color n={n} must be at least 1")));
    }
    if plan.columns.is_empty() {
        return Err(Error::InvalidSpec("plan has no columns".into()));
    }
    let mut nodes: Vec<Node> = plan.columns.iter().map(|c| leaf(n, c)).collect::<Result<_>>()?;
    if plan.closure == Closure::Pretzel {
        for i in merge_schedule(&plan.columns)? {
            let j = (i + 1) % nodes.len();
            let merged = merge(n, &nodes[i], &nodes[j])?;
            nodes[i] = merged;
            nodes.remove(j);
        }
    } else if nodes.len() != 1 {
        return Err(Error::InvalidSpec("braid closure takes a single column".into()));
    }
    let (sum, count) = closure_of(n, &nodes[0], plan.closure)?;
    let w = plan.writhe();
    Ok(InvariantResult {
        value: &framing(n, w) * &sum,
        n,
        writhe_used: w,
        summand_count: u64::try_from(count).unwrap_or(u64::MAX),
    })
}

/// Reference evaluator: walks every admissible multi-index of the fully
/// expanded nested sum (all chains, junction indices and spread indices)
/// and adds up the literal products. Exponential; meant for small checks.
pub fn evaluate_plan_nested(n: i64, plan: &Plan) -> Result<InvariantResult> {
    #[derive(Clone)]
    enum Tree {
        Leaf(usize),
        Merge(Box<Tree>, Box<Tree>, bool),
    }
    let mut trees: Vec<Tree> = (0..plan.columns.len()).map(Tree::Leaf).collect();
    if plan.closure == Closure::Pretzel {
        let mut kinds: Vec<Strands> = plan.columns.iter().map(|c| c.strands).collect();
        for i in merge_schedule(&plan.columns)? {
            let j = (i + 1) % trees.len();
            let parallel = kinds[i] == Strands::Parallel;
            let right = trees.remove(j);
            let left_idx = if j < i { i - 1 } else { i };
            let left = trees[left_idx].clone();
            trees[left_idx] = Tree::Merge(Box::new(left), Box::new(right), parallel);
            kinds.remove(j);
            kinds[left_idx] = Strands::Antiparallel;
        }
    }
    // All (index, coefficient) outcomes of a subtree, one per literal summand.
    fn expand(n: i64, plan: &Plan, tree: &Tree) -> Result<Vec<(i64, QFrac)>> {
        match tree {
            Tree::Leaf(c) => {
                let col = &plan.columns[*c];
                TwistChain::enumerate(n, col.chain_len())
                    .into_iter()
                    .map(|ch| Ok((ch.last(), QFrac::from(col.coeff(&ch)?))))
                    .collect()
            }
            Tree::Merge(a, b, parallel) => {
                let (xs, ys) = (expand(n, plan, a)?, expand(n, plan, b)?);
                let mut out = Vec::new();
                for (k, u) in &xs {
                    for (l, v) in &ys {
                        for t in *k.max(l)..=(k + l).min(n) {
                            if *parallel {
                                let c = u.mul(v).mul(&omega(n, t, *k, *l)?);
                                for a in t..=n {
                                    out.push((a, c.clone()));
                                }
                            } else {
                                out.push((t, u.mul(v).mul(&psi(n, t, *k, *l)?)));
                            }
                        }
                    }
                }
                Ok(out)
            }
        }
    }
    let terms = expand(n, plan, &trees[0])?;
    let mut sum = QFrac::zero();
    for (t, c) in &terms {
        let close = match plan.closure {
            Closure::Pretzel => closure_antiparallel(n, *t)?,
            Closure::Braid => closure_parallel(n, *t)?,
        };
        sum.add_assign(&c.mul(&close));
    }
    let sum = sum.into_laurent()?;
    let w = plan.writhe();
    Ok(InvariantResult { value: &framing(n, w) * &sum, n, writhe_used: w, summand_count: terms.len() as u64 })
}

/// `J_{(n,0)}(T(2,m))` for odd `m`.
pub fn jones_torus(n: i64, m: i64) -> Result<InvariantResult> {
    jones(n, &PretzelSpec::torus(m)?)
}

/// `J_{(n,0)}` of a three-column pretzel family member.
pub fn jones_pretzel(n: i64, spec: &PretzelSpec) -> Result<InvariantResult> {
    match spec.family {
        Family::Torus2m => Err(Error::InvalidSpec("use jones_torus for torus knots".into())),
        f if f.arity() == 0 => Err(Error::InvalidSpec("use jones_appendix for the appendix knots".into())),
        _ => jones(n, spec),
    }
}

/// `J_{(n,0)}` of one of the four-/five-column appendix knots.
pub fn jones_appendix(n: i64, which: Family) -> Result<InvariantResult> {
    if which.arity() != 0 {
        return Err(Error::InvalidSpec(format!("{} is not an appendix knot", which.name())));
    }
    jones(n, &PretzelSpec::appendix(which)?)
}

/// Dispatches any spec to the engine.
pub fn jones(n: i64, spec: &PretzelSpec) -> Result<InvariantResult> {
    evaluate_plan(n, &spec.plan()?)
}

/// Writhe encoded by the formula's framing prefactor.
pub fn writhe(spec: &PretzelSpec) -> Result<i64> {
    Ok(spec.plan()?.writhe())
}
