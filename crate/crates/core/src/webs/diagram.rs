//! Oriented link diagrams, their text format, generators for pretzel and
//! braid-closure diagrams, and the `n`-cabling into a planar map with clasps.
//!
//! Text format: one item per line, `#` starts a comment.
//!
//! ```text
//! X <S> <E> <N> <W> <+|->   crossing; arcs listed counterclockwise from the
//!                          incoming under arc (under strand runs S → N;
//!                          the over strand runs W → E for `+`, E → W for `-`)
//! loop                     a crossing-free unknotted component
//! clasp <arc>              carry this component's clasp on <arc>
//! ```
//!
//! Each arc id must appear exactly twice: once where it leaves a crossing
//! and once where it enters one. Components without a `clasp` line carry
//! their clasp on their lowest-numbered arc.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::error::{Error, Result};
use crate::links::Strands;

use super::clasp::HWord;
use super::map::{VertexKind, Web};

/// A crossing with arcs at S, E, N, W (counterclockwise, S = incoming under).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Crossing {
    pub arcs: [usize; 4],
    pub positive: bool,
}

impl Crossing {
    /// Slots (0 = S … 3 = W) where strands enter and leave.
    fn in_slots(&self) -> [usize; 2] {
        if self.positive {
            [0, 3]
        } else {
            [0, 1]
        }
    }

    fn through(&self, slot: usize) -> usize {
        (slot + 2) % 4
    }
}

/// A closed oriented link diagram.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LinkDiagram {
    pub crossings: Vec<Crossing>,
    pub free_loops: usize,
    /// Arcs carrying clasps; empty means the default placement.
    pub clasps: Vec<usize>,
}

/// One component: its arcs in order of traversal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Component {
    pub arcs: Vec<usize>,
}

#[derive(Clone, Copy, Debug)]
struct ArcEnds {
    /// (crossing, slot) where the arc starts (an outgoing slot).
    tail: (usize, usize),
    /// (crossing, slot) where the arc ends (an incoming slot).
    head: (usize, usize),
}

impl LinkDiagram {
    pub fn unknot() -> LinkDiagram {
        LinkDiagram { crossings: vec![], free_loops: 1, clasps: vec![] }
    }

    pub fn writhe(&self) -> i64 {
        self.crossings.iter().map(|c| if c.positive { 1 } else { -1 }).sum()
    }

    fn arc_ends(&self) -> Result<BTreeMap<usize, ArcEnds>> {
        let mut tails = BTreeMap::new();
        let mut heads = BTreeMap::new();
        for (i, c) in self.crossings.iter().enumerate() {
            let ins = c.in_slots();
            for slot in 0..4 {
                let map = if ins.contains(&slot) { &mut heads } else { &mut tails };
                if map.insert(c.arcs[slot], (i, slot)).is_some() {
                    return Err(Error::Diagram(format!("arc {} used twice in the same direction", c.arcs[slot])));
                }
            }
        }
        let mut out = BTreeMap::new();
        for (a, t) in &tails {
            let h = heads
                .get(a)
                .ok_or_else(|| Error::Diagram(format!("arc {a} leaves a crossing but never enters one")))?;
            out.insert(*a, ArcEnds { tail: *t, head: *h });
        }
        if let Some(a) = heads.keys().find(|a| !tails.contains_key(a)) {
            return Err(Error::Diagram(format!("arc {a} enters a crossing but never leaves one")));
        }
        Ok(out)
    }

    /// Checks arc usage and returns the components (free loops excluded).
    pub fn components(&self) -> Result<Vec<Component>> {
        let ends = self.arc_ends()?;
        let mut seen = BTreeSet::new();
        let mut comps = Vec::new();
        for start in ends.keys() {
            if seen.contains(start) {
                continue;
            }
            let mut arcs = Vec::new();
            let mut a = *start;
            loop {
                seen.insert(a);
                arcs.push(a);
                let (c, slot) = ends[&a].head;
                let cr = &self.crossings[c];
                a = cr.arcs[cr.through(slot)];
                if a == *start {
                    break;
                }
            }
            comps.push(Component { arcs });
        }
        Ok(comps)
    }

    pub fn component_count(&self) -> Result<usize> {
        Ok(self.components()?.len() + self.free_loops)
    }

    pub fn validate(&self) -> Result<()> {
        let comps = self.components()?;
        for c in &self.clasps {
            if !comps.iter().any(|k| k.arcs.contains(c)) {
                return Err(Error::Diagram(format!("clasp placed on unknown arc {c}")));
            }
        }
        Ok(())
    }

    /// Parses the text format described in the module documentation.
    pub fn parse(text: &str) -> Result<LinkDiagram> {
        let mut d = LinkDiagram::default();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |msg: &str| Error::Diagram(format!("line {}: {msg}: {raw:?}", lineno + 1));
            let fields: Vec<&str> = line.split_whitespace().collect();
            match fields[0] {
                "X" | "x" => {
                    if fields.len() != 6 {
                        return Err(err("expected `X S E N W sign`"));
                    }
                    let mut arcs = [0usize; 4];
                    for (i, f) in fields[1..5].iter().enumerate() {
                        arcs[i] = f.parse().map_err(|_| err("arc ids must be non-negative integers"))?;
                    }
                    let positive = match fields[5] {
                        "+" | "+1" => true,
                        "-" | "-1" => false,
                        _ => return Err(err("sign must be + or -")),
                    };
                    d.crossings.push(Crossing { arcs, positive });
                }
                "loop" => {
                    if fields.len() != 1 {
                        return Err(err("`loop` takes no arguments"));
                    }
                    d.free_loops += 1;
                }
                "clasp" => {
                    if fields.len() != 2 {
                        return Err(err("expected `clasp ARC`"));
                    }
                    d.clasps.push(fields[1].parse().map_err(|_| err("bad arc id"))?);
                }
                _ => return Err(err("unknown directive")),
            }
        }
        d.validate()?;
        Ok(d)
    }

    /// Builds the `n`-cable with one clasp per component, each clasp being
    /// replaced by the given H-word (one word per component, in the order
    /// of [`LinkDiagram::components`] followed by the free loops).
    ///
    /// Crossing vertices get labels that fix a resolution order growing a
    /// connected region outwards from the first clasp.
    pub fn cable(&self, n: usize, words: &[HWord]) -> Result<Web> {
        let mut web = self.cable_raw(n, words)?;
        let order = resolution_order(&self.cable_raw(n, &vec![Vec::new(); words.len()])?);
        web.relabel(&order);
        Ok(web)
    }

    fn cable_raw(&self, n: usize, words: &[HWord]) -> Result<Web> {
        let comps = self.components()?;
        if words.len() != comps.len() + self.free_loops {
            return Err(Error::Diagram(format!(
                "{} clasp words for {} components",
                words.len(),
                comps.len() + self.free_loops
            )));
        }
        let ends = self.arc_ends()?;
        let mut clasp_arc: BTreeMap<usize, usize> = BTreeMap::new();
        for (i, comp) in comps.iter().enumerate() {
            let arc = self
                .clasps
                .iter()
                .find(|a| comp.arcs.contains(a))
                .copied()
                .unwrap_or_else(|| *comp.arcs.iter().min().expect("components have arcs"));
            clasp_arc.insert(arc, i);
        }

        let mut web = Web::new();
        // ports[c][slot][copy] = dart
        let mut ports: Vec<[Vec<u32>; 4]> = Vec::with_capacity(self.crossings.len());
        let nn = (n * n) as u32;
        for (ci, c) in self.crossings.iter().enumerate() {
            let mut grid = vec![vec![Vec::new(); n]; n];
            for (x, col) in grid.iter_mut().enumerate() {
                for (y, cell) in col.iter_mut().enumerate() {
                    let label = ci as u32 * nn + (x * n + y) as u32;
                    *cell = web.add_vertex(VertexKind::Crossing { positive: c.positive, label }, 4);
                }
            }
            for x in 0..n {
                for y in 1..n {
                    web.connect(grid[x][y - 1][2], grid[x][y][0]);
                }
            }
            for y in 0..n {
                for x in 1..n {
                    if c.positive {
                        web.connect(grid[x - 1][y][1], grid[x][y][3]);
                    } else {
                        web.connect(grid[x][y][3], grid[x - 1][y][1]);
                    }
                }
            }
            let mut p: [Vec<u32>; 4] = Default::default();
            for i in 0..n {
                p[0].push(grid[i][0][0]);
                p[2].push(grid[i][n - 1][2]);
                let y = if c.positive { n - 1 - i } else { i };
                p[1].push(grid[n - 1][y][1]);
                p[3].push(grid[0][y][3]);
            }
            ports.push(p);
        }

        for (a, e) in &ends {
            let from: Vec<Option<u32>> = ports[e.tail.0][e.tail.1].iter().map(|d| Some(*d)).collect();
            let to: Vec<Option<u32>> = ports[e.head.0][e.head.1].iter().map(|d| Some(*d)).collect();
            let word: &[u8] = clasp_arc.get(a).map(|i| words[*i].as_slice()).unwrap_or(&[]);
            thread_strands(&mut web, n, from, to, word)?;
        }
        for k in 0..self.free_loops {
            thread_strands(&mut web, n, vec![None; n], vec![None; n], &words[comps.len() + k])?;
        }
        Ok(web)
    }
}

/// The H-word on `n` upward strands inside a box, as a web whose frame
/// vertex carries the boundary points (bottom points leave the frame, top
/// points enter it). Strands with index `≥ n − closed` are not attached to
/// the boundary but closed up on the right.
pub fn word_tangle(n: usize, closed: usize, word: &[u8]) -> Result<Web> {
    if closed > n {
        return Err(Error::Diagram(format!("cannot close {closed} of {n} strands")));
    }
    let open = n - closed;
    let mut web = Web::new();
    let mut from = vec![None; n];
    let mut to = vec![None; n];
    if open > 0 {
        // seen from the outside the boundary order is reversed:
        // tops left to right, then bottoms right to left
        let frame = web.add_vertex(VertexKind::Frame, 2 * open);
        for i in 0..open {
            to[i] = Some(frame[i]);
            from[i] = Some(frame[2 * open - 1 - i]);
        }
    }
    thread_strands(&mut web, n, from, to, word)?;
    Ok(web)
}

/// Runs `n` parallel strands from `from` to `to` through the H-word. `None`
/// ends mean the strands close up on themselves (a free component).
fn thread_strands(web: &mut Web, n: usize, from: Vec<Option<u32>>, to: Vec<Option<u32>>, word: &[u8]) -> Result<()> {
    let mut cur = from;
    let mut first_in: Vec<Option<u32>> = vec![None; n];
    for &h in word {
        let i = h as usize;
        if i + 1 >= n {
            return Err(Error::Diagram(format!("H_{i} acts on {n} strands")));
        }
        let sink = web.add_vertex(VertexKind::Sink, 3); // [rung, in_i, in_{i+1}]
        let source = web.add_vertex(VertexKind::Source, 3); // [out_{i+1}, out_i, rung]
        web.connect(source[2], sink[0]);
        for (k, port) in [(i, sink[1]), (i + 1, sink[2])] {
            match cur[k] {
                Some(d) => web.connect(d, port),
                None => first_in[k] = Some(port),
            }
        }
        cur[i] = Some(source[1]);
        cur[i + 1] = Some(source[0]);
    }
    for k in 0..n {
        let target = to[k].or(first_in[k]);
        match (cur[k], target) {
            (Some(a), Some(b)) => web.connect(a, b),
            (None, None) => web.add_loops(1),
            _ => return Err(Error::Diagram("dangling cable strand".into())),
        }
    }
    Ok(())
}

/// Greedy ordering of crossing vertices: repeatedly take the crossing with
/// the most edges into the already-processed region (web vertices count as
/// processed), breaking ties by label. Returns `old label → new label`.
fn resolution_order(web: &Web) -> Vec<u32> {
    let crossings = web.crossings();
    let max_label = crossings.iter().map(|(_, l)| *l).max().map_or(0, |l| l as usize + 1);
    let mut order = vec![0u32; max_label];
    let mut done: BTreeSet<u32> = BTreeSet::new();
    let is_crossing: BTreeMap<u32, u32> = crossings.iter().copied().collect();
    let nbrs: BTreeMap<u32, Vec<u32>> = crossings.iter().map(|(v, _)| (*v, web.neighbours(*v))).collect();
    let mut next_label = 0u32;
    while done.len() < crossings.len() {
        let best = crossings
            .iter()
            .filter(|(v, _)| !done.contains(v))
            .map(|(v, l)| {
                let score = nbrs[v]
                    .iter()
                    .filter(|u| !is_crossing.contains_key(u) || done.contains(u))
                    .count();
                (std::cmp::Reverse(score), *l, *v)
            })
            .min()
            .expect("an unprocessed crossing remains");
        let (_, l, v) = best;
        done.insert(v);
        order[l as usize] = next_label;
        next_label += 1;
    }
    order
}

impl fmt::Display for LinkDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.crossings {
            let [s, e, n, w] = c.arcs;
            writeln!(f, "X {s} {e} {n} {w} {}", if c.positive { '+' } else { '-' })?;
        }
        for _ in 0..self.free_loops {
            writeln!(f, "loop")?;
        }
        for a in &self.clasps {
            writeln!(f, "clasp {a}")?;
        }
        Ok(())
    }
}

/// Unoriented diagram: crossings with arms in counterclockwise order
/// (SW, SE, NE, NW) and over strand on arms {0,2} or {1,3}; points are arms
/// (`4·crossing + arm`) followed by auxiliary pass-through points.
#[derive(Clone, Debug, Default)]
struct Sketch {
    over02: Vec<bool>,
    aux: usize,
    adj: BTreeMap<usize, Vec<usize>>,
}

impl Sketch {
    fn crossing(&mut self, over02: bool) -> usize {
        self.over02.push(over02);
        self.over02.len() - 1
    }

    fn arm(c: usize, a: usize) -> usize {
        4 * c + a
    }

    fn aux_point(&mut self) -> usize {
        self.aux += 1;
        usize::MAX - self.aux
    }

    fn join(&mut self, p: usize, q: usize) {
        self.adj.entry(p).or_default().push(q);
        self.adj.entry(q).or_default().push(p);
    }

    fn is_arm(&self, p: usize) -> bool {
        p < 4 * self.over02.len()
    }

    /// Walks from out-arm `p` until reaching an arm; returns the arm reached
    /// and the auxiliary points passed in order.
    fn follow(&self, p: usize) -> (usize, Vec<usize>) {
        let mut prev = p;
        let mut cur = self.adj[&p][0];
        let mut passed = Vec::new();
        while !self.is_arm(cur) {
            passed.push(cur);
            let nb = &self.adj[&cur];
            let next = if nb[0] == prev && nb.len() > 1 { nb[1] } else { nb[0] };
            prev = cur;
            cur = next;
        }
        (cur, passed)
    }

    /// Orients every component. `reverse[i]` flips component `i` (components
    /// are numbered by their smallest arm). Returns the oriented diagram, the
    /// set of in-arms and, for each auxiliary point, its successor.
    fn orient(&self, reverse: &[bool]) -> (LinkDiagram, BTreeSet<usize>, BTreeMap<usize, usize>) {
        let nc = self.over02.len();
        let mut is_in = BTreeSet::new();
        let mut visited = BTreeSet::new();
        let mut aux_next = BTreeMap::new();
        let mut arcs_out: BTreeMap<usize, usize> = BTreeMap::new(); // out-arm → arc id
        let mut arcs_in: BTreeMap<usize, usize> = BTreeMap::new();
        let mut comp = 0;
        let mut arc_id = 0;
        for start in 0..4 * nc {
            if visited.contains(&start) {
                continue;
            }
            let rev = reverse.get(comp).copied().unwrap_or(false);
            comp += 1;
            // `start` is taken as an out-arm unless reversed.
            let first = if rev { (start & !3) | ((start + 2) % 4) } else { start };
            let mut out_arm = first;
            loop {
                visited.insert(out_arm);
                let (in_arm, passed) = self.follow(out_arm);
                for (i, p) in passed.iter().enumerate() {
                    aux_next.insert(*p, passed.get(i + 1).copied().unwrap_or(in_arm));
                }
                visited.insert(in_arm);
                is_in.insert(in_arm);
                arcs_out.insert(out_arm, arc_id);
                arcs_in.insert(in_arm, arc_id);
                arc_id += 1;
                out_arm = (in_arm & !3) | ((in_arm + 2) % 4);
                if out_arm == first {
                    break;
                }
            }
        }
        let mut d = LinkDiagram::default();
        for c in 0..nc {
            let under: [usize; 2] = if self.over02[c] { [1, 3] } else { [0, 2] };
            let over: [usize; 2] = if self.over02[c] { [0, 2] } else { [1, 3] };
            let ui = *under.iter().find(|a| is_in.contains(&Self::arm(c, **a))).expect("oriented");
            let oi = *over.iter().find(|a| is_in.contains(&Self::arm(c, **a))).expect("oriented");
            let mut arcs = [0; 4];
            for (k, slot) in arcs.iter_mut().enumerate() {
                let arm = Self::arm(c, (ui + k) % 4);
                *slot = if is_in.contains(&arm) { arcs_in[&arm] } else { arcs_out[&arm] };
            }
            d.crossings.push(Crossing { arcs, positive: oi == (ui + 3) % 4 });
        }
        // closed cycles of auxiliary points are free loops
        let mut seen_aux: BTreeSet<usize> = aux_next.keys().copied().collect();
        for p in self.adj.keys() {
            if self.is_arm(*p) || seen_aux.contains(p) {
                continue;
            }
            d.free_loops += 1;
            let mut prev = *p;
            let mut cur = *p;
            loop {
                seen_aux.insert(cur);
                let nb = &self.adj[&cur];
                let next = if nb[0] == prev && nb.len() > 1 { nb[1] } else { nb[0] };
                if next == *p {
                    aux_next.insert(cur, next);
                    break;
                }
                aux_next.insert(cur, next);
                prev = cur;
                cur = next;
            }
        }
        (d, is_in, aux_next)
    }

    fn component_count(&self) -> usize {
        let (d, _, _) = self.orient(&[]);
        d.component_count().expect("generated diagrams are consistent")
    }
}

/// Top-left, top-right, bottom-left, bottom-right end points of a column.
struct ColumnEnds {
    tl: usize,
    tr: usize,
    bl: usize,
    br: usize,
}

fn pretzel_sketch(twists: &[i64]) -> (Sketch, Vec<ColumnEnds>) {
    let mut s = Sketch::default();
    let mut cols = Vec::new();
    for &c in twists {
        let m = c.unsigned_abs() as usize;
        if m == 0 {
            let (tl, tr, bl, br) = (s.aux_point(), s.aux_point(), s.aux_point(), s.aux_point());
            s.join(tl, bl);
            s.join(tr, br);
            cols.push(ColumnEnds { tl, tr, bl, br });
            continue;
        }
        let xs: Vec<usize> = (0..m).map(|_| s.crossing(c > 0)).collect();
        for k in 1..m {
            s.join(Sketch::arm(xs[k], 2), Sketch::arm(xs[k - 1], 1));
            s.join(Sketch::arm(xs[k], 3), Sketch::arm(xs[k - 1], 0));
        }
        cols.push(ColumnEnds {
            tl: Sketch::arm(xs[0], 3),
            tr: Sketch::arm(xs[0], 2),
            bl: Sketch::arm(xs[m - 1], 0),
            br: Sketch::arm(xs[m - 1], 1),
        });
    }
    let r = cols.len();
    for j in 0..r {
        let k = (j + 1) % r;
        s.join(cols[j].tr, cols[k].tl);
        s.join(cols[j].br, cols[k].bl);
    }
    (s, cols)
}

/// Number of components of the pretzel link with the given columns.
pub fn pretzel_components(twists: &[i64]) -> usize {
    if twists.is_empty() {
        return 0;
    }
    pretzel_sketch(twists).0.component_count()
}

fn goes_down(s: &Sketch, is_in: &BTreeSet<usize>, aux_next: &BTreeMap<usize, usize>, top: usize, bottom: usize) -> bool {
    if s.is_arm(top) {
        is_in.contains(&top)
    } else {
        aux_next.get(&top) == Some(&bottom)
    }
}

/// The pretzel diagram with the given columns (positive = right-handed half
/// twists, drawn side by side and joined cyclically at top and bottom).
/// If `strands` is given, component orientations are chosen so that every
/// column has the requested parallel/antiparallel type.
pub fn pretzel_diagram(twists: &[i64], strands: Option<&[Strands]>) -> Result<LinkDiagram> {
    if twists.is_empty() {
        return Err(Error::Diagram("a pretzel diagram needs at least one column".into()));
    }
    let (s, cols) = pretzel_sketch(twists);
    let k = s.component_count();
    for mask in 0u32..(1 << k) {
        let reverse: Vec<bool> = (0..k).map(|i| mask >> i & 1 == 1).collect();
        let (d, is_in, aux_next) = s.orient(&reverse);
        // Without crossings every component is a free loop whose
        // orientation does not affect the bracket.
        let Some(want) = strands.filter(|_| !d.crossings.is_empty()) else { return Ok(d) };
        if want.len() != cols.len() {
            return Err(Error::Diagram("one strand type per column is required".into()));
        }
        let ok = cols.iter().zip(want).all(|(c, w)| {
            let l = goes_down(&s, &is_in, &aux_next, c.tl, c.bl);
            let r = goes_down(&s, &is_in, &aux_next, c.tr, c.br);
            (l == r) == (*w == Strands::Parallel)
        });
        if ok {
            return Ok(d);
        }
    }
    Err(Error::Diagram(format!("no orientation of P{twists:?} realises the column types {strands:?}")))
}

/// Closure of a braid on `strands` strands; generator `i` (1-based) is a
/// positive crossing of strands `i`, `i+1` and `-i` its inverse. All strands
/// are oriented upwards.
pub fn braid_closure(strands: usize, word: &[i64]) -> Result<LinkDiagram> {
    if strands == 0 {
        return Err(Error::Diagram("a braid needs at least one strand".into()));
    }
    let mut s = Sketch::default();
    // current top point of each position
    let mut bottoms: Vec<Option<usize>> = vec![None; strands];
    let mut tops: Vec<Option<usize>> = vec![None; strands];
    for &g in word {
        let i = g.unsigned_abs() as usize;
        if g == 0 || i >= strands {
            return Err(Error::Diagram(format!("generator {g} out of range for {strands} strands")));
        }
        let c = s.crossing(g > 0);
        let (sw, se, ne, nw) = (Sketch::arm(c, 0), Sketch::arm(c, 1), Sketch::arm(c, 2), Sketch::arm(c, 3));
        for (pos, arm) in [(i - 1, sw), (i, se)] {
            match tops[pos] {
                Some(t) => s.join(t, arm),
                None => bottoms[pos] = Some(arm),
            }
        }
        tops[i - 1] = Some(nw);
        tops[i] = Some(ne);
    }
    for p in 0..strands {
        match (tops[p], bottoms[p]) {
            (Some(t), Some(b)) => s.join(t, b),
            (None, None) => {
                let (a, b) = (s.aux_point(), s.aux_point());
                s.join(a, b);
                s.join(a, b);
            }
            _ => unreachable!("a position is either touched at both ends or not at all"),
        }
    }
    // orient upwards: every NE/NW arm is an out-arm
    let k = s.component_count();
    for mask in 0u32..(1 << k) {
        let reverse: Vec<bool> = (0..k).map(|i| mask >> i & 1 == 1).collect();
        let (d, is_in, _) = s.orient(&reverse);
        if is_in.iter().all(|a| a % 4 < 2) {
            return Ok(d);
        }
    }
    Err(Error::Diagram("braid closure could not be oriented".into()))
}
