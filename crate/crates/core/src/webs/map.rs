//! Planar maps given by rotation systems: the common representation for
//! crossing diagrams, partially resolved diagrams and A₂ webs.
//!
//! Every vertex owns a cyclic (counterclockwise) list of darts; every dart
//! has a twin at the other end of its edge and remembers whether its edge is
//! directed away from its vertex. Free loops (edges without vertices) are
//! never stored: operations that would create one count it instead, and the
//! caller multiplies by `[3]` for each.

use std::collections::VecDeque;

/// Vertex kinds appearing in diagrams and webs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum VertexKind {
    /// Trivalent vertex with all three edges directed inward.
    Sink,
    /// Trivalent vertex with all three edges directed outward.
    Source,
    /// The outer boundary of a tangle, contracted to a single vertex whose
    /// darts are the boundary points in cyclic order.
    Frame,
    /// A four-valent crossing. Darts are stored in the fixed cyclic order
    /// S, E, N, W with the under strand running S → N. For a positive
    /// crossing the over strand runs W → E, for a negative one E → W.
    /// Labels are unique within a diagram and fix the resolution order.
    Crossing { positive: bool, label: u32 },
}

impl VertexKind {
    pub fn is_trivalent(self) -> bool {
        matches!(self, VertexKind::Sink | VertexKind::Source)
    }

    fn tag(self) -> u32 {
        match self {
            VertexKind::Sink => 0,
            VertexKind::Source => 1,
            VertexKind::Frame => 2,
            VertexKind::Crossing { positive, label } => 3 + 2 * label + u32::from(positive),
        }
    }
}

/// A planar map in rotation-system form.
#[derive(Clone, Debug, Default)]
pub struct Web {
    kind: Vec<VertexKind>,
    first: Vec<u32>,
    alive: Vec<bool>,
    dvert: Vec<u32>,
    dnext: Vec<u32>,
    twin: Vec<u32>,
    out: Vec<bool>,
    loops: u32,
}

/// Canonical structural code of a web; equal codes mean isomorphic maps
/// (including crossing labels and orientations).
pub type WebCode = Vec<u32>;

/// Which of the two smoothings of a square face to take.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SquareSide {
    First,
    Second,
}

/// A reducible face of a web: a bigon or a square on trivalent vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Face {
    Bigon([u32; 2]),
    Square([u32; 4]),
}

impl Web {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds a vertex with `degree` fresh darts (in counterclockwise order)
    /// and returns their ids. Twins must be set with [`Web::connect`].
    pub fn add_vertex(&mut self, kind: VertexKind, degree: usize) -> Vec<u32> {
        let v = self.kind.len() as u32;
        let base = self.dvert.len() as u32;
        self.kind.push(kind);
        self.first.push(base);
        self.alive.push(true);
        let darts: Vec<u32> = (0..degree as u32).map(|i| base + i).collect();
        for i in 0..degree as u32 {
            self.dvert.push(v);
            self.dnext.push(base + (i + 1) % degree as u32);
            self.twin.push(u32::MAX);
            self.out.push(false);
        }
        darts
    }

    /// Joins two darts by an edge directed from `from` to `to`.
    pub fn connect(&mut self, from: u32, to: u32) {
        let (f, t) = (from as usize, to as usize);
        self.twin[f] = to;
        self.twin[t] = from;
        self.out[f] = true;
        self.out[t] = false;
    }

    /// Adds `k` free loops.
    pub fn add_loops(&mut self, k: u32) {
        self.loops += k;
    }

    /// Removes and returns the number of free loops.
    pub fn take_loops(&mut self) -> u32 {
        std::mem::take(&mut self.loops)
    }

    pub fn vertex_count(&self) -> usize {
        self.alive.iter().filter(|a| **a).count()
    }

    pub fn is_empty(&self) -> bool {
        self.vertex_count() == 0 && self.loops == 0
    }

    pub fn kinds(&self) -> impl Iterator<Item = VertexKind> + '_ {
        self.kind.iter().zip(&self.alive).filter(|(_, a)| **a).map(|(k, _)| *k)
    }

    pub fn crossing_count(&self) -> usize {
        self.kinds().filter(|k| matches!(k, VertexKind::Crossing { .. })).count()
    }

    fn darts_of(&self, v: u32) -> Vec<u32> {
        let start = self.first[v as usize];
        let mut out = vec![start];
        let mut d = self.dnext[start as usize];
        while d != start {
            out.push(d);
            d = self.dnext[d as usize];
        }
        out
    }

    fn prev(&self, d: u32) -> u32 {
        let mut p = d;
        loop {
            let n = self.dnext[p as usize];
            if n == d {
                return p;
            }
            p = n;
        }
    }

    /// Checks structural consistency: twins are involutive, edge directions
    /// agree at both ends, trivalent vertices are proper sinks/sources.
    pub fn validate(&self) -> std::result::Result<(), String> {
        for v in 0..self.kind.len() as u32 {
            if !self.alive[v as usize] {
                continue;
            }
            let ds = self.darts_of(v);
            let kind = self.kind[v as usize];
            match kind {
                VertexKind::Sink | VertexKind::Source => {
                    if ds.len() != 3 {
                        return Err(format!("vertex {v} of kind {kind:?} has degree {}", ds.len()));
                    }
                    let want = kind == VertexKind::Source;
                    if ds.iter().any(|d| self.out[*d as usize] != want) {
                        return Err(format!("vertex {v} of kind {kind:?} is not uniformly oriented"));
                    }
                }
                VertexKind::Crossing { positive, .. } => {
                    if ds.len() != 4 {
                        return Err(format!("crossing {v} has degree {}", ds.len()));
                    }
                    let o: Vec<bool> = ds.iter().map(|d| self.out[*d as usize]).collect();
                    let want = if positive {
                        [false, true, true, false]
                    } else {
                        [false, false, true, true]
                    };
                    if o != want {
                        return Err(format!("crossing {v} has inconsistent orientation {o:?}"));
                    }
                }
                VertexKind::Frame => {}
            }
            for d in ds {
                let t = self.twin[d as usize];
                if t == u32::MAX {
                    return Err(format!("dart {d} is unconnected"));
                }
                if self.twin[t as usize] != d || !self.alive[self.dvert[t as usize] as usize] {
                    return Err(format!("dart {d} has a broken twin"));
                }
                if self.out[t as usize] == self.out[d as usize] {
                    return Err(format!("edge at dart {d} has inconsistent direction"));
                }
            }
        }
        Ok(())
    }

    /// Reconnects the far ends of darts `a` and `b` (about to be deleted
    /// together with their vertices), creating a free loop if they were the
    /// two ends of one edge.
    fn splice(&mut self, a: u32, b: u32) {
        let ta = self.twin[a as usize];
        let tb = self.twin[b as usize];
        if ta == b {
            self.loops += 1;
            return;
        }
        self.twin[ta as usize] = tb;
        self.twin[tb as usize] = ta;
    }

    /// The lowest-labelled crossing, if any.
    pub fn next_crossing(&self) -> Option<u32> {
        (0..self.kind.len() as u32)
            .filter(|v| self.alive[*v as usize])
            .filter_map(|v| match self.kind[v as usize] {
                VertexKind::Crossing { label, .. } => Some((label, v)),
                _ => None,
            })
            .min()
            .map(|(_, v)| v)
    }

    pub fn is_positive_crossing(&self, c: u32) -> bool {
        matches!(self.kind[c as usize], VertexKind::Crossing { positive: true, .. })
    }

    /// Resolves crossing `c` into its oriented smoothing and its H-web.
    /// Returns `(smoothing, web)`; the caller supplies the coefficients.
    pub fn resolve(&self, c: u32) -> (Web, Web) {
        let positive = match self.kind[c as usize] {
            VertexKind::Crossing { positive, .. } => positive,
            k => panic!("vertex {c} is not a crossing but {k:?}"),
        };
        let ds = self.darts_of(c);
        let (s, e, n, w) = (ds[0], ds[1], ds[2], ds[3]);

        let mut smooth = self.clone();
        smooth.alive[c as usize] = false;
        if positive {
            smooth.splice(s, e);
            smooth.splice(w, n);
        } else {
            smooth.splice(s, w);
            smooth.splice(e, n);
        }

        let mut web = self.clone();
        let mid_sink = web.dvert.len() as u32;
        let mid_source = mid_sink + 1;
        let src = web.kind.len() as u32;
        web.kind.push(VertexKind::Source);
        web.first.push(mid_source);
        web.alive.push(true);
        web.kind[c as usize] = VertexKind::Sink;
        // two new darts: the rung, directed source → sink
        web.dvert.extend([c, src]);
        web.dnext.extend([0, 0]);
        web.twin.extend([mid_source, mid_sink]);
        web.out.extend([false, true]);
        let (sink_ring, source_ring) = if positive {
            ([s, mid_sink, w], [e, n, mid_source])
        } else {
            ([s, e, mid_sink], [n, w, mid_source])
        };
        web.set_ring(c, &sink_ring);
        web.set_ring(src, &source_ring);
        (smooth, web)
    }

    fn set_ring(&mut self, v: u32, ring: &[u32]) {
        self.first[v as usize] = ring[0];
        for (i, d) in ring.iter().enumerate() {
            self.dvert[*d as usize] = v;
            self.dnext[*d as usize] = ring[(i + 1) % ring.len()];
        }
    }

    fn face_next(&self, d: u32) -> u32 {
        self.prev(self.twin[d as usize])
    }

    /// Finds a bigon (preferred) or square face all of whose corners are
    /// distinct trivalent vertices. Faces touching crossings or the frame
    /// are never reduced. `allowed`, if given, restricts the search to faces
    /// whose first corner is an allowed vertex.
    pub fn find_face(&self, allowed: Option<&[bool]>) -> Option<Face> {
        let nd = self.dvert.len();
        let mut seen = vec![false; nd];
        let mut square = None;
        for d0 in 0..nd as u32 {
            if seen[d0 as usize] || !self.alive[self.dvert[d0 as usize] as usize] {
                continue;
            }
            let mut orbit = Vec::with_capacity(4);
            let mut d = d0;
            loop {
                seen[d as usize] = true;
                orbit.push(d);
                d = self.face_next(d);
                if d == d0 {
                    break;
                }
            }
            if orbit.len() != 2 && orbit.len() != 4 {
                continue;
            }
            let verts: Vec<u32> = orbit.iter().map(|d| self.dvert[*d as usize]).collect();
            if verts.iter().any(|v| !self.kind[*v as usize].is_trivalent()) {
                continue;
            }
            if let Some(allowed) = allowed {
                if !allowed[verts[0] as usize] {
                    continue;
                }
            }
            let distinct = (0..verts.len()).all(|i| (0..i).all(|j| verts[i] != verts[j]));
            if !distinct {
                continue;
            }
            if orbit.len() == 2 {
                return Some(Face::Bigon([orbit[0], orbit[1]]));
            }
            if square.is_none() {
                square = Some(Face::Square([orbit[0], orbit[1], orbit[2], orbit[3]]));
            }
        }
        square
    }

    /// The dart of the (trivalent) vertex of `d` that is neither `d` nor `e`.
    fn third(&self, d: u32, e: u32) -> u32 {
        let a = self.dnext[d as usize];
        if a != e {
            a
        } else {
            self.dnext[a as usize]
        }
    }

    /// Removes a bigon face (the caller multiplies by `[2]`).
    pub fn reduce_bigon(&mut self, face: [u32; 2]) {
        let [d1, d2] = face;
        let u = self.dvert[d1 as usize];
        let v = self.dvert[d2 as usize];
        let a = self.third(d1, self.twin[d2 as usize]);
        let b = self.third(d2, self.twin[d1 as usize]);
        self.alive[u as usize] = false;
        self.alive[v as usize] = false;
        self.splice(a, b);
    }

    /// Replaces a square face by one of its two smoothings.
    pub fn reduce_square(&self, face: [u32; 4], side: SquareSide) -> Web {
        let mut w = self.clone();
        let ext: Vec<u32> = (0..4)
            .map(|i| {
                let d = face[i];
                let back = self.twin[face[(i + 3) % 4] as usize];
                self.third(d, back)
            })
            .collect();
        for d in face {
            w.alive[self.dvert[d as usize] as usize] = false;
        }
        match side {
            SquareSide::First => {
                w.splice(ext[0], ext[1]);
                w.splice(ext[2], ext[3]);
            }
            SquareSide::Second => {
                w.splice(ext[1], ext[2]);
                w.splice(ext[3], ext[0]);
            }
        }
        w
    }

    /// Connected components as lists of vertices.
    pub fn components(&self) -> Vec<Vec<u32>> {
        let nv = self.kind.len();
        let mut comp = vec![usize::MAX; nv];
        let mut out = Vec::new();
        for s in 0..nv {
            if !self.alive[s] || comp[s] != usize::MAX {
                continue;
            }
            let id = out.len();
            let mut members = vec![s as u32];
            comp[s] = id;
            let mut i = 0;
            while i < members.len() {
                let v = members[i];
                i += 1;
                for d in self.darts_of(v) {
                    let u = self.dvert[self.twin[d as usize] as usize];
                    if comp[u as usize] == usize::MAX {
                        comp[u as usize] = id;
                        members.push(u);
                    }
                }
            }
            out.push(members);
        }
        out
    }

    /// Splits off every component made only of trivalent vertices. Returns
    /// the remainder (including the free loops) and the closed webs.
    pub fn split_closed(&self) -> (Web, Vec<Web>) {
        let comps = self.components();
        let mut closed = Vec::new();
        let mut rest = self.clone();
        for c in comps {
            if c.iter().all(|v| self.kind[*v as usize].is_trivalent()) {
                let mut w = self.clone();
                w.loops = 0;
                for a in w.alive.iter_mut() {
                    *a = false;
                }
                for v in &c {
                    w.alive[*v as usize] = true;
                    rest.alive[*v as usize] = false;
                }
                closed.push(w);
            }
        }
        (rest, closed)
    }

    fn component_code(&self, start: u32, cutoff: Option<&[u32]>) -> Option<(Vec<u32>, Vec<(u32, u32)>)> {
        // BFS numbering; each vertex's darts are listed from its entry dart
        // (crossings and frames always from their fixed first dart).
        let nv = self.kind.len();
        let mut num = vec![u32::MAX; nv];
        let mut entry = vec![u32::MAX; nv];
        let mut order: Vec<(u32, u32)> = Vec::new();
        let mut queue = VecDeque::new();
        let mut code = Vec::new();
        let discover = |v: u32, d: u32, num: &mut Vec<u32>, entry: &mut Vec<u32>, order: &mut Vec<(u32, u32)>, queue: &mut VecDeque<u32>| {
            let k = order.len() as u32;
            num[v as usize] = k;
            let e = if self.kind[v as usize].is_trivalent() { d } else { self.first[v as usize] };
            entry[v as usize] = e;
            order.push((v, e));
            queue.push_back(v);
        };
        let v0 = self.dvert[start as usize];
        discover(v0, start, &mut num, &mut entry, &mut order, &mut queue);
        while let Some(v) = queue.pop_front() {
            code.push(self.kind[v as usize].tag());
            let e = entry[v as usize];
            let mut d = e;
            let mut deg = 0;
            let mark = code.len();
            code.push(0);
            loop {
                let t = self.twin[d as usize];
                let u = self.dvert[t as usize];
                if num[u as usize] == u32::MAX {
                    discover(u, t, &mut num, &mut entry, &mut order, &mut queue);
                }
                // position of t in u's ring relative to its entry dart
                let mut pos = 0;
                let mut x = entry[u as usize];
                while x != t {
                    x = self.dnext[x as usize];
                    pos += 1;
                }
                code.push(num[u as usize]);
                code.push(pos * 2 + u32::from(self.out[d as usize]));
                deg += 1;
                d = self.dnext[d as usize];
                if d == e {
                    break;
                }
            }
            code[mark] = deg;
            if let Some(best) = cutoff {
                let l = code.len().min(best.len());
                match code[..l].cmp(&best[..l]) {
                    std::cmp::Ordering::Greater => return None,
                    std::cmp::Ordering::Less => {}
                    std::cmp::Ordering::Equal => {}
                }
            }
        }
        Some((code, order))
    }

    /// Canonical code of the map and an equivalent compact copy whose
    /// numbering follows the code.
    pub fn canonical(&self) -> (WebCode, Web) {
        let mut comps: Vec<(Vec<u32>, Vec<(u32, u32)>)> = Vec::new();
        for c in self.components() {
            let mut crossing = None;
            let mut frame = None;
            for v in &c {
                match self.kind[*v as usize] {
                    VertexKind::Crossing { label, .. } => {
                        if crossing.map_or(true, |(l, _)| label < l) {
                            crossing = Some((label, *v));
                        }
                    }
                    VertexKind::Frame => frame = Some(*v),
                    _ => {}
                }
            }
            let starts: Vec<u32> = if let Some((_, v)) = crossing {
                vec![self.first[v as usize]]
            } else if let Some(v) = frame {
                vec![self.first[v as usize]]
            } else {
                c.iter()
                    .filter(|v| self.kind[**v as usize] == VertexKind::Source)
                    .flat_map(|v| self.darts_of(*v))
                    .collect()
            };
            let mut best: Option<(Vec<u32>, Vec<(u32, u32)>)> = None;
            for s in starts {
                let cut = best.as_ref().map(|b| b.0.as_slice());
                if let Some(cand) = self.component_code(s, cut) {
                    if best.as_ref().map_or(true, |b| cand.0 < b.0) {
                        best = Some(cand);
                    }
                }
            }
            comps.push(best.expect("component has a starting dart"));
        }
        comps.sort_by(|a, b| a.0.cmp(&b.0));

        let mut code = vec![self.loops];
        let mut compact = Web { loops: self.loops, ..Web::default() };
        let mut newdart = vec![u32::MAX; self.dvert.len()];
        for (c, order) in &comps {
            code.push(c.len() as u32);
            code.extend_from_slice(c);
            for (v, e) in order {
                let nv = compact.kind.len() as u32;
                let base = compact.dvert.len() as u32;
                compact.kind.push(self.kind[*v as usize]);
                compact.first.push(base);
                compact.alive.push(true);
                let mut d = *e;
                let mut ring = Vec::new();
                loop {
                    ring.push(d);
                    d = self.dnext[d as usize];
                    if d == *e {
                        break;
                    }
                }
                for (i, d) in ring.iter().enumerate() {
                    newdart[*d as usize] = base + i as u32;
                    compact.dvert.push(nv);
                    compact.dnext.push(base + ((i + 1) % ring.len()) as u32);
                    compact.out.push(self.out[*d as usize]);
                    compact.twin.push(0);
                }
            }
        }
        for (old, new) in newdart.iter().enumerate() {
            if *new != u32::MAX {
                compact.twin[*new as usize] = newdart[self.twin[old] as usize];
            }
        }
        (code, compact)
    }

    /// True when every connected component is embedded in the sphere, i.e.
    /// `V − E + F = 2` per component.
    pub fn is_planar(&self) -> bool {
        let comps = self.components().len() as i64;
        let alive_dart = |d: usize| self.alive[self.dvert[d] as usize];
        let darts = (0..self.dvert.len()).filter(|d| alive_dart(*d)).count() as i64;
        let mut seen = vec![false; self.dvert.len()];
        let mut faces = 0i64;
        for d0 in 0..self.dvert.len() {
            if seen[d0] || !alive_dart(d0) {
                continue;
            }
            faces += 1;
            let mut d = d0 as u32;
            while !seen[d as usize] {
                seen[d as usize] = true;
                d = self.face_next(d);
            }
        }
        self.vertex_count() as i64 - darts / 2 + faces == 2 * comps
    }

    /// All bigon and square faces on distinct trivalent vertices.
    pub fn reducible_faces(&self) -> Vec<Face> {
        let nd = self.dvert.len();
        let mut seen = vec![false; nd];
        let mut out = Vec::new();
        for d0 in 0..nd as u32 {
            if seen[d0 as usize] || !self.alive[self.dvert[d0 as usize] as usize] {
                continue;
            }
            let mut orbit = Vec::new();
            let mut d = d0;
            while !seen[d as usize] {
                seen[d as usize] = true;
                orbit.push(d);
                d = self.face_next(d);
            }
            let verts: Vec<u32> = orbit.iter().map(|d| self.dvert[*d as usize]).collect();
            let distinct = (0..verts.len()).all(|i| (0..i).all(|j| verts[i] != verts[j]));
            if !distinct || verts.iter().any(|v| !self.kind[*v as usize].is_trivalent()) {
                continue;
            }
            match orbit.len() {
                2 => out.push(Face::Bigon([orbit[0], orbit[1]])),
                4 => out.push(Face::Square([orbit[0], orbit[1], orbit[2], orbit[3]])),
                _ => {}
            }
        }
        out
    }

    /// Darts of the frame vertex in cyclic order, if there is one.
    pub fn frame_darts(&self) -> Option<Vec<u32>> {
        (0..self.kind.len() as u32)
            .find(|v| self.alive[*v as usize] && self.kind[*v as usize] == VertexKind::Frame)
            .map(|v| self.darts_of(v))
    }

    /// Crossing vertices with their labels.
    pub fn crossings(&self) -> Vec<(u32, u32)> {
        (0..self.kind.len() as u32)
            .filter(|v| self.alive[*v as usize])
            .filter_map(|v| match self.kind[v as usize] {
                VertexKind::Crossing { label, .. } => Some((v, label)),
                _ => None,
            })
            .collect()
    }

    /// Vertices adjacent to `v`.
    pub fn neighbours(&self, v: u32) -> Vec<u32> {
        self.darts_of(v).into_iter().map(|d| self.dvert[self.twin[d as usize] as usize]).collect()
    }

    /// Relabels crossings: the crossing currently labelled `l` gets `map[l]`.
    pub fn relabel(&mut self, map: &[u32]) {
        for k in self.kind.iter_mut() {
            if let VertexKind::Crossing { label, .. } = k {
                *label = map[*label as usize];
            }
        }
    }
}
