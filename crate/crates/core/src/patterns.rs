//! Enumeration and certification of subgraph patterns: cycles, disjoint
//! cycle pairs, Kuratowski subdivisions, quads, triads, tripods and disjoint
//! path pairs.
//!
//! Subdivision-type patterns share one backtracking engine: model vertices
//! are mapped to branch vertices and model edges to internally disjoint
//! paths, extending from already placed vertices. Ordering constraints on
//! branch images break the model's symmetry so that each pattern is emitted
//! once.

use std::collections::HashSet;
use std::ops::ControlFlow;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::graph::{EdgeVector, Graph};
use intlattice::Int;

/// Hard limits for exhaustive searches. Hitting a limit is reported as
/// [`Truncated`], never silently.
#[derive(Clone, Copy, Debug)]
pub struct Caps {
    pub max_items: usize,
    pub deadline: Option<Instant>,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            max_items: 5_000_000,
            deadline: None,
        }
    }
}

impl Caps {
    pub fn with_seconds(secs: f64) -> Caps {
        Caps {
            deadline: Some(Instant::now() + Duration::from_secs_f64(secs)),
            ..Caps::default()
        }
    }

    /// Default caps, with a time limit taken from `TWOCYCLE_CAP_SECONDS` when set.
    pub fn from_env() -> Caps {
        match std::env::var("TWOCYCLE_CAP_SECONDS")
            .ok()
            .and_then(|s| s.parse::<f64>().ok())
        {
            Some(s) if s > 0.0 => Caps::with_seconds(s),
            _ => Caps::default(),
        }
    }

    fn expired(&self) -> bool {
        self.deadline.is_some_and(|d| Instant::now() >= d)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("enumeration of {what} stopped after {found} items (cap reached)")]
pub struct Truncated {
    pub what: &'static str,
    pub found: usize,
}

/// A directed walk given by its vertex sequence and the edges between
/// consecutive vertices. A single vertex with no edges is a trivial path.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Path {
    pub vertices: Vec<usize>,
    pub edges: Vec<usize>,
}

impl Path {
    pub fn trivial(v: usize) -> Path {
        Path {
            vertices: vec![v],
            edges: vec![],
        }
    }

    pub fn start(&self) -> usize {
        self.vertices[0]
    }

    pub fn end(&self) -> usize {
        *self.vertices.last().expect("nonempty path")
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn interior(&self) -> &[usize] {
        if self.vertices.len() <= 2 {
            &[]
        } else {
            &self.vertices[1..self.vertices.len() - 1]
        }
    }

    pub fn reversed(&self) -> Path {
        let mut p = self.clone();
        p.vertices.reverse();
        p.edges.reverse();
        p
    }

    /// Concatenation; `self` must end where `other` starts.
    pub fn then(&self, other: &Path) -> Path {
        assert_eq!(self.end(), other.start(), "paths do not meet");
        let mut p = self.clone();
        p.vertices.extend_from_slice(&other.vertices[1..]);
        p.edges.extend_from_slice(&other.edges);
        p
    }

    /// Signed edge indicator of the walk: `+1` on edges traversed tail to head.
    pub fn chi(&self, g: &Graph) -> EdgeVector {
        let mut v = EdgeVector::new();
        for (i, &e) in self.edges.iter().enumerate() {
            let s = if g.tail(e) == self.vertices[i] { 1 } else { -1 };
            v.add(e, &Int::from(s));
        }
        v
    }

    /// Checks that consecutive vertices are joined by the listed edges and
    /// that no vertex repeats.
    pub fn certify(&self, g: &Graph) -> Result<(), String> {
        if self.vertices.len() != self.edges.len() + 1 {
            return Err("vertex and edge counts disagree".into());
        }
        let mut seen = HashSet::new();
        for &v in &self.vertices {
            if v >= g.n() || !seen.insert(v) {
                return Err(format!("vertex {v} repeated or out of range"));
            }
        }
        for (i, &e) in self.edges.iter().enumerate() {
            if e >= g.m() {
                return Err(format!("edge {e} out of range"));
            }
            let (a, b) = (self.vertices[i], self.vertices[i + 1]);
            let (t, h) = g.edge(e);
            if !((t == a && h == b) || (t == b && h == a)) {
                return Err(format!("edge {e} does not join {a} and {b}"));
            }
        }
        Ok(())
    }
}

/// A simple closed walk. Edge `edges[i]` joins `vertices[i]` and
/// `vertices[(i + 1) % len]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct OrientedCycle {
    pub vertices: Vec<usize>,
    pub edges: Vec<usize>,
}

impl OrientedCycle {
    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    /// `chi_C`: `+1` on edges traversed forward, `-1` on edges traversed backward.
    pub fn chi(&self, g: &Graph) -> EdgeVector {
        let mut v = EdgeVector::new();
        for (i, &e) in self.edges.iter().enumerate() {
            let s = if g.tail(e) == self.vertices[i] { 1 } else { -1 };
            v.add(e, &Int::from(s));
        }
        v
    }

    pub fn reversed(&self) -> OrientedCycle {
        let k = self.len();
        let vertices = (0..k).map(|i| self.vertices[(k - i) % k]).collect();
        let edges = (0..k).map(|i| self.edges[k - 1 - i]).collect();
        OrientedCycle { vertices, edges }
    }

    /// Rotation starting at the smallest vertex, in the direction whose
    /// first edge index is below its last.
    pub fn canonical(&self) -> OrientedCycle {
        let k = self.len();
        let start = (0..k)
            .min_by_key(|&i| self.vertices[i])
            .expect("nonempty cycle");
        let rot = OrientedCycle {
            vertices: (0..k).map(|i| self.vertices[(start + i) % k]).collect(),
            edges: (0..k).map(|i| self.edges[(start + i) % k]).collect(),
        };
        if rot.edges[0] < rot.edges[k - 1] {
            rot
        } else {
            let r = rot.reversed();
            debug_assert_eq!(r.vertices[0], rot.vertices[0]);
            r
        }
    }

    pub fn contains_vertex(&self, v: usize) -> bool {
        self.vertices.contains(&v)
    }

    pub fn certify(&self, g: &Graph) -> Result<(), String> {
        let k = self.len();
        if k < 2 || self.vertices.len() != k {
            return Err("a cycle needs at least two edges and matching vertices".into());
        }
        let mut closed = self.vertices.clone();
        closed.push(self.vertices[0]);
        let p = Path {
            vertices: closed,
            edges: self.edges.clone(),
        };
        // the closing vertex repeats by design; check the open part
        let open = Path {
            vertices: self.vertices.clone(),
            edges: self.edges[..k - 1].to_vec(),
        };
        open.certify(g)?;
        let (t, h) = g.edge(self.edges[k - 1]);
        let (a, b) = (p.vertices[k - 1], p.vertices[k]);
        if !((t == a && h == b) || (t == b && h == a)) {
            return Err("closing edge does not close the cycle".into());
        }
        if self.edges.iter().collect::<HashSet<_>>().len() != k {
            return Err("repeated edge".into());
        }
        Ok(())
    }
}

/// Small vertex bitset for fast disjointness tests.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct VertexSet(Vec<u64>);

impl VertexSet {
    pub fn new(n: usize) -> Self {
        VertexSet(vec![0; n.div_ceil(64).max(1)])
    }

    pub fn from_iter(n: usize, it: impl IntoIterator<Item = usize>) -> Self {
        let mut s = VertexSet::new(n);
        for v in it {
            s.insert(v);
        }
        s
    }

    pub fn insert(&mut self, v: usize) {
        self.0[v / 64] |= 1 << (v % 64);
    }

    pub fn contains(&self, v: usize) -> bool {
        self.0[v / 64] >> (v % 64) & 1 == 1
    }

    pub fn is_disjoint(&self, other: &VertexSet) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a & b == 0)
    }
}

/// All simple cycles, one canonical orientation each, in a deterministic order.
pub fn enumerate_cycles(g: &Graph, caps: &Caps) -> Result<Vec<OrientedCycle>, Truncated> {
    let mut out = Vec::new();
    let mut on_path = vec![false; g.n()];
    for s in 0..g.n() {
        let mut verts = vec![s];
        let mut edges = vec![];
        on_path[s] = true;
        let flow = cycle_dfs(
            g,
            s,
            s,
            &mut verts,
            &mut edges,
            &mut on_path,
            &mut out,
            caps,
        );
        on_path[s] = false;
        if flow.is_break() {
            return Err(Truncated {
                what: "cycles",
                found: out.len(),
            });
        }
    }
    Ok(out)
}

#[allow(clippy::too_many_arguments)]
fn cycle_dfs(
    g: &Graph,
    s: usize,
    v: usize,
    verts: &mut Vec<usize>,
    edges: &mut Vec<usize>,
    on_path: &mut [bool],
    out: &mut Vec<OrientedCycle>,
    caps: &Caps,
) -> ControlFlow<()> {
    for &e in g.edges_at(v) {
        let w = g.other_end(e, v);
        if w == s {
            if !edges.is_empty() && e != edges[0] && edges[0] < e {
                let mut es = edges.clone();
                es.push(e);
                out.push(OrientedCycle {
                    vertices: verts.clone(),
                    edges: es,
                });
                if out.len() >= caps.max_items || (out.len().is_multiple_of(4096) && caps.expired())
                {
                    return ControlFlow::Break(());
                }
            }
        } else if w > s && !on_path[w] {
            on_path[w] = true;
            verts.push(w);
            edges.push(e);
            cycle_dfs(g, s, w, verts, edges, on_path, out, caps)?;
            edges.pop();
            verts.pop();
            on_path[w] = false;
        }
    }
    ControlFlow::Continue(())
}

/// All ordered pairs `(i, j)` of indices into `cycles` whose cycles are
/// vertex-disjoint.
pub fn disjoint_cycle_pairs(g: &Graph, cycles: &[OrientedCycle]) -> Vec<(usize, usize)> {
    let sets: Vec<VertexSet> = cycles
        .iter()
        .map(|c| VertexSet::from_iter(g.n(), c.vertices.iter().copied()))
        .collect();
    let mut out = Vec::new();
    for i in 0..cycles.len() {
        for j in 0..cycles.len() {
            if i != j && sets[i].is_disjoint(&sets[j]) {
                out.push((i, j));
            }
        }
    }
    out
}

pub fn enumerate_disjoint_cycle_pairs(
    g: &Graph,
    caps: &Caps,
) -> Result<Vec<(OrientedCycle, OrientedCycle)>, Truncated> {
    let cycles = enumerate_cycles(g, caps)?;
    Ok(disjoint_cycle_pairs(g, &cycles)
        .into_iter()
        .map(|(i, j)| (cycles[i].clone(), cycles[j].clone()))
        .collect())
}

// ---------------------------------------------------------------------------
// subdivision search engine

struct Model {
    nv: usize,
    edges: Vec<(usize, usize)>,
    /// `(x, y)`: the image of `x` must be below the image of `y`.
    less: Vec<(usize, usize)>,
    fixed: Vec<Option<usize>>,
}

impl Model {
    fn degree(&self, x: usize) -> usize {
        self.edges
            .iter()
            .filter(|&&(a, b)| a == x || b == x)
            .count()
    }
}

struct Embedding<'a> {
    img: &'a [usize],
    /// Arc of model edge `i`, directed from `edges[i].0` to `edges[i].1`.
    arcs: &'a [Path],
}

struct Engine<'g, 'm, F> {
    g: &'g Graph,
    model: &'m Model,
    order: Vec<usize>,
    model_degree: Vec<usize>,
    img: Vec<Option<usize>>,
    used: Vec<bool>,
    arcs: Vec<Option<Path>>,
    caps: Caps,
    steps: u64,
    truncated: bool,
    emit: F,
}

impl<'g, 'm, F: FnMut(&Embedding) -> ControlFlow<()>> Engine<'g, 'm, F> {
    fn new(g: &'g Graph, model: &'m Model, caps: Caps, emit: F) -> Self {
        let model_degree = (0..model.nv).map(|x| model.degree(x)).collect();
        Engine {
            g,
            model,
            order: Vec::new(),
            model_degree,
            img: vec![None; model.nv],
            used: vec![false; g.n()],
            arcs: vec![None; model.edges.len()],
            caps,
            steps: 0,
            truncated: false,
            emit,
        }
    }

    fn plan(&mut self, first: Option<usize>) {
        let mut scheduled: Vec<bool> = self.model.fixed.iter().map(Option::is_some).collect();
        if let Some(f) = first {
            scheduled[f] = true;
        }
        let mut done = vec![false; self.model.edges.len()];
        self.order.clear();
        while self.order.len() < self.model.edges.len() {
            let next = (0..self.model.edges.len())
                .find(|&i| {
                    let (a, b) = self.model.edges[i];
                    !done[i] && (scheduled[a] || scheduled[b])
                })
                .expect("model is connected to its placed vertices");
            done[next] = true;
            let (a, b) = self.model.edges[next];
            scheduled[a] = true;
            scheduled[b] = true;
            self.order.push(next);
        }
    }

    fn order_ok(&self, x: usize, w: usize) -> bool {
        self.model.less.iter().all(|&(p, q)| {
            if p == x {
                self.img[q].is_none_or(|iq| w < iq)
            } else if q == x {
                self.img[p].is_none_or(|ip| ip < w)
            } else {
                true
            }
        })
    }

    fn run(&mut self) -> ControlFlow<()> {
        for (x, f) in self.model.fixed.iter().enumerate() {
            if let Some(v) = f {
                self.img[x] = Some(*v);
                self.used[*v] = true;
            }
        }
        let free_start = if self.model.fixed.iter().all(Option::is_none) {
            Some(0)
        } else {
            None
        };
        self.plan(free_start);
        match free_start {
            Some(x) => {
                for v in 0..self.g.n() {
                    if self.g.degree(v) < self.model_degree[x] || !self.order_ok(x, v) {
                        continue;
                    }
                    self.img[x] = Some(v);
                    self.used[v] = true;
                    let r = self.step(0);
                    self.used[v] = false;
                    self.img[x] = None;
                    r?;
                }
                ControlFlow::Continue(())
            }
            None => self.step(0),
        }
    }

    fn step(&mut self, k: usize) -> ControlFlow<()> {
        self.steps += 1;
        if self.steps.is_multiple_of(8192) && self.caps.expired() {
            self.truncated = true;
            return ControlFlow::Break(());
        }
        if k == self.order.len() {
            let img: Vec<usize> = self.img.iter().map(|x| x.expect("all placed")).collect();
            let arcs: Vec<Path> = self
                .arcs
                .iter()
                .map(|a| a.clone().expect("all routed"))
                .collect();
            return (self.emit)(&Embedding {
                img: &img,
                arcs: &arcs,
            });
        }
        let ei = self.order[k];
        let (x, y) = self.model.edges[ei];
        let (from, to, flip) = if self.img[x].is_some() {
            (x, y, false)
        } else {
            (y, x, true)
        };
        let start = self.img[from].expect("scheduled vertex placed");
        let mut path = Path::trivial(start);
        self.route(k, ei, to, flip, &mut path)
    }

    fn route(
        &mut self,
        k: usize,
        ei: usize,
        to: usize,
        flip: bool,
        path: &mut Path,
    ) -> ControlFlow<()> {
        let cur = path.end();
        let g = self.g;
        for &e in g.edges_at(cur) {
            let w = g.other_end(e, cur);
            match self.img[to] {
                Some(target) => {
                    if w == target {
                        path.vertices.push(w);
                        path.edges.push(e);
                        let r = self.finish_arc(k, ei, flip, path);
                        path.vertices.pop();
                        path.edges.pop();
                        r?;
                    } else if !self.used[w] {
                        self.used[w] = true;
                        path.vertices.push(w);
                        path.edges.push(e);
                        let r = self.route(k, ei, to, flip, path);
                        path.vertices.pop();
                        path.edges.pop();
                        self.used[w] = false;
                        r?;
                    }
                }
                None => {
                    if self.used[w] {
                        continue;
                    }
                    self.used[w] = true;
                    path.vertices.push(w);
                    path.edges.push(e);
                    if g.degree(w) >= self.model_degree[to] && self.order_ok(to, w) {
                        self.img[to] = Some(w);
                        let r = self.finish_arc(k, ei, flip, path);
                        self.img[to] = None;
                        if r.is_break() {
                            path.vertices.pop();
                            path.edges.pop();
                            self.used[w] = false;
                            return r;
                        }
                    }
                    let r = self.route(k, ei, to, flip, path);
                    path.vertices.pop();
                    path.edges.pop();
                    self.used[w] = false;
                    r?;
                }
            }
        }
        ControlFlow::Continue(())
    }

    fn finish_arc(&mut self, k: usize, ei: usize, flip: bool, path: &Path) -> ControlFlow<()> {
        self.arcs[ei] = Some(if flip { path.reversed() } else { path.clone() });
        let r = self.step(k + 1);
        self.arcs[ei] = None;
        r
    }
}

/// Runs the engine; returns `Err(())` when the deadline cut the search short.
fn search(
    g: &Graph,
    model: &Model,
    caps: Caps,
    emit: impl FnMut(&Embedding) -> ControlFlow<()>,
) -> Result<(), ()> {
    let mut eng = Engine::new(g, model, caps, emit);
    let _ = eng.run();
    if eng.truncated {
        Err(())
    } else {
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// Kuratowski subdivisions

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum KuratowskiKind {
    K5,
    K33,
}

/// Model edges of the two Kuratowski graphs. K5 vertices are `0..5`; for
/// K3,3 vertices `0..3` form one part and `3..6` the other.
pub fn kuratowski_model_edges(kind: KuratowskiKind) -> Vec<(usize, usize)> {
    match kind {
        KuratowskiKind::K5 => {
            let mut e = vec![];
            for i in 0..5 {
                for j in i + 1..5 {
                    e.push((i, j));
                }
            }
            e
        }
        KuratowskiKind::K33 => {
            let mut e = vec![];
            for i in 0..3 {
                for j in 3..6 {
                    e.push((i, j));
                }
            }
            e
        }
    }
}

/// A subdivision of K5 or K3,3: `branch[x]` is the image of model vertex `x`
/// and `arcs[i]` the path replacing model edge `i`, directed along it.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct KuratowskiSubdivision {
    pub kind: KuratowskiKind,
    pub branch: Vec<usize>,
    pub arcs: Vec<Path>,
}

impl KuratowskiSubdivision {
    pub fn model_edges(&self) -> Vec<(usize, usize)> {
        kuratowski_model_edges(self.kind)
    }

    pub fn edge_set(&self) -> Vec<usize> {
        let mut e: Vec<usize> = self
            .arcs
            .iter()
            .flat_map(|a| a.edges.iter().copied())
            .collect();
        e.sort_unstable();
        e
    }

    pub fn vertex_set(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self
            .arcs
            .iter()
            .flat_map(|a| a.vertices.iter().copied())
            .collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    pub fn certify(&self, g: &Graph) -> Result<(), String> {
        certify_arcs(g, &self.branch, &self.model_edges(), &self.arcs)
    }
}

/// Checks that `arcs` realise `model_edges` on the branch images with
/// internally disjoint paths avoiding all branch vertices.
fn certify_arcs(
    g: &Graph,
    branch: &[usize],
    model_edges: &[(usize, usize)],
    arcs: &[Path],
) -> Result<(), String> {
    if arcs.len() != model_edges.len() {
        return Err("wrong number of arcs".into());
    }
    let branch_set: HashSet<usize> = branch.iter().copied().collect();
    if branch_set.len() != branch.len() {
        return Err("branch vertices repeat".into());
    }
    let mut interior_seen = HashSet::new();
    for (arc, &(x, y)) in arcs.iter().zip(model_edges) {
        arc.certify(g)?;
        if arc.is_empty() || arc.start() != branch[x] || arc.end() != branch[y] {
            return Err(format!("arc for model edge ({x},{y}) has wrong ends"));
        }
        for &v in arc.interior() {
            if branch_set.contains(&v) || !interior_seen.insert(v) {
                return Err(format!("arc interiors meet at vertex {v}"));
            }
        }
    }
    Ok(())
}

pub fn enumerate_kuratowski_subdivisions(
    g: &Graph,
    kind: KuratowskiKind,
    caps: &Caps,
) -> Result<Vec<KuratowskiSubdivision>, Truncated> {
    let edges = kuratowski_model_edges(kind);
    let (nv, less) = match kind {
        KuratowskiKind::K5 => (5, vec![(0, 1), (1, 2), (2, 3), (3, 4)]),
        KuratowskiKind::K33 => (6, vec![(0, 1), (1, 2), (3, 4), (4, 5), (0, 3)]),
    };
    let model = Model {
        nv,
        edges,
        less,
        fixed: vec![None; nv],
    };
    let mut out = Vec::new();
    let mut seen = HashSet::new();
    let what = match kind {
        KuratowskiKind::K5 => "K5 subdivisions",
        KuratowskiKind::K33 => "K3,3 subdivisions",
    };
    let mut capped = false;
    let res = search(g, &model, *caps, |emb| {
        let h = KuratowskiSubdivision {
            kind,
            branch: emb.img.to_vec(),
            arcs: emb.arcs.to_vec(),
        };
        if seen.insert(h.edge_set()) {
            out.push(h);
        }
        if out.len() >= caps.max_items {
            capped = true;
            return ControlFlow::Break(());
        }
        ControlFlow::Continue(())
    });
    if res.is_err() || capped {
        return Err(Truncated {
            what,
            found: out.len(),
        });
    }
    Ok(out)
}

/// All Kuratowski subdivisions of both kinds (K5 first).
pub fn enumerate_all_kuratowski(
    g: &Graph,
    caps: &Caps,
) -> Result<Vec<KuratowskiSubdivision>, Truncated> {
    let mut v = enumerate_kuratowski_subdivisions(g, KuratowskiKind::K5, caps)?;
    v.extend(enumerate_kuratowski_subdivisions(
        g,
        KuratowskiKind::K33,
        caps,
    )?);
    Ok(v)
}

/// Whether some Kuratowski subdivision exists.
pub fn has_kuratowski_subgraph(g: &Graph, caps: &Caps) -> Result<bool, Truncated> {
    for kind in [KuratowskiKind::K5, KuratowskiKind::K33] {
        let edges = kuratowski_model_edges(kind);
        let (nv, less) = match kind {
            KuratowskiKind::K5 => (5, vec![(0, 1), (1, 2), (2, 3), (3, 4)]),
            KuratowskiKind::K33 => (6, vec![(0, 1), (1, 2), (3, 4), (4, 5), (0, 3)]),
        };
        let model = Model {
            nv,
            edges,
            less,
            fixed: vec![None; nv],
        };
        let mut found = false;
        let res = search(g, &model, *caps, |_| {
            found = true;
            ControlFlow::Break(())
        });
        if found {
            return Ok(true);
        }
        if res.is_err() {
            return Err(Truncated {
                what: "Kuratowski search",
                found: 0,
            });
        }
    }
    Ok(false)
}

// ---------------------------------------------------------------------------
// quads

/// A quad: axle vertices `a, b` and `c, d`; for each `i` the paths
/// `pa[i]: a -> u[i]`, `pb[i]: b -> u[i]` (together an a–b path through
/// `u[i]`), `rc[i]: c -> v[i]`, `rd[i]: d -> v[i]`, and the connector
/// `q[i]: u[i] -> v[i]` (trivial when `u[i] == v[i]`).
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Quad {
    pub a: usize,
    pub b: usize,
    pub c: usize,
    pub d: usize,
    pub u: [usize; 3],
    pub v: [usize; 3],
    pub pa: [Path; 3],
    pub pb: [Path; 3],
    pub rc: [Path; 3],
    pub rd: [Path; 3],
    pub q: [Path; 3],
}

impl Quad {
    /// Total length of the connectors.
    pub fn width(&self) -> usize {
        self.q.iter().map(Path::len).sum()
    }

    pub fn edge_set(&self) -> Vec<usize> {
        let mut e: Vec<usize> = self
            .pa
            .iter()
            .chain(&self.pb)
            .chain(&self.rc)
            .chain(&self.rd)
            .chain(&self.q)
            .flat_map(|p| p.edges.iter().copied())
            .collect();
        e.sort_unstable();
        e
    }

    /// The four admissible left sides `(s, t)` with `s` in `{a, b}` and `t`
    /// in `{c, d}`.
    pub fn left_sides(&self) -> [(usize, usize); 4] {
        [
            (self.a, self.c),
            (self.a, self.d),
            (self.b, self.c),
            (self.b, self.d),
        ]
    }

    /// Path `s -> u[i]` on the `{a, b}` axle.
    pub fn p_from(&self, s: usize, i: usize) -> &Path {
        if s == self.a {
            &self.pa[i]
        } else {
            &self.pb[i]
        }
    }

    /// Path `t -> v[i]` on the `{c, d}` axle.
    pub fn r_from(&self, t: usize, i: usize) -> &Path {
        if t == self.c {
            &self.rc[i]
        } else {
            &self.rd[i]
        }
    }

    /// Branch path `s -> u[i] -> v[i] -> t`.
    pub fn branch(&self, s: usize, t: usize, i: usize) -> Path {
        self.p_from(s, i)
            .then(&self.q[i])
            .then(&self.r_from(t, i).reversed())
    }

    pub fn certify(&self, g: &Graph) -> Result<(), String> {
        let mut branch = vec![self.a, self.b, self.c, self.d];
        let mut model = vec![];
        let mut arcs = vec![];
        for i in 0..3 {
            let ui = branch.len();
            branch.push(self.u[i]);
            let vi = if self.q[i].is_empty() {
                if self.u[i] != self.v[i] {
                    return Err("trivial connector with distinct ends".into());
                }
                ui
            } else {
                branch.push(self.v[i]);
                model.push((ui, ui + 1));
                arcs.push(self.q[i].clone());
                ui + 1
            };
            model.push((0, ui));
            arcs.push(self.pa[i].clone());
            model.push((1, ui));
            arcs.push(self.pb[i].clone());
            model.push((2, vi));
            arcs.push(self.rc[i].clone());
            model.push((3, vi));
            arcs.push(self.rd[i].clone());
        }
        certify_arcs(g, &branch, &model, &arcs)
    }
}

/// Quad model with the first `merged` connectors of length zero.
fn quad_model(merged: usize) -> (Model, Vec<(usize, usize)>) {
    let mut edges = vec![];
    let mut less = vec![(0, 1), (2, 3), (0, 2)];
    let mut uv = vec![];
    let mut next = 4;
    for i in 0..3 {
        let (u, v) = if i < merged {
            next += 1;
            (next - 1, next - 1)
        } else {
            next += 2;
            (next - 2, next - 1)
        };
        uv.push((u, v));
        edges.push((0, u));
        edges.push((1, u));
        if u != v {
            edges.push((u, v));
        }
        edges.push((2, v));
        edges.push((3, v));
    }
    for i in 0..2 {
        let same_kind = (i < merged) == (i + 1 < merged);
        if same_kind {
            less.push((uv[i].0, uv[i + 1].0));
        }
    }
    (
        Model {
            nv: next,
            edges: edges.clone(),
            less,
            fixed: vec![None; next],
        },
        uv,
    )
}

fn quad_from_embedding(model: &Model, uv: &[(usize, usize)], emb: &Embedding) -> Quad {
    let arc = |x: usize, y: usize| -> Path {
        let i = model
            .edges
            .iter()
            .position(|&e| e == (x, y))
            .expect("model edge");
        emb.arcs[i].clone()
    };
    let mut u = [0; 3];
    let mut v = [0; 3];
    let mut pa = Vec::new();
    let mut pb = Vec::new();
    let mut rc = Vec::new();
    let mut rd = Vec::new();
    let mut q = Vec::new();
    for i in 0..3 {
        let (mu, mv) = uv[i];
        u[i] = emb.img[mu];
        v[i] = emb.img[mv];
        pa.push(arc(0, mu));
        pb.push(arc(1, mu));
        rc.push(arc(2, mv));
        rd.push(arc(3, mv));
        q.push(if mu == mv {
            Path::trivial(u[i])
        } else {
            arc(mu, mv)
        });
    }
    let arr = |v: Vec<Path>| -> [Path; 3] { v.try_into().expect("three paths") };
    Quad {
        a: emb.img[0],
        b: emb.img[1],
        c: emb.img[2],
        d: emb.img[3],
        u,
        v,
        pa: arr(pa),
        pb: arr(pb),
        rc: arr(rc),
        rd: arr(rd),
        q: arr(q),
    }
}

/// All quads; each is stored once per axle structure (the four left sides
/// are derived views).
pub fn enumerate_quads(g: &Graph, caps: &Caps) -> Result<Vec<Quad>, Truncated> {
    let mut out = Vec::new();
    let mut seen = HashSet::new();
    for merged in (0..=3).rev() {
        let (model, uv) = quad_model(merged);
        let mut capped = false;
        let res = search(g, &model, *caps, |emb| {
            let quad = quad_from_embedding(&model, &uv, emb);
            let key = (quad.edge_set(), quad.a, quad.b, quad.c, quad.d);
            if seen.insert(key) {
                out.push(quad);
            }
            if out.len() >= caps.max_items {
                capped = true;
                return ControlFlow::Break(());
            }
            ControlFlow::Continue(())
        });
        if res.is_err() || capped {
            return Err(Truncated {
                what: "quads",
                found: out.len(),
            });
        }
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// triads and tripods

/// A tree with one vertex of degree three whose leaves are the feet.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Triad {
    pub center: usize,
    /// `legs[i]` runs from the center to `feet[i]`.
    pub legs: [Path; 3],
    pub feet: [usize; 3],
}

impl Triad {
    pub fn certify(&self, g: &Graph) -> Result<(), String> {
        let branch = vec![self.center, self.feet[0], self.feet[1], self.feet[2]];
        certify_arcs(g, &branch, &[(0, 1), (0, 2), (0, 3)], &self.legs)
    }
}

pub fn find_triad(g: &Graph, feet: [usize; 3]) -> Option<Triad> {
    if feet[0] == feet[1] || feet[1] == feet[2] || feet[0] == feet[2] {
        return None;
    }
    let model = Model {
        nv: 4,
        edges: vec![(0, 1), (0, 2), (0, 3)],
        less: vec![],
        fixed: vec![None, Some(feet[0]), Some(feet[1]), Some(feet[2])],
    };
    let mut found = None;
    let _ = search(g, &model, Caps::default(), |emb| {
        found = Some(Triad {
            center: emb.img[0],
            legs: emb.arcs.to_vec().try_into().expect("three legs"),
            feet,
        });
        ControlFlow::Break(())
    });
    found
}

/// Two vertices `a, b` joined by three paths through `u[i]`, with legs
/// `u[i] -> feet[i]` leaving the theta only at `u[i]`. A leg may be trivial.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Tripod {
    pub a: usize,
    pub b: usize,
    pub u: [usize; 3],
    /// `pa[i]: a -> u[i]` and `pb[i]: b -> u[i]`.
    pub pa: [Path; 3],
    pub pb: [Path; 3],
    pub legs: [Path; 3],
    pub feet: [usize; 3],
}

impl Tripod {
    pub fn certify(&self, g: &Graph) -> Result<(), String> {
        let mut branch = vec![self.a, self.b];
        let mut model = vec![];
        let mut arcs = vec![];
        for i in 0..3 {
            let ui = branch.len();
            branch.push(self.u[i]);
            if self.legs[i].is_empty() {
                if self.u[i] != self.feet[i] {
                    return Err("trivial leg away from its foot".into());
                }
            } else {
                branch.push(self.feet[i]);
                model.push((ui, ui + 1));
                arcs.push(self.legs[i].clone());
            }
            model.push((0, ui));
            arcs.push(self.pa[i].clone());
            model.push((1, ui));
            arcs.push(self.pb[i].clone());
        }
        certify_arcs(g, &branch, &model, &arcs)
    }
}

pub fn find_tripod(g: &Graph, feet: [usize; 3]) -> Option<Tripod> {
    if feet[0] == feet[1] || feet[1] == feet[2] || feet[0] == feet[2] {
        return None;
    }
    for trivial_mask in 0u8..8 {
        // model: a = 0, b = 1, then u_i (and the fixed foot when the leg is nontrivial)
        let mut fixed = vec![None, None];
        let mut edges = vec![];
        let mut u_ids = [0; 3];
        for (i, &foot) in feet.iter().enumerate() {
            let ui = fixed.len();
            u_ids[i] = ui;
            if trivial_mask >> i & 1 == 1 {
                fixed.push(Some(foot));
            } else {
                fixed.push(None);
                fixed.push(Some(foot));
                edges.push((ui, ui + 1));
            }
        }
        for &ui in &u_ids {
            edges.push((0, ui));
            edges.push((1, ui));
        }
        let nv = fixed.len();
        let model = Model {
            nv,
            edges: edges.clone(),
            less: vec![(0, 1)],
            fixed,
        };
        let mut found = None;
        let _ = search(g, &model, Caps::default(), |emb| {
            let arc = |x: usize, y: usize| {
                emb.arcs[edges.iter().position(|&e| e == (x, y)).expect("model edge")].clone()
            };
            let mut legs = vec![];
            let mut pa = vec![];
            let mut pb = vec![];
            let mut u = [0; 3];
            for i in 0..3 {
                let ui = u_ids[i];
                u[i] = emb.img[ui];
                pa.push(arc(0, ui));
                pb.push(arc(1, ui));
                legs.push(if trivial_mask >> i & 1 == 1 {
                    Path::trivial(u[i])
                } else {
                    arc(ui, ui + 1)
                });
            }
            found = Some(Tripod {
                a: emb.img[0],
                b: emb.img[1],
                u,
                pa: pa.try_into().expect("three"),
                pb: pb.try_into().expect("three"),
                legs: legs.try_into().expect("three"),
                feet,
            });
            ControlFlow::Break(())
        });
        if found.is_some() {
            return found;
        }
    }
    None
}

// ---------------------------------------------------------------------------
// disjoint path pairs

/// All simple paths between distinct members of `ends`, each listed once,
/// directed from the smaller end to the larger.
pub fn paths_between(g: &Graph, ends: &[usize], caps: &Caps) -> Result<Vec<Path>, Truncated> {
    let mut is_end = vec![false; g.n()];
    for &r in ends {
        is_end[r] = true;
    }
    let mut out = Vec::new();
    let mut used = vec![false; g.n()];
    let mut ends_sorted = ends.to_vec();
    ends_sorted.sort_unstable();
    ends_sorted.dedup();
    for &s in &ends_sorted {
        used[s] = true;
        let mut p = Path::trivial(s);
        let flow = path_dfs(g, s, &is_end, &mut used, &mut p, &mut out, caps);
        used[s] = false;
        if flow.is_break() {
            return Err(Truncated {
                what: "paths",
                found: out.len(),
            });
        }
    }
    Ok(out)
}

fn path_dfs(
    g: &Graph,
    s: usize,
    is_end: &[bool],
    used: &mut [bool],
    p: &mut Path,
    out: &mut Vec<Path>,
    caps: &Caps,
) -> ControlFlow<()> {
    let cur = p.end();
    for &e in g.edges_at(cur) {
        let w = g.other_end(e, cur);
        if used[w] {
            continue;
        }
        used[w] = true;
        p.vertices.push(w);
        p.edges.push(e);
        if is_end[w] && w > s {
            out.push(p.clone());
            if out.len() >= caps.max_items {
                return ControlFlow::Break(());
            }
        }
        let r = path_dfs(g, s, is_end, used, p, out, caps);
        p.vertices.pop();
        p.edges.pop();
        used[w] = false;
        r?;
    }
    ControlFlow::Continue(())
}

/// All pairs `(P1, P2)` of vertex-disjoint paths, `P1` joining two members
/// of `r1` and `P2` two members of `r2`. Each path is directed from its
/// smaller end to its larger end.
pub fn enumerate_disjoint_path_pairs(
    g: &Graph,
    r1: &[usize],
    r2: &[usize],
    caps: &Caps,
) -> Result<Vec<(Path, Path)>, Truncated> {
    let p1 = paths_between(g, r1, caps)?;
    let p2 = paths_between(g, r2, caps)?;
    let s1: Vec<VertexSet> = p1
        .iter()
        .map(|p| VertexSet::from_iter(g.n(), p.vertices.iter().copied()))
        .collect();
    let s2: Vec<VertexSet> = p2
        .iter()
        .map(|p| VertexSet::from_iter(g.n(), p.vertices.iter().copied()))
        .collect();
    let mut out = Vec::new();
    for (i, a) in p1.iter().enumerate() {
        for (j, b) in p2.iter().enumerate() {
            if s1[i].is_disjoint(&s2[j]) {
                out.push((a.clone(), b.clone()));
                if out.len() >= caps.max_items {
                    return Err(Truncated {
                        what: "path pairs",
                        found: out.len(),
                    });
                }
            }
        }
    }
    Ok(out)
}

/// Two vertex-disjoint paths `x1 -> y1` and `x2 -> y2` inside the vertex
/// set `allowed`, if they exist.
pub fn find_linkage(
    g: &Graph,
    allowed: &[bool],
    x1: usize,
    y1: usize,
    x2: usize,
    y2: usize,
) -> bool {
    let ends = [x1, y1, x2, y2];
    if ends.iter().collect::<HashSet<_>>().len() != 4 || ends.iter().any(|&v| !allowed[v]) {
        return false;
    }
    let mut used: Vec<bool> = allowed.iter().map(|a| !a).collect();
    used[x1] = true;
    used[y2] = true;
    used[x2] = true;
    // first path x1 -> y1 avoiding x2, y2; then look for x2 -> y2 in the rest
    let mut p = Path::trivial(x1);
    linkage_dfs(g, y1, x2, y2, &mut used, &mut p)
}

fn linkage_dfs(
    g: &Graph,
    y1: usize,
    x2: usize,
    y2: usize,
    used: &mut [bool],
    p: &mut Path,
) -> bool {
    let cur = p.end();
    for &e in g.edges_at(cur) {
        let w = g.other_end(e, cur);
        if w == y1 {
            used[y1] = true;
            used[y2] = false;
            let ok = reachable(g, x2, y2, used);
            used[y2] = true;
            used[y1] = false;
            if ok {
                return true;
            }
            continue;
        }
        if used[w] {
            continue;
        }
        used[w] = true;
        p.vertices.push(w);
        p.edges.push(e);
        let ok = linkage_dfs(g, y1, x2, y2, used, p);
        p.vertices.pop();
        p.edges.pop();
        used[w] = false;
        if ok {
            return true;
        }
    }
    false
}

fn reachable(g: &Graph, from: usize, to: usize, blocked: &[bool]) -> bool {
    let mut seen = vec![false; g.n()];
    let mut stack = vec![from];
    seen[from] = true;
    while let Some(v) = stack.pop() {
        if v == to {
            return true;
        }
        for &e in g.edges_at(v) {
            let w = g.other_end(e, v);
            if !seen[w] && (!blocked[w] || w == to) {
                seen[w] = true;
                stack.push(w);
            }
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn complete(n: usize) -> Graph {
        let mut e = vec![];
        for i in 0..n {
            for j in i + 1..n {
                e.push((i, j));
            }
        }
        Graph::from_edges(n, &e)
    }

    fn bipartite(p: usize, q: usize) -> Graph {
        let mut e = vec![];
        for i in 0..p {
            for j in 0..q {
                e.push((i, p + j));
            }
        }
        Graph::from_edges(p + q, &e)
    }

    #[test]
    fn cycle_counts() {
        let caps = Caps::default();
        assert_eq!(enumerate_cycles(&complete(3), &caps).unwrap().len(), 1);
        assert_eq!(enumerate_cycles(&complete(4), &caps).unwrap().len(), 7);
        let par = Graph::from_edges(2, &[(0, 1), (1, 0), (0, 1)]);
        assert_eq!(enumerate_cycles(&par, &caps).unwrap().len(), 3);
    }

    #[test]
    fn cycles_certify_and_circulate() {
        let g = complete(5);
        for c in enumerate_cycles(&g, &Caps::default()).unwrap() {
            c.certify(&g).unwrap();
            assert!(g.is_circulation(&c.chi(&g)));
            assert_eq!(c.canonical(), c);
            assert_eq!(c.reversed().canonical(), c);
        }
    }

    #[test]
    fn disjoint_pair_counts() {
        let caps = Caps::default();
        assert!(enumerate_disjoint_cycle_pairs(&complete(5), &caps)
            .unwrap()
            .is_empty());
        let k6 = complete(6);
        let pairs = enumerate_disjoint_cycle_pairs(&k6, &caps).unwrap();
        assert_eq!(pairs.len(), 20);
        let two = Graph::from_edges(6, &[(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3)]);
        assert_eq!(
            enumerate_disjoint_cycle_pairs(&two, &caps).unwrap().len(),
            2
        );
    }

    #[test]
    fn kuratowski_counts() {
        let caps = Caps::default();
        let k5 =
            enumerate_kuratowski_subdivisions(&complete(5), KuratowskiKind::K5, &caps).unwrap();
        assert_eq!(k5.len(), 1);
        k5[0].certify(&complete(5)).unwrap();
        let k33 = bipartite(3, 3);
        assert_eq!(
            enumerate_kuratowski_subdivisions(&k33, KuratowskiKind::K33, &caps)
                .unwrap()
                .len(),
            1
        );
        assert!(
            enumerate_kuratowski_subdivisions(&k33, KuratowskiKind::K5, &caps)
                .unwrap()
                .is_empty()
        );
    }

    #[test]
    fn triad_cases() {
        let claw = Graph::from_edges(4, &[(0, 1), (0, 2), (0, 3)]);
        let t = find_triad(&claw, [1, 2, 3]).unwrap();
        assert_eq!(t.center, 0);
        t.certify(&claw).unwrap();
        let path = Graph::from_edges(4, &[(0, 1), (1, 2), (2, 3)]);
        assert!(find_triad(&path, [0, 1, 3]).is_none());
        assert!(find_triad(&path, [0, 2, 3]).is_none());
    }

    #[test]
    fn path_pair_cases() {
        let caps = Caps::default();
        let g = Graph::from_edges(4, &[(0, 1), (2, 3)]);
        assert_eq!(
            enumerate_disjoint_path_pairs(&g, &[0, 1], &[2, 3], &caps)
                .unwrap()
                .len(),
            1
        );
        let star = Graph::from_edges(4, &[(0, 1), (0, 2), (0, 3)]);
        assert!(
            enumerate_disjoint_path_pairs(&star, &[1, 2, 3], &[1, 2, 3], &caps)
                .unwrap()
                .is_empty()
        );
        let k4 = complete(4);
        let all = [0, 1, 2, 3];
        let pairs = enumerate_disjoint_path_pairs(&k4, &all, &all, &caps).unwrap();
        assert_eq!(pairs.len(), 6);
        assert!(pairs.iter().all(|(p, q)| p.len() == 1 && q.len() == 1));
    }

    #[test]
    fn linkage_search() {
        let c4 = Graph::from_edges(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]);
        let all = vec![true; 4];
        assert!(find_linkage(&c4, &all, 0, 1, 3, 2));
        assert!(!find_linkage(&c4, &all, 0, 2, 1, 3));
    }
}
