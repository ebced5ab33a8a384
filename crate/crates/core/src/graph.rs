//! Loopless multigraphs with oriented edges.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use intlattice::Int;
use serde::{Deserialize, Serialize};

use crate::GraphError;

/// A loopless multigraph. Edge `i` runs from `edges[i].0` (tail) to
/// `edges[i].1` (head); vertex and edge indices are dense and 0-based.
#[derive(Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: Vec<(usize, usize)>,
    labels: BTreeMap<usize, String>,
    at: Vec<Vec<usize>>,
}

/// Interchange document: `{"vertices": n, "edges": [[tail, head], ...], "labels": {...}}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphDoc {
    pub vertices: usize,
    pub edges: Vec<[usize; 2]>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub labels: BTreeMap<String, String>,
}

impl Graph {
    pub fn new(n: usize, edges: Vec<(usize, usize)>) -> Result<Graph, GraphError> {
        let mut at = vec![Vec::new(); n];
        for (i, &(t, h)) in edges.iter().enumerate() {
            for v in [t, h] {
                if v >= n {
                    return Err(GraphError::VertexOutOfRange {
                        edge: i,
                        vertex: v,
                        n,
                    });
                }
            }
            if t == h {
                return Err(GraphError::Loop { edge: i, vertex: t });
            }
            at[t].push(i);
            at[h].push(i);
        }
        Ok(Graph {
            n,
            edges,
            labels: BTreeMap::new(),
            at,
        })
    }

    /// Convenience constructor for trusted literal edge lists.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Graph {
        Graph::new(n, edges.to_vec()).expect("valid literal graph")
    }

    pub fn with_labels(mut self, labels: BTreeMap<usize, String>) -> Graph {
        self.labels = labels;
        self
    }

    pub fn from_doc(doc: &GraphDoc) -> Result<Graph, GraphError> {
        let g = Graph::new(
            doc.vertices,
            doc.edges.iter().map(|e| (e[0], e[1])).collect(),
        )?;
        let mut labels = BTreeMap::new();
        for (k, v) in &doc.labels {
            let idx: usize = k.parse().map_err(|_| GraphError::BadLabel(k.clone()))?;
            if idx >= doc.vertices {
                return Err(GraphError::BadLabel(k.clone()));
            }
            labels.insert(idx, v.clone());
        }
        Ok(g.with_labels(labels))
    }

    pub fn to_doc(&self) -> GraphDoc {
        GraphDoc {
            vertices: self.n,
            edges: self.edges.iter().map(|&(t, h)| [t, h]).collect(),
            labels: self
                .labels
                .iter()
                .map(|(k, v)| (k.to_string(), v.clone()))
                .collect(),
        }
    }

    pub fn from_json(text: &str) -> Result<Graph, GraphError> {
        let doc: GraphDoc =
            serde_json::from_str(text).map_err(|e| GraphError::Parse(e.to_string()))?;
        Graph::from_doc(&doc)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_doc()).expect("graph serializes")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge(&self, e: usize) -> (usize, usize) {
        self.edges[e]
    }

    pub fn tail(&self, e: usize) -> usize {
        self.edges[e].0
    }

    pub fn head(&self, e: usize) -> usize {
        self.edges[e].1
    }

    /// The end of `e` other than `v`.
    pub fn other_end(&self, e: usize, v: usize) -> usize {
        let (t, h) = self.edges[e];
        if t == v {
            h
        } else {
            debug_assert_eq!(h, v);
            t
        }
    }

    pub fn edges_at(&self, v: usize) -> &[usize] {
        &self.at[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.at[v].len()
    }

    pub fn label(&self, v: usize) -> Option<&str> {
        self.labels.get(&v).map(String::as_str)
    }

    pub fn labels(&self) -> &BTreeMap<usize, String> {
        &self.labels
    }

    pub fn has_end(&self, e: usize, v: usize) -> bool {
        let (t, h) = self.edges[e];
        t == v || h == v
    }

    /// True when the edges share an end (an edge is adjacent to itself).
    pub fn adjacent(&self, e: usize, f: usize) -> bool {
        let (a, b) = self.edges[e];
        let (c, d) = self.edges[f];
        a == c || a == d || b == c || b == d
    }

    /// `[v, e]` for valid indices.
    pub fn inc(&self, v: usize, e: usize) -> i64 {
        let (t, h) = self.edges[e];
        if h == v {
            1
        } else if t == v {
            -1
        } else {
            0
        }
    }

    pub fn incidence(&self, v: usize, e: usize) -> Result<i64, GraphError> {
        self.check_vertex(v)?;
        self.check_edge(e)?;
        Ok(self.inc(v, e))
    }

    pub fn check_vertex(&self, v: usize) -> Result<(), GraphError> {
        if v < self.n {
            Ok(())
        } else {
            Err(GraphError::NoSuchVertex {
                vertex: v,
                n: self.n,
            })
        }
    }

    pub fn check_edge(&self, e: usize) -> Result<(), GraphError> {
        if e < self.m() {
            Ok(())
        } else {
            Err(GraphError::NoSuchEdge {
                edge: e,
                m: self.m(),
            })
        }
    }

    /// `delta(v) = sum_e [v,e] e`.
    pub fn delta(&self, v: usize) -> Result<EdgeVector, GraphError> {
        self.check_vertex(v)?;
        let mut d = EdgeVector::new();
        for &e in &self.at[v] {
            d.add(e, &Int::from(self.inc(v, e)));
        }
        Ok(d)
    }

    pub fn is_circulation(&self, f: &EdgeVector) -> bool {
        (0..self.n).all(|v| self.delta(v).expect("valid vertex").pairing(f).is_zero())
    }

    pub fn is_simple(&self) -> bool {
        let mut seen = BTreeSet::new();
        self.edges
            .iter()
            .all(|&(t, h)| seen.insert((t.min(h), t.max(h))))
    }

    /// Neighbour sets of the simplification.
    pub fn simple_adjacency(&self) -> Vec<BTreeSet<usize>> {
        let mut adj = vec![BTreeSet::new(); self.n];
        for &(t, h) in &self.edges {
            adj[t].insert(h);
            adj[h].insert(t);
        }
        adj
    }

    /// Edges joining `u` and `v`.
    pub fn edges_between(&self, u: usize, v: usize) -> Vec<usize> {
        self.at[u]
            .iter()
            .copied()
            .filter(|&e| self.other_end(e, u) == v)
            .collect()
    }

    /// Contracts `e`: its ends merge into the smaller index, the larger
    /// index disappears and later vertices shift down by one. Edges parallel
    /// to `e` would become loops and are dropped.
    pub fn contract(&self, e: usize) -> Result<Contraction, GraphError> {
        self.check_edge(e)?;
        let (t, h) = self.edges[e];
        let (keep, gone) = (t.min(h), t.max(h));
        let vertex_map: Vec<usize> = (0..self.n)
            .map(|w| match w.cmp(&gone) {
                std::cmp::Ordering::Less => w,
                std::cmp::Ordering::Equal => keep,
                std::cmp::Ordering::Greater => w - 1,
            })
            .collect();
        let mut edges = Vec::new();
        let mut edge_map = vec![None; self.m()];
        for (i, &(a, b)) in self.edges.iter().enumerate() {
            let (a2, b2) = (vertex_map[a], vertex_map[b]);
            if i == e || a2 == b2 {
                continue;
            }
            edge_map[i] = Some(edges.len());
            edges.push((a2, b2));
        }
        let labels = self
            .labels
            .iter()
            .filter(|(k, _)| **k != gone)
            .map(|(k, v)| (vertex_map[*k], v.clone()))
            .collect();
        let graph = Graph::new(self.n - 1, edges)?.with_labels(labels);
        Ok(Contraction {
            graph,
            edge_map,
            vertex_map,
            merged: keep,
        })
    }

    /// Replaces edge `e` by a directed path of `pieces[e]` edges (1 keeps it).
    /// New vertices are appended; paths follow the original orientation.
    pub fn subdivide(&self, pieces: &[usize]) -> Subdivision {
        assert_eq!(pieces.len(), self.m());
        let mut n = self.n;
        let mut edges = Vec::new();
        let mut edge_paths = Vec::with_capacity(self.m());
        for (i, &(t, h)) in self.edges.iter().enumerate() {
            let k = pieces[i].max(1);
            let mut path = Vec::with_capacity(k);
            let mut prev = t;
            for step in 0..k {
                let next = if step + 1 == k {
                    h
                } else {
                    n += 1;
                    n - 1
                };
                path.push(edges.len());
                edges.push((prev, next));
                prev = next;
            }
            edge_paths.push(path);
        }
        let graph = Graph::new(n, edges).expect("subdivision is loopless");
        Subdivision {
            graph: graph.with_labels(self.labels.clone()),
            edge_paths,
        }
    }

    /// Every edge replaced by a path of length two.
    pub fn full_subdivision(&self) -> Subdivision {
        self.subdivide(&vec![2; self.m()])
    }

    /// Components of the simplification after deleting `removed`.
    pub fn components_without(&self, removed: &[bool]) -> Vec<Vec<usize>> {
        let adj = self.simple_adjacency();
        let mut comp = vec![usize::MAX; self.n];
        let mut out = Vec::new();
        for s in 0..self.n {
            if removed[s] || comp[s] != usize::MAX {
                continue;
            }
            let id = out.len();
            let mut stack = vec![s];
            let mut members = vec![];
            comp[s] = id;
            while let Some(v) = stack.pop() {
                members.push(v);
                for &w in &adj[v] {
                    if !removed[w] && comp[w] == usize::MAX {
                        comp[w] = id;
                        stack.push(w);
                    }
                }
            }
            members.sort_unstable();
            out.push(members);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.components_without(&vec![false; self.n]).len() <= 1
    }

    /// Vertex connectivity of the simplification; `n - 1` for complete graphs.
    pub fn vertex_connectivity(&self) -> usize {
        if self.n <= 1 {
            return 0;
        }
        for k in 0..self.n.saturating_sub(1) {
            let mut found = false;
            for_each_subset(self.n, k, |s| {
                let mut removed = vec![false; self.n];
                for &v in s {
                    removed[v] = true;
                }
                if self.components_without(&removed).len() >= 2 {
                    found = true;
                }
                !found
            });
            if found {
                return k;
            }
        }
        self.n - 1
    }

    /// All proper separations of order exactly `k`, in a deterministic order.
    /// Edges with both ends in the separator go to side 1. Each unordered
    /// pair of sides appears once (side 1 holds the component of the
    /// smallest non-separator vertex).
    pub fn enumerate_separations(&self, k: usize) -> Vec<Separation> {
        let mut out = Vec::new();
        if k > self.n {
            return out;
        }
        for_each_subset(self.n, k, |s| {
            let mut removed = vec![false; self.n];
            for &v in s {
                removed[v] = true;
            }
            let comps = self.components_without(&removed);
            if comps.len() < 2 {
                return true;
            }
            let c = comps.len();
            // side 1 always contains component 0 (the smallest vertex)
            for mask in 0u64..(1u64 << (c - 1)) {
                let take = |i: usize| i == 0 || (mask >> (i - 1)) & 1 == 1;
                if (0..c).all(take) {
                    continue;
                }
                let mut side_of = vec![0u8; self.n];
                for (i, comp) in comps.iter().enumerate() {
                    for &v in comp {
                        side_of[v] = if take(i) { 1 } else { 2 };
                    }
                }
                out.push(self.separation_from_sides(s, &side_of));
            }
            true
        });
        out
    }

    /// Builds the separation where `side_of[v]` is 0 for separator vertices
    /// and 1 or 2 otherwise.
    pub fn separation_from_sides(&self, shared: &[usize], side_of: &[u8]) -> Separation {
        let mut side1 = Vec::new();
        let mut side2 = Vec::new();
        for (i, &(a, b)) in self.edges.iter().enumerate() {
            let s = side_of[a].max(side_of[b]);
            debug_assert!(side_of[a] == 0 || side_of[b] == 0 || side_of[a] == side_of[b]);
            if s == 2 {
                side2.push(i);
            } else {
                side1.push(i);
            }
        }
        Separation {
            shared: shared.to_vec(),
            side1_vertices: (0..self.n).filter(|&v| side_of[v] == 1).collect(),
            side2_vertices: (0..self.n).filter(|&v| side_of[v] == 2).collect(),
            side1_edges: side1,
            side2_edges: side2,
        }
    }

    pub fn is_internally_4_connected(&self) -> bool {
        if !self.is_simple() || self.n < 5 || self.vertex_connectivity() < 3 {
            return false;
        }
        self.enumerate_separations(3)
            .iter()
            .all(|s| s.side_is_claw(self, 1) != s.side_is_claw(self, 2))
    }

    /// The subgraph on a vertex subset keeping the listed edges, reindexed;
    /// returns the graph and the old index of each new vertex and edge.
    pub fn subgraph(&self, vertices: &[usize], edges: &[usize]) -> (Graph, Vec<usize>, Vec<usize>) {
        let mut idx = vec![usize::MAX; self.n];
        for (i, &v) in vertices.iter().enumerate() {
            idx[v] = i;
        }
        let es: Vec<(usize, usize)> = edges
            .iter()
            .map(|&e| (idx[self.tail(e)], idx[self.head(e)]))
            .collect();
        let g = Graph::new(vertices.len(), es).expect("subgraph uses listed vertices");
        (g, vertices.to_vec(), edges.to_vec())
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graph(n={}, edges={:?})", self.n, self.edges)
    }
}

/// Calls `f` on every `k`-subset of `0..n` in lexicographic order until it
/// returns false.
pub fn for_each_subset(n: usize, k: usize, mut f: impl FnMut(&[usize]) -> bool) {
    if k > n {
        return;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        if !f(&idx) {
            return;
        }
        let mut i = k;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if idx[i] < n - k + i {
                idx[i] += 1;
                for j in i + 1..k {
                    idx[j] = idx[j - 1] + 1;
                }
                break;
            }
            if i == 0 {
                return;
            }
        }
    }
}

/// Result of [`Graph::contract`].
#[derive(Clone, Debug)]
pub struct Contraction {
    pub graph: Graph,
    /// Old edge index to new edge index; `None` for the contracted edge and
    /// for edges that became loops.
    pub edge_map: Vec<Option<usize>>,
    pub vertex_map: Vec<usize>,
    pub merged: usize,
}

/// Result of [`Graph::subdivide`].
#[derive(Clone, Debug)]
pub struct Subdivision {
    pub graph: Graph,
    /// Old edge index to the directed path of new edges replacing it.
    pub edge_paths: Vec<Vec<usize>>,
}

/// A separation `(G1, G2)`: the sides share exactly the `shared` vertices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Separation {
    pub shared: Vec<usize>,
    /// Vertices of `G1 - shared`.
    pub side1_vertices: Vec<usize>,
    /// Vertices of `G2 - shared`.
    pub side2_vertices: Vec<usize>,
    pub side1_edges: Vec<usize>,
    pub side2_edges: Vec<usize>,
}

impl Separation {
    pub fn order(&self) -> usize {
        self.shared.len()
    }

    pub fn interior(&self, side: u8) -> &[usize] {
        if side == 1 {
            &self.side1_vertices
        } else {
            &self.side2_vertices
        }
    }

    pub fn edges(&self, side: u8) -> &[usize] {
        if side == 1 {
            &self.side1_edges
        } else {
            &self.side2_edges
        }
    }

    /// All vertices of side `side`, separator included, sorted.
    pub fn vertices(&self, side: u8) -> Vec<usize> {
        let mut v: Vec<usize> = self
            .shared
            .iter()
            .chain(self.interior(side))
            .copied()
            .collect();
        v.sort_unstable();
        v
    }

    /// Side index (1 or 2) of every edge.
    pub fn edge_sides(&self, m: usize) -> Vec<u8> {
        let mut s = vec![0u8; m];
        for &e in &self.side1_edges {
            s[e] = 1;
        }
        for &e in &self.side2_edges {
            s[e] = 2;
        }
        s
    }

    /// True when the side is a claw: one interior vertex joined by single
    /// edges to the three separator vertices (edges inside the separator may
    /// be moved to the other side and are ignored).
    pub fn side_is_claw(&self, g: &Graph, side: u8) -> bool {
        let interior = self.interior(side);
        if self.shared.len() != 3 || interior.len() != 1 {
            return false;
        }
        let c = interior[0];
        let mut nb: Vec<usize> = g.edges_at(c).iter().map(|&e| g.other_end(e, c)).collect();
        nb.sort_unstable();
        let mut shared = self.shared.clone();
        shared.sort_unstable();
        nb == shared
    }
}

/// Sparse integer vector on edges; no explicit zeros are stored.
#[derive(Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct EdgeVector(BTreeMap<usize, Int>);

impl EdgeVector {
    pub fn new() -> Self {
        EdgeVector(BTreeMap::new())
    }

    pub fn get(&self, e: usize) -> Int {
        self.0.get(&e).cloned().unwrap_or(Int::ZERO)
    }

    pub fn add(&mut self, e: usize, x: &Int) {
        if x.is_zero() {
            return;
        }
        let v = self.0.entry(e).or_insert(Int::ZERO);
        *v += x;
        if v.is_zero() {
            self.0.remove(&e);
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &Int)> {
        self.0.iter().map(|(e, x)| (*e, x))
    }

    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.keys().copied()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `sum_e self(e) * other(e)`.
    pub fn pairing(&self, other: &EdgeVector) -> Int {
        let (small, large) = if self.len() <= other.len() {
            (self, other)
        } else {
            (other, self)
        };
        let mut acc = Int::ZERO;
        for (e, x) in small.iter() {
            if let Some(y) = large.0.get(&e) {
                acc += &(x * y);
            }
        }
        acc
    }

    pub fn scaled(&self, c: &Int) -> EdgeVector {
        let mut out = EdgeVector::new();
        for (e, x) in self.iter() {
            out.add(e, &(c * x));
        }
        out
    }

    pub fn plus(&self, other: &EdgeVector) -> EdgeVector {
        let mut out = self.clone();
        for (e, x) in other.iter() {
            out.add(e, x);
        }
        out
    }
}

impl fmt::Debug for EdgeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.0.iter()).finish()
    }
}

impl FromIterator<(usize, Int)> for EdgeVector {
    fn from_iter<I: IntoIterator<Item = (usize, Int)>>(iter: I) -> Self {
        let mut v = EdgeVector::new();
        for (e, x) in iter {
            v.add(e, &x);
        }
        v
    }
}
