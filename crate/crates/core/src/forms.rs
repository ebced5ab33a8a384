//! Bilinear forms on edge pairs and the module of 2-cycles.
//!
//! A [`Form2`] is a sparse integer matrix indexed by ordered edge pairs.
//! Lattices of forms live on the coordinates of a [`PairKey`]: the ordered
//! pairs of nonadjacent edges, listed lexicographically.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use intlattice::{kernel_basis, Int, SparseMatrix, SubLattice};
use serde::{Deserialize, Serialize};

use crate::graph::{Contraction, EdgeVector, Graph, Subdivision};
use crate::patterns::{KuratowskiKind, KuratowskiSubdivision, OrientedCycle, Path, Quad};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FormError {
    #[error("cycles share vertex {0}")]
    SharedVertex(usize),
    #[error("labeling must name distinct vertices")]
    BadLabeling,
    #[error("vertices {0} and {1} must be joined by exactly one edge")]
    MissingEdge(usize, usize),
    #[error("left side ({s}, {t}) is not one of the quad's four sides")]
    BadSide { s: usize, t: usize },
    #[error("cannot contract: d({e}, {f}) = {value} with {e} at one end and {f} at the other")]
    ContractPrecondition { e: usize, f: usize, value: Int },
    #[error("cannot contract: edge {edge} parallel to the contracted edge carries d({e}, {f}) = {value}")]
    ParallelSupport {
        edge: usize,
        e: usize,
        f: usize,
        value: Int,
    },
    #[error("form is not a 2-cycle: {0}")]
    NotTwoCycle(Violation),
    #[error("edge {0} out of range")]
    NoSuchEdge(usize),
}

/// Sparse integer bilinear form on ordered edge pairs. No zero entries are stored.
#[derive(Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(from = "Vec<(usize, usize, Int)>", into = "Vec<(usize, usize, Int)>")]
pub struct Form2 {
    entries: BTreeMap<(usize, usize), Int>,
}

impl From<Vec<(usize, usize, Int)>> for Form2 {
    fn from(v: Vec<(usize, usize, Int)>) -> Self {
        let mut d = Form2::new();
        for (e, f, x) in v {
            d.add(e, f, &x);
        }
        d
    }
}

impl From<Form2> for Vec<(usize, usize, Int)> {
    fn from(d: Form2) -> Self {
        d.entries.into_iter().map(|((e, f), x)| (e, f, x)).collect()
    }
}

impl fmt::Debug for Form2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.entries.iter()).finish()
    }
}

impl Form2 {
    pub fn new() -> Self {
        Form2 {
            entries: BTreeMap::new(),
        }
    }

    pub fn get(&self, e: usize, f: usize) -> Int {
        self.entries.get(&(e, f)).cloned().unwrap_or(Int::ZERO)
    }

    pub fn set(&mut self, e: usize, f: usize, x: Int) {
        if x.is_zero() {
            self.entries.remove(&(e, f));
        } else {
            self.entries.insert((e, f), x);
        }
    }

    pub fn add(&mut self, e: usize, f: usize, x: &Int) {
        if x.is_zero() {
            return;
        }
        let slot = self.entries.entry((e, f)).or_insert(Int::ZERO);
        *slot += x;
        if slot.is_zero() {
            self.entries.remove(&(e, f));
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = ((usize, usize), &Int)> {
        self.entries.iter().map(|(k, v)| (*k, v))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Edges occurring in some nonzero entry, sorted.
    pub fn support_edges(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self.entries.keys().flat_map(|&(e, f)| [e, f]).collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    /// `T(d)(e, f) = d(f, e)`.
    pub fn transpose(&self) -> Form2 {
        Form2 {
            entries: self
                .entries
                .iter()
                .map(|(&(e, f), x)| ((f, e), x.clone()))
                .collect(),
        }
    }

    pub fn is_symmetric(&self) -> bool {
        self.transpose() == *self
    }

    pub fn scaled(&self, c: &Int) -> Form2 {
        if c.is_zero() {
            return Form2::new();
        }
        Form2 {
            entries: self.entries.iter().map(|(k, x)| (*k, x * c)).collect(),
        }
    }

    pub fn plus(&self, other: &Form2) -> Form2 {
        let mut d = self.clone();
        d.add_scaled(other, &Int::ONE);
        d
    }

    pub fn minus(&self, other: &Form2) -> Form2 {
        let mut d = self.clone();
        d.add_scaled(other, &Int::from(-1));
        d
    }

    pub fn add_scaled(&mut self, other: &Form2, c: &Int) {
        for (&(e, f), x) in &other.entries {
            self.add(e, f, &(x * c));
        }
    }

    /// `(a ⊗ b)(e, f) = a(e) b(f)`.
    pub fn outer(a: &EdgeVector, b: &EdgeVector) -> Form2 {
        let mut d = Form2::new();
        for (e, x) in a.iter() {
            for (f, y) in b.iter() {
                d.add(e, f, &(x * y));
            }
        }
        d
    }

    /// Applies an edge relabeling; entries on edges mapped to `None` are dropped.
    pub fn remap(&self, map: impl Fn(usize) -> Option<usize>) -> Form2 {
        let mut d = Form2::new();
        for (&(e, f), x) in &self.entries {
            if let (Some(a), Some(b)) = (map(e), map(f)) {
                d.add(a, b, x);
            }
        }
        d
    }

    /// `d(x, y)` for edge vectors, extended bilinearly.
    pub fn eval(&self, x: &EdgeVector, y: &EdgeVector) -> Int {
        let mut s = Int::ZERO;
        for (&(e, f), v) in &self.entries {
            let a = x.get(e);
            if a.is_zero() {
                continue;
            }
            let b = y.get(f);
            if !b.is_zero() {
                s += &(&(&a * &b) * v);
            }
        }
        s
    }
}

/// The three variants `σ = I`, `I + T`, `I - T`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SigmaMode {
    Plain,
    Sym,
    Skew,
}

impl SigmaMode {
    pub const ALL: [SigmaMode; 3] = [SigmaMode::Plain, SigmaMode::Sym, SigmaMode::Skew];

    /// `σ(d)`.
    pub fn apply(self, d: &Form2) -> Form2 {
        match self {
            SigmaMode::Plain => d.clone(),
            SigmaMode::Sym => d.plus(&d.transpose()),
            SigmaMode::Skew => d.minus(&d.transpose()),
        }
    }

    /// `σ̄(d)`, which vanishes exactly on `L^σ` inside `L`.
    pub fn complement(self, d: &Form2) -> Form2 {
        match self {
            SigmaMode::Plain => Form2::new(),
            SigmaMode::Sym => d.minus(&d.transpose()),
            SigmaMode::Skew => d.plus(&d.transpose()),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            SigmaMode::Plain => "plain",
            SigmaMode::Sym => "sym",
            SigmaMode::Skew => "skew",
        }
    }
}

impl fmt::Display for SigmaMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SigmaMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "plain" => Ok(SigmaMode::Plain),
            "sym" => Ok(SigmaMode::Sym),
            "skew" => Ok(SigmaMode::Skew),
            _ => Err(format!("unknown mode {s:?} (expected plain, sym or skew)")),
        }
    }
}

/// Coordinates of form lattices: ordered pairs of nonadjacent edges in
/// lexicographic order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairKey {
    m: usize,
    pairs: Vec<(usize, usize)>,
    index: Vec<u32>,
}

impl PairKey {
    pub fn new(g: &Graph) -> PairKey {
        let m = g.m();
        let mut pairs = Vec::new();
        let mut index = vec![u32::MAX; m * m];
        for e in 0..m {
            for f in 0..m {
                if !g.adjacent(e, f) {
                    index[e * m + f] = pairs.len() as u32;
                    pairs.push((e, f));
                }
            }
        }
        PairKey { m, pairs, index }
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn index(&self, e: usize, f: usize) -> Option<usize> {
        if e >= self.m || f >= self.m {
            return None;
        }
        let i = self.index[e * self.m + f];
        (i != u32::MAX).then_some(i as usize)
    }

    /// Sparse coordinates of `d`, or the first entry on an adjacent (or
    /// out-of-range) pair.
    pub fn sparse(&self, d: &Form2) -> Result<Vec<(usize, Int)>, (usize, usize)> {
        let mut v = Vec::with_capacity(d.len());
        for ((e, f), x) in d.iter() {
            match self.index(e, f) {
                Some(i) => v.push((i, x.clone())),
                None => return Err((e, f)),
            }
        }
        Ok(v)
    }

    pub fn dense(&self, d: &Form2) -> Result<Vec<Int>, (usize, usize)> {
        let mut v = vec![Int::ZERO; self.len()];
        for (i, x) in self.sparse(d)? {
            v[i] = x;
        }
        Ok(v)
    }

    pub fn form(&self, v: &[Int]) -> Form2 {
        let mut d = Form2::new();
        for (i, x) in v.iter().enumerate() {
            if !x.is_zero() {
                let (e, f) = self.pairs[i];
                d.set(e, f, x.clone());
            }
        }
        d
    }
}

/// First failure found by [`is_two_cycle`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Violation {
    EdgeOutOfRange {
        e: usize,
        f: usize,
    },
    Adjacent {
        e: usize,
        f: usize,
        value: Int,
    },
    /// `d(e, δ(v)) != 0`.
    Row {
        e: usize,
        vertex: usize,
        value: Int,
    },
    /// `d(δ(v), f) != 0`.
    Column {
        f: usize,
        vertex: usize,
        value: Int,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::EdgeOutOfRange { e, f: g } => {
                write!(f, "entry ({e}, {g}) names a missing edge")
            }
            Violation::Adjacent { e, f: g, value } => {
                write!(f, "d({e}, {g}) = {value} on adjacent edges")
            }
            Violation::Row { e, vertex, value } => write!(f, "d({e}, δ({vertex})) = {value}"),
            Violation::Column {
                f: g,
                vertex,
                value,
            } => write!(f, "d(δ({vertex}), {g}) = {value}"),
        }
    }
}

/// `Ok(())` for a 2-cycle, otherwise the first violated condition.
pub fn is_two_cycle(g: &Graph, d: &Form2) -> Result<(), Violation> {
    let mut rows: BTreeMap<(usize, usize), Int> = BTreeMap::new();
    let mut cols: BTreeMap<(usize, usize), Int> = BTreeMap::new();
    for ((e, f), x) in d.iter() {
        if e >= g.m() || f >= g.m() {
            return Err(Violation::EdgeOutOfRange { e, f });
        }
        if g.adjacent(e, f) {
            return Err(Violation::Adjacent {
                e,
                f,
                value: x.clone(),
            });
        }
        let (tf, hf) = g.edge(f);
        *rows.entry((e, hf)).or_insert(Int::ZERO) += x;
        *rows.entry((e, tf)).or_insert(Int::ZERO) -= x;
        let (te, he) = g.edge(e);
        *cols.entry((f, he)).or_insert(Int::ZERO) += x;
        *cols.entry((f, te)).or_insert(Int::ZERO) -= x;
    }
    if let Some(((e, vertex), value)) = rows.into_iter().find(|(_, x)| !x.is_zero()) {
        return Err(Violation::Row { e, vertex, value });
    }
    if let Some(((f, vertex), value)) = cols.into_iter().find(|(_, x)| !x.is_zero()) {
        return Err(Violation::Column { f, vertex, value });
    }
    Ok(())
}

/// Linear constraints cutting `L^σ(G)` out of the pair coordinates.
pub fn constraint_matrix(g: &Graph, key: &PairKey, mode: SigmaMode) -> SparseMatrix {
    let mut m = SparseMatrix::new(key.len());
    for e in 0..g.m() {
        for v in 0..g.n() {
            if g.has_end(e, v) {
                continue;
            }
            let row: Vec<(usize, Int)> = g
                .edges_at(v)
                .iter()
                .filter_map(|&f| key.index(e, f).map(|i| (i, Int::from(g.inc(v, f)))))
                .collect();
            if !row.is_empty() {
                m.push_row(row);
            }
            let col: Vec<(usize, Int)> = g
                .edges_at(v)
                .iter()
                .filter_map(|&f| key.index(f, e).map(|i| (i, Int::from(g.inc(v, f)))))
                .collect();
            if !col.is_empty() {
                m.push_row(col);
            }
        }
    }
    if mode != SigmaMode::Plain {
        let sign = if mode == SigmaMode::Sym { -1 } else { 1 };
        for (i, &(e, f)) in key.pairs().iter().enumerate() {
            if e < f {
                let j = key.index(f, e).expect("nonadjacency is symmetric");
                m.push_row([(i, Int::ONE), (j, Int::from(sign))]);
            }
        }
    }
    m
}

/// `L^σ(G)` with its coordinate key.
#[derive(Clone, Debug)]
pub struct FormLattice {
    pub key: Arc<PairKey>,
    pub mode: SigmaMode,
    pub lattice: SubLattice,
}

impl FormLattice {
    pub fn rank(&self) -> usize {
        self.lattice.rank()
    }

    pub fn contains(&self, d: &Form2) -> bool {
        match self.key.sparse(d) {
            Ok(v) => self.lattice.membership_sparse(&v).is_some(),
            Err(_) => false,
        }
    }

    /// Coordinates over the canonical basis, for members only.
    pub fn coords(&self, d: &Form2) -> Option<Vec<Int>> {
        self.lattice.membership_sparse(&self.key.sparse(d).ok()?)
    }

    pub fn basis_forms(&self) -> Vec<Form2> {
        self.lattice
            .basis()
            .iter()
            .map(|b| self.key.form(b))
            .collect()
    }

    /// `sum(c_i * basis_i)` as a form.
    pub fn combine(&self, c: &[Int]) -> Form2 {
        self.key.form(&self.lattice.combine(c))
    }
}

pub fn two_cycle_lattice(g: &Graph, mode: SigmaMode) -> FormLattice {
    two_cycle_lattice_with_key(g, Arc::new(PairKey::new(g)), mode)
}

pub fn two_cycle_lattice_with_key(g: &Graph, key: Arc<PairKey>, mode: SigmaMode) -> FormLattice {
    let m = constraint_matrix(g, &key, mode);
    FormLattice {
        lattice: kernel_basis(&m),
        key,
        mode,
    }
}

// ---------------------------------------------------------------------------
// constructors

/// `χ_{C,D}` for vertex-disjoint oriented cycles.
pub fn circuit_pair_form(
    g: &Graph,
    c: &OrientedCycle,
    d: &OrientedCycle,
) -> Result<Form2, FormError> {
    if let Some(&v) = c.vertices.iter().find(|v| d.contains_vertex(**v)) {
        return Err(FormError::SharedVertex(v));
    }
    Ok(Form2::outer(&c.chi(g), &d.chi(g)))
}

/// Sign of a permutation of `0..n` given as a slice.
fn perm_sign(p: &[usize]) -> i64 {
    let mut inv = 0;
    for i in 0..p.len() {
        for j in i + 1..p.len() {
            if p[i] > p[j] {
                inv += 1;
            }
        }
    }
    if inv % 2 == 0 {
        1
    } else {
        -1
    }
}

/// `K(v_i v_j, v_k v_l) = sgn(i j k l m)` on K5, zero on adjacent pairs.
pub fn k5_value(i: usize, j: usize, k: usize, l: usize) -> i64 {
    let used = [i, j, k, l];
    let mut seen = [false; 5];
    for &x in &used {
        if x >= 5 || seen[x] {
            return 0;
        }
        seen[x] = true;
    }
    let m = (0..5).find(|x| !seen[*x]).expect("one label left");
    perm_sign(&[i, j, k, l, m])
}

/// `K(a_{i1} b_{j1}, a_{i2} b_{j2}) = sgn(i1 i2 i3) sgn(j1 j2 j3)` on K3,3,
/// zero when the edges share an end.
pub fn k33_value(i1: usize, j1: usize, i2: usize, j2: usize) -> i64 {
    if i1 == i2 || j1 == j2 || i1 > 2 || i2 > 2 || j1 > 2 || j2 > 2 {
        return 0;
    }
    let i3 = 3 - i1 - i2;
    let j3 = 3 - j1 - j2;
    perm_sign(&[i1, i2, i3]) * perm_sign(&[j1, j2, j3])
}

/// Value of the elementary form on model edges directed `x1 -> y1` and
/// `x2 -> y2` (K3,3 model vertices `0..3` and `3..6`).
fn model_value(kind: KuratowskiKind, (x1, y1): (usize, usize), (x2, y2): (usize, usize)) -> i64 {
    match kind {
        KuratowskiKind::K5 => k5_value(x1, y1, x2, y2),
        KuratowskiKind::K33 => {
            let orient = |x: usize, y: usize| if x < 3 { (x, y - 3, 1) } else { (y, x - 3, -1) };
            let (i1, j1, s1) = orient(x1, y1);
            let (i2, j2, s2) = orient(x2, y2);
            s1 * s2 * k33_value(i1, j1, i2, j2)
        }
    }
}

/// The Kuratowski 2-cycle `sign · d_H` of a certified subdivision.
pub fn kuratowski_form(g: &Graph, h: &KuratowskiSubdivision, sign: i64) -> Form2 {
    let model = h.model_edges();
    let signs: Vec<Vec<(usize, i64)>> = h
        .arcs
        .iter()
        .map(|arc| {
            arc.edges
                .iter()
                .enumerate()
                .map(|(i, &e)| (e, if g.tail(e) == arc.vertices[i] { 1 } else { -1 }))
                .collect()
        })
        .collect();
    let mut d = Form2::new();
    for (a, ma) in model.iter().enumerate() {
        for (b, mb) in model.iter().enumerate() {
            let k = model_value(h.kind, *ma, *mb) * sign;
            if k == 0 {
                continue;
            }
            for &(e, se) in &signs[a] {
                for &(f, sf) in &signs[b] {
                    d.set(e, f, Int::from(k * se * sf));
                }
            }
        }
    }
    d
}

fn single_edge_arc(g: &Graph, x: usize, y: usize) -> Result<Path, FormError> {
    let between = g.edges_between(x, y);
    if between.len() != 1 {
        return Err(FormError::MissingEdge(x, y));
    }
    Ok(Path {
        vertices: vec![x, y],
        edges: between,
    })
}

fn distinct(v: &[usize], n: usize) -> bool {
    let mut s = v.to_vec();
    s.sort_unstable();
    s.dedup();
    s.len() == v.len() && v.iter().all(|&x| x < n)
}

/// Elementary K5 form on the vertices `labels` (label `i` is `v_{i+1}`).
pub fn elementary_k5_form(g: &Graph, labels: [usize; 5]) -> Result<Form2, FormError> {
    if !distinct(&labels, g.n()) {
        return Err(FormError::BadLabeling);
    }
    let kind = KuratowskiKind::K5;
    let arcs = crate::patterns::kuratowski_model_edges(kind)
        .into_iter()
        .map(|(x, y)| single_edge_arc(g, labels[x], labels[y]))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(kuratowski_form(
        g,
        &KuratowskiSubdivision {
            kind,
            branch: labels.to_vec(),
            arcs,
        },
        1,
    ))
}

/// Elementary K3,3 form with parts `a` and `b`.
pub fn elementary_k33_form(g: &Graph, a: [usize; 3], b: [usize; 3]) -> Result<Form2, FormError> {
    let branch: Vec<usize> = a.iter().chain(&b).copied().collect();
    if !distinct(&branch, g.n()) {
        return Err(FormError::BadLabeling);
    }
    let kind = KuratowskiKind::K33;
    let arcs = crate::patterns::kuratowski_model_edges(kind)
        .into_iter()
        .map(|(x, y)| single_edge_arc(g, branch[x], branch[y]))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(kuratowski_form(
        g,
        &KuratowskiSubdivision { kind, branch, arcs },
        1,
    ))
}

/// Carries a form through a subdivision: every new edge inherits the row
/// and column of the edge it subdivides.
pub fn subdivide_form(d: &Form2, sub: &Subdivision) -> Form2 {
    let mut out = Form2::new();
    for ((e, f), x) in d.iter() {
        for &a in &sub.edge_paths[e] {
            for &b in &sub.edge_paths[f] {
                out.set(a, b, x.clone());
            }
        }
    }
    out
}

/// The quad 2-cycle `q_{s,t} = χ_{C2,D3} - χ_{C3,D2}` for left side `{s, t}`.
pub fn quad_form(g: &Graph, q: &Quad, s: usize, t: usize) -> Result<Form2, FormError> {
    let s2 = if s == q.a {
        q.b
    } else if s == q.b {
        q.a
    } else {
        return Err(FormError::BadSide { s, t });
    };
    let t2 = if t == q.c {
        q.d
    } else if t == q.d {
        q.c
    } else {
        return Err(FormError::BadSide { s, t });
    };
    let beta: Vec<EdgeVector> = (0..3).map(|i| q.branch(s, t, i).chi(g)).collect();
    let gamma: Vec<EdgeVector> = (0..3).map(|i| q.branch(s2, t2, i).chi(g)).collect();
    let minus = |a: &EdgeVector, b: &EdgeVector| a.plus(&b.scaled(&Int::from(-1)));
    let c2 = minus(&beta[0], &beta[2]);
    let c3 = minus(&beta[0], &beta[1]);
    let d2 = minus(&gamma[0], &gamma[2]);
    let d3 = minus(&gamma[0], &gamma[1]);
    Ok(Form2::outer(&c2, &d3).minus(&Form2::outer(&c3, &d2)))
}

// ---------------------------------------------------------------------------
// restriction tensors and contraction

/// `P_{u,v}(d)`: the entries `d(e, f)` with `e` at `u` and `f` at `v`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PuvTensor {
    pub u: usize,
    pub v: usize,
    pub entries: BTreeMap<(usize, usize), Int>,
}

impl PuvTensor {
    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    /// `T(P_{u,v}(d))`, which lives next to `P_{v,u}`.
    pub fn transpose(&self) -> PuvTensor {
        PuvTensor {
            u: self.v,
            v: self.u,
            entries: self
                .entries
                .iter()
                .map(|(&(e, f), x)| ((f, e), x.clone()))
                .collect(),
        }
    }

    pub fn get(&self, e: usize, f: usize) -> Int {
        self.entries.get(&(e, f)).cloned().unwrap_or(Int::ZERO)
    }
}

pub fn puv(g: &Graph, d: &Form2, u: usize, v: usize) -> PuvTensor {
    let entries = d
        .iter()
        .filter(|((e, f), _)| g.has_end(*e, u) && g.has_end(*f, v))
        .map(|(k, x)| (k, x.clone()))
        .collect();
    PuvTensor { u, v, entries }
}

/// `d/e`: the restriction of `d` to `G/e`. Requires `P_{u,v}(d)` and
/// `P_{v,u}(d)` to vanish, and no support on edges parallel to `e`.
pub fn contract_form(g: &Graph, d: &Form2, e: usize) -> Result<(Form2, Contraction), FormError> {
    let c = g.contract(e).map_err(|_| FormError::NoSuchEdge(e))?;
    let (u, v) = g.edge(e);
    for (u, v) in [(u, v), (v, u)] {
        if let Some((&(a, b), x)) = puv(g, d, u, v).entries.iter().next() {
            return Err(FormError::ContractPrecondition {
                e: a,
                f: b,
                value: x.clone(),
            });
        }
    }
    for ((a, b), x) in d.iter() {
        for p in [a, b] {
            if p != e && c.edge_map[p].is_none() {
                return Err(FormError::ParallelSupport {
                    edge: p,
                    e: a,
                    f: b,
                    value: x.clone(),
                });
            }
        }
    }
    let out = d.remap(|x| if x == e { None } else { c.edge_map[x] });
    Ok((out, c))
}

/// The unique `d` on `G` with `d/e = d2`, obtained by substituting
/// `φ(e) = -[u,e] Σ_{h != e} [u,h] h` into `d2`.
pub fn uncontract_form(g: &Graph, e: usize, d2: &Form2) -> Result<Form2, FormError> {
    let c = g.contract(e).map_err(|_| FormError::NoSuchEdge(e))?;
    let u = g.tail(e);
    let ue = g.inc(u, e);
    let mut phi_e: BTreeMap<usize, Int> = BTreeMap::new();
    for &h in g.edges_at(u) {
        if h == e {
            continue;
        }
        if let Some(nh) = c.edge_map[h] {
            *phi_e.entry(nh).or_insert(Int::ZERO) += &Int::from(-ue * g.inc(u, h));
        }
    }
    phi_e.retain(|_, x| !x.is_zero());
    let mut inverse = vec![usize::MAX; c.graph.m()];
    for (old, new) in c.edge_map.iter().enumerate() {
        if let Some(n) = new {
            inverse[*n] = old;
        }
    }
    let mut out = Form2::new();
    for ((a, b), x) in d2.iter() {
        if a >= inverse.len() || b >= inverse.len() {
            return Err(FormError::NoSuchEdge(a.max(b)));
        }
        out.add(inverse[a], inverse[b], x);
        if let Some(ca) = phi_e.get(&a) {
            out.add(e, inverse[b], &(ca * x));
        }
        if let Some(cb) = phi_e.get(&b) {
            out.add(inverse[a], e, &(cb * x));
        }
        if let (Some(ca), Some(cb)) = (phi_e.get(&a), phi_e.get(&b)) {
            out.add(e, e, &(&(ca * cb) * x));
        }
    }
    Ok(out)
}
