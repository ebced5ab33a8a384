//! Brute-force oracles shared by the integration tests. They work on edge
//! subsets and plain DFS and share no search code with the library.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use intlattice::{Int, SubLattice};
use twocycle::Graph;

pub fn complete(n: usize) -> Graph {
    let mut e = vec![];
    for i in 0..n {
        for j in i + 1..n {
            e.push((i, j));
        }
    }
    Graph::from_edges(n, &e)
}

pub fn bipartite(a: usize, b: usize) -> Graph {
    let mut e = vec![];
    for i in 0..a {
        for j in 0..b {
            e.push((i, a + j));
        }
    }
    Graph::from_edges(a + b, &e)
}

fn degrees(g: &Graph, subset: &[usize]) -> Vec<usize> {
    let mut deg = vec![0; g.n()];
    for &e in subset {
        let (a, b) = g.edge(e);
        deg[a] += 1;
        deg[b] += 1;
    }
    deg
}

fn connected(g: &Graph, subset: &[usize]) -> bool {
    let verts: BTreeSet<usize> = subset
        .iter()
        .flat_map(|&e| [g.edge(e).0, g.edge(e).1])
        .collect();
    let Some(&start) = verts.iter().next() else {
        return true;
    };
    let mut seen = BTreeSet::from([start]);
    let mut stack = vec![start];
    while let Some(v) = stack.pop() {
        for &e in subset {
            let (a, b) = g.edge(e);
            for (x, y) in [(a, b), (b, a)] {
                if x == v && seen.insert(y) {
                    stack.push(y);
                }
            }
        }
    }
    seen == verts
}

fn subsets(m: usize) -> impl Iterator<Item = Vec<usize>> {
    assert!(m <= 20, "too many edges for subset enumeration");
    (0u32..1 << m).map(move |mask| (0..m).filter(|i| mask >> i & 1 == 1).collect())
}

/// Number of cycles, counted as connected 2-regular edge subsets.
pub fn cycle_count(g: &Graph) -> usize {
    subsets(g.m())
        .filter(|s| {
            !s.is_empty() && degrees(g, s).iter().all(|&d| d == 0 || d == 2) && connected(g, s)
        })
        .count()
}

/// Number of cycles of the given length.
pub fn cycle_count_of_len(g: &Graph, len: usize) -> usize {
    subsets(g.m())
        .filter(|s| {
            s.len() == len && degrees(g, s).iter().all(|&d| d == 0 || d == 2) && connected(g, s)
        })
        .count()
}

/// Branch graph of a connected edge subset whose vertices have degree two
/// except the branch vertices: arcs between branch vertices, as a sorted
/// multiset. `None` if an arc is a loop.
fn branch_arcs(
    g: &Graph,
    subset: &[usize],
    branch: &BTreeSet<usize>,
) -> Option<Vec<(usize, usize)>> {
    let mut at: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for &e in subset {
        let (a, b) = g.edge(e);
        at.entry(a).or_default().push(e);
        at.entry(b).or_default().push(e);
    }
    let mut arcs = vec![];
    for &s in branch {
        for &e0 in &at[&s] {
            let (mut v, mut e) = (g.other_end(e0, s), e0);
            while !branch.contains(&v) {
                let next = *at[&v].iter().find(|&&f| f != e)?;
                v = g.other_end(next, v);
                e = next;
            }
            if v == s {
                return None;
            }
            if s < v {
                arcs.push((s, v));
            }
        }
    }
    arcs.sort_unstable();
    Some(arcs)
}

/// Edge subsets forming a subdivision of K5 (`k5 = true`) or K3,3.
pub fn kuratowski_count(g: &Graph, k5: bool) -> usize {
    let (bdeg, nb, na) = if k5 { (4, 5, 10) } else { (3, 6, 9) };
    subsets(g.m())
        .filter(|s| {
            let deg = degrees(g, s);
            if deg.iter().any(|&d| d != 0 && d != 2 && d != bdeg) {
                return false;
            }
            let branch: BTreeSet<usize> = (0..g.n()).filter(|&v| deg[v] == bdeg).collect();
            if branch.len() != nb || !connected(g, s) {
                return false;
            }
            let Some(arcs) = branch_arcs(g, s, &branch) else {
                return false;
            };
            let mut dedup = arcs.clone();
            dedup.dedup();
            if dedup.len() != na || arcs.len() != na {
                return false;
            }
            if k5 {
                return true;
            }
            let x = *branch.iter().next().unwrap();
            let nbr = |v: usize| -> BTreeSet<usize> {
                arcs.iter()
                    .filter_map(|&(a, b)| {
                        if a == v {
                            Some(b)
                        } else if b == v {
                            Some(a)
                        } else {
                            None
                        }
                    })
                    .collect()
            };
            let part_b = nbr(x);
            branch
                .iter()
                .filter(|v| !part_b.contains(v))
                .all(|&a| nbr(a) == part_b)
        })
        .count()
}

/// Quads counted as (edge subset, unordered pair of axle pairs).
pub fn quad_count(g: &Graph) -> usize {
    let mut total = 0;
    for s in subsets(g.m()) {
        if s.len() < 12 {
            continue;
        }
        let deg = degrees(g, &s);
        if deg.iter().any(|&d| d == 1 || d > 4) || !connected(g, &s) {
            continue;
        }
        let branch: BTreeSet<usize> = (0..g.n()).filter(|&v| deg[v] >= 3).collect();
        let Some(arcs) = branch_arcs(g, &s, &branch) else {
            continue;
        };
        let mut dedup = arcs.clone();
        dedup.dedup();
        if dedup.len() != arcs.len() {
            continue;
        }
        let nbr = |v: usize| -> BTreeSet<usize> {
            arcs.iter()
                .filter_map(|&(a, b)| {
                    if a == v {
                        Some(b)
                    } else if b == v {
                        Some(a)
                    } else {
                        None
                    }
                })
                .collect()
        };
        let mut found: BTreeSet<[(usize, usize); 2]> = BTreeSet::new();
        let bv: Vec<usize> = branch.iter().copied().collect();
        for &a in &bv {
            for &b in &bv {
                for &c in &bv {
                    for &d in &bv {
                        let four = [a, b, c, d];
                        if a >= b
                            || c >= d
                            || (a, b) >= (c, d)
                            || four.iter().collect::<BTreeSet<_>>().len() != 4
                        {
                            continue;
                        }
                        if is_quad_frame(&bv, &nbr, four) {
                            found.insert([(a, b), (c, d)]);
                        }
                    }
                }
            }
        }
        total += found.len();
    }
    total
}

fn is_quad_frame(
    bv: &[usize],
    nbr: &dyn Fn(usize) -> BTreeSet<usize>,
    [a, b, c, d]: [usize; 4],
) -> bool {
    let top = nbr(a);
    let bottom = nbr(c);
    if top.len() != 3 || nbr(b) != top || bottom.len() != 3 || nbr(d) != bottom {
        return false;
    }
    let axles = BTreeSet::from([a, b, c, d]);
    let mut covered = BTreeSet::new();
    for &x in &top {
        if axles.contains(&x) {
            return false;
        }
        if bottom.contains(&x) {
            if nbr(x) != axles {
                return false;
            }
            covered.insert(x);
        } else {
            let nx = nbr(x);
            let rest: Vec<usize> = nx.iter().copied().filter(|v| *v != a && *v != b).collect();
            if nx.len() != 3 || !nx.contains(&b) || rest.len() != 1 || !bottom.contains(&rest[0]) {
                return false;
            }
            let y = rest[0];
            if nbr(y) != BTreeSet::from([c, d, x]) || covered.contains(&y) {
                return false;
            }
            covered.insert(x);
            covered.insert(y);
        }
    }
    // every bottom vertex is used and nothing else remains
    bottom.iter().all(|y| covered.contains(y)) && covered.len() + 4 == bv.len()
}

/// Whether some subtree has centre of degree three and leaves exactly `feet`.
pub fn triad_exists(g: &Graph, feet: [usize; 3]) -> bool {
    subsets(g.m()).any(|s| {
        let deg = degrees(g, &s);
        let verts: Vec<usize> = (0..g.n()).filter(|&v| deg[v] > 0).collect();
        if s.len() + 1 != verts.len() || !connected(g, &s) {
            return false;
        }
        let leaves: BTreeSet<usize> = verts.iter().copied().filter(|&v| deg[v] == 1).collect();
        let centres = verts.iter().filter(|&&v| deg[v] == 3).count();
        leaves == BTreeSet::from(feet) && centres == 1 && verts.iter().all(|&v| deg[v] <= 3)
    })
}

/// Simple paths (vertex sequences) between distinct members of `ends`,
/// each listed once from smaller to larger end.
fn simple_paths(g: &Graph, ends: &[usize]) -> Vec<Vec<usize>> {
    let adj = g.simple_adjacency();
    let mut out = vec![];
    fn go(adj: &[BTreeSet<usize>], ends: &[usize], p: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        let cur = *p.last().unwrap();
        for &w in &adj[cur] {
            if p.contains(&w) {
                continue;
            }
            p.push(w);
            if ends.contains(&w) && w > p[0] {
                out.push(p.clone());
            }
            go(adj, ends, p, out);
            p.pop();
        }
    }
    for &s in ends {
        go(&adj, ends, &mut vec![s], &mut out);
    }
    out
}

/// Rank of the span of `π(P1 ⊗ P2)` over disjoint path pairs.
pub fn linkage_rank(g: &Graph, r1: &[usize], r2: &[usize]) -> usize {
    let p1 = simple_paths(g, r1);
    let p2 = simple_paths(g, r2);
    let mut gens = vec![];
    for a in &p1 {
        for b in &p2 {
            if a.iter().any(|v| b.contains(v)) {
                continue;
            }
            let mut t = vec![Int::ZERO; r1.len() * r2.len()];
            let (x1, y1) = (a[0], *a.last().unwrap());
            let (x2, y2) = (b[0], *b.last().unwrap());
            for (x, y, s) in [(x1, x2, 1i64), (x1, y2, -1), (y1, x2, -1), (y1, y2, 1)] {
                let i = r1.iter().position(|&r| r == x).unwrap();
                let j = r2.iter().position(|&r| r == y).unwrap();
                t[i * r2.len() + j] += &Int::from(s);
            }
            gens.push(t);
        }
    }
    SubLattice::from_generators(r1.len() * r2.len(), gens).rank()
}

fn components(g: &Graph, removed: &BTreeSet<usize>) -> Vec<BTreeSet<usize>> {
    let adj = g.simple_adjacency();
    let mut seen = removed.clone();
    let mut out = vec![];
    for s in 0..g.n() {
        if seen.contains(&s) {
            continue;
        }
        let mut comp = BTreeSet::from([s]);
        seen.insert(s);
        let mut stack = vec![s];
        while let Some(v) = stack.pop() {
            for &w in &adj[v] {
                if seen.insert(w) {
                    comp.insert(w);
                    stack.push(w);
                }
            }
        }
        out.push(comp);
    }
    out
}

/// Vertex-disjoint paths `x1..y1` and `x2..y2` inside `allowed`.
fn linked(
    g: &Graph,
    allowed: &BTreeSet<usize>,
    x1: usize,
    y1: usize,
    x2: usize,
    y2: usize,
) -> bool {
    let sub: Vec<usize> = allowed.iter().copied().collect();
    let adj = g.simple_adjacency();
    let mut firsts = vec![];
    fn go(
        adj: &[BTreeSet<usize>],
        ok: &[usize],
        t: usize,
        p: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        let cur = *p.last().unwrap();
        if cur == t {
            out.push(p.clone());
            return;
        }
        for &w in &adj[cur] {
            if ok.contains(&w) && !p.contains(&w) {
                p.push(w);
                go(adj, ok, t, p, out);
                p.pop();
            }
        }
    }
    go(&adj, &sub, y1, &mut vec![x1], &mut firsts);
    firsts.iter().any(|p| {
        let rest: Vec<usize> = sub.iter().copied().filter(|v| !p.contains(v)).collect();
        let mut seconds = vec![];
        if !rest.contains(&x2) || !rest.contains(&y2) {
            return false;
        }
        go(&adj, &rest, y2, &mut vec![x2], &mut seconds);
        !seconds.is_empty()
    })
}

/// Every 2-separation as (shared pair, interior of the first side),
/// covering each grouping of components in both orders.
fn two_separations(g: &Graph) -> Vec<([usize; 2], BTreeSet<usize>)> {
    let mut out = vec![];
    for s1 in 0..g.n() {
        for s2 in s1 + 1..g.n() {
            let comps = components(g, &BTreeSet::from([s1, s2]));
            if comps.len() < 2 {
                continue;
            }
            for mask in 1..(1u32 << comps.len()) - 1 {
                let side: BTreeSet<usize> = comps
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| mask >> i & 1 == 1)
                    .flat_map(|(_, c)| c.clone())
                    .collect();
                out.push(([s1, s2], side));
            }
        }
    }
    out
}

fn sided(
    g: &Graph,
    shared: [usize; 2],
    interior: &BTreeSet<usize>,
    r: &[usize],
    s: &[usize],
) -> bool {
    let mut g1 = interior.clone();
    g1.extend(shared);
    if g1.iter().any(|v| s.contains(v)) {
        return false;
    }
    let rs: Vec<usize> = interior.iter().copied().filter(|v| r.contains(v)).collect();
    for (i, &u1) in rs.iter().enumerate() {
        for &u2 in &rs[i + 1..] {
            if linked(g, &g1, u1, shared[0], u2, shared[1])
                && linked(g, &g1, u1, shared[1], u2, shared[0])
            {
                return true;
            }
        }
    }
    false
}

/// 2-connected and without sided `(R, S)`- or `(S, R)`-separations.
pub fn rs_connected(g: &Graph, r: &[usize], s: &[usize]) -> bool {
    if g.n() < 3 || components(g, &BTreeSet::new()).len() != 1 {
        return false;
    }
    if (0..g.n()).any(|v| components(g, &BTreeSet::from([v])).len() != 1) {
        return false;
    }
    two_separations(g)
        .iter()
        .all(|(sh, side)| !sided(g, *sh, side, r, s) && !sided(g, *sh, side, s, r))
}

/// Simple, 3-connected, at least five vertices, and each split of `G - X`
/// over a 3-set `X` has exactly one side that is a single vertex seeing all of `X`.
pub fn internally_4_connected(g: &Graph) -> bool {
    if !g.is_simple() || g.n() < 5 {
        return false;
    }
    let adj = g.simple_adjacency();
    for k in 0..3 {
        let mut bad = false;
        twocycle::graph::for_each_subset(g.n(), k, |x| {
            bad |= components(g, &x.iter().copied().collect()).len() != 1;
            !bad
        });
        if bad {
            return false;
        }
    }
    let mut ok = true;
    twocycle::graph::for_each_subset(g.n(), 3, |x| {
        let xs: BTreeSet<usize> = x.iter().copied().collect();
        let comps = components(g, &xs);
        if comps.len() < 2 {
            return true;
        }
        let claw = |side: &BTreeSet<usize>| {
            side.len() == 1
                && xs
                    .iter()
                    .all(|v| adj[*side.iter().next().unwrap()].contains(v))
        };
        for mask in 1..(1u32 << comps.len()) - 1 {
            let mut a = BTreeSet::new();
            let mut b = BTreeSet::new();
            for (i, c) in comps.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    a.extend(c)
                } else {
                    b.extend(c)
                }
            }
            if claw(&a) == claw(&b) {
                ok = false;
                return false;
            }
        }
        true
    });
    ok
}
