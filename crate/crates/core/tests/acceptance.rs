//! End-to-end acceptance checks. Prints one PASS/FAIL line per criterion
//! and exits non-zero if any criterion fails.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use intlattice::Int;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use twocycle::catalog::{catalog, find, CatalogEntry};
use twocycle::crossing::{kr_functional, random_generic_drawing, signed_crossing, Drawing, Point};
use twocycle::forms::{
    circuit_pair_form, contract_form, kuratowski_form, two_cycle_lattice, uncontract_form, Form2,
    SigmaMode,
};
use twocycle::homology::{h2_lattice, planar_face_basis_check};
use twocycle::modules::{
    build_b, chart_coords, integer_relations, separation_report, Analysis, Family, PuvCoords,
    ResidueMap,
};
use twocycle::patterns::{enumerate_disjoint_cycle_pairs, Caps};
use twocycle::verify::{check_sym_quad_certificate, sym_quad_certificates};
use twocycle::{EdgeVector, Graph};

type Outcome = Result<String, String>;

fn caps() -> Caps {
    Caps::default()
}

fn err<E: std::fmt::Display>(ctx: &str) -> impl Fn(E) -> String + '_ {
    move |e| format!("{ctx}: {e}")
}

fn complete(n: usize) -> Vec<(usize, usize)> {
    let mut e = vec![];
    for i in 0..n {
        for j in i + 1..n {
            e.push((i, j));
        }
    }
    e
}

fn bipartite(a: usize, b: usize) -> Vec<(usize, usize)> {
    let mut e = vec![];
    for i in 0..a {
        for j in 0..b {
            e.push((i, a + j));
        }
    }
    e
}

/// Union of two graphs on `0..na` and `0..nb`; each `(x, y)` in `ident`
/// identifies vertex `y` of the second with vertex `x` of the first.
fn glue(
    a: &[(usize, usize)],
    na: usize,
    b: &[(usize, usize)],
    nb: usize,
    ident: &[(usize, usize)],
) -> Graph {
    let mut map: Vec<usize> = Vec::with_capacity(nb);
    let mut next = na;
    for v in 0..nb {
        match ident.iter().find(|(_, y)| *y == v) {
            Some(&(x, _)) => map.push(x),
            None => {
                map.push(next);
                next += 1;
            }
        }
    }
    let mut edges: Vec<(usize, usize)> = a.to_vec();
    for &(x, y) in b {
        let (p, q) = (map[x], map[y]);
        if !edges.contains(&(p, q)) && !edges.contains(&(q, p)) {
            edges.push((p, q));
        }
    }
    Graph::from_edges(next, &edges)
}

// ---------------------------------------------------------------------------

fn c1_oracle() -> Outcome {
    let start = Instant::now();
    let cat = catalog();
    for e in &cat {
        let g = e.graph();
        let l = two_cycle_lattice(&g, SigmaMode::Plain);
        let h = h2_lattice(&g);
        if l.lattice != h {
            return Err(format!(
                "{}: L has rank {} but ker d2 has rank {}",
                e.name,
                l.rank(),
                h.rank()
            ));
        }
    }
    let t = start.elapsed();
    if t > Duration::from_secs(60) {
        return Err(format!("took {t:.1?}"));
    }
    Ok(format!("{} graphs identical in {t:.1?}", cat.len()))
}

fn c2_main() -> Outcome {
    let mut ranks = 0;
    for e in catalog() {
        let g = e.graph();
        let an = Analysis::new(&g, caps());
        let r = an
            .span_report(SigmaMode::Plain, &Family::ALL)
            .map_err(err(&e.name))?;
        if !r.is_equal() {
            return Err(format!("{}: L / span = {}", e.name, r.quotient));
        }
        ranks += r.lattice_rank;
    }
    Ok(format!("index 1 on all entries (total rank {ranks})"))
}

fn c3_barnett() -> Outcome {
    let g = find("k34").expect("k34 in catalog").graph();
    let an = Analysis::new(&g, caps());
    let without = an
        .span_report(SigmaMode::Plain, &[Family::Pairs, Family::Kuratowski])
        .map_err(err("k34"))?;
    let q = &without.quotient;
    if q.free_rank + q.torsion.len() < 1 {
        return Err(format!("L / (B + Kuratowski) = {q} is trivial"));
    }
    let with = an
        .span_report(SigmaMode::Plain, &Family::ALL)
        .map_err(err("k34"))?;
    if !with.is_equal() {
        return Err(format!("with quads: L / span = {}", with.quotient));
    }
    Ok(format!(
        "L / (B + Kuratowski) = {q}; trivial once quads are added"
    ))
}

fn c4_sym() -> Outcome {
    let mut certs_total = 0;
    for e in catalog() {
        let g = e.graph();
        let an = Analysis::new(&g, caps());
        let r = an
            .span_report(SigmaMode::Sym, &[Family::Pairs, Family::Kuratowski])
            .map_err(err(&e.name))?;
        if !r.is_equal() {
            return Err(format!("{}: L^sym / span = {}", e.name, r.quotient));
        }
        let certs = sym_quad_certificates(&an).map_err(err(&e.name))?;
        let quads = an.quads().map_err(err(&e.name))?;
        if certs.len() != 4 * quads.len() {
            return Err(format!(
                "{}: {} certificates for {} quads",
                e.name,
                certs.len(),
                quads.len()
            ));
        }
        for c in &certs {
            if c.terms.len() != 2 {
                return Err(format!(
                    "{}: quad {} side {:?} needs {} terms",
                    e.name,
                    c.quad,
                    c.side,
                    c.terms.len()
                ));
            }
            if !check_sym_quad_certificate(&g, &quads[c.quad], c).map_err(err(&e.name))? {
                return Err(format!(
                    "{}: certificate for quad {} does not re-check",
                    e.name, c.quad
                ));
            }
        }
        certs_total += certs.len();
    }
    Ok(format!(
        "sym generation on all entries; {certs_total} two-term q + T(q) certificates"
    ))
}

fn c5_skew() -> Outcome {
    for e in catalog() {
        let g = e.graph();
        let an = Analysis::new(&g, caps());
        let r = an
            .span_report(SigmaMode::Skew, &[Family::Pairs, Family::Quads])
            .map_err(err(&e.name))?;
        if !r.is_equal() {
            return Err(format!("{}: L^skew / span = {}", e.name, r.quotient));
        }
    }
    for name in ["k5", "k33"] {
        let g = find(name).expect("catalog entry").graph();
        let r = two_cycle_lattice(&g, SigmaMode::Skew).rank();
        if r != 0 {
            return Err(format!("{name}: L^skew has rank {r}"));
        }
    }
    Ok("skew generation on all entries; L^skew(K5) = L^skew(K3,3) = 0".into())
}

fn c6_trichotomy() -> Outcome {
    let mut counts = [0usize; 3];
    for e in catalog() {
        if e.kuratowski_connected != Some(true) {
            continue;
        }
        let g = e.graph();
        let an = Analysis::new(&g, caps());
        let res = ResidueMap::new(&an).map_err(err(&e.name))?;
        let q = res.quotient();
        if e.flags.planar == Some(true) || e.flags.in_petersen_family_minor {
            if !q.is_trivial() {
                return Err(format!("{}: L / B = {q}", e.name));
            }
            if e.flags.in_petersen_family_minor {
                for h in an.kuratowski().map_err(err(&e.name))? {
                    if !res.in_b(&kuratowski_form(&g, h, 1)).map_err(err(&e.name))? {
                        return Err(format!("{}: a Kuratowski 2-cycle is outside B", e.name));
                    }
                }
                counts[1] += 1;
            } else {
                counts[0] += 1;
            }
        } else if e.flags.linkless == Some(true) {
            if q.free_rank != 1 || !q.torsion.is_empty() {
                return Err(format!("{}: L / B = {q}, expected Z", e.name));
            }
            let l = an.lattice(SigmaMode::Plain);
            let b = build_b(&an, SigmaMode::Plain).map_err(err(&e.name))?;
            for h in an.kuratowski().map_err(err(&e.name))? {
                let mut span = b.chart_span(&g, l).map_err(err(&e.name))?;
                span.add_coords(
                    chart_coords(&g, l, &kuratowski_form(&g, h, 1)).map_err(err(&e.name))?,
                );
                if !span.quotient().is_trivial() {
                    return Err(format!(
                        "{}: B + d_H has quotient {}",
                        e.name,
                        span.quotient()
                    ));
                }
            }
            counts[2] += 1;
        }
    }
    if counts.contains(&0) {
        return Err(format!("a branch was not exercised: {counts:?}"));
    }
    Ok(format!(
        "planar L = B on {}, Petersen-family L = B on {}, linkless L / B = Z with any single d_H on {}",
        counts[0], counts[1], counts[2]
    ))
}

fn separation_graphs() -> Vec<(&'static str, usize, Graph)> {
    let tri = [(0, 1), (1, 2), (2, 0)];
    let k4 = complete(4);
    let k5 = complete(5);
    vec![
        (
            "two triangles at a vertex",
            1,
            glue(&tri, 3, &tri, 3, &[(0, 0)]),
        ),
        ("two K4 at a vertex", 1, glue(&k4, 4, &k4, 4, &[(0, 0)])),
        (
            "K5 and K3,3 at a vertex",
            1,
            glue(&k5, 5, &bipartite(3, 3), 6, &[(0, 0)]),
        ),
        ("triangles joined by two edges", 2, {
            Graph::from_edges(
                6,
                &[
                    (0, 1),
                    (1, 2),
                    (2, 0),
                    (3, 4),
                    (4, 5),
                    (5, 3),
                    (0, 3),
                    (1, 4),
                ],
            )
        }),
        (
            "two K4 on an edge",
            2,
            glue(&k4, 4, &k4, 4, &[(0, 0), (1, 1)]),
        ),
        (
            "K5 and K5 on two vertices",
            2,
            glue(&k5, 5, &k5, 5, &[(0, 0), (1, 1)]),
        ),
        ("K3,4", 3, Graph::from_edges(7, &bipartite(3, 4))),
        (
            "two K5 through a 3-cut",
            3,
            find("composite").expect("catalog").graph(),
        ),
        (
            "two K5 on a triangle",
            3,
            glue(&k5, 5, &k5, 5, &[(0, 0), (1, 1), (2, 2)]),
        ),
        ("prism", 3, find("prism").expect("catalog").graph()),
    ]
}

fn c7_separations() -> Outcome {
    let mut checked = 0;
    for (name, k, g) in separation_graphs() {
        if g.vertex_connectivity() != k {
            return Err(format!(
                "{name}: connectivity {} instead of {k}",
                g.vertex_connectivity()
            ));
        }
        let seps: Vec<_> = g
            .enumerate_separations(k)
            .into_iter()
            .filter(|s| s.order() == k)
            .collect();
        if seps.is_empty() {
            return Err(format!("{name}: no separation of order {k}"));
        }
        let an = Analysis::new(&g, caps());
        for sep in &seps {
            for mode in SigmaMode::ALL {
                let r = separation_report(&an, sep, mode).map_err(err(name))?;
                if !r.quotient.is_trivial() {
                    return Err(format!(
                        "{name}: order {k} {mode}: S / span = {}",
                        r.quotient
                    ));
                }
                checked += 1;
            }
        }
    }
    Ok(format!(
        "{checked} (separation, mode) checks on 10 constructed graphs"
    ))
}

fn c8_kur_pairs() -> Outcome {
    let mut pairs = 0usize;
    for name in ["k5", "k33", "petersen", "k33-sub"] {
        let g = find(name).expect("catalog").graph();
        let an = Analysis::new(&g, caps());
        let res = ResidueMap::new(&an).map_err(err(name))?;
        let hs = an.kuratowski().map_err(err(name))?;
        let mut plus = Vec::with_capacity(hs.len());
        let mut minus = Vec::with_capacity(hs.len());
        for h in hs {
            let d = kuratowski_form(&g, h, 1);
            plus.push(res.residue(&d).map_err(err(name))?);
            minus.push(
                res.residue(&d.scaled(&Int::from(-1i64)))
                    .map_err(err(name))?,
            );
        }
        for i in 0..hs.len() {
            for j in 0..hs.len() {
                // d_H - d_H' in B iff equal residues; d_H + d_H' in B iff r(d_H) = r(-d_H')
                if plus[i] != plus[j] && plus[i] != minus[j] {
                    return Err(format!("{name}: Kuratowski subgraphs {i} and {j}"));
                }
                pairs += 1;
            }
        }
    }
    Ok(format!(
        "{pairs} ordered pairs on K5, K3,3, Petersen and subdivided K3,3"
    ))
}

fn random_combination(rng: &mut ChaCha8Rng, basis: &[Vec<Int>]) -> Vec<Int> {
    let dim = basis.first().map_or(0, Vec::len);
    let mut out = vec![Int::ZERO; dim];
    for b in basis {
        let c = Int::from(rng.gen_range(-3i64..=3));
        if c.is_zero() {
            continue;
        }
        for (o, x) in out.iter_mut().zip(b) {
            *o += &(&c * x);
        }
    }
    out
}

fn c9_crossing() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut trials = 0;
    let mut pairs = 0;
    for (gi, e) in catalog().iter().enumerate() {
        let g = e.graph();
        let l = two_cycle_lattice(&g, SigmaMode::Plain);
        if l.rank() == 0 {
            continue;
        }
        for s in 0..12u64 {
            let seed = 1000 * gi as u64 + s;
            let dr = random_generic_drawing(&g, seed).map_err(err(&e.name))?;
            let dr2 = random_generic_drawing(&g, seed + 500).map_err(err(&e.name))?;
            let mut d = Form2::new();
            while d.is_empty() {
                d = l.key.form(&random_combination(&mut rng, l.lattice.basis()));
            }
            let k1 = kr_functional(&g, &dr, &d).map_err(err(&e.name))?;
            let k2 = kr_functional(&g, &dr2, &d).map_err(err(&e.name))?;
            if !k1.is_zero() || k1 != k2 {
                return Err(format!("{} seed {seed}: kr = {k1} and {k2}", e.name));
            }
            trials += 1;
            for f in 0..g.m() {
                for h in 0..g.m() {
                    if f != h && !g.adjacent(f, h) {
                        let a = signed_crossing(&g, &dr, f, h).map_err(err(&e.name))?;
                        let b = signed_crossing(&g, &dr, h, f).map_err(err(&e.name))?;
                        if a != -b {
                            return Err(format!(
                                "{}: kr({f},{h}) = {a} but kr({h},{f}) = {b}",
                                e.name
                            ));
                        }
                        pairs += 1;
                    }
                }
            }
        }
    }
    if trials < 200 {
        return Err(format!("only {trials} trials"));
    }
    // Negative control: one entry on a crossing pair.
    let x = Graph::from_edges(4, &[(0, 1), (2, 3)]);
    let dr = Drawing {
        positions: [(0, 0), (2, 2), (0, 2), (2, 0)]
            .iter()
            .map(|&(a, b)| Point::from_i64(a, b))
            .collect(),
    };
    let mut bad = Form2::new();
    bad.set(0, 1, Int::ONE);
    let k = kr_functional(&x, &dr, &bad).map_err(err("control"))?;
    if k.is_zero() {
        return Err("negative control gave 0".into());
    }
    let t = start.elapsed();
    if t > Duration::from_secs(30) {
        return Err(format!("took {t:.1?}"));
    }
    Ok(format!(
        "{trials} trials all 0, {pairs} antisymmetric pairs, control = {k}, {t:.1?}"
    ))
}

/// Signed edge vector is `±χ_C` for a single cycle `C`; returns its vertices.
fn cycle_vertices(g: &Graph, x: &EdgeVector) -> Option<BTreeSet<usize>> {
    if x.is_empty() || !g.is_circulation(x) || x.iter().any(|(_, c)| !c.is_unit()) {
        return None;
    }
    let edges: Vec<usize> = x.support().collect();
    let mut deg = vec![0usize; g.n()];
    for &e in &edges {
        let (a, b) = g.edge(e);
        deg[a] += 1;
        deg[b] += 1;
    }
    if deg.iter().any(|&d| d != 0 && d != 2) {
        return None;
    }
    let verts: BTreeSet<usize> = (0..g.n()).filter(|&v| deg[v] == 2).collect();
    // connected: walk from one edge
    let mut seen = BTreeSet::new();
    let mut stack = vec![*verts.iter().next()?];
    while let Some(v) = stack.pop() {
        if seen.insert(v) {
            for &e in &edges {
                if g.has_end(e, v) {
                    stack.push(g.other_end(e, v));
                }
            }
        }
    }
    (seen == verts).then_some(verts)
}

fn is_circuit_pair(g: &Graph, d: &Form2) -> bool {
    let Some(((a, b), x0)) = d.iter().next() else {
        return false;
    };
    if !x0.is_unit() {
        return false;
    }
    let mut r = EdgeVector::new();
    let mut s = EdgeVector::new();
    for ((p, q), x) in d.iter() {
        if q == b {
            r.add(p, x);
        }
        if p == a {
            s.add(q, x);
        }
    }
    if Form2::outer(&r, &s).scaled(x0) != *d {
        return false;
    }
    match (cycle_vertices(g, &r), cycle_vertices(g, &s)) {
        (Some(c), Some(dv)) => c.is_disjoint(&dv),
        _ => false,
    }
}

fn c10_contraction() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let (mut down_up, mut up_down, mut lifts, mut edges_used) = (0usize, 0usize, 0usize, 0usize);
    for entry in catalog() {
        let g = entry.graph();
        let l = two_cycle_lattice(&g, SigmaMode::Plain);
        let name = &entry.name;
        for e in 0..g.m() {
            let (u, v) = g.edge(e);
            let mut idx = vec![];
            for c in [PuvCoords::new(&g, u, v), PuvCoords::new(&g, v, u)] {
                idx.extend(
                    c.pairs
                        .iter()
                        .map(|&(a, b)| l.key.index(a, b).expect("nonadjacent pair")),
                );
            }
            let cols: Vec<Vec<Int>> = l
                .lattice
                .basis()
                .iter()
                .map(|row| idx.iter().map(|&i| row[i].clone()).collect())
                .collect();
            let rel = integer_relations(&cols, idx.len());
            let c = g.contract(e).map_err(err(name))?;
            let l2 = two_cycle_lattice(&c.graph, SigmaMode::Plain);
            if rel.rank() > 0 {
                edges_used += 1;
                for _ in 0..50 {
                    let x = random_combination(&mut rng, rel.basis());
                    let d = l.combine(&x);
                    let (down, _) = contract_form(&g, &d, e).map_err(err(name))?;
                    if !l2.contains(&down) {
                        return Err(format!("{name}: d/e is not a 2-cycle (edge {e})"));
                    }
                    if uncontract_form(&g, e, &down).map_err(err(name))? != d {
                        return Err(format!("{name}: uncontract(contract(d)) != d (edge {e})"));
                    }
                    down_up += 1;
                }
            }
            if l2.rank() > 0 {
                for _ in 0..50 {
                    let d2 = l2
                        .key
                        .form(&random_combination(&mut rng, l2.lattice.basis()));
                    let up = uncontract_form(&g, e, &d2).map_err(err(name))?;
                    if !l.contains(&up) {
                        return Err(format!("{name}: lift is not a 2-cycle (edge {e})"));
                    }
                    if contract_form(&g, &up, e).map_err(err(name))?.0 != d2 {
                        return Err(format!("{name}: contract(uncontract(d)) != d (edge {e})"));
                    }
                    up_down += 1;
                }
            }
            for (cc, dd) in enumerate_disjoint_cycle_pairs(&c.graph, &caps()).map_err(err(name))? {
                let chi = circuit_pair_form(&c.graph, &cc, &dd).map_err(err(name))?;
                let up = uncontract_form(&g, e, &chi).map_err(err(name))?;
                if !is_circuit_pair(&g, &up) {
                    return Err(format!(
                        "{name}: lift of a circuit pair over edge {e} is not a circuit pair"
                    ));
                }
                lifts += 1;
            }
        }
    }
    if down_up < 50 || up_down < 50 {
        return Err(format!("too few samples: {down_up} and {up_down}"));
    }
    Ok(format!(
        "{down_up} contract/uncontract and {up_down} uncontract/contract round trips over {edges_used} edges; {lifts} circuit-pair lifts"
    ))
}

fn c11_subdivision() -> Outcome {
    let cat: Vec<CatalogEntry> = catalog();
    for e in &cat {
        let g = e.graph();
        let s = g.full_subdivision();
        let (a, b) = (
            two_cycle_lattice(&g, SigmaMode::Plain).rank(),
            two_cycle_lattice(&s.graph, SigmaMode::Plain).rank(),
        );
        if a != b {
            return Err(format!("{}: rank {a} becomes {b}", e.name));
        }
    }
    Ok(format!("rank unchanged on {} entries", cat.len()))
}

fn c12_faces() -> Outcome {
    let e = find("cube").expect("catalog");
    let g = e.graph();
    let v = planar_face_basis_check(&g, e.faces.as_deref().expect("cube faces"));
    if !v.pass || v.family_size != v.lattice_rank || v.span_rank != v.lattice_rank {
        return Err(format!("{v:?}"));
    }
    Ok(format!(
        "{} face-pair forms form a basis of L(Q3)",
        v.family_size
    ))
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 12] = [
        ("oracle equivalence", c1_oracle),
        ("main theorem", c2_main),
        ("Barnett counterexample", c3_barnett),
        ("symmetric theorem", c4_sym),
        ("skew theorem", c5_skew),
        ("Kuratowski-connected trichotomy", c6_trichotomy),
        ("separation lemmas", c7_separations),
        ("Kuratowski-pair lemma", c8_kur_pairs),
        ("crossing invariant", c9_crossing),
        ("contraction round-trips", c10_contraction),
        ("subdivision invariance", c11_subdivision),
        ("planar face basis", c12_faces),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let r = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        let t = start.elapsed();
        match r {
            Ok(msg) => println!("PASS {:>2} {name}: {msg} [{t:.2?}]", i + 1),
            Err(msg) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {msg} [{t:.2?}]", i + 1);
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
