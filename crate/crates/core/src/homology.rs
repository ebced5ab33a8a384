//! The deleted product `G × G − Δ` as a cell complex, built directly from
//! cells whose closures are disjoint. Its cycle lattice in degree two is an
//! independent route to `L(G)`.

use intlattice::{invariant_factors, kernel_basis, Int, SparseMatrix, SubLattice};
use serde::Serialize;

use crate::forms::{circuit_pair_form, two_cycle_lattice, Form2, PairKey, SigmaMode};
use crate::graph::Graph;
use crate::patterns::OrientedCycle;

/// A 1-cell: an edge times a vertex off it, in either order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum Cell1 {
    EdgeVertex(usize, usize),
    VertexEdge(usize, usize),
}

#[derive(Clone, Debug, Serialize)]
pub struct DeletedProductComplex {
    pub cells0: Vec<(usize, usize)>,
    pub cells1: Vec<Cell1>,
    pub cells2: Vec<(usize, usize)>,
    /// `∂1` as `(row = 0-cell, column = 1-cell, value)` triples.
    pub boundary1: Vec<(usize, usize, i64)>,
    /// `∂2` as `(row = 1-cell, column = 2-cell, value)` triples.
    pub boundary2: Vec<(usize, usize, i64)>,
}

fn disjoint_edges(g: &Graph, e: usize, f: usize) -> bool {
    let (a, b) = g.edge(e);
    let (c, d) = g.edge(f);
    a != c && a != d && b != c && b != d
}

pub fn build_complex(g: &Graph) -> DeletedProductComplex {
    let (n, m) = (g.n(), g.m());
    let mut cells0 = Vec::new();
    let mut idx0 = vec![usize::MAX; n * n];
    for u in 0..n {
        for v in 0..n {
            if u != v {
                idx0[u * n + v] = cells0.len();
                cells0.push((u, v));
            }
        }
    }
    let mut cells1 = Vec::new();
    let mut idx_ev = vec![usize::MAX; m * n];
    let mut idx_ve = vec![usize::MAX; m * n];
    for e in 0..m {
        for v in 0..n {
            if !g.has_end(e, v) {
                idx_ev[e * n + v] = cells1.len();
                cells1.push(Cell1::EdgeVertex(e, v));
            }
        }
    }
    for v in 0..n {
        for e in 0..m {
            if !g.has_end(e, v) {
                idx_ve[e * n + v] = cells1.len();
                cells1.push(Cell1::VertexEdge(v, e));
            }
        }
    }
    let mut cells2 = Vec::new();
    for e in 0..m {
        for f in 0..m {
            if disjoint_edges(g, e, f) {
                cells2.push((e, f));
            }
        }
    }
    let mut boundary1 = Vec::new();
    for (j, c) in cells1.iter().enumerate() {
        match *c {
            Cell1::EdgeVertex(e, v) => {
                let (t, h) = g.edge(e);
                boundary1.push((idx0[h * n + v], j, 1));
                boundary1.push((idx0[t * n + v], j, -1));
            }
            Cell1::VertexEdge(v, e) => {
                let (t, h) = g.edge(e);
                boundary1.push((idx0[v * n + h], j, 1));
                boundary1.push((idx0[v * n + t], j, -1));
            }
        }
    }
    let mut boundary2 = Vec::new();
    for (j, &(e, f)) in cells2.iter().enumerate() {
        let (te, he) = g.edge(e);
        let (tf, hf) = g.edge(f);
        // ∂(e × f) = ∂e × f − e × ∂f
        boundary2.push((idx_ve[f * n + he], j, 1));
        boundary2.push((idx_ve[f * n + te], j, -1));
        boundary2.push((idx_ev[e * n + hf], j, -1));
        boundary2.push((idx_ev[e * n + tf], j, 1));
    }
    DeletedProductComplex {
        cells0,
        cells1,
        cells2,
        boundary1,
        boundary2,
    }
}

fn sparse(rows: usize, cols: usize, triples: &[(usize, usize, i64)]) -> SparseMatrix {
    let mut by_row: Vec<Vec<(usize, Int)>> = vec![Vec::new(); rows];
    for &(r, c, x) in triples {
        by_row[r].push((c, Int::from(x)));
    }
    let mut m = SparseMatrix::new(cols);
    for r in by_row {
        m.push_row(r);
    }
    m
}

impl DeletedProductComplex {
    pub fn boundary1_matrix(&self) -> SparseMatrix {
        sparse(self.cells0.len(), self.cells1.len(), &self.boundary1)
    }

    pub fn boundary2_matrix(&self) -> SparseMatrix {
        sparse(self.cells1.len(), self.cells2.len(), &self.boundary2)
    }

    /// Whether `∂1 ∘ ∂2` vanishes.
    pub fn is_chain_complex(&self) -> bool {
        let d1 = self.boundary1_matrix();
        let d2 = self.boundary2_matrix();
        (0..self.cells2.len()).all(|j| {
            let mut col = vec![Int::ZERO; self.cells2.len()];
            col[j] = Int::ONE;
            d1.mul_vec(&d2.mul_vec(&col)).iter().all(Int::is_zero)
        })
    }
}

/// `ker ∂2` in the ordered nonadjacent edge-pair coordinates.
pub fn h2_lattice(g: &Graph) -> SubLattice {
    kernel_basis(&build_complex(g).boundary2_matrix())
}

/// Ranks and torsion of the integral homology in degrees 0, 1, 2.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Homology {
    pub betti: [usize; 3],
    pub torsion: [Vec<Int>; 3],
}

pub fn homology(g: &Graph) -> Homology {
    let cx = build_complex(g);
    let f1 = invariant_factors(&cx.boundary1_matrix());
    let f2 = invariant_factors(&cx.boundary2_matrix());
    let (r1, r2) = (f1.len(), f2.len());
    let tors = |f: &[Int]| {
        f.iter()
            .filter(|x| !x.is_one())
            .cloned()
            .collect::<Vec<_>>()
    };
    Homology {
        betti: [
            cx.cells0.len() - r1,
            cx.cells1.len() - r1 - r2,
            cx.cells2.len() - r2,
        ],
        torsion: [tors(&f1), tors(&f2), Vec::new()],
    }
}

pub fn betti_numbers(g: &Graph) -> (usize, usize, usize) {
    let h = homology(g);
    (h.betti[0], h.betti[1], h.betti[2])
}

/// Outcome of checking a proposed face-pair basis.
#[derive(Clone, Debug, Serialize)]
pub struct FaceBasisVerdict {
    pub pass: bool,
    pub family_size: usize,
    pub span_rank: usize,
    pub lattice_rank: usize,
    pub witness: Option<String>,
}

/// Turns a closed vertex sequence into an oriented cycle of `g`.
pub fn face_cycle(g: &Graph, face: &[usize]) -> Result<OrientedCycle, String> {
    let k = face.len();
    if k < 3 {
        return Err(format!("face {face:?} has fewer than three vertices"));
    }
    let mut edges = Vec::with_capacity(k);
    for i in 0..k {
        let (a, b) = (face[i], face[(i + 1) % k]);
        if a >= g.n() || b >= g.n() {
            return Err(format!("face {face:?} names a missing vertex"));
        }
        match g.edges_between(a, b).as_slice() {
            [e] => edges.push(*e),
            _ => {
                return Err(format!(
                    "face {face:?}: vertices {a} and {b} are not joined by one edge"
                ))
            }
        }
    }
    let c = OrientedCycle {
        vertices: face.to_vec(),
        edges,
    };
    c.certify(g).map_err(|w| format!("face {face:?}: {w}"))?;
    Ok(c)
}

/// Checks that `χ_{C,D}` over ordered pairs of vertex-disjoint faces is a
/// basis of `L(G)`: linearly independent and spanning with index one.
pub fn planar_face_basis_check(g: &Graph, faces: &[Vec<usize>]) -> FaceBasisVerdict {
    let l = two_cycle_lattice(g, SigmaMode::Plain);
    let fail = |w: String, size: usize, span: usize| FaceBasisVerdict {
        pass: false,
        family_size: size,
        span_rank: span,
        lattice_rank: l.rank(),
        witness: Some(w),
    };
    let cycles = match faces
        .iter()
        .map(|f| face_cycle(g, f))
        .collect::<Result<Vec<_>, _>>()
    {
        Ok(c) => c,
        Err(w) => return fail(w, 0, 0),
    };
    let mut family: Vec<Form2> = Vec::new();
    for (i, c) in cycles.iter().enumerate() {
        for (j, d) in cycles.iter().enumerate() {
            if i != j {
                if let Ok(x) = circuit_pair_form(g, c, d) {
                    family.push(x);
                }
            }
        }
    }
    let key = PairKey::new(g);
    let rows: Vec<Vec<Int>> = family
        .iter()
        .map(|d| key.dense(d).expect("2-cycle coordinates"))
        .collect();
    let span = SubLattice::from_generators(key.len(), rows);
    if span.rank() != family.len() {
        return fail(
            "face-pair forms are linearly dependent".into(),
            family.len(),
            span.rank(),
        );
    }
    if let Err(i) = l.lattice.check_subset(&span) {
        let d = key.form(&l.lattice.basis()[i]);
        return fail(
            format!("2-cycle {d:?} is not in the span"),
            family.len(),
            span.rank(),
        );
    }
    FaceBasisVerdict {
        pass: true,
        family_size: family.len(),
        span_rank: span.rank(),
        lattice_rank: l.rank(),
        witness: None,
    }
}
