//! Sublattices of `Z^n` in canonical Hermite form.

use serde::{Deserialize, Serialize};

use crate::hnf::{Combo, Echelon};
use crate::int::Int;
use crate::matrix::IntMatrix;
use crate::snf::smith_normal_form;
use crate::LatticeError;

/// A sublattice of `Z^ambient_dim`. The basis is the canonical row HNF, so two
/// lattices are equal exactly when their bases are identical.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
#[serde(from = "LatticeDoc")]
pub struct SubLattice {
    ambient_dim: usize,
    basis: Vec<Vec<Int>>,
    #[serde(skip_serializing)]
    pivots: Vec<usize>,
}

#[derive(Deserialize)]
struct LatticeDoc {
    ambient_dim: usize,
    basis: Vec<Vec<Int>>,
}

impl From<LatticeDoc> for SubLattice {
    fn from(d: LatticeDoc) -> Self {
        SubLattice::from_generators(d.ambient_dim, d.basis)
    }
}

/// Structure of a quotient `b / a`: `Z^free_rank` plus cyclic torsion.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct QuotientInvariants {
    pub free_rank: usize,
    /// Invariant factors greater than one, in divisibility order.
    pub torsion: Vec<Int>,
}

impl QuotientInvariants {
    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }
}

impl std::fmt::Display for QuotientInvariants {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_trivial() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        if self.free_rank > 0 {
            parts.push(if self.free_rank == 1 {
                "Z".to_string()
            } else {
                format!("Z^{}", self.free_rank)
            });
        }
        for t in &self.torsion {
            parts.push(format!("Z/{t}"));
        }
        write!(f, "{}", parts.join(" + "))
    }
}

impl SubLattice {
    pub fn zero(dim: usize) -> Self {
        SubLattice {
            ambient_dim: dim,
            basis: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn full(dim: usize) -> Self {
        let basis = (0..dim)
            .map(|i| {
                let mut r = vec![Int::ZERO; dim];
                r[i] = Int::ONE;
                r
            })
            .collect();
        SubLattice {
            ambient_dim: dim,
            basis,
            pivots: (0..dim).collect(),
        }
    }

    pub fn from_generators(dim: usize, gens: impl IntoIterator<Item = Vec<Int>>) -> Self {
        let mut e = Echelon::new(dim);
        for g in gens {
            e.insert(g);
        }
        Self::from_echelon(e)
    }

    fn from_echelon(mut e: Echelon) -> Self {
        e.canonicalize();
        let pivots = e.pivots().to_vec();
        SubLattice {
            ambient_dim: e.dim(),
            basis: e.into_rows(),
            pivots,
        }
    }

    /// Rebuilds from serialized data, validating canonical form.
    pub fn from_basis(dim: usize, basis: Vec<Vec<Int>>) -> Result<Self, LatticeError> {
        for r in &basis {
            if r.len() != dim {
                return Err(LatticeError::DimensionMismatch {
                    expected: dim,
                    found: r.len(),
                });
            }
        }
        let lat = SubLattice::from_generators(dim, basis.clone());
        if lat.basis != basis {
            return Err(LatticeError::NotCanonical);
        }
        Ok(lat)
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn basis(&self) -> &[Vec<Int>] {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn basis_matrix(&self) -> IntMatrix {
        IntMatrix::from_rows(self.basis.clone(), self.ambient_dim)
    }

    /// Integer coefficients of `v` over the basis rows, or `None` when `v` is
    /// not in the lattice over `Z`.
    pub fn membership(&self, v: &[Int]) -> Option<Vec<Int>> {
        if v.len() != self.ambient_dim {
            return None;
        }
        let mut v = v.to_vec();
        let mut coeffs = Vec::with_capacity(self.basis.len());
        let mut start = 0;
        for (row, &p) in self.basis.iter().zip(&self.pivots) {
            if v[start..p].iter().any(|x| !x.is_zero()) {
                return None;
            }
            let q = v[p].checked_div_exact(&row[p])?;
            if !q.is_zero() {
                for c in p..self.ambient_dim {
                    if !row[c].is_zero() {
                        v[c] -= &(&q * &row[c]);
                    }
                }
            }
            coeffs.push(q);
            start = p + 1;
        }
        if v[start..].iter().any(|x| !x.is_zero()) {
            return None;
        }
        Some(coeffs)
    }

    pub fn contains(&self, v: &[Int]) -> bool {
        self.membership(v).is_some()
    }

    /// Membership for a sparse vector given as `(coordinate, value)` pairs.
    pub fn membership_sparse(&self, v: &[(usize, Int)]) -> Option<Vec<Int>> {
        let c = self.coords_on_pivots(v)?;
        (self.combine(&c) == densify(self.ambient_dim, v)).then_some(c)
    }

    /// Coefficients matched on pivot coordinates only. Exact for members;
    /// for non-members the result is meaningless (or `None`).
    pub fn coords_on_pivots(&self, v: &[(usize, Int)]) -> Option<Vec<Int>> {
        let r = self.basis.len();
        let mut vals = vec![Int::ZERO; r];
        for (c, x) in v {
            if let Ok(i) = self.pivots.binary_search(c) {
                vals[i] += x;
            }
        }
        let mut coeffs: Vec<Int> = Vec::with_capacity(r);
        for (i, (&p, val)) in self.pivots.iter().zip(&vals).enumerate() {
            let mut t = val.clone();
            for (k, ck) in coeffs.iter().enumerate() {
                let h = &self.basis[k][p];
                if !h.is_zero() && !ck.is_zero() {
                    t -= &(ck * h);
                }
            }
            coeffs.push(t.checked_div_exact(&self.basis[i][p])?);
        }
        Some(coeffs)
    }

    /// `sum(c_i * basis_i)`.
    pub fn combine(&self, c: &[Int]) -> Vec<Int> {
        assert_eq!(c.len(), self.basis.len());
        let mut out = vec![Int::ZERO; self.ambient_dim];
        for (q, row) in c.iter().zip(&self.basis) {
            if q.is_zero() {
                continue;
            }
            for (o, x) in out.iter_mut().zip(row) {
                if !x.is_zero() {
                    *o += &(q * x);
                }
            }
        }
        out
    }

    pub fn sum(&self, other: &SubLattice) -> SubLattice {
        assert_eq!(
            self.ambient_dim, other.ambient_dim,
            "ambient dimensions differ"
        );
        SubLattice::from_generators(
            self.ambient_dim,
            self.basis.iter().chain(&other.basis).cloned(),
        )
    }

    /// `Ok(())` when `self` is inside `other`, otherwise the index of the
    /// first basis row of `self` that is missing.
    pub fn check_subset(&self, other: &SubLattice) -> Result<(), usize> {
        for (i, r) in self.basis.iter().enumerate() {
            if !other.contains(r) {
                return Err(i);
            }
        }
        Ok(())
    }

    pub fn is_subset_of(&self, other: &SubLattice) -> bool {
        self.check_subset(other).is_ok()
    }
}

fn densify(dim: usize, v: &[(usize, Int)]) -> Vec<Int> {
    let mut out = vec![Int::ZERO; dim];
    for (c, x) in v {
        out[*c] += x;
    }
    out
}

pub fn lattice_sum(a: &SubLattice, b: &SubLattice) -> SubLattice {
    a.sum(b)
}

pub fn lattice_equal(a: &SubLattice, b: &SubLattice) -> bool {
    a == b
}

/// Invariants of `b / a`; requires `a` inside `b`.
pub fn quotient_invariants(
    a: &SubLattice,
    b: &SubLattice,
) -> Result<QuotientInvariants, LatticeError> {
    if a.ambient_dim != b.ambient_dim {
        return Err(LatticeError::DimensionMismatch {
            expected: b.ambient_dim,
            found: a.ambient_dim,
        });
    }
    let mut rows = Vec::with_capacity(a.rank());
    for (i, r) in a.basis.iter().enumerate() {
        match b.membership(r) {
            Some(c) => rows.push(c),
            None => {
                return Err(LatticeError::NotContained {
                    index: i,
                    vector: r.clone(),
                })
            }
        }
    }
    Ok(quotient_of_rows(rows, b.rank()))
}

/// Quotient `Z^dim / span(rows)` for linearly independent rows.
pub fn quotient_of_rows(rows: Vec<Vec<Int>>, dim: usize) -> QuotientInvariants {
    let s = rows.len();
    if s == 0 {
        return QuotientInvariants {
            free_rank: dim,
            torsion: Vec::new(),
        };
    }
    let f = smith_normal_form(&IntMatrix::from_rows(rows, dim)).factors();
    QuotientInvariants {
        free_rank: dim - f.len(),
        torsion: f.into_iter().filter(|d| !d.is_one()).collect(),
    }
}

/// Span of vectors known to lie in a fixed lattice `L`, maintained in the
/// coordinates of `L`'s basis. Work is independent of the ambient dimension
/// once coordinates are known.
#[derive(Clone, Debug)]
pub struct ChartSpan<'a> {
    lattice: &'a SubLattice,
    echelon: Echelon,
}

impl<'a> ChartSpan<'a> {
    pub fn new(lattice: &'a SubLattice) -> Self {
        ChartSpan {
            lattice,
            echelon: Echelon::new(lattice.rank()),
        }
    }

    /// A span that remembers how each row arises from tagged inputs.
    pub fn traced(lattice: &'a SubLattice) -> Self {
        ChartSpan {
            lattice,
            echelon: Echelon::traced(lattice.rank()),
        }
    }

    pub fn lattice(&self) -> &SubLattice {
        self.lattice
    }

    /// Chart coordinates of a sparse member of `L`.
    pub fn coords(&self, v: &[(usize, Int)]) -> Option<Vec<Int>> {
        self.lattice.coords_on_pivots(v)
    }

    pub fn add_coords(&mut self, c: Vec<Int>) -> bool {
        self.echelon.insert(c)
    }

    pub fn add_coords_traced(&mut self, c: Vec<Int>, tag: usize) -> bool {
        self.echelon.insert_traced(c, tag)
    }

    pub fn rank(&self) -> usize {
        self.echelon.rank()
    }

    /// True once the span is all of `L`.
    pub fn is_full(&self) -> bool {
        self.echelon.is_full()
    }

    pub fn contains_coords(&self, c: &[Int]) -> bool {
        self.echelon.contains(c)
    }

    /// Tagged combination producing chart vector `c`, if it is in the span.
    pub fn trace_of(&self, c: &[Int]) -> Option<Combo> {
        self.echelon.trace_of(c)
    }

    /// Echelon rows of the span, in chart coordinates.
    pub fn rows(&self) -> &[Vec<Int>] {
        self.echelon.rows()
    }

    /// Canonical representative of the coset `c + span`.
    pub fn residue(&self, c: &[Int]) -> Vec<Int> {
        self.echelon.reduce(c)
    }

    /// Invariants of `L / span`.
    pub fn quotient(&self) -> QuotientInvariants {
        quotient_of_rows(self.echelon.rows().to_vec(), self.lattice.rank())
    }

    /// The span as a sublattice of the ambient space.
    pub fn to_sublattice(&self) -> SubLattice {
        SubLattice::from_generators(
            self.lattice.ambient_dim(),
            self.echelon.rows().iter().map(|c| self.lattice.combine(c)),
        )
    }
}
