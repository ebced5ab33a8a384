//! Integer kernels of sparse constraint systems.
//!
//! Constraint matrices coming from graphs are very sparse and mostly carry
//! `±1` entries. Each unit entry lets one variable be written as an integer
//! combination of the others, which removes a row and a column without
//! changing the kernel over `Z`. Whatever survives is a small dense block
//! handled by Hermite reduction.

use std::collections::{BTreeMap, BTreeSet};

use crate::hnf::hermite_normal_form;
use crate::int::Int;
use crate::lattice::SubLattice;
use crate::matrix::{IntMatrix, SparseMatrix};

pub(crate) struct UnitEliminator {
    cols: usize,
    rows: Vec<Option<BTreeMap<usize, Int>>>,
    col_rows: Vec<BTreeSet<usize>>,
    /// `(j, expr)`: `x_j = sum(coef * x_c)` over columns still active when
    /// `j` was eliminated.
    eliminated: Vec<(usize, Vec<(usize, Int)>)>,
    is_eliminated: Vec<bool>,
}

impl UnitEliminator {
    pub(crate) fn new(m: &SparseMatrix) -> Self {
        let mut col_rows = vec![BTreeSet::new(); m.cols()];
        let mut rows = Vec::with_capacity(m.rows());
        for (i, r) in m.iter_rows().enumerate() {
            if r.is_empty() {
                rows.push(None);
                continue;
            }
            for (c, _) in r {
                col_rows[*c].insert(i);
            }
            rows.push(Some(r.iter().cloned().collect()));
        }
        UnitEliminator {
            cols: m.cols(),
            rows,
            col_rows,
            eliminated: Vec::new(),
            is_eliminated: vec![false; m.cols()],
        }
    }

    fn pick_pivot(&self) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize, usize)> = None;
        for (i, r) in self.rows.iter().enumerate() {
            let Some(r) = r else { continue };
            for (c, v) in r {
                if !v.is_unit() {
                    continue;
                }
                // Markowitz cost: fill-in created by this pivot
                let cost = (r.len() - 1) * (self.col_rows[*c].len() - 1);
                if cost == 0 {
                    return Some((i, *c));
                }
                if best.is_none_or(|(_, _, b)| cost < b) {
                    best = Some((i, *c, cost));
                }
            }
        }
        best.map(|(i, c, _)| (i, c))
    }

    /// Eliminates unit pivots until none remain; returns how many.
    pub(crate) fn eliminate_units(&mut self) -> usize {
        let mut count = 0;
        while let Some((r, j)) = self.pick_pivot() {
            let row = self.rows[r].take().expect("active pivot row");
            for c in row.keys() {
                self.col_rows[*c].remove(&r);
            }
            let a = row[&j].clone();
            let targets: Vec<usize> = self.col_rows[j].iter().copied().collect();
            for l in targets {
                let lrow = self.rows[l].as_mut().expect("active row");
                let f = &lrow[&j] * &a;
                for (c, x) in &row {
                    let e = lrow.entry(*c).or_insert(Int::ZERO);
                    let was_zero = e.is_zero();
                    *e -= &(&f * x);
                    if e.is_zero() {
                        lrow.remove(c);
                        if !was_zero {
                            self.col_rows[*c].remove(&l);
                        }
                    } else if was_zero {
                        self.col_rows[*c].insert(l);
                    }
                }
                if lrow.is_empty() {
                    self.rows[l] = None;
                }
            }
            debug_assert!(self.col_rows[j].is_empty());
            let neg_a = -&a;
            let expr: Vec<(usize, Int)> = row
                .iter()
                .filter(|(c, _)| **c != j)
                .map(|(c, x)| (*c, &neg_a * x))
                .collect();
            self.eliminated.push((j, expr));
            self.is_eliminated[j] = true;
            count += 1;
        }
        count
    }

    /// Dense residual block over the surviving columns that still occur in a
    /// row, together with those columns and the untouched (free) columns.
    pub(crate) fn residual(&self) -> (IntMatrix, Vec<usize>, Vec<usize>) {
        let mut used = BTreeSet::new();
        let live: Vec<&BTreeMap<usize, Int>> = self.rows.iter().flatten().collect();
        for r in &live {
            used.extend(r.keys().copied());
        }
        let res_cols: Vec<usize> = used.into_iter().collect();
        let free: Vec<usize> = (0..self.cols)
            .filter(|c| !self.is_eliminated[*c] && self.col_rows[*c].is_empty())
            .collect();
        let mut m = IntMatrix::zeros(live.len(), res_cols.len());
        for (i, r) in live.iter().enumerate() {
            for (c, v) in r.iter() {
                let j = res_cols.binary_search(c).expect("residual column");
                m.set(i, j, v.clone());
            }
        }
        (m, res_cols, free)
    }

    fn back_substitute(&self, x: &mut [Int]) {
        for (j, expr) in self.eliminated.iter().rev() {
            let mut acc = Int::ZERO;
            for (c, coef) in expr {
                if !x[*c].is_zero() {
                    acc += &(coef * &x[*c]);
                }
            }
            x[*j] = acc;
        }
    }
}

/// Basis of `{x : a x = 0}` for a dense matrix via the Hermite transform of
/// `a^T`.
pub fn dense_kernel_vectors(a: &IntMatrix) -> Vec<Vec<Int>> {
    let (h, u) = hermite_normal_form(&a.transpose());
    (0..h.rows())
        .filter(|&i| h.row(i).iter().all(Int::is_zero))
        .map(|i| u.row(i).to_vec())
        .collect()
}

/// Linearly independent integer vectors spanning `{x : m x = 0}` over `Z`.
pub fn kernel_vectors(m: &SparseMatrix) -> Vec<Vec<Int>> {
    let mut elim = UnitEliminator::new(m);
    elim.eliminate_units();
    let (res, res_cols, free) = elim.residual();
    let n = m.cols();
    let mut out = Vec::new();
    for f in free {
        let mut x = vec![Int::ZERO; n];
        x[f] = Int::ONE;
        elim.back_substitute(&mut x);
        out.push(x);
    }
    if !res_cols.is_empty() {
        for w in dense_kernel_vectors(&res) {
            let mut x = vec![Int::ZERO; n];
            for (k, c) in res_cols.iter().enumerate() {
                x[*c] = w[k].clone();
            }
            elim.back_substitute(&mut x);
            out.push(x);
        }
    }
    out
}

/// The kernel lattice of `m` in canonical form.
pub fn kernel_basis(m: &SparseMatrix) -> SubLattice {
    SubLattice::from_generators(m.cols(), kernel_vectors(m))
}

/// Kernel through a single dense Hermite reduction; slower, used as a
/// cross-check of [`kernel_basis`].
pub fn kernel_basis_dense(m: &IntMatrix) -> SubLattice {
    SubLattice::from_generators(m.cols(), dense_kernel_vectors(m))
}
