//! Smith normal form.

use crate::hnf::{combine_cols, combine_rows, negate_row};
use crate::int::Int;
use crate::matrix::{IntMatrix, SparseMatrix};

#[derive(Clone, Debug)]
pub struct Snf {
    /// Diagonal matrix with `s[i][i] | s[i+1][i+1]`.
    pub s: IntMatrix,
    pub u: IntMatrix,
    pub v: IntMatrix,
}

impl Snf {
    /// Nonzero diagonal entries.
    pub fn factors(&self) -> Vec<Int> {
        (0..self.s.rows().min(self.s.cols()))
            .map(|i| self.s.get(i, i).clone())
            .filter(|d| !d.is_zero())
            .collect()
    }

    pub fn rank(&self) -> usize {
        self.factors().len()
    }
}

/// Smith normal form with transforms: `u * m * v = s`.
pub fn smith_normal_form(m: &IntMatrix) -> Snf {
    let mut a = m.clone();
    let mut u = IntMatrix::identity(m.rows());
    let mut v = IntMatrix::identity(m.cols());
    diagonalize(&mut a, Some(&mut u), Some(&mut v));
    Snf { s: a, u, v }
}

fn diagonalize(a: &mut IntMatrix, mut u: Option<&mut IntMatrix>, mut v: Option<&mut IntMatrix>) {
    let (rows, cols) = (a.rows(), a.cols());
    for t in 0..rows.min(cols) {
        // smallest nonzero entry of the trailing block becomes the pivot
        let mut best: Option<(usize, usize, Int)> = None;
        for i in t..rows {
            for j in t..cols {
                let x = a.get(i, j);
                if !x.is_zero() {
                    let ax = x.abs();
                    if best.as_ref().is_none_or(|(_, _, b)| &ax < b) {
                        best = Some((i, j, ax));
                    }
                }
            }
        }
        let Some((bi, bj, _)) = best else { return };
        a.swap_rows(t, bi);
        if let Some(u) = u.as_deref_mut() {
            u.swap_rows(t, bi);
        }
        a.swap_cols(t, bj);
        if let Some(v) = v.as_deref_mut() {
            v.swap_cols(t, bj);
        }
        loop {
            for i in t + 1..rows {
                if a.get(i, t).is_zero() {
                    continue;
                }
                let x = a.get(t, t).clone();
                let y = a.get(i, t).clone();
                let (g, s, w) = Int::ext_gcd(&x, &y);
                let (xg, yg) = (x.div_exact(&g), y.div_exact(&g));
                combine_rows(a, t, i, &s, &w, &-&yg, &xg);
                if let Some(u) = u.as_deref_mut() {
                    combine_rows(u, t, i, &s, &w, &-&yg, &xg);
                }
            }
            for j in t + 1..cols {
                if a.get(t, j).is_zero() {
                    continue;
                }
                let x = a.get(t, t).clone();
                let y = a.get(t, j).clone();
                let (g, s, w) = Int::ext_gcd(&x, &y);
                let (xg, yg) = (x.div_exact(&g), y.div_exact(&g));
                combine_cols(a, t, j, &s, &w, &-&yg, &xg);
                if let Some(v) = v.as_deref_mut() {
                    combine_cols(v, t, j, &s, &w, &-&yg, &xg);
                }
            }
            if (t + 1..rows).any(|i| !a.get(i, t).is_zero()) {
                continue;
            }
            let p = a.get(t, t).clone();
            let bad = (t + 1..rows)
                .find(|&i| (t + 1..cols).any(|j| a.get(i, j).checked_div_exact(&p).is_none()));
            match bad {
                Some(i) => {
                    // fold the offending row into the pivot row and repeat
                    for j in 0..cols {
                        let x = a.get(t, j) + a.get(i, j);
                        a.set(t, j, x);
                    }
                    if let Some(u) = u.as_deref_mut() {
                        for j in 0..u.cols() {
                            let x = u.get(t, j) + u.get(i, j);
                            u.set(t, j, x);
                        }
                    }
                }
                None => break,
            }
        }
        if a.get(t, t).is_negative() {
            negate_row(a, t);
            if let Some(u) = u.as_deref_mut() {
                negate_row(u, t);
            }
        }
    }
}

/// Nonzero invariant factors of a sparse matrix, in divisibility order.
///
/// Unit entries are eliminated sparsely first (each contributes a factor 1);
/// the remaining block goes through the dense algorithm.
pub fn invariant_factors(m: &SparseMatrix) -> Vec<Int> {
    let mut elim = crate::kernel::UnitEliminator::new(m);
    let ones = elim.eliminate_units();
    let (residual, _, _) = elim.residual();
    let mut dense = residual;
    diagonalize(&mut dense, None, None);
    let mut out = vec![Int::ONE; ones];
    out.extend(
        (0..dense.rows().min(dense.cols()))
            .map(|i| dense.get(i, i).clone())
            .filter(|d| !d.is_zero()),
    );
    out.sort();
    out
}

/// Exact rank of a sparse matrix.
pub fn rank(m: &SparseMatrix) -> usize {
    invariant_factors(m).len()
}
