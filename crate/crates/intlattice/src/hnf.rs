//! Row Hermite normal form.
//!
//! [`Echelon`] is an incremental builder: vectors are absorbed one at a time
//! by extended-gcd row combinations, optionally tracking each row as an
//! integer combination of the inserted vectors. [`hermite_normal_form`] is the
//! dense variant returning the full unimodular transform.

use std::collections::BTreeMap;

use crate::int::Int;
use crate::matrix::IntMatrix;

/// Sparse integer combination of inserted vectors, keyed by insertion tag.
pub type Combo = BTreeMap<usize, Int>;

fn combo_axpy(dst: &mut Combo, coeff: &Int, src: &Combo) {
    if coeff.is_zero() {
        return;
    }
    for (k, v) in src {
        let e = dst.entry(*k).or_insert(Int::ZERO);
        *e += &(coeff * v);
        if e.is_zero() {
            dst.remove(k);
        }
    }
}

fn combo_lin(s: &Int, a: &Combo, t: &Int, b: &Combo) -> Combo {
    let mut out = Combo::new();
    combo_axpy(&mut out, s, a);
    combo_axpy(&mut out, t, b);
    out
}

fn combo_neg(c: &mut Combo) {
    for v in c.values_mut() {
        *v = -&*v;
    }
}

/// `dst[from..] -= q * src[from..]`
fn axpy_from(dst: &mut [Int], q: &Int, src: &[Int], from: usize) {
    if q.is_zero() {
        return;
    }
    for c in from..dst.len() {
        if !src[c].is_zero() {
            dst[c] -= &(q * &src[c]);
        }
    }
}

fn lin_from(s: &Int, a: &[Int], t: &Int, b: &[Int], from: usize) -> Vec<Int> {
    let mut out = vec![Int::ZERO; a.len()];
    for c in from..a.len() {
        let mut x = Int::ZERO;
        if !a[c].is_zero() && !s.is_zero() {
            x += &(s * &a[c]);
        }
        if !b[c].is_zero() && !t.is_zero() {
            x += &(t * &b[c]);
        }
        out[c] = x;
    }
    out
}

const GROWTH_LIMIT: i64 = 1 << 24;

/// Incrementally maintained row echelon basis of a lattice in `Z^dim`.
#[derive(Clone, Debug)]
pub struct Echelon {
    dim: usize,
    rows: Vec<Vec<Int>>,
    pivots: Vec<usize>,
    traces: Option<Vec<Combo>>,
}

impl Echelon {
    pub fn new(dim: usize) -> Self {
        Echelon {
            dim,
            rows: Vec::new(),
            pivots: Vec::new(),
            traces: None,
        }
    }

    /// A builder that records every row as a combination of inserted tags.
    pub fn traced(dim: usize) -> Self {
        Echelon {
            dim,
            rows: Vec::new(),
            pivots: Vec::new(),
            traces: Some(Vec::new()),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<Int>] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn traces(&self) -> Option<&[Combo]> {
        self.traces.as_deref()
    }

    /// True when the lattice is all of `Z^dim`.
    pub fn is_full(&self) -> bool {
        self.rows.len() == self.dim
            && self
                .rows
                .iter()
                .zip(&self.pivots)
                .all(|(r, &p)| r[p].is_one())
    }

    /// Adds `v` to the lattice. Returns true when the lattice grew.
    pub fn insert(&mut self, v: Vec<Int>) -> bool {
        assert!(
            self.traces.is_none(),
            "use insert_traced on a traced builder"
        );
        self.absorb(v, None)
    }

    pub fn insert_traced(&mut self, v: Vec<Int>, tag: usize) -> bool {
        assert!(self.traces.is_some(), "builder does not track traces");
        let mut c = Combo::new();
        c.insert(tag, Int::ONE);
        self.absorb(v, Some(c))
    }

    fn absorb(&mut self, mut v: Vec<Int>, mut tr: Option<Combo>) -> bool {
        assert_eq!(
            v.len(),
            self.dim,
            "vector length does not match lattice dimension"
        );
        let mut start = 0;
        loop {
            let j = match (start..self.dim).find(|&c| !v[c].is_zero()) {
                Some(j) => j,
                None => return false,
            };
            match self.pivots.binary_search(&j) {
                Err(pos) => {
                    if v[j].is_negative() {
                        for x in v.iter_mut() {
                            *x = -&*x;
                        }
                        if let Some(t) = tr.as_mut() {
                            combo_neg(t);
                        }
                    }
                    self.rows.insert(pos, v);
                    self.pivots.insert(pos, j);
                    if let (Some(ts), Some(t)) = (self.traces.as_mut(), tr) {
                        ts.insert(pos, t);
                    }
                    self.control_growth(pos);
                    return true;
                }
                Ok(k) => {
                    let a = self.rows[k][j].clone();
                    let b = v[j].clone();
                    if let Some(q) = b.checked_div_exact(&a) {
                        axpy_from(&mut v, &q, &self.rows[k], j);
                        if let (Some(ts), Some(t)) = (self.traces.as_ref(), tr.as_mut()) {
                            combo_axpy(t, &-&q, &ts[k]);
                        }
                    } else {
                        let (g, s, t) = Int::ext_gcd(&a, &b);
                        let ag = a.div_exact(&g);
                        let bg = -&b.div_exact(&g);
                        let new_row = lin_from(&s, &self.rows[k], &t, &v, j);
                        let new_v = lin_from(&bg, &self.rows[k], &ag, &v, j);
                        if let (Some(ts), Some(tv)) = (self.traces.as_mut(), tr.as_mut()) {
                            let nr = combo_lin(&s, &ts[k], &t, tv);
                            let nv = combo_lin(&bg, &ts[k], &ag, tv);
                            ts[k] = nr;
                            *tv = nv;
                        }
                        self.rows[k] = new_row;
                        v = new_v;
                        self.control_growth(k);
                    }
                    start = j + 1;
                }
            }
        }
    }

    fn control_growth(&mut self, k: usize) {
        let limit = Int::from(GROWTH_LIMIT);
        if self.rows[k].iter().all(|x| x.abs() < limit) {
            return;
        }
        self.reduce_row_below(k);
    }

    /// Reduces row `k` modulo the pivots of all later rows.
    fn reduce_row_below(&mut self, k: usize) {
        for i in k + 1..self.rows.len() {
            let p = self.pivots[i];
            let (q, _) = self.rows[k][p].div_mod_floor(&self.rows[i][p]);
            if q.is_zero() {
                continue;
            }
            let (head, tail) = self.rows.split_at_mut(i);
            axpy_from(&mut head[k], &q, &tail[0], p);
            if let Some(ts) = self.traces.as_mut() {
                let src = ts[i].clone();
                combo_axpy(&mut ts[k], &-&q, &src);
            }
        }
    }

    /// Brings the rows into canonical Hermite form: positive pivots and
    /// entries above each pivot reduced into `[0, pivot)`.
    pub fn canonicalize(&mut self) {
        for i in 0..self.rows.len() {
            let p = self.pivots[i];
            for k in 0..i {
                let (q, _) = self.rows[k][p].div_mod_floor(&self.rows[i][p]);
                if q.is_zero() {
                    continue;
                }
                let (head, tail) = self.rows.split_at_mut(i);
                axpy_from(&mut head[k], &q, &tail[0], p);
                if let Some(ts) = self.traces.as_mut() {
                    let src = ts[i].clone();
                    combo_axpy(&mut ts[k], &-&q, &src);
                }
            }
        }
    }

    /// Integer coefficients of `v` over the current rows, if `v` is in the
    /// lattice.
    pub fn coefficients(&self, v: &[Int]) -> Option<Vec<Int>> {
        assert_eq!(v.len(), self.dim);
        let mut v = v.to_vec();
        let mut coeffs = vec![Int::ZERO; self.rows.len()];
        let mut start = 0;
        for (k, &p) in self.pivots.iter().enumerate() {
            if v[start..p].iter().any(|x| !x.is_zero()) {
                return None;
            }
            let q = v[p].checked_div_exact(&self.rows[k][p])?;
            axpy_from(&mut v, &q, &self.rows[k], p);
            coeffs[k] = q;
            start = p + 1;
        }
        if v[start..].iter().any(|x| !x.is_zero()) {
            return None;
        }
        Some(coeffs)
    }

    /// Like [`Echelon::coefficients`] but expressed over the inserted tags.
    pub fn trace_of(&self, v: &[Int]) -> Option<Combo> {
        let ts = self.traces.as_ref().expect("builder does not track traces");
        let c = self.coefficients(v)?;
        let mut out = Combo::new();
        for (k, q) in c.iter().enumerate() {
            combo_axpy(&mut out, q, &ts[k]);
        }
        Some(out)
    }

    /// Canonical representative of `v` modulo the lattice: every pivot
    /// coordinate lands in `[0, pivot)`. Two vectors share a coset exactly
    /// when their residues are equal.
    pub fn reduce(&self, v: &[Int]) -> Vec<Int> {
        assert_eq!(v.len(), self.dim);
        let mut v = v.to_vec();
        for (k, &p) in self.pivots.iter().enumerate() {
            let (q, _) = v[p].div_mod_floor(&self.rows[k][p]);
            if !q.is_zero() {
                axpy_from(&mut v, &q, &self.rows[k], p);
            }
        }
        v
    }

    pub fn contains(&self, v: &[Int]) -> bool {
        self.coefficients(v).is_some()
    }

    pub fn into_rows(self) -> Vec<Vec<Int>> {
        self.rows
    }
}

/// Canonical row HNF basis of the lattice spanned by `rows`.
pub fn hnf_basis(rows: impl IntoIterator<Item = Vec<Int>>, dim: usize) -> Vec<Vec<Int>> {
    let mut e = Echelon::new(dim);
    for r in rows {
        e.insert(r);
    }
    e.canonicalize();
    e.into_rows()
}

/// Row Hermite normal form with transform: returns `(h, u)` with `u * m = h`,
/// `u` unimodular, zero rows of `h` at the bottom.
pub fn hermite_normal_form(m: &IntMatrix) -> (IntMatrix, IntMatrix) {
    let (rows, cols) = (m.rows(), m.cols());
    let mut a = m.clone();
    let mut u = IntMatrix::identity(rows);
    let mut r = 0;
    for j in 0..cols {
        if r == rows {
            break;
        }
        for i in r + 1..rows {
            if a.get(i, j).is_zero() {
                continue;
            }
            if a.get(r, j).is_zero() {
                a.swap_rows(r, i);
                u.swap_rows(r, i);
                continue;
            }
            let x = a.get(r, j).clone();
            let y = a.get(i, j).clone();
            let (g, s, t) = Int::ext_gcd(&x, &y);
            let xg = x.div_exact(&g);
            let yg = y.div_exact(&g);
            combine_rows(&mut a, r, i, &s, &t, &-&yg, &xg);
            combine_rows(&mut u, r, i, &s, &t, &-&yg, &xg);
        }
        if a.get(r, j).is_zero() {
            continue;
        }
        if a.get(r, j).is_negative() {
            negate_row(&mut a, r);
            negate_row(&mut u, r);
        }
        let p = a.get(r, j).clone();
        for k in 0..r {
            let (q, _) = a.get(k, j).div_mod_floor(&p);
            if !q.is_zero() {
                sub_row(&mut a, k, r, &q);
                sub_row(&mut u, k, r, &q);
            }
        }
        r += 1;
    }
    (a, u)
}

/// Replaces rows `(r, i)` by `(s*r + t*i, x*r + y*i)`.
pub(crate) fn combine_rows(
    m: &mut IntMatrix,
    r: usize,
    i: usize,
    s: &Int,
    t: &Int,
    x: &Int,
    y: &Int,
) {
    for c in 0..m.cols() {
        let a = m.get(r, c).clone();
        let b = m.get(i, c).clone();
        if a.is_zero() && b.is_zero() {
            continue;
        }
        m.set(r, c, &(s * &a) + &(t * &b));
        m.set(i, c, &(x * &a) + &(y * &b));
    }
}

/// Replaces columns `(r, i)` by `(s*r + t*i, x*r + y*i)`.
pub(crate) fn combine_cols(
    m: &mut IntMatrix,
    r: usize,
    i: usize,
    s: &Int,
    t: &Int,
    x: &Int,
    y: &Int,
) {
    for c in 0..m.rows() {
        let a = m.get(c, r).clone();
        let b = m.get(c, i).clone();
        if a.is_zero() && b.is_zero() {
            continue;
        }
        m.set(c, r, &(s * &a) + &(t * &b));
        m.set(c, i, &(x * &a) + &(y * &b));
    }
}

pub(crate) fn negate_row(m: &mut IntMatrix, r: usize) {
    for x in m.row_mut(r) {
        *x = -&*x;
    }
}

/// `row k -= q * row r`
pub(crate) fn sub_row(m: &mut IntMatrix, k: usize, r: usize, q: &Int) {
    for c in 0..m.cols() {
        let b = m.get(r, c).clone();
        if !b.is_zero() {
            let v = m.get(k, c) - &(q * &b);
            m.set(k, c, v);
        }
    }
}

/// True when `h` is in canonical row Hermite form (zero rows allowed only at
/// the bottom).
pub fn is_hnf(h: &IntMatrix) -> bool {
    let mut last_pivot: Option<usize> = None;
    let mut seen_zero = false;
    for i in 0..h.rows() {
        let row = h.row(i);
        match row.iter().position(|x| !x.is_zero()) {
            None => seen_zero = true,
            Some(p) => {
                if seen_zero || last_pivot.is_some_and(|lp| p <= lp) || !row[p].is_positive() {
                    return false;
                }
                for k in 0..i {
                    let e = h.get(k, p);
                    if e.is_negative() || e >= &row[p] {
                        return false;
                    }
                }
                last_pivot = Some(p);
            }
        }
    }
    true
}
