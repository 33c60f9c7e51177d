//! Dense matrices over Z/n: Howell normal form, linear solving and
//! column-tracked diagonalization.
//!
//! Linear systems use the row-vector convention throughout: a solution of
//! `A` against `b` is a row vector `x` with `x · A = b`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ring::{gcd, xgcd, RingSpec};

/// Row-major matrix of residues.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MatrixZn {
    rows: usize,
    cols: usize,
    data: Vec<u64>,
}

impl MatrixZn {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        MatrixZn {
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(size: usize) -> Self {
        let mut m = Self::zeros(size, size);
        for i in 0..size {
            m.data[i * size + i] = 1;
        }
        m
    }

    /// Builds a matrix from explicit rows, reducing every entry modulo `n`.
    pub fn from_rows(ring: &RingSpec, cols: usize, rows: &[Vec<i64>]) -> Result<Self> {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for (i, r) in rows.iter().enumerate() {
            if r.len() != cols {
                return Err(Error::Dimension(format!(
                    "row {i} has {} entries, expected {cols}",
                    r.len()
                )));
            }
            data.extend(r.iter().map(|&v| ring.reduce_signed(v)));
        }
        Ok(MatrixZn {
            rows: rows.len(),
            cols,
            data,
        })
    }

    pub(crate) fn from_vecs(cols: usize, rows: Vec<Vec<u64>>) -> Self {
        let nrows = rows.len();
        let mut data = Vec::with_capacity(nrows * cols);
        for r in rows {
            debug_assert_eq!(r.len(), cols);
            data.extend(r);
        }
        MatrixZn {
            rows: nrows,
            cols,
            data,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: u64) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[u64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<u64>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn to_i64_rows(&self) -> Vec<Vec<i64>> {
        (0..self.rows)
            .map(|i| self.row(i).iter().map(|&v| v as i64).collect())
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    pub fn mul(&self, ring: &RingSpec, other: &MatrixZn) -> Self {
        assert_eq!(self.cols, other.rows, "matrix product dimension mismatch");
        let n = ring.modulus();
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                let orow = other.row(k);
                let base = i * other.cols;
                for (j, &b) in orow.iter().enumerate() {
                    if b != 0 {
                        out.data[base + j] = (out.data[base + j] + a * b) % n;
                    }
                }
            }
        }
        out
    }

    /// Stacks `self` above `other`.
    pub fn vstack(&self, other: &MatrixZn) -> Self {
        assert_eq!(self.cols, other.cols);
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        MatrixZn {
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        }
    }

    /// Places `other` to the right of `self`.
    pub fn hstack(&self, other: &MatrixZn) -> Self {
        assert_eq!(self.rows, other.rows);
        let cols = self.cols + other.cols;
        let mut data = Vec::with_capacity(self.rows * cols);
        for i in 0..self.rows {
            data.extend_from_slice(self.row(i));
            data.extend_from_slice(other.row(i));
        }
        MatrixZn {
            rows: self.rows,
            cols,
            data,
        }
    }

    /// Block diagonal sum.
    pub fn block_diag(&self, other: &MatrixZn) -> Self {
        let mut out = Self::zeros(self.rows + other.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(i, j, self.get(i, j));
            }
        }
        for i in 0..other.rows {
            for j in 0..other.cols {
                out.set(self.rows + i, self.cols + j, other.get(i, j));
            }
        }
        out
    }

    pub fn select_cols(&self, range: std::ops::Range<usize>) -> Self {
        let cols = range.len();
        let mut out = Self::zeros(self.rows, cols);
        for i in 0..self.rows {
            for (jj, j) in range.clone().enumerate() {
                out.set(i, jj, self.get(i, j));
            }
        }
        out
    }

    pub fn select_rows(&self, range: std::ops::Range<usize>) -> Self {
        MatrixZn {
            rows: range.len(),
            cols: self.cols,
            data: self.data[range.start * self.cols..range.end * self.cols].to_vec(),
        }
    }
}

/// Canonical row-span form with the transform that produced it.
#[derive(Clone, Debug)]
pub struct HowellForm {
    /// Howell normal form, zero rows removed.
    pub h: MatrixZn,
    /// `transform · A = h`.
    pub transform: MatrixZn,
    /// Pivot column of each row of `h`.
    pub pivots: Vec<usize>,
}

fn row_axpy(ring: &RingSpec, dst: &mut [u64], q: u64, src: &[u64]) {
    // dst -= q * src
    if q == 0 {
        return;
    }
    let n = ring.modulus();
    let negq = (n - q % n) % n;
    for (d, &s) in dst.iter_mut().zip(src) {
        if s != 0 {
            *d = (*d + negq * s) % n;
        }
    }
}

fn combine_rows(ring: &RingSpec, r1: &mut [u64], r2: &mut [u64], m: [[u64; 2]; 2]) {
    // (r1, r2) <- (m00 r1 + m01 r2, m10 r1 + m11 r2)
    let n = ring.modulus();
    for (a, b) in r1.iter_mut().zip(r2.iter_mut()) {
        let (x, y) = (*a, *b);
        *a = (m[0][0] * x + m[0][1] * y) % n;
        *b = (m[1][0] * x + m[1][1] * y) % n;
    }
}

/// Unimodular 2x2 transform sending `(a, b)` to `(gcd, 0)` (rows as coefficients).
fn gcd_transform(ring: &RingSpec, a: u64, b: u64) -> [[u64; 2]; 2] {
    let (g, s, t) = xgcd(a as i64, b as i64);
    let g = g as u64;
    [
        [ring.reduce_signed(s), ring.reduce_signed(t)],
        [ring.neg(b / g), ring.reduce(a / g)],
    ]
}

fn two_rows<T>(v: &mut [T], i: usize, j: usize) -> (&mut T, &mut T) {
    assert!(i < j);
    let (lo, hi) = v.split_at_mut(j);
    (&mut lo[i], &mut hi[0])
}

fn howell_core(
    ring: &RingSpec,
    mut rows: Vec<Vec<u64>>,
    cols: usize,
    mut tr: Option<&mut Vec<Vec<u64>>>,
) -> (Vec<Vec<u64>>, Vec<usize>, Vec<usize>) {
    let n = ring.modulus();
    let mut pr = 0usize;
    let mut pivots = Vec::new();
    for c in 0..cols {
        let Some(first) = (pr..rows.len()).find(|&r| rows[r][c] != 0) else {
            continue;
        };
        rows.swap(pr, first);
        if let Some(t) = tr.as_deref_mut() {
            t.swap(pr, first);
        }
        for r in pr + 1..rows.len() {
            let b = rows[r][c];
            if b == 0 {
                continue;
            }
            let a = rows[pr][c];
            let (x, y) = two_rows(&mut rows, pr, r);
            if a != 0 && b % a == 0 {
                row_axpy(ring, y, b / a, x);
                if let Some(t) = tr.as_deref_mut() {
                    let (tx, ty) = two_rows(t, pr, r);
                    row_axpy(ring, ty, b / a, tx);
                }
            } else {
                let m = gcd_transform(ring, a, b);
                combine_rows(ring, x, y, m);
                if let Some(t) = tr.as_deref_mut() {
                    let (tx, ty) = two_rows(t, pr, r);
                    combine_rows(ring, tx, ty, m);
                }
            }
        }
        let u = ring.normalizing_unit(rows[pr][c]);
        if u != 1 {
            for v in rows[pr].iter_mut() {
                *v = *v * u % n;
            }
            if let Some(t) = tr.as_deref_mut() {
                for v in t[pr].iter_mut() {
                    *v = *v * u % n;
                }
            }
        }
        let p = rows[pr][c];
        let ann = n / p;
        let ann_row: Vec<u64> = rows[pr].iter().map(|&v| v * ann % n).collect();
        if ann_row.iter().any(|&v| v != 0) {
            rows.push(ann_row);
            if let Some(t) = tr.as_deref_mut() {
                let ann_tr: Vec<u64> = t[pr].iter().map(|&v| v * ann % n).collect();
                t.push(ann_tr);
            }
        }
        pivots.push(c);
        pr += 1;
    }
    // reduce entries above each pivot into [0, pivot)
    for j in 0..pr {
        let c = pivots[j];
        let p = rows[j][c];
        for i in 0..j {
            let q = rows[i][c] / p;
            if q != 0 {
                let (x, y) = two_rows(&mut rows, i, j);
                row_axpy(ring, x, q, y);
                if let Some(t) = tr.as_deref_mut() {
                    let (tx, ty) = two_rows(t, i, j);
                    row_axpy(ring, tx, q, ty);
                }
            }
        }
    }
    rows.truncate(pr);
    if let Some(t) = tr {
        t.truncate(pr);
    }
    let order: Vec<usize> = (0..pr).collect();
    (rows, pivots, order)
}

/// Howell normal form of `a` with the transform `T` satisfying `T · a = H`.
///
/// Pivots divide `n`, entries above a pivot are reduced into `[0, pivot)`,
/// and every element of the row span whose first `c` coordinates vanish is a
/// combination of the rows with pivot column at least `c`. The result
/// depends only on the row span of `a`.
pub fn howell_form(ring: &RingSpec, a: &MatrixZn) -> HowellForm {
    let mut tr: Vec<Vec<u64>> = MatrixZn::identity(a.rows()).row_vecs();
    let (rows, pivots, _) = howell_core(ring, a.row_vecs(), a.cols(), Some(&mut tr));
    HowellForm {
        h: MatrixZn::from_vecs(a.cols(), rows),
        transform: MatrixZn::from_vecs(a.rows(), tr),
        pivots,
    }
}

/// Howell normal form with pivot columns, without tracking the transform.
pub fn howell_rows(ring: &RingSpec, a: &MatrixZn) -> (MatrixZn, Vec<usize>) {
    let (rows, pivots, _) = howell_core(ring, a.row_vecs(), a.cols(), None);
    (MatrixZn::from_vecs(a.cols(), rows), pivots)
}

/// Reduces `v` against a Howell form. Returns the canonical coset
/// representative of `v + rowspan(h)` and the coefficients used.
pub fn reduce_against(
    ring: &RingSpec,
    h: &MatrixZn,
    pivots: &[usize],
    v: &[u64],
) -> (Vec<u64>, Vec<u64>) {
    let mut v = v.to_vec();
    let mut coeffs = vec![0u64; h.rows()];
    for (j, &c) in pivots.iter().enumerate() {
        let p = h.get(j, c);
        let q = v[c] / p;
        if q != 0 {
            row_axpy(ring, &mut v, q, h.row(j));
            coeffs[j] = q;
        }
    }
    (v, coeffs)
}

/// Rows spanning the left kernel `{x : x · a = 0}`, in Howell form.
pub fn kernel_basis(ring: &RingSpec, a: &MatrixZn) -> MatrixZn {
    let aug = a.hstack(&MatrixZn::identity(a.rows()));
    let (h, pivots) = howell_rows(ring, &aug);
    let start = pivots.iter().position(|&c| c >= a.cols()).unwrap_or(pivots.len());
    h.select_rows(start..h.rows())
        .select_cols(a.cols()..a.cols() + a.rows())
}

/// Particular solution and kernel of `x · a = b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Solution {
    pub particular: Vec<u64>,
    /// Rows span all `y` with `y · a = 0`.
    pub kernel: MatrixZn,
}

/// Solves `x · a = b`. Returns `Ok(None)` when no solution exists.
///
/// The particular solution is the one read off the Howell form of
/// `[a | I]`, so it is deterministic for a given `(a, b)`.
pub fn solve_linear(ring: &RingSpec, a: &MatrixZn, b: &[u64]) -> Result<Option<Solution>> {
    if b.len() != a.cols() {
        return Err(Error::Dimension(format!(
            "right-hand side has length {}, matrix has {} columns",
            b.len(),
            a.cols()
        )));
    }
    let m = a.cols();
    let aug = a.hstack(&MatrixZn::identity(a.rows()));
    let (h, pivots) = howell_rows(ring, &aug);
    let split = pivots.iter().position(|&c| c >= m).unwrap_or(pivots.len());
    let mut v: Vec<u64> = b.iter().map(|&x| ring.reduce(x)).collect();
    v.resize(m + a.rows(), 0);
    let (rem, coeffs) = reduce_against(ring, &h.select_rows(0..split), &pivots[..split], &v);
    if rem[..m].iter().any(|&x| x != 0) {
        return Ok(None);
    }
    // rem[m..] = -(sum coeffs_j * y_j), so the particular solution is its negation
    let _ = coeffs;
    let particular: Vec<u64> = rem[m..].iter().map(|&x| ring.neg(x)).collect();
    let kernel = h
        .select_rows(split..h.rows())
        .select_cols(m..m + a.rows());
    Ok(Some(Solution { particular, kernel }))
}

/// Result of diagonalizing a relation matrix by row operations and tracked
/// column operations.
#[derive(Clone, Debug)]
pub struct ColumnDiagonalization {
    /// Ideal generator `gcd(D_ii, n)` for each of the `cols` coordinates
    /// (`n` for coordinates without a relation).
    pub diagonal: Vec<u64>,
    /// Column transform `V`: `rowspan(rel · V) = rowspan(diag)`.
    pub v: MatrixZn,
    /// `V^{-1}`.
    pub v_inv: MatrixZn,
}

/// Diagonalizes `rel` over Z/n (Smith-style, without the divisibility chain).
pub fn diagonalize(ring: &RingSpec, rel: &MatrixZn) -> ColumnDiagonalization {
    let r = rel.rows();
    let g = rel.cols();
    let mut m = rel.row_vecs();
    let mut v = MatrixZn::identity(g).row_vecs(); // stored row-major, columns are transformed
    let mut vinv = MatrixZn::identity(g).row_vecs();

    fn col_op(ring: &RingSpec, rows: &mut [Vec<u64>], k: usize, j: usize, mm: [[u64; 2]; 2]) {
        // (col_k, col_j) <- (mm00 col_k + mm01 col_j, mm10 col_k + mm11 col_j)
        let n = ring.modulus();
        for row in rows.iter_mut() {
            let (x, y) = (row[k], row[j]);
            row[k] = (mm[0][0] * x + mm[0][1] * y) % n;
            row[j] = (mm[1][0] * x + mm[1][1] * y) % n;
        }
    }

    let steps = r.min(g);
    let mut rank = 0;
    for k in 0..steps {
        // choose the pivot of smallest ideal generator, first in row-major order
        let mut best: Option<(u64, usize, usize)> = None;
        for (i, row) in m.iter().enumerate().skip(k) {
            for (j, &x) in row.iter().enumerate().skip(k) {
                if x != 0 {
                    let key = ring.ideal_generator(x);
                    if best.is_none_or(|(b, _, _)| key < b) {
                        best = Some((key, i, j));
                    }
                }
            }
        }
        let Some((_, pi, pj)) = best else { break };
        m.swap(k, pi);
        if pj != k {
            let swap = [[0, 1], [1, 0]];
            col_op(ring, &mut m, k, pj, swap);
            col_op(ring, &mut v, k, pj, swap);
            vinv.swap(k, pj);
        }
        loop {
            for i in k + 1..r {
                let b = m[i][k];
                if b == 0 {
                    continue;
                }
                let a = m[k][k];
                let (x, y) = two_rows(&mut m, k, i);
                if a != 0 && b % a == 0 {
                    row_axpy(ring, y, b / a, x);
                } else {
                    combine_rows(ring, x, y, gcd_transform(ring, a, b));
                }
            }
            for j in k + 1..g {
                let b = m[k][j];
                if b == 0 {
                    continue;
                }
                let a = m[k][k];
                if a != 0 && b % a == 0 {
                    // col_j -= q col_k ; V likewise ; V^{-1}: row_k += q row_j
                    let q = b / a;
                    let nq = ring.neg(q);
                    col_op(ring, &mut m, k, j, [[1, 0], [nq, 1]]);
                    col_op(ring, &mut v, k, j, [[1, 0], [nq, 1]]);
                    let rj = vinv[j].clone();
                    for (x, y) in vinv[k].iter_mut().zip(&rj) {
                        *x = (*x + q * y) % ring.modulus();
                    }
                } else {
                    let (gg, s, t) = xgcd(a as i64, b as i64);
                    let gg = gg as u64;
                    let s = ring.reduce_signed(s);
                    let t = ring.reduce_signed(t);
                    // new col_k = s col_k + t col_j ; new col_j = -(b/g) col_k + (a/g) col_j
                    let mm = [[s, t], [ring.neg(b / gg), ring.reduce(a / gg)]];
                    col_op(ring, &mut m, k, j, mm);
                    col_op(ring, &mut v, k, j, mm);
                    // inverse acts on rows k, j of V^{-1}
                    let inv = [[ring.reduce(a / gg), ring.reduce(b / gg)], [ring.neg(t), s]];
                    let (x, y) = two_rows(&mut vinv, k, j);
                    combine_rows(ring, x, y, inv);
                }
            }
            if (k + 1..r).all(|i| m[i][k] == 0) {
                break;
            }
        }
        rank = k + 1;
    }
    let n = ring.modulus();
    let diagonal = (0..g)
        .map(|k| if k < rank { gcd(m[k][k], n) } else { n })
        .collect();
    // `col_op` on `v` treated its rows as rows of V, i.e. it transformed columns.
    ColumnDiagonalization {
        diagonal,
        v: MatrixZn::from_vecs(g, v),
        v_inv: MatrixZn::from_vecs(g, vinv),
    }
}

/// Enumerates the row span of `a` (test and oracle helper; exponential).
pub fn enumerate_row_span(ring: &RingSpec, a: &MatrixZn) -> std::collections::BTreeSet<Vec<u64>> {
    let n = ring.modulus();
    let mut out = std::collections::BTreeSet::new();
    out.insert(vec![0u64; a.cols()]);
    for i in 0..a.rows() {
        let current: Vec<Vec<u64>> = out.iter().cloned().collect();
        for base in current {
            for c in 1..n {
                let v: Vec<u64> = base
                    .iter()
                    .zip(a.row(i))
                    .map(|(&x, &y)| (x + c * y) % n)
                    .collect();
                out.insert(v);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn z(n: u64) -> RingSpec {
        RingSpec::new(n).unwrap()
    }

    fn m(ring: &RingSpec, cols: usize, rows: &[&[i64]]) -> MatrixZn {
        MatrixZn::from_rows(ring, cols, &rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>())
            .unwrap()
    }

    fn span_of(ring: &RingSpec, a: &MatrixZn) -> std::collections::BTreeSet<Vec<u64>> {
        enumerate_row_span(ring, a)
    }

    #[test]
    fn howell_already_in_form() {
        let r = z(4);
        let a = m(&r, 2, &[&[2, 0], &[0, 2]]);
        assert_eq!(howell_form(&r, &a).h, a);
    }

    #[test]
    fn howell_of_zero_is_empty() {
        let r = z(4);
        let hf = howell_form(&r, &m(&r, 1, &[&[0]]));
        assert_eq!(hf.h.rows(), 0);
    }

    #[test]
    fn howell_2_2_over_z4() {
        let r = z(4);
        let a = m(&r, 2, &[&[2, 2]]);
        let hf = howell_form(&r, &a);
        assert_eq!(hf.h, a);
        let expected: std::collections::BTreeSet<Vec<u64>> =
            [vec![0, 0], vec![2, 2]].into_iter().collect();
        assert_eq!(span_of(&r, &a), expected);
        assert_eq!(span_of(&r, &hf.h), expected);
    }

    #[test]
    fn howell_property_needs_annihilator_rows() {
        // [[2, 1]] over Z/4: span contains (0, 2) which must appear as its own row
        let r = z(4);
        let a = m(&r, 2, &[&[2, 1]]);
        let hf = howell_form(&r, &a);
        assert_eq!(hf.h, m(&r, 2, &[&[2, 1], &[0, 2]]));
        assert_eq!(hf.transform.mul(&r, &a), hf.h);
    }

    #[test]
    fn solve_examples_over_z4() {
        let r = z(4);
        let s = solve_linear(&r, &m(&r, 1, &[&[2]]), &[2]).unwrap().unwrap();
        assert_eq!(s.particular, vec![1]);
        assert_eq!(span_of(&r, &s.kernel), [vec![0], vec![2]].into_iter().collect());
        let s = solve_linear(&r, &m(&r, 1, &[&[1]]), &[3]).unwrap().unwrap();
        assert_eq!(s.particular, vec![3]);
        assert_eq!(s.kernel.rows(), 0);
        assert!(solve_linear(&r, &m(&r, 1, &[&[2]]), &[1]).unwrap().is_none());
        assert!(solve_linear(&r, &m(&r, 1, &[&[2]]), &[1, 0]).is_err());
    }

    #[test]
    fn kernel_examples_over_z4() {
        let r = z(4);
        let k = kernel_basis(&r, &m(&r, 1, &[&[2]]));
        assert_eq!(span_of(&r, &k), [vec![0], vec![2]].into_iter().collect());
        assert_eq!(kernel_basis(&r, &MatrixZn::identity(2)).rows(), 0);
        let k = kernel_basis(&r, &m(&r, 1, &[&[0]]));
        assert_eq!(span_of(&r, &k).len(), 4);
    }

    fn arb_matrix(n: u64) -> impl Strategy<Value = MatrixZn> {
        (1usize..=3, 1usize..=3).prop_flat_map(move |(rows, cols)| {
            proptest::collection::vec(0..n, rows * cols).prop_map(move |data| MatrixZn {
                rows,
                cols,
                data,
            })
        })
    }

    fn all_vectors(n: u64, len: usize) -> Vec<Vec<u64>> {
        let mut out = vec![vec![]];
        for _ in 0..len {
            out = out
                .into_iter()
                .flat_map(|v| {
                    (0..n).map(move |c| {
                        let mut w = v.clone();
                        w.push(c);
                        w
                    })
                })
                .collect();
        }
        out
    }

    proptest! {
        #[test]
        fn howell_preserves_span_and_is_idempotent(n in prop::sample::select(vec![4u64, 6]), a in arb_matrix(12)) {
            let r = z(n);
            let a = MatrixZn { rows: a.rows, cols: a.cols, data: a.data.iter().map(|x| x % n).collect() };
            let hf = howell_form(&r, &a);
            prop_assert_eq!(span_of(&r, &a), span_of(&r, &hf.h));
            prop_assert_eq!(howell_form(&r, &hf.h).h, hf.h.clone());
            prop_assert_eq!(hf.transform.mul(&r, &a), hf.h);
        }

        #[test]
        fn howell_depends_only_on_span(a in arb_matrix(6), perm in any::<bool>()) {
            let r = z(6);
            // a different generating set of the same span: add row sums / reorder
            let mut rows = a.row_vecs();
            if perm { rows.reverse(); }
            let extra: Vec<u64> = rows.iter().fold(vec![0; a.cols()], |acc, row| {
                acc.iter().zip(row).map(|(x, y)| (x + y) % 6).collect()
            });
            rows.push(extra);
            let b = MatrixZn::from_vecs(a.cols(), rows);
            prop_assert_eq!(howell_form(&r, &a).h, howell_form(&r, &b).h);
        }

        #[test]
        fn solve_matches_enumeration(n in 2u64..=9, a_rows in 1usize..=3, a_cols in 1usize..=3, seed in any::<u64>()) {
            let r = z(n);
            let mut state = seed;
            let mut next = || { state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407); (state >> 33) % n };
            let a = MatrixZn { rows: a_rows, cols: a_cols, data: (0..a_rows * a_cols).map(|_| next()).collect() };
            let b: Vec<u64> = (0..a_cols).map(|_| next()).collect();
            let brute: std::collections::BTreeSet<Vec<u64>> = all_vectors(n, a_rows)
                .into_iter()
                .filter(|x| {
                    let xa = MatrixZn::from_vecs(a_rows, vec![x.clone()]).mul(&r, &a);
                    xa.row(0) == &b[..]
                })
                .collect();
            match solve_linear(&r, &a, &b).unwrap() {
                None => prop_assert!(brute.is_empty()),
                Some(sol) => {
                    let ker = span_of(&r, &sol.kernel);
                    let got: std::collections::BTreeSet<Vec<u64>> = ker
                        .iter()
                        .map(|k| k.iter().zip(&sol.particular).map(|(x, y)| (x + y) % n).collect())
                        .collect();
                    prop_assert_eq!(got, brute);
                }
            }
        }

        #[test]
        fn diagonalization_preserves_quotient(n in prop::sample::select(vec![4u64, 6, 8, 9, 12]), a in arb_matrix(12)) {
            let r = z(n);
            let a = MatrixZn { rows: a.rows, cols: a.cols, data: a.data.iter().map(|x| x % n).collect() };
            let d = diagonalize(&r, &a);
            prop_assert_eq!(d.v.mul(&r, &d.v_inv), MatrixZn::identity(a.cols()));
            let av = a.mul(&r, &d.v);
            let mut diag = MatrixZn::zeros(a.cols(), a.cols());
            for (i, &x) in d.diagonal.iter().enumerate() { diag.set(i, i, x % n); }
            prop_assert_eq!(span_of(&r, &av), span_of(&r, &diag));
        }
    }
}
