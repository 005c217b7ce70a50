//! Dense linear algebra over F_q: characteristic polynomials and
//! incremental linear-dependence detection.

use crate::field::{FqElem, FqField};

/// Characteristic polynomial det(X*I - M) of a square matrix, ascending
/// coefficients (monic, length n + 1). Hessenberg reduction followed by the
/// standard three-term recurrence.
pub fn charpoly(mat: &[Vec<FqElem>], fq: &FqField) -> Vec<FqElem> {
    let n = mat.len();
    let mut h: Vec<Vec<FqElem>> = mat.to_vec();
    for m in 1..n.saturating_sub(1) {
        let Some(piv) = (m..n).find(|&i| !h[i][m - 1].is_zero()) else {
            continue;
        };
        if piv != m {
            h.swap(piv, m);
            for row in h.iter_mut() {
                row.swap(piv, m);
            }
        }
        let t = fq.inv(h[m][m - 1]);
        for i in (m + 1)..n {
            let u = fq.mul(h[i][m - 1], t);
            if u.is_zero() {
                continue;
            }
            for j in 0..n {
                let sub = fq.mul(u, h[m][j]);
                h[i][j] = fq.sub(h[i][j], sub);
            }
            for row in h.iter_mut() {
                let add = fq.mul(u, row[i]);
                row[m] = fq.add(row[m], add);
            }
        }
    }

    // p[k] is the characteristic polynomial of the leading k x k block.
    let mut polys: Vec<Vec<FqElem>> = vec![vec![FqElem::ONE]];
    for m in 0..n {
        let prev = &polys[m];
        let mut next = vec![FqElem::ZERO; m + 2];
        for (k, &c) in prev.iter().enumerate() {
            next[k + 1] = fq.add(next[k + 1], c);
            next[k] = fq.sub(next[k], fq.mul(h[m][m], c));
        }
        let mut t = FqElem::ONE;
        for i in (0..m).rev() {
            t = fq.mul(t, h[i + 1][i]);
            let coef = fq.mul(h[i][m], t);
            if coef.is_zero() {
                continue;
            }
            for (k, &c) in polys[i].iter().enumerate() {
                next[k] = fq.sub(next[k], fq.mul(coef, c));
            }
        }
        polys.push(next);
    }
    polys.pop().unwrap()
}

struct Row {
    vec: Vec<FqElem>,
    pivot: usize,
    combo: Vec<FqElem>,
}

/// Feeds vectors v_0, v_1, ... one at a time and reports the first linear
/// dependency `sum c_i v_i = 0` with `c_n = 1` on the newest vector.
///
/// Rows are kept reduced so each stored row vanishes at every other row's
/// pivot.
pub struct DependencyFinder<'a> {
    fq: &'a FqField,
    dim: usize,
    rows: Vec<Row>,
    pushed: usize,
}

impl<'a> DependencyFinder<'a> {
    pub fn new(dim: usize, fq: &'a FqField) -> Self {
        DependencyFinder { fq, dim, rows: Vec::new(), pushed: 0 }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Vector of length at most `dim` (shorter ones are zero-padded).
    pub fn push(&mut self, v: &[FqElem]) -> Option<Vec<FqElem>> {
        let fq = self.fq;
        assert!(v.len() <= self.dim, "vector longer than the ambient dimension");
        let mut vec = v.to_vec();
        vec.resize(self.dim, FqElem::ZERO);
        let n = self.pushed;
        self.pushed += 1;
        let mut combo = vec![FqElem::ZERO; n + 1];
        combo[n] = FqElem::ONE;

        for row in &self.rows {
            let c = vec[row.pivot];
            if c.is_zero() {
                continue;
            }
            for (x, &r) in vec.iter_mut().zip(&row.vec) {
                *x = fq.sub(*x, fq.mul(c, r));
            }
            for (x, &r) in combo.iter_mut().zip(&row.combo) {
                *x = fq.sub(*x, fq.mul(c, r));
            }
        }

        let Some(pivot) = vec.iter().position(|x| !x.is_zero()) else {
            return Some(combo);
        };
        let inv = fq.inv(vec[pivot]);
        vec.iter_mut().for_each(|x| *x = fq.mul(*x, inv));
        combo.iter_mut().for_each(|x| *x = fq.mul(*x, inv));
        for row in self.rows.iter_mut() {
            let c = row.vec[pivot];
            if c.is_zero() {
                continue;
            }
            for (x, &r) in row.vec.iter_mut().zip(&vec) {
                *x = fq.sub(*x, fq.mul(c, r));
            }
            row.combo.resize(n + 1, FqElem::ZERO);
            for (x, &r) in row.combo.iter_mut().zip(&combo) {
                *x = fq.sub(*x, fq.mul(c, r));
            }
        }
        self.rows.push(Row { vec, pivot, combo });
        None
    }
}
