//! Degreewise matrices of linear changes of variables.
//!
//! A substitution `x_j -> sum_i s[j][i] y_i` (with `s` an `n x m` matrix)
//! induces for every degree `d` a linear map from degree-`d` forms in the
//! `x` to degree-`d` forms in the `y`. Columns are stored sparsely.

use crate::field::{Fe, Field};
use crate::linalg::Matrix;
use crate::poly::monomial::degree_basis;

/// Sparse column-major matrix between two graded pieces.
#[derive(Clone, Debug)]
pub struct SparseMap {
    pub rows: usize,
    pub columns: Vec<Vec<(u32, Fe)>>,
}

impl SparseMap {
    pub fn identity(n: usize) -> SparseMap {
        SparseMap { rows: n, columns: (0..n).map(|i| vec![(i as u32, Fe::ONE)]).collect() }
    }

    pub fn cols(&self) -> usize {
        self.columns.len()
    }

    pub fn nnz(&self) -> usize {
        self.columns.iter().map(Vec::len).sum()
    }

    /// `out += c * M v`.
    pub fn apply_add(&self, field: &Field, v: &[Fe], c: Fe, out: &mut [Fe]) {
        for (col, &x) in self.columns.iter().zip(v) {
            if x.is_zero() {
                continue;
            }
            let s = field.mul(c, x);
            for &(r, a) in col {
                let slot = &mut out[r as usize];
                *slot = field.add(*slot, field.mul(s, a));
            }
        }
    }

    pub fn apply(&self, field: &Field, v: &[Fe]) -> Vec<Fe> {
        let mut out = vec![Fe::ZERO; self.rows];
        self.apply_add(field, v, Fe::ONE, &mut out);
        out
    }

    pub fn column_dense(&self, j: usize) -> Vec<Fe> {
        let mut out = vec![Fe::ZERO; self.rows];
        for &(r, a) in &self.columns[j] {
            out[r as usize] = a;
        }
        out
    }
}

/// Streams the degreewise maps of one substitution, degree 0 upward.
pub struct SubstitutionPowers {
    field: Field,
    src_vars: usize,
    dst_vars: usize,
    /// image of x_j as sparse linear form in the y
    images: Vec<Vec<(u32, Fe)>>,
    degree: u32,
    current: SparseMap,
}

impl SubstitutionPowers {
    /// `s` is `n x m`: row `j` holds the image of `x_j`.
    pub fn new(s: &Matrix) -> SubstitutionPowers {
        let images = (0..s.rows())
            .map(|j| {
                s.row(j)
                    .iter()
                    .enumerate()
                    .filter(|(_, a)| !a.is_zero())
                    .map(|(i, &a)| (i as u32, a))
                    .collect()
            })
            .collect();
        SubstitutionPowers {
            field: s.field().clone(),
            src_vars: s.rows(),
            dst_vars: s.cols(),
            images,
            degree: 0,
            current: SparseMap { rows: 1, columns: vec![vec![(0, Fe::ONE)]] },
        }
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn current(&self) -> &SparseMap {
        &self.current
    }

    pub fn advance(&mut self) -> &SparseMap {
        let d = self.degree + 1;
        let src = degree_basis(self.src_vars, d);
        let dst = degree_basis(self.dst_vars, d);
        let dst_prev = degree_basis(self.dst_vars, d - 1);
        let up = dst_prev.up();
        let m = self.dst_vars;
        let mut scratch = vec![Fe::ZERO; dst.len()];
        let mut touched: Vec<u32> = Vec::new();
        let mut columns = Vec::with_capacity(src.len());
        for i in 0..src.len() {
            let (j, prev) = src.down(i);
            for &(r, a) in &self.current.columns[prev] {
                for &(v, b) in &self.images[j] {
                    let t = up[r as usize * m + v as usize];
                    let slot = &mut scratch[t as usize];
                    if slot.is_zero() {
                        touched.push(t);
                    }
                    *slot = self.field.add(*slot, self.field.mul(a, b));
                }
            }
            touched.sort_unstable();
            touched.dedup();
            let mut col = Vec::with_capacity(touched.len());
            for &t in &touched {
                let val = std::mem::take(&mut scratch[t as usize]);
                if !val.is_zero() {
                    col.push((t, val));
                }
            }
            touched.clear();
            columns.push(col);
        }
        self.current = SparseMap { rows: dst.len(), columns };
        self.degree = d;
        &self.current
    }

    /// Advances until the current degree is `d` (restarting if needed).
    pub fn seek(&mut self, d: u32) -> &SparseMap {
        if d < self.degree {
            self.degree = 0;
            self.current = SparseMap { rows: 1, columns: vec![vec![(0, Fe::ONE)]] };
        }
        while self.degree < d {
            self.advance();
        }
        &self.current
    }
}

/// The degree-`d` map of the substitution `s`.
pub fn degree_map(s: &Matrix, d: u32) -> SparseMap {
    let mut p = SubstitutionPowers::new(s);
    p.seek(d).clone()
}
