//! Exact dense linear algebra over a [`Field`].

use std::fmt;

use crate::error::{Error, Result};
use crate::field::{Fe, Field};

/// Dense row-major matrix over a finite field.
#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<Fe>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Matrix{}x{}[", self.rows, self.cols)?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            let row: Vec<String> = self.row(i).iter().map(|&a| self.field.format(a)).collect();
            write!(f, "{}", row.join(" "))?;
        }
        write!(f, "]")
    }
}

impl Matrix {
    pub fn zeros(field: &Field, rows: usize, cols: usize) -> Matrix {
        Matrix { field: field.clone(), rows, cols, data: vec![Fe::ZERO; rows * cols] }
    }

    pub fn identity(field: &Field, n: usize) -> Matrix {
        let mut m = Matrix::zeros(field, n, n);
        for i in 0..n {
            m[(i, i)] = Fe::ONE;
        }
        m
    }

    pub fn from_rows(field: &Field, rows: &[Vec<Fe>]) -> Result<Matrix> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::Shape("ragged rows".into()));
        }
        Ok(Matrix {
            field: field.clone(),
            rows: rows.len(),
            cols,
            data: rows.iter().flatten().copied().collect(),
        })
    }

    /// Builds a matrix from small integers read in the prime subfield.
    pub fn from_ints(field: &Field, rows: &[&[i64]]) -> Result<Matrix> {
        let rows: Vec<Vec<Fe>> =
            rows.iter().map(|r| r.iter().map(|&x| field.from_int(x)).collect()).collect();
        Matrix::from_rows(field, &rows)
    }

    pub fn from_fn(field: &Field, rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Fe) -> Matrix {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { field: field.clone(), rows, cols, data }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[Fe] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[Fe] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Fe> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<Fe>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(&self.field, self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn map(&self, f: impl Fn(Fe) -> Fe) -> Matrix {
        Matrix { field: self.field.clone(), rows: self.rows, cols: self.cols, data: self.data.iter().map(|&a| f(a)).collect() }
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| (0..self.cols).all(|j| self[(i, j)] == if i == j { Fe::ONE } else { Fe::ZERO }))
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|a| a.is_zero())
    }

    fn check_same_shape(&self, other: &Matrix) -> Result<()> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::Shape(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Matrix) -> Result<Matrix> {
        self.check_same_shape(other)?;
        let f = &self.field;
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| f.add(a, b)).collect();
        Ok(Matrix { field: f.clone(), rows: self.rows, cols: self.cols, data })
    }

    pub fn sub(&self, other: &Matrix) -> Result<Matrix> {
        self.check_same_shape(other)?;
        let f = &self.field;
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| f.sub(a, b)).collect();
        Ok(Matrix { field: f.clone(), rows: self.rows, cols: self.cols, data })
    }

    pub fn scale(&self, c: Fe) -> Matrix {
        self.map(|a| self.field.mul(c, a))
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.rows {
            return Err(Error::Shape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Matrix::zeros(&self.field, self.rows, other.cols);
        for i in 0..self.rows {
            let dst = &mut out.data[i * other.cols..(i + 1) * other.cols];
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                self.field.axpy(dst, a, other.row(k));
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[Fe]) -> Result<Vec<Fe>> {
        if v.len() != self.cols {
            return Err(Error::Shape(format!("vector of length {} for {} columns", v.len(), self.cols)));
        }
        let f = &self.field;
        Ok((0..self.rows)
            .map(|i| self.row(i).iter().zip(v).fold(Fe::ZERO, |acc, (&a, &b)| f.add(acc, f.mul(a, b))))
            .collect())
    }

    pub fn pow(&self, mut e: u64) -> Result<Matrix> {
        if !self.is_square() {
            return Err(Error::Shape("power of non-square matrix".into()));
        }
        let mut base = self.clone();
        let mut acc = Matrix::identity(&self.field, self.rows);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base)?;
            }
            base = base.mul(&base)?;
            e >>= 1;
        }
        Ok(acc)
    }

    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let mut rows = self.to_rows();
        let pivots = rref_in_place(&self.field, &mut rows, self.cols);
        let m = Matrix { field: self.field.clone(), rows: self.rows, cols: self.cols, data: rows.into_iter().flatten().collect() };
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the right kernel `{x : M x = 0}`.
    pub fn kernel(&self) -> Vec<Vec<Fe>> {
        let (r, pivots) = self.rref();
        kernel_from_rref(&self.field, &r, &pivots)
    }

    pub fn determinant(&self) -> Result<Fe> {
        if !self.is_square() {
            return Err(Error::Shape("determinant of non-square matrix".into()));
        }
        let f = &self.field;
        let n = self.rows;
        let mut m = self.to_rows();
        let mut det = Fe::ONE;
        for c in 0..n {
            let Some(p) = (c..n).find(|&r| !m[r][c].is_zero()) else {
                return Ok(Fe::ZERO);
            };
            if p != c {
                m.swap(p, c);
                det = f.neg(det);
            }
            let pivot = m[c][c];
            det = f.mul(det, pivot);
            let inv = f.inv(pivot).unwrap();
            for r in c + 1..n {
                let factor = f.neg(f.mul(m[r][c], inv));
                let (top, bottom) = m.split_at_mut(r);
                f.axpy(&mut bottom[0], factor, &top[c]);
            }
        }
        Ok(det)
    }

    pub fn inverse(&self) -> Result<Matrix> {
        if !self.is_square() {
            return Err(Error::Shape("inverse of non-square matrix".into()));
        }
        let n = self.rows;
        let mut rows: Vec<Vec<Fe>> = (0..n)
            .map(|i| {
                let mut r = self.row(i).to_vec();
                r.extend((0..n).map(|j| if i == j { Fe::ONE } else { Fe::ZERO }));
                r
            })
            .collect();
        let pivots = rref_in_place(&self.field, &mut rows, n);
        if pivots.len() < n || pivots.iter().enumerate().any(|(i, &p)| p != i) {
            return Err(Error::Singular);
        }
        let data = rows.iter().flat_map(|r| r[n..].iter().copied()).collect();
        Ok(Matrix { field: self.field.clone(), rows: n, cols: n, data })
    }

    /// Solves `M X = rhs`: one particular solution plus a basis of the kernel
    /// of `M`, or `None` when the system is inconsistent.
    pub fn solve(&self, rhs: &Matrix) -> Result<Option<Solution>> {
        if rhs.rows != self.rows {
            return Err(Error::Shape(format!("rhs has {} rows, matrix has {}", rhs.rows, self.rows)));
        }
        let n = self.cols;
        let mut rows: Vec<Vec<Fe>> = (0..self.rows)
            .map(|i| {
                let mut r = self.row(i).to_vec();
                r.extend_from_slice(rhs.row(i));
                r
            })
            .collect();
        let pivots = rref_in_place(&self.field, &mut rows, n);
        for row in rows.iter().skip(pivots.len()) {
            if row[n..].iter().any(|a| !a.is_zero()) {
                return Ok(None);
            }
        }
        let mut x = Matrix::zeros(&self.field, n, rhs.cols);
        for (i, &p) in pivots.iter().enumerate() {
            for j in 0..rhs.cols {
                x[(p, j)] = rows[i][n + j];
            }
        }
        let coeff_rows: Vec<Vec<Fe>> = rows.iter().map(|r| r[..n].to_vec()).collect();
        let r = Matrix::from_rows(&self.field, &coeff_rows)?;
        let r = if r.rows == 0 { Matrix::zeros(&self.field, 0, n) } else { r };
        let kernel = kernel_from_rref(&self.field, &r, &pivots);
        Ok(Some(Solution { particular: x, kernel }))
    }
}

impl std::ops::Index<(usize, usize)> for Matrix {
    type Output = Fe;
    fn index(&self, (i, j): (usize, usize)) -> &Fe {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Fe {
        &mut self.data[i * self.cols + j]
    }
}

/// Fixed space `ker(g - I)` of a square matrix.
pub fn fixed_space(g: &Matrix) -> Result<Subspace> {
    if !g.is_square() {
        return Err(Error::Shape(format!("fixed space of {}x{} matrix", g.rows(), g.cols())));
    }
    let k = g.sub(&Matrix::identity(g.field(), g.rows()))?.kernel();
    Ok(Subspace::from_vectors(g.field(), g.rows(), k))
}

/// Output of [`Matrix::solve`].
#[derive(Clone, Debug)]
pub struct Solution {
    pub particular: Matrix,
    pub kernel: Vec<Vec<Fe>>,
}

/// In-place RREF on the first `ncols` columns; returns pivot columns.
/// Rows are permuted so that pivot rows come first.
pub fn rref_in_place(field: &Field, rows: &mut [Vec<Fe>], ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = field.inv(rows[r][c]).unwrap();
        for a in rows[r].iter_mut() {
            *a = field.mul(*a, inv);
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let factor = field.neg(row[c]);
                field.axpy(row, factor, &pivot_row);
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

fn kernel_from_rref(field: &Field, r: &Matrix, pivots: &[usize]) -> Vec<Vec<Fe>> {
    let n = r.cols();
    let mut is_pivot = vec![false; n];
    for &p in pivots {
        is_pivot[p] = true;
    }
    (0..n)
        .filter(|&j| !is_pivot[j])
        .map(|free| {
            let mut v = vec![Fe::ZERO; n];
            v[free] = Fe::ONE;
            for (i, &p) in pivots.iter().enumerate() {
                v[p] = field.neg(r[(i, free)]);
            }
            v
        })
        .collect()
}

/// Incrementally built row-echelon basis.
///
/// Each stored row has a leading one at its pivot and zeros at the pivots
/// of all rows inserted before it; reduction in insertion order is exact.
#[derive(Clone, Debug)]
pub struct EchelonBasis {
    field: Field,
    ambient: usize,
    rows: Vec<Vec<Fe>>,
    pivots: Vec<usize>,
}

impl EchelonBasis {
    pub fn new(field: &Field, ambient: usize) -> Self {
        EchelonBasis { field: field.clone(), ambient, rows: Vec::new(), pivots: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn is_full(&self) -> bool {
        self.rows.len() == self.ambient
    }

    pub fn reduce(&self, v: &mut [Fe]) {
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            let c = v[p];
            if !c.is_zero() {
                self.field.axpy(v, self.field.neg(c), row);
            }
        }
    }

    /// Inserts `v`; returns whether it was independent of the current rows.
    pub fn insert(&mut self, mut v: Vec<Fe>) -> bool {
        debug_assert_eq!(v.len(), self.ambient);
        self.reduce(&mut v);
        let Some(p) = v.iter().position(|a| !a.is_zero()) else {
            return false;
        };
        let inv = self.field.inv(v[p]).unwrap();
        for a in v.iter_mut() {
            *a = self.field.mul(*a, inv);
        }
        self.rows.push(v);
        self.pivots.push(p);
        true
    }

    pub fn contains(&self, v: &[Fe]) -> bool {
        let mut w = v.to_vec();
        self.reduce(&mut w);
        w.iter().all(|a| a.is_zero())
    }

    pub fn into_subspace(self) -> Subspace {
        Subspace::from_vectors(&self.field, self.ambient, self.rows)
    }
}

/// A linear subspace of `k^n` stored by its canonical reduced echelon basis.
#[derive(Clone, PartialEq, Eq)]
pub struct Subspace {
    field: Field,
    ambient: usize,
    basis: Vec<Vec<Fe>>,
    pivots: Vec<usize>,
}

impl fmt::Debug for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Subspace(dim {} in {}; ", self.dim(), self.ambient)?;
        for v in &self.basis {
            let s: Vec<String> = v.iter().map(|&a| self.field.format(a)).collect();
            write!(f, "[{}]", s.join(" "))?;
        }
        write!(f, ")")
    }
}

impl Subspace {
    pub fn zero(field: &Field, ambient: usize) -> Subspace {
        Subspace { field: field.clone(), ambient, basis: Vec::new(), pivots: Vec::new() }
    }

    pub fn full(field: &Field, ambient: usize) -> Subspace {
        let basis = (0..ambient)
            .map(|i| (0..ambient).map(|j| if i == j { Fe::ONE } else { Fe::ZERO }).collect())
            .collect();
        Subspace { field: field.clone(), ambient, basis, pivots: (0..ambient).collect() }
    }

    /// Span of the given vectors, canonicalized.
    pub fn from_vectors(field: &Field, ambient: usize, mut vectors: Vec<Vec<Fe>>) -> Subspace {
        let pivots = rref_in_place(field, &mut vectors, ambient);
        vectors.truncate(pivots.len());
        Subspace { field: field.clone(), ambient, basis: vectors, pivots }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn codim(&self) -> usize {
        self.ambient - self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<Fe>] {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn contains(&self, v: &[Fe]) -> bool {
        let mut w = v.to_vec();
        for (row, &p) in self.basis.iter().zip(&self.pivots) {
            let c = w[p];
            if !c.is_zero() {
                self.field.axpy(&mut w, self.field.neg(c), row);
            }
        }
        w.iter().all(|a| a.is_zero())
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> bool {
        self.basis.iter().all(|v| other.contains(v))
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        let vs = self.basis.iter().chain(&other.basis).cloned().collect();
        Subspace::from_vectors(&self.field, self.ambient, vs)
    }

    pub fn intersection(&self, other: &Subspace) -> Subspace {
        // x in both iff x = sum a_i u_i = sum b_j w_j: kernel of [U^T | -W^T]
        let (a, b) = (self.dim(), other.dim());
        if a == 0 || b == 0 {
            return Subspace::zero(&self.field, self.ambient);
        }
        let f = &self.field;
        let m = Matrix::from_fn(f, self.ambient, a + b, |i, j| {
            if j < a {
                self.basis[j][i]
            } else {
                f.neg(other.basis[j - a][i])
            }
        });
        let vecs = m
            .kernel()
            .into_iter()
            .map(|coeffs| {
                let mut v = vec![Fe::ZERO; self.ambient];
                for (c, u) in coeffs[..a].iter().zip(&self.basis) {
                    f.axpy(&mut v, *c, u);
                }
                v
            })
            .collect();
        Subspace::from_vectors(f, self.ambient, vecs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf(p: u32, r: u32) -> Field {
        Field::new(p, r).unwrap()
    }

    #[test]
    fn identity_solves_to_rhs() {
        let f = gf(3, 1);
        let i = Matrix::identity(&f, 3);
        let rhs = Matrix::from_ints(&f, &[&[1], &[2], &[0]]).unwrap();
        let sol = i.solve(&rhs).unwrap().unwrap();
        assert_eq!(sol.particular, rhs);
        assert!(sol.kernel.is_empty());
    }

    #[test]
    fn zero_matrix_inconsistent() {
        let f = gf(2, 1);
        let z = Matrix::zeros(&f, 2, 2);
        let rhs = Matrix::from_ints(&f, &[&[1], &[0]]).unwrap();
        assert!(z.solve(&rhs).unwrap().is_none());
        assert!(z.solve(&Matrix::zeros(&f, 3, 1)).is_err());
    }

    #[test]
    fn inverse_and_determinant() {
        let f = gf(7, 1);
        let m = Matrix::from_ints(&f, &[&[1, 2], &[3, 4]]).unwrap();
        let inv = m.inverse().unwrap();
        assert!(m.mul(&inv).unwrap().is_identity());
        assert_eq!(m.determinant().unwrap(), f.from_int(-2));
        let s = Matrix::from_ints(&f, &[&[1, 2], &[2, 4]]).unwrap();
        assert_eq!(s.inverse(), Err(Error::Singular));
    }

    #[test]
    fn fixed_space_of_unipotent_block() {
        let f = gf(5, 1);
        let g = Matrix::from_ints(&f, &[&[1, 0], &[1, 1]]).unwrap();
        let k = g.sub(&Matrix::identity(&f, 2)).unwrap().kernel();
        assert_eq!(k.len(), 1);
    }

    #[test]
    fn subspace_intersection() {
        let f = gf(2, 1);
        let e = |v: &[i64]| v.iter().map(|&x| f.from_int(x)).collect::<Vec<_>>();
        let a = Subspace::from_vectors(&f, 3, vec![e(&[1, 0, 0]), e(&[0, 1, 0])]);
        let b = Subspace::from_vectors(&f, 3, vec![e(&[0, 1, 0]), e(&[0, 0, 1])]);
        let c = a.intersection(&b);
        assert_eq!(c, Subspace::from_vectors(&f, 3, vec![e(&[0, 1, 0])]));
        assert_eq!(a.sum(&b), Subspace::full(&f, 3));
    }

    #[test]
    fn echelon_basis_membership() {
        let f = gf(3, 2);
        let mut eb = EchelonBasis::new(&f, 3);
        let g = f.primitive();
        assert!(eb.insert(vec![Fe::ONE, g, Fe::ZERO]));
        assert!(eb.insert(vec![Fe::ZERO, Fe::ONE, g]));
        let combo: Vec<Fe> = vec![g, f.add(f.mul(g, g), g), f.mul(g, g)];
        assert!(eb.contains(&combo));
        assert!(!eb.insert(combo));
        assert_eq!(eb.rank(), 2);
    }
}
