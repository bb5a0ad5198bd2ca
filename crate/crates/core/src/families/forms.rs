use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg::Matrix;
use crate::poly::Polynomial;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FormKind {
    Hermitian,
    Alternating,
    SymmetricBilinear,
    Quadratic,
}

/// A sesquilinear, bilinear or quadratic form given by its Gram matrix
/// (and, for quadratic forms, the polynomial itself).
#[derive(Clone, Debug)]
pub struct FormSpec {
    pub kind: FormKind,
    pub gram: Matrix,
    pub quadratic: Option<Polynomial>,
}

fn conj_matrix(m: &Matrix) -> Result<Matrix> {
    let f = m.field();
    let rows: Result<Vec<Vec<_>>> = m.to_rows().into_iter().map(|r| r.into_iter().map(|a| f.conj(a)).collect()).collect();
    Matrix::from_rows(f, &rows?)
}

impl FormSpec {
    pub fn hermitian(gram: Matrix) -> Result<FormSpec> {
        if conj_matrix(&gram)?.transpose() != gram {
            return Err(Error::InvalidParameters("Gram matrix is not hermitian".into()));
        }
        Ok(FormSpec { kind: FormKind::Hermitian, gram, quadratic: None })
    }

    pub fn alternating(gram: Matrix) -> Result<FormSpec> {
        let f = gram.field().clone();
        let diag_zero = (0..gram.rows()).all(|i| gram[(i, i)].is_zero());
        if !diag_zero || gram.transpose() != gram.map(|a| f.neg(a)) {
            return Err(Error::InvalidParameters("Gram matrix is not alternating".into()));
        }
        Ok(FormSpec { kind: FormKind::Alternating, gram, quadratic: None })
    }

    pub fn symmetric(gram: Matrix) -> Result<FormSpec> {
        if gram.transpose() != gram {
            return Err(Error::InvalidParameters("Gram matrix is not symmetric".into()));
        }
        Ok(FormSpec { kind: FormKind::SymmetricBilinear, gram, quadratic: None })
    }

    /// Quadratic form `q`; the Gram matrix is its polarization.
    pub fn quadratic(q: Polynomial) -> Result<FormSpec> {
        if !(q.is_homogeneous() && q.degree().map_or(true, |d| d == 2)) {
            return Err(Error::InvalidParameters("not a quadratic form".into()));
        }
        let f = q.field().clone();
        let n = q.nvars();
        let mut gram = Matrix::zeros(&f, n, n);
        for (m, &c) in q.terms() {
            let idx: Vec<usize> = (0..n).filter(|&i| m.0[i] > 0).collect();
            if idx.len() == 1 {
                let i = idx[0];
                gram[(i, i)] = f.add(c, c);
            } else {
                gram[(idx[0], idx[1])] = c;
                gram[(idx[1], idx[0])] = c;
            }
        }
        Ok(FormSpec { kind: FormKind::Quadratic, gram, quadratic: Some(q) })
    }

    pub fn field(&self) -> &Field {
        self.gram.field()
    }

    pub fn dim(&self) -> usize {
        self.gram.rows()
    }
}

/// Whether `g` preserves the form.
pub fn form_membership(g: &Matrix, form: &FormSpec) -> Result<bool> {
    if g.rows() != form.dim() || g.cols() != form.dim() {
        return Err(Error::Shape(format!("{}x{} matrix against a form in dimension {}", g.rows(), g.cols(), form.dim())));
    }
    let j = &form.gram;
    Ok(match form.kind {
        FormKind::Hermitian => g.transpose().mul(j)?.mul(&conj_matrix(g)?)? == *j,
        FormKind::Alternating | FormKind::SymmetricBilinear => g.transpose().mul(j)?.mul(g)? == *j,
        FormKind::Quadratic => {
            let q = form.quadratic.as_ref().unwrap();
            q.substitute(g)? == *q
        }
    })
}

/// The `2m x 2m` Gram matrix `[[0, I], [s I, 0]]`.
pub fn split_gram(field: &Field, m: usize, sign: i64) -> Matrix {
    let s = field.from_int(sign);
    Matrix::from_fn(field, 2 * m, 2 * m, |i, j| {
        if i < m && j == i + m {
            crate::field::Fe::ONE
        } else if i >= m && j + m == i {
            s
        } else {
            crate::field::Fe::ZERO
        }
    })
}

/// The anti-diagonal matrix with ones.
pub fn antidiagonal(field: &Field, n: usize) -> Matrix {
    Matrix::from_fn(field, n, n, |i, j| if i + j + 1 == n { crate::field::Fe::ONE } else { crate::field::Fe::ZERO })
}
