//! Small groups with well-known invariant rings.

use crate::error::{Error, Result};
use crate::field::{Fe, Field};
use crate::group::MatrixGroup;
use crate::linalg::Matrix;

fn field(q: u32) -> Result<Field> {
    Field::of_order(q).map_err(|e| Error::InvalidParameters(e.to_string()))
}

fn permutation(f: &Field, perm: &[usize]) -> Matrix {
    Matrix::from_fn(f, perm.len(), perm.len(), |i, j| if perm[j] == i { Fe::ONE } else { Fe::ZERO })
}

/// `S_3` as permutation matrices in `GL_3(F_q)`.
pub fn s3_permutation(q: u32) -> Result<MatrixGroup> {
    let f = field(q)?;
    MatrixGroup::generate(&f, 3, vec![permutation(&f, &[1, 0, 2]), permutation(&f, &[1, 2, 0])])
}

/// `<diag(lambda, 1)>` with `lambda` of order `m | q - 1`.
pub fn diagonal_reflection_group(q: u32, m: u32) -> Result<MatrixGroup> {
    let f = field(q)?;
    if m == 0 || (q - 1) % m != 0 {
        return Err(Error::InvalidParameters(format!("m = {m} does not divide q - 1 = {}", q - 1)));
    }
    let lambda = f.gen_pow(((q - 1) / m) as i64);
    let mut g = Matrix::identity(&f, 2);
    g[(0, 0)] = lambda;
    MatrixGroup::generate(&f, 2, vec![g])
}

/// `{ [[1, 0], [b, 1]] : b in F_q }`: transvections with one common hyperplane.
pub fn transvection_root_group(q: u32) -> Result<MatrixGroup> {
    let f = field(q)?;
    let gens = (0..f.degree() as i64)
        .map(|k| {
            let mut g = Matrix::identity(&f, 2);
            g[(1, 0)] = f.gen_pow(k);
            g
        })
        .collect();
    MatrixGroup::generate(&f, 2, gens)
}

pub fn trivial_group(q: u32, n: usize) -> Result<MatrixGroup> {
    Ok(MatrixGroup::trivial(&field(q)?, n))
}

/// The sanity corpus: `S_3` over `F_7`, a tame diagonal reflection group,
/// a cyclic transvection group and a trivial group.
pub fn sanity_groups() -> Vec<(String, MatrixGroup)> {
    vec![
        ("s3:q=7".to_string(), s3_permutation(7).unwrap()),
        ("diag:q=7:m=3".to_string(), diagonal_reflection_group(7, 3).unwrap()),
        ("transvection:q=3".to_string(), transvection_root_group(3).unwrap()),
        ("trivial:q=2:n=2".to_string(), trivial_group(2, 2).unwrap()),
    ]
}
