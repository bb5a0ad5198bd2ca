//! The symmetric group `S_m` on `V = <e_i - e_j> / <e_1 + .. + e_m>` over `F_p`, `p | m`.
//!
//! Coordinates are taken in the images `f_i` of `e_i - e_{i+1}`, `i = 1..m-2`.

use crate::error::{Error, Result};
use crate::field::{Fe, Field};
use crate::group::MatrixGroup;
use crate::linalg::{Matrix, Subspace};

#[derive(Clone, Debug)]
pub struct SymmetricFamily {
    pub p: u32,
    pub m: usize,
    pub field: Field,
    /// `S_m` acting on `V`.
    pub group: MatrixGroup,
    /// `S_p x .. x S_p` on consecutive blocks.
    pub h: MatrixGroup,
    /// Product of the block `p`-cycles.
    pub sigma: Matrix,
    /// Image of `<v_1, .., v_{m'}>`.
    pub u1: Subspace,
    /// `U_1 + <w>` with `w = sum i e_i`, when `w` lies in the submodule.
    pub u: Option<Subspace>,
}

impl SymmetricFamily {
    pub fn dim(&self) -> usize {
        self.m - 2
    }

    pub fn blocks(&self) -> usize {
        self.m / self.p as usize
    }
}

/// Coordinates in `V` of `sum a_i e_i` (with `sum a_i = 0` in `F_p`).
pub fn quotient_coordinates(field: &Field, a: &[i64]) -> Result<Vec<Fe>> {
    let m = a.len();
    let p = field.characteristic() as i64;
    if a.iter().sum::<i64>().rem_euclid(p) != 0 {
        return Err(Error::InvalidParameters("vector is not in the sum-zero submodule".into()));
    }
    let mut partial = Vec::with_capacity(m - 1);
    let mut acc = 0i64;
    for &x in &a[..m - 1] {
        acc += x;
        partial.push(acc);
    }
    let last = partial[m - 2];
    Ok((0..m - 2).map(|i| field.from_int(partial[i] + (i as i64 + 1) * last)).collect())
}

/// Matrix on `V` of the permutation `i -> perm[i]` (0-based) of the `e_i`.
pub fn permutation_on_quotient(field: &Field, perm: &[usize]) -> Result<Matrix> {
    let m = perm.len();
    let mut cols = Vec::with_capacity(m - 2);
    for i in 0..m - 2 {
        let mut a = vec![0i64; m];
        a[perm[i]] += 1;
        a[perm[i + 1]] -= 1;
        cols.push(quotient_coordinates(field, &a)?);
    }
    Ok(Matrix::from_fn(field, m - 2, m - 2, |r, c| cols[c][r]))
}

fn cycle(m: usize, start: usize, len: usize) -> Vec<usize> {
    let mut perm: Vec<usize> = (0..m).collect();
    for i in 0..len {
        perm[start + i] = start + (i + 1) % len;
    }
    perm
}

fn transposition(m: usize, i: usize, j: usize) -> Vec<usize> {
    let mut perm: Vec<usize> = (0..m).collect();
    perm.swap(i, j);
    perm
}

pub fn symmetric_family(p: u32, m: usize) -> Result<SymmetricFamily> {
    if m < 5 {
        return Err(Error::InvalidParameters(format!("m = {m} < 5")));
    }
    if m % p as usize != 0 {
        return Err(Error::InvalidParameters(format!("p = {p} does not divide m = {m}")));
    }
    let field = Field::new(p, 1).map_err(|e| Error::InvalidParameters(e.to_string()))?;
    let pu = p as usize;
    let blocks = m / pu;
    let group = MatrixGroup::generate(
        &field,
        m - 2,
        vec![permutation_on_quotient(&field, &transposition(m, 0, 1))?, permutation_on_quotient(&field, &cycle(m, 0, m))?],
    )?;
    let mut hgens = Vec::new();
    let mut sigma_perm: Vec<usize> = (0..m).collect();
    for b in 0..blocks {
        let s = b * pu;
        hgens.push(permutation_on_quotient(&field, &transposition(m, s, s + 1))?);
        if pu > 2 {
            hgens.push(permutation_on_quotient(&field, &cycle(m, s, pu))?);
        }
        for i in 0..pu {
            sigma_perm[s + i] = s + (i + 1) % pu;
        }
    }
    let h = MatrixGroup::generate(&field, m - 2, hgens)?;
    let sigma = permutation_on_quotient(&field, &sigma_perm)?;
    let block_vec = |b: usize| {
        let mut a = vec![0i64; m];
        a[b * pu..(b + 1) * pu].iter_mut().for_each(|x| *x = 1);
        quotient_coordinates(&field, &a)
    };
    let vs: Result<Vec<Vec<Fe>>> = (0..blocks).map(block_vec).collect();
    let vs = vs?;
    let u1 = Subspace::from_vectors(&field, m - 2, vs.clone());
    let w: Vec<i64> = (1..=m as i64).collect();
    let u = quotient_coordinates(&field, &w).ok().map(|wc| {
        let mut all = vs;
        all.push(wc);
        Subspace::from_vectors(&field, m - 2, all)
    });
    Ok(SymmetricFamily { p, m, field, group, h, sigma, u1, u })
}
