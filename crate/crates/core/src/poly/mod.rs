//! The polynomial ring `k[x_1, .., x_n]` with the contragredient action.

mod monomial;
mod polynomial;
mod substitution;
mod text;

pub use monomial::{binomial, degree_basis, homogeneous_basis, monomial_count, DegreeBasis, Monomial};
pub use polynomial::Polynomial;
pub use substitution::{degree_map, SparseMap, SubstitutionPowers};

use crate::error::{Error, Result};
use crate::field::{Fe, Field};
use crate::linalg::{EchelonBasis, Matrix, Subspace};

/// Distinct images `g . x` over the given group elements.
pub fn orbit<'a>(elements: impl IntoIterator<Item = &'a Matrix>, x: &Polynomial) -> Result<Vec<Polynomial>> {
    let mut seen = std::collections::HashSet::new();
    let mut out = Vec::new();
    for g in elements {
        let y = x.act(g)?;
        if seen.insert(y.to_string()) {
            out.push(y);
        }
    }
    Ok(out)
}

/// Product of the distinct images of `x` under the group elements; its
/// degree is the orbit length times `deg x`.
pub fn orbit_product<'a>(elements: impl IntoIterator<Item = &'a Matrix>, x: &Polynomial) -> Result<Polynomial> {
    let mut acc = Polynomial::one(x.field(), x.nvars());
    for y in orbit(elements, x)? {
        acc = acc.mul(&y);
    }
    Ok(acc)
}

/// The degree-`d` piece of the ideal generated by homogeneous `gens`, as a
/// subspace of the degree-`d` coefficient space.
pub fn ideal_graded_piece(field: &Field, n: usize, gens: &[Polynomial], d: u32) -> Result<Subspace> {
    let basis = degree_basis(n, d);
    let mut ech = EchelonBasis::new(field, basis.len());
    for g in gens {
        if !g.is_homogeneous() {
            return Err(Error::Inhomogeneous);
        }
        let Some(e) = g.degree() else { continue };
        if e > d {
            continue;
        }
        for m in degree_basis(n, d - e).monomials() {
            if ech.is_full() {
                return Ok(ech.into_subspace());
            }
            let mut v = vec![Fe::ZERO; basis.len()];
            for (t, &c) in g.terms() {
                v[basis.index_of(&t.mul(m).0).unwrap()] = c;
            }
            ech.insert(v);
        }
    }
    Ok(ech.into_subspace())
}

/// `dim (k[V] / (gens))_d`.
pub fn quotient_dim(field: &Field, n: usize, gens: &[Polynomial], d: u32) -> Result<usize> {
    Ok(ideal_graded_piece(field, n, gens, d)?.codim())
}
