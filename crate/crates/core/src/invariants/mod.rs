//! Graded invariants, transfers, the Dedekind different and the decisions
//! built on them: direct summand property and coregularity.

mod character;
mod checks;
mod context;
mod coregular;
mod different;
mod dsp;

use serde::Serialize;

pub use character::Character;
pub use checks::{
    algebra_generation_check, algebra_generation_check_ctx, ideal_contraction_check, ideal_contraction_check_ctx, inheritance_suite, serre_check, GenerationReport,
    InheritanceReport, SubspaceCheck,
};
pub use context::Context;
pub use coregular::{coregularity_decide, coregularity_decide_with, hilbert_series_coefficients, is_hsop, Coregularity, CoregularityVerdict, Rejection};
pub use different::{
    arrangement, different, different_ctx, different_factorization, Certification, DifferentData, Factorization, Hyperplane,
    ReflectionArrangement,
};
pub use dsp::{dsp_abelian_criterion, dsp_decide, dsp_decide_with, dsp_pgroup_criterion, DspDecision, DspVerdict, Obstruction};

use crate::error::{Error, Result};
use crate::field::Fe;
use crate::group::MatrixGroup;
use crate::linalg::{EchelonBasis, Subspace};
use crate::poly::{degree_basis, Polynomial};

/// Resource limits for degreewise computations.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Budget {
    /// Largest polynomial degree examined.
    pub max_degree: u32,
    /// Largest graded piece (number of monomials) handled by dense elimination.
    pub max_piece: usize,
    /// Largest number of monomials fed to a global divisibility check.
    pub max_check_monomials: usize,
    /// Random attempts per field when searching for parameters.
    pub hsop_attempts: usize,
    /// Largest extension degree tried in the parameter search.
    pub max_extension: u32,
    pub seed: u64,
}

impl Default for Budget {
    fn default() -> Self {
        Budget { max_degree: 64, max_piece: 2400, max_check_monomials: 4000, hsop_attempts: 40, max_extension: 3, seed: 0 }
    }
}

/// `dim A^G_d` for `d = 0..=D`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GradedDims {
    pub order: usize,
    pub dims: Vec<usize>,
    pub truncation: u32,
}

/// Basis of `A^G_d`.
pub fn invariant_space(g: &MatrixGroup, d: u32) -> Result<Vec<Polynomial>> {
    Context::new(g, Budget::default()).invariant_basis(d)
}

pub fn hilbert_function(g: &MatrixGroup, max: u32) -> Result<GradedDims> {
    hilbert_function_ctx(&Context::new(g, Budget::default()), max)
}

pub fn hilbert_function_ctx(ctx: &Context, max: u32) -> Result<GradedDims> {
    let dims = (0..=max).map(|d| ctx.invariants(d).map(|s| s.dim())).collect::<Result<Vec<_>>>()?;
    Ok(GradedDims { order: ctx.group().order(), dims, truncation: max })
}

/// Basis of `{ f in A_d : sigma . f = chi(sigma) f }`.
pub fn semi_invariant_space(g: &MatrixGroup, chi: &Character, d: u32) -> Result<Vec<Polynomial>> {
    if chi.values().len() != g.order() {
        return Err(Error::NotCharacter("character of another group".into()));
    }
    let s = Context::new(g, Budget::default()).semi_invariants(Some(chi), d)?;
    Ok(s.basis().iter().map(|v| Polynomial::from_dense(g.field(), g.degree(), d, v)).collect())
}

/// `Tr^G(f) = sum_sigma sigma . f`.
pub fn transfer(g: &MatrixGroup, f: &Polynomial) -> Polynomial {
    Context::new(g, Budget::default()).twisted_transfer(None, f)
}

/// `sum_sigma chi(sigma)^{-1} sigma . f`.
pub fn twisted_transfer(g: &MatrixGroup, chi: &Character, f: &Polynomial) -> Polynomial {
    Context::new(g, Budget::default()).twisted_transfer(Some(chi), f)
}

/// `Tr^G_H(f) = sum_i g_i . f` over right coset representatives of `H` in `G`.
pub fn relative_transfer(g: &MatrixGroup, h: &MatrixGroup, f: &Polynomial) -> Result<Polynomial> {
    let cosets = g.right_cosets(h)?;
    let mut out = Polynomial::zero(g.field(), g.degree());
    for &r in &cosets.representatives {
        out = out.add(&f.act(g.element(r))?);
    }
    Ok(out)
}

/// Smallest `d` with `(A / A A^G_+)_d = 0`.
pub fn coinvariant_bound(g: &MatrixGroup) -> Result<u32> {
    coinvariant_bound_ctx(&Context::new(g, Budget::default()))
}

pub fn coinvariant_bound_ctx(ctx: &Context) -> Result<u32> {
    coinvariant_bound_upto(ctx, ctx.budget.max_degree)
}

/// Like [`coinvariant_bound_ctx`], giving up after degree `max`.
pub fn coinvariant_bound_upto(ctx: &Context, max: u32) -> Result<u32> {
    let f = ctx.field();
    let n = ctx.n();
    if n == 0 {
        return Ok(0);
    }
    let mut prev = Subspace::zero(f, 1);
    for d in 1..=max.min(ctx.budget.max_degree) {
        let len = ctx.check_piece(d)?;
        let mut ech = EchelonBasis::new(f, len);
        for v in ctx.invariants(d)?.basis() {
            ech.insert(v.clone());
        }
        let lower = degree_basis(n, d - 1);
        let up = lower.up();
        'outer: for v in prev.basis() {
            for var in 0..n {
                if ech.is_full() {
                    break 'outer;
                }
                let mut w = vec![Fe::ZERO; len];
                for (i, &c) in v.iter().enumerate() {
                    if !c.is_zero() {
                        w[up[i * n + var] as usize] = c;
                    }
                }
                ech.insert(w);
            }
        }
        if ech.is_full() {
            return Ok(d);
        }
        prev = ech.into_subspace();
    }
    Err(Error::Budget(format!("coinvariant quotient still nonzero in degree {}", max.min(ctx.budget.max_degree))))
}
