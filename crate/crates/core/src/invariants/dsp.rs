//! The direct summand property: does `Tr^G(theta~ / theta_G) = 1` have a solution?

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::Fe;
use crate::group::MatrixGroup;
use crate::invariants::context::Context;
use crate::invariants::coregular::{Coregularity, CoregularityVerdict};
use crate::invariants::different::{different_ctx, Certification, DifferentData};
use crate::invariants::Budget;
use crate::linalg::{EchelonBasis, Matrix};
use crate::poly::{degree_basis, Polynomial};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum DspDecision {
    Holds,
    Fails,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Obstruction {
    LinearSystemInfeasible,
    PGroupNotTransvectionGenerated,
    AbelianNotCoregular,
    IdealContractionFailure,
}

#[derive(Clone, Debug, Serialize)]
pub struct DspVerdict {
    pub decision: DspDecision,
    /// `theta~` with `Tr^G(theta~ / theta_G) = 1`.
    pub witness: Option<Polynomial>,
    pub obstruction: Option<Obstruction>,
    pub delta: Option<u32>,
    /// Dimension of the image of the twisted transfer in degree `delta`.
    pub image_dim: Option<usize>,
    pub notes: Vec<String>,
}

impl DspVerdict {
    pub fn holds(&self) -> bool {
        self.decision == DspDecision::Holds
    }

    fn fails(obstruction: Obstruction, note: String) -> DspVerdict {
        DspVerdict {
            decision: DspDecision::Fails,
            witness: None,
            obstruction: Some(obstruction),
            delta: None,
            image_dim: None,
            notes: vec![note],
        }
    }
}

pub fn dsp_decide(g: &MatrixGroup) -> Result<DspVerdict> {
    let ctx = Context::new(g, Budget::default());
    let diff = different_ctx(&ctx)?;
    dsp_decide_with(&ctx, &diff)
}

/// Solves `sum_sigma chi(sigma)^{-1} sigma . theta~ = theta_G` in degree `delta`.
pub fn dsp_decide_with(ctx: &Context, diff: &DifferentData) -> Result<DspVerdict> {
    let g = ctx.group();
    let f = ctx.field();
    let n = ctx.n();
    let d = diff.delta;
    let len = ctx.check_piece(d)?;
    let target = diff.theta.to_dense(d);
    let chi = &diff.character;
    let mut ech = EchelonBasis::new(f, len);
    let mut chosen: Vec<(usize, Vec<Fe>)> = Vec::new();
    let mut found = false;
    let mut since_check = 0usize;
    for i in 0..len {
        let mut e = vec![Fe::ZERO; len];
        e[i] = Fe::ONE;
        let t = ctx.twisted_transfer_vec(Some(chi), d, &e);
        if ech.insert(t.clone()) {
            chosen.push((i, t));
            since_check += 1;
        }
        if since_check > 0 && (since_check >= 8 || i + 1 == len || chosen.len() == 1) {
            since_check = 0;
            if ech.contains(&target) {
                found = true;
                break;
            }
        }
    }
    let image_dim = ech.rank();
    let mut notes = Vec::new();
    if diff.certification == Certification::Local {
        notes.push("hyperplane exponents certified on inertia groups".to_string());
    }
    if !found {
        if g.is_nonmodular() {
            return Err(Error::Precondition("non-modular group without a direct summand witness".into()));
        }
        return Ok(DspVerdict {
            decision: DspDecision::Fails,
            witness: None,
            obstruction: Some(Obstruction::LinearSystemInfeasible),
            delta: Some(d),
            image_dim: Some(image_dim),
            notes,
        });
    }
    let k = chosen.len();
    let m = Matrix::from_fn(f, len, k, |r, c| chosen[c].1[r]);
    let rhs = Matrix::from_fn(f, len, 1, |r, _| target[r]);
    let sol = m.solve(&rhs)?.ok_or_else(|| Error::Precondition("witness system inconsistent".into()))?;
    let basis = degree_basis(n, d);
    let mut witness = Polynomial::zero(f, n);
    for (c, (i, _)) in chosen.iter().enumerate() {
        let a = sol.particular[(c, 0)];
        if !a.is_zero() {
            witness = witness.add(&Polynomial::monomial(f, basis.monomial(*i).clone(), a));
        }
    }
    if ctx.twisted_transfer(Some(chi), &witness) != diff.theta {
        return Err(Error::Precondition("witness does not reproduce theta".into()));
    }
    Ok(DspVerdict { decision: DspDecision::Holds, witness: Some(witness), obstruction: None, delta: Some(d), image_dim: Some(image_dim), notes })
}

/// For a `p`-group: not generated by transvections implies failure.
pub fn dsp_pgroup_criterion(g: &MatrixGroup) -> Result<Option<DspVerdict>> {
    if !g.is_p_group() {
        return Err(Error::Precondition(format!("group of order {} is not a p-group", g.order())));
    }
    let t = g.transvection_subgroup();
    if t.order() < g.order() {
        return Ok(Some(DspVerdict::fails(
            Obstruction::PGroupNotTransvectionGenerated,
            format!("transvections generate a subgroup of order {} in a group of order {}", t.order(), g.order()),
        )));
    }
    Ok(None)
}

/// For an abelian pseudo-reflection group the property is equivalent to coregularity.
pub fn dsp_abelian_criterion(g: &MatrixGroup, coregularity: &CoregularityVerdict) -> Result<Option<DspVerdict>> {
    if !g.is_abelian() {
        return Err(Error::Precondition("group is not abelian".into()));
    }
    if !g.is_reflection_group() {
        return Ok(None);
    }
    Ok(match &coregularity.decision {
        Coregularity::Coregular { .. } => Some(DspVerdict {
            decision: DspDecision::Holds,
            witness: None,
            obstruction: None,
            delta: None,
            image_dim: None,
            notes: vec!["abelian pseudo-reflection group with polynomial invariants".into()],
        }),
        Coregularity::NotCoregular { .. } => Some(DspVerdict::fails(
            Obstruction::AbelianNotCoregular,
            "abelian pseudo-reflection group whose invariants are not polynomial".into(),
        )),
        Coregularity::Inconclusive { .. } => None,
    })
}
