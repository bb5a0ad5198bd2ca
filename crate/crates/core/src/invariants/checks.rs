//! Degreewise checks of ideals and generating sets, Serre's condition and
//! the inheritance of properties by point stabilizers.

use std::collections::{BTreeMap, HashSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::Fe;
use crate::group::MatrixGroup;
use crate::invariants::context::Context;
use crate::invariants::coregular::{coregularity_decide_with, CoregularityVerdict};
use crate::invariants::different::different_ctx;
use crate::invariants::dsp::{dsp_decide_with, DspVerdict};
use crate::invariants::Budget;
use crate::linalg::{EchelonBasis, Subspace};
use crate::poly::{ideal_graded_piece, Polynomial};

fn check_invariant(g: &MatrixGroup, f: &Polynomial) -> Result<u32> {
    if !f.is_homogeneous() || f.is_zero() {
        return Err(Error::Inhomogeneous);
    }
    for x in g.generators() {
        if &f.act(x)? != f {
            return Err(Error::NotInvariant(f.to_string()));
        }
    }
    Ok(f.degree().unwrap())
}

#[derive(Clone, Debug, Serialize)]
pub struct DegreeCount {
    pub degree: u32,
    /// Dimension of the subspace built from the inputs.
    pub spanned: usize,
    /// Dimension it is compared against.
    pub expected: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct GenerationReport {
    pub pass: bool,
    pub first_failure: Option<u32>,
    pub degrees: Vec<DegreeCount>,
    /// An element of the larger space missing from the smaller one.
    pub witness: Option<Polynomial>,
}

/// Compares `(J A)_d ∩ A^G_d` with `(J A^G)_d` for `d <= max`.
pub fn ideal_contraction_check(g: &MatrixGroup, gens: &[Polynomial], max: u32) -> Result<GenerationReport> {
    ideal_contraction_check_ctx(&Context::new(g, Budget::default()), gens, max)
}

pub fn ideal_contraction_check_ctx(ctx: &Context, gens: &[Polynomial], max: u32) -> Result<GenerationReport> {
    let g = ctx.group();
    let degs = gens.iter().map(|f| check_invariant(g, f)).collect::<Result<Vec<u32>>>()?;
    let f = g.field();
    let n = g.degree();
    let mut degrees = Vec::new();
    for d in 0..=max {
        ctx.check_piece(d)?;
        let extended = ideal_graded_piece(f, n, gens, d)?;
        let inv = ctx.invariants(d)?;
        let contraction = extended.intersection(&inv);
        let mut vecs = Vec::new();
        for (p, &e) in gens.iter().zip(&degs) {
            if e > d {
                continue;
            }
            for u in ctx.invariant_basis(d - e)? {
                vecs.push(u.mul(p).to_dense(d));
            }
        }
        let ideal = Subspace::from_vectors(f, inv.ambient(), vecs);
        degrees.push(DegreeCount { degree: d, spanned: ideal.dim(), expected: contraction.dim() });
        if ideal.dim() < contraction.dim() {
            let w = contraction.basis().iter().find(|v| !ideal.contains(v)).unwrap();
            return Ok(GenerationReport {
                pass: false,
                first_failure: Some(d),
                degrees,
                witness: Some(Polynomial::from_dense(f, n, d, w)),
            });
        }
    }
    Ok(GenerationReport { pass: true, first_failure: None, degrees, witness: None })
}

/// Whether monomials in `fs` span `A^G_d` for every `d <= max`.
pub fn algebra_generation_check(g: &MatrixGroup, fs: &[Polynomial], max: u32) -> Result<GenerationReport> {
    algebra_generation_check_ctx(&Context::new(g, Budget::default()), fs, max)
}

pub fn algebra_generation_check_ctx(ctx: &Context, fs: &[Polynomial], max: u32) -> Result<GenerationReport> {
    let g = ctx.group();
    let degs = fs.iter().map(|f| check_invariant(g, f)).collect::<Result<Vec<u32>>>()?;
    let f = g.field();
    let n = g.degree();
    let mut powers: Vec<BTreeMap<u32, Polynomial>> = vec![BTreeMap::new(); fs.len()];
    let mut degrees = Vec::new();
    for d in 0..=max {
        let inv = ctx.invariants(d)?;
        let mut ech = EchelonBasis::new(f, inv.ambient());
        let mut exps = vec![0u32; fs.len()];
        enumerate_products(&degs, 0, d, &mut exps, &mut |e| {
            let mut p = Polynomial::one(f, n);
            for (i, &k) in e.iter().enumerate() {
                if k > 0 {
                    let pw = powers[i].entry(k).or_insert_with(|| fs[i].pow(k)).clone();
                    p = p.mul(&pw);
                }
            }
            if !ech.is_full() {
                ech.insert(p.to_dense(d));
            }
        });
        let spanned = ech.rank();
        degrees.push(DegreeCount { degree: d, spanned, expected: inv.dim() });
        if spanned < inv.dim() {
            let span = ech.into_subspace();
            let w = inv.basis().iter().find(|v| !span.contains(v)).unwrap();
            return Ok(GenerationReport {
                pass: false,
                first_failure: Some(d),
                degrees,
                witness: Some(Polynomial::from_dense(f, n, d, w)),
            });
        }
    }
    Ok(GenerationReport { pass: true, first_failure: None, degrees, witness: None })
}

fn enumerate_products(degs: &[u32], i: usize, left: u32, cur: &mut Vec<u32>, visit: &mut dyn FnMut(&[u32])) {
    if i == degs.len() {
        if left == 0 {
            visit(cur);
        }
        return;
    }
    let mut k = 0;
    while k * degs[i] <= left {
        cur[i] = k;
        enumerate_products(degs, i + 1, left - k * degs[i], cur, visit);
        k += 1;
    }
    cur[i] = 0;
}

/// Polynomial invariants force generation by pseudo-reflections.
pub fn serre_check(g: &MatrixGroup, verdict: &CoregularityVerdict) -> bool {
    !verdict.is_coregular() || g.is_reflection_group()
}

#[derive(Clone, Debug, Serialize)]
pub struct SubspaceCheck {
    pub group: String,
    pub subspace: Vec<Vec<String>>,
    pub stabilizer_order: usize,
    pub dsp: Option<bool>,
    pub coregular: Option<bool>,
    pub violation: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct GroupSummary {
    pub group: String,
    pub order: usize,
    pub dsp: Option<bool>,
    pub coregular: Option<bool>,
    pub stabilizers: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct InheritanceReport {
    pub groups: Vec<GroupSummary>,
    pub checks: Vec<SubspaceCheck>,
    pub violations: usize,
    pub skipped: Vec<String>,
}

/// `Some(true)` holds, `Some(false)` fails, `None` undecided.
fn decide(g: &MatrixGroup, budget: &Budget) -> Result<(Option<bool>, Option<bool>, Option<DspVerdict>, Option<CoregularityVerdict>)> {
    let ctx = Context::new(g, budget.clone());
    let diff = match different_ctx(&ctx) {
        Ok(d) => d,
        Err(Error::Budget(_)) => return Ok((None, None, None, None)),
        Err(e) => return Err(e),
    };
    let dsp = match dsp_decide_with(&ctx, &diff) {
        Ok(v) => Some(v),
        Err(Error::Budget(_)) => None,
        Err(e) => return Err(e),
    };
    let cor = coregularity_decide_with(&ctx, Some(&diff))?;
    let c = if cor.is_coregular() {
        Some(true)
    } else if cor.is_not_coregular() {
        Some(false)
    } else {
        None
    };
    Ok((dsp.as_ref().map(|v| v.holds()), c, dsp, Some(cor)))
}

fn sample_vectors(g: &MatrixGroup, extra: usize, seed: u64) -> Vec<Vec<Fe>> {
    let f = g.field();
    let n = g.degree();
    let mut out: Vec<Vec<Fe>> = (0..n)
        .map(|i| {
            let mut e = vec![Fe::ZERO; n];
            e[i] = Fe::ONE;
            e
        })
        .collect();
    out.push(vec![Fe::ONE; n]);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..extra {
        let v: Vec<Fe> = (0..n).map(|_| Fe(rng.gen_range(0..f.order()) as u16)).collect();
        if v.iter().any(|a| !a.is_zero()) {
            out.push(v);
        }
    }
    out
}

/// Checks that the direct summand property and coregularity pass from each
/// group to the point stabilizers of subspaces spanned by up to `max_span`
/// sample vectors.
pub fn inheritance_suite(corpus: &[(String, MatrixGroup)], budget: &Budget, max_span: usize) -> Result<InheritanceReport> {
    let mut report = InheritanceReport { groups: Vec::new(), checks: Vec::new(), violations: 0, skipped: Vec::new() };
    for (name, g) in corpus {
        let (dsp_g, cor_g, _, _) = decide(g, budget)?;
        if dsp_g.is_none() && cor_g.is_none() {
            report.skipped.push(format!("{name}: undecided within budget"));
            continue;
        }
        if cor_g == Some(true) && dsp_g == Some(false) {
            report.violations += 1;
            report.skipped.push(format!("{name}: coregular but the direct summand property fails"));
        }
        if dsp_g != Some(true) && cor_g != Some(true) {
            report.groups.push(GroupSummary { group: name.clone(), order: g.order(), dsp: dsp_g, coregular: cor_g, stabilizers: 0 });
            continue;
        }
        let f = g.field();
        let n = g.degree();
        let vs = sample_vectors(g, 2, budget.seed);
        let mut seen_spaces = HashSet::new();
        let mut seen_groups = HashSet::new();
        let mut count = 0;
        let mut subsets: Vec<Vec<usize>> = vec![vec![]];
        for k in 1..=max_span.min(n) {
            let mut cur: Vec<usize> = (0..k).collect();
            loop {
                subsets.push(cur.clone());
                let Some(i) = (0..k).rev().find(|&i| cur[i] != i + vs.len() - k) else { break };
                cur[i] += 1;
                for j in i + 1..k {
                    cur[j] = cur[j - 1] + 1;
                }
            }
        }
        for s in subsets {
            let u = Subspace::from_vectors(f, n, s.iter().map(|&i| vs[i].clone()).collect());
            if !seen_spaces.insert(u.basis().to_vec()) {
                continue;
            }
            let h = g.point_stabilizer(&u);
            if !seen_groups.insert(h.elements().iter().map(|x| x.entries().to_vec()).collect::<Vec<_>>()) {
                continue;
            }
            count += 1;
            let (dsp_h, cor_h) = if h.order() == g.order() { (dsp_g, cor_g) } else {
                let (a, b, _, _) = decide(&h, budget)?;
                (a, b)
            };
            let mut violation = None;
            if dsp_g == Some(true) && dsp_h == Some(false) {
                violation = Some("direct summand property lost".to_string());
            }
            if cor_g == Some(true) && cor_h == Some(false) {
                violation = Some("coregularity lost".to_string());
            }
            if (dsp_g == Some(true) && dsp_h.is_none()) || (cor_g == Some(true) && cor_h.is_none()) {
                report.skipped.push(format!("{name}: stabilizer of order {} undecided", h.order()));
            }
            if violation.is_some() {
                report.violations += 1;
            }
            report.checks.push(SubspaceCheck {
                group: name.clone(),
                subspace: u.basis().iter().map(|v| v.iter().map(|&a| f.format(a)).collect()).collect(),
                stabilizer_order: h.order(),
                dsp: dsp_h,
                coregular: cor_h,
                violation,
            });
        }
        report.groups.push(GroupSummary { group: name.clone(), order: g.order(), dsp: dsp_g, coregular: cor_g, stabilizers: count });
    }
    Ok(report)
}
