//! Deciding whether `k[V]^G` is a polynomial ring.
//!
//! Refutation uses necessary conditions on the degrees; confirmation needs
//! invariants of the right degrees forming a system of parameters.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{Fe, Field, MAX_FIELD_ORDER};
use crate::group::MatrixGroup;
use crate::invariants::context::Context;
use crate::invariants::different::{different_ctx, DifferentData};
use crate::invariants::{hilbert_function_ctx, Budget, GradedDims};
use crate::poly::{quotient_dim, Polynomial};

#[derive(Clone, Debug, Serialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum Coregularity {
    Coregular { degrees: Vec<u32>, witness: Vec<Polynomial>, field_order: u32 },
    NotCoregular { obstruction: String, detail: String },
    Inconclusive { reason: String },
}

/// A degree multiset discarded by a filter.
#[derive(Clone, Debug, Serialize)]
pub struct Rejection {
    pub degrees: Vec<u32>,
    pub filter: String,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct CoregularityVerdict {
    pub decision: Coregularity,
    pub order: usize,
    pub delta: Option<u32>,
    pub linear_invariants: Option<usize>,
    pub candidates: usize,
    pub rejections: Vec<Rejection>,
    pub survivors: Vec<Vec<u32>>,
    pub hilbert: Option<GradedDims>,
}

impl CoregularityVerdict {
    pub fn is_coregular(&self) -> bool {
        matches!(self.decision, Coregularity::Coregular { .. })
    }

    pub fn is_not_coregular(&self) -> bool {
        matches!(self.decision, Coregularity::NotCoregular { .. })
    }

    pub fn degrees(&self) -> Option<&[u32]> {
        match &self.decision {
            Coregularity::Coregular { degrees, .. } => Some(degrees),
            _ => None,
        }
    }
}

/// Non-decreasing `n`-tuples of positive integers with the given product.
fn factorizations(order: u64, n: usize) -> Vec<Vec<u32>> {
    fn rec(rest: u64, min: u64, left: usize, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if left == 1 {
            if rest >= min {
                cur.push(rest as u32);
                out.push(cur.clone());
                cur.pop();
            }
            return;
        }
        let mut d = min;
        while d.pow(left as u32) <= rest {
            if rest % d == 0 {
                cur.push(d as u32);
                rec(rest / d, d, left - 1, cur, out);
                cur.pop();
            }
            d += 1;
        }
    }
    let mut out = Vec::new();
    if n == 0 {
        if order == 1 {
            out.push(Vec::new());
        }
        return out;
    }
    rec(order, 1, n, &mut Vec::new(), &mut out);
    out
}

/// Coefficients of `prod 1 / (1 - t^{d_i})` up to `t^max`.
pub fn hilbert_series_coefficients(degrees: &[u32], max: u32) -> Vec<u64> {
    let mut c = vec![0u64; max as usize + 1];
    c[0] = 1;
    for &d in degrees {
        let d = d as usize;
        for k in d..c.len() {
            c[k] += c[k - d];
        }
    }
    c
}

/// Homogeneous `fs` with `(A / (fs))_{sum(d_i - 1) + 1} = 0`, `n` of them.
pub fn is_hsop(field: &Field, n: usize, fs: &[Polynomial]) -> Result<bool> {
    if fs.len() != n {
        return Ok(false);
    }
    let mut top = 1u32;
    for f in fs {
        if !f.is_homogeneous() {
            return Err(Error::Inhomogeneous);
        }
        match f.degree() {
            Some(d) if d > 0 => top += d - 1,
            _ => return Ok(false),
        }
    }
    Ok(quotient_dim(field, n, fs, top)? == 0)
}

pub fn coregularity_decide(g: &MatrixGroup, budget: &Budget) -> Result<CoregularityVerdict> {
    let ctx = Context::new(g, budget.clone());
    let diff = match different_ctx(&ctx) {
        Ok(d) => Some(d),
        Err(Error::Budget(_)) => None,
        Err(e) => return Err(e),
    };
    coregularity_decide_with(&ctx, diff.as_ref())
}

pub fn coregularity_decide_with(ctx: &Context, diff: Option<&DifferentData>) -> Result<CoregularityVerdict> {
    let g = ctx.group();
    let n = g.degree();
    let mut verdict = CoregularityVerdict {
        decision: Coregularity::Inconclusive { reason: String::new() },
        order: g.order(),
        delta: diff.map(|d| d.delta),
        linear_invariants: None,
        candidates: 0,
        rejections: Vec::new(),
        survivors: Vec::new(),
        hilbert: None,
    };
    let Some(diff) = diff else {
        verdict.decision = Coregularity::Inconclusive { reason: "different not available within budget".into() };
        return Ok(verdict);
    };
    let linear = match ctx.invariants(1) {
        Ok(s) => s.dim(),
        Err(Error::Budget(r)) => {
            verdict.decision = Coregularity::Inconclusive { reason: r };
            return Ok(verdict);
        }
        Err(e) => return Err(e),
    };
    verdict.linear_invariants = Some(linear);
    let cands = factorizations(g.order() as u64, n);
    verdict.candidates = cands.len();
    let target = diff.delta + n as u32;
    let mut arithmetic = Vec::new();
    for c in cands {
        let ones = c.iter().filter(|&&d| d == 1).count();
        let sum: u32 = c.iter().sum();
        if ones != linear {
            verdict.rejections.push(Rejection {
                degrees: c,
                filter: "linear-count".into(),
                detail: format!("{ones} degree-one generators, but dim A^G_1 = {linear}"),
            });
        } else if sum != target {
            verdict.rejections.push(Rejection {
                degrees: c,
                filter: "degree-sum".into(),
                detail: format!(
                    "needs delta = sum - n = {}, found delta = {} from {} pseudo-reflections",
                    sum as i64 - n as i64,
                    diff.delta,
                    g.pseudo_reflections().len()
                ),
            });
        } else {
            arithmetic.push(c);
        }
    }
    if arithmetic.is_empty() {
        verdict.decision = Coregularity::NotCoregular {
            obstruction: "degree-arithmetic".into(),
            detail: format!(
                "no degrees with product {} and sum delta + n = {} matching {} linear invariants",
                g.order(),
                target,
                linear
            ),
        };
        return Ok(verdict);
    }
    let trunc = arithmetic.iter().map(|c| c.iter().sum::<u32>()).max().unwrap();
    let hilbert = match hilbert_function_ctx(ctx, trunc) {
        Ok(h) => h,
        Err(Error::Budget(r)) => {
            verdict.survivors = arithmetic;
            verdict.decision = Coregularity::Inconclusive { reason: r };
            return Ok(verdict);
        }
        Err(e) => return Err(e),
    };
    for c in arithmetic {
        let series = hilbert_series_coefficients(&c, trunc);
        match (0..=trunc as usize).find(|&d| series[d] != hilbert.dims[d] as u64) {
            Some(d) => verdict.rejections.push(Rejection {
                degrees: c,
                filter: "hilbert".into(),
                detail: format!("dim A^G_{d} = {} but the series predicts {}", hilbert.dims[d], series[d]),
            }),
            None => verdict.survivors.push(c),
        }
    }
    verdict.hilbert = Some(hilbert);
    if verdict.survivors.is_empty() {
        verdict.decision = Coregularity::NotCoregular {
            obstruction: "hilbert-mismatch".into(),
            detail: format!("no degree multiset matches the invariant dimensions up to degree {trunc}"),
        };
        return Ok(verdict);
    }
    for c in verdict.survivors.clone() {
        match search_hsop(g, &c, &ctx.budget) {
            Ok(Some((witness, field_order))) => {
                verdict.decision = Coregularity::Coregular { degrees: c, witness, field_order };
                return Ok(verdict);
            }
            Ok(None) => {}
            Err(Error::Budget(_)) => {}
            Err(e) => return Err(e),
        }
    }
    verdict.decision =
        Coregularity::Inconclusive { reason: "no system of parameters found for the surviving degrees".into() };
    Ok(verdict)
}

/// `k`-subsets of `0..b`, at most `limit` of them.
fn subsets(b: usize, k: usize, limit: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > b {
        return out;
    }
    let mut cur: Vec<usize> = (0..k).collect();
    loop {
        out.push(cur.clone());
        if out.len() >= limit {
            return out;
        }
        let Some(i) = (0..k).rev().find(|&i| cur[i] != i + b - k) else { return out };
        cur[i] += 1;
        for j in i + 1..k {
            cur[j] = cur[j - 1] + 1;
        }
    }
}

fn search_hsop(g: &MatrixGroup, degrees: &[u32], budget: &Budget) -> Result<Option<(Vec<Polynomial>, u32)>> {
    let base = g.field();
    let n = g.degree();
    let mut distinct: Vec<(u32, usize)> = Vec::new();
    for &d in degrees {
        match distinct.last_mut() {
            Some((e, k)) if *e == d => *k += 1,
            _ => distinct.push((d, 1)),
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(budget.seed ^ degrees.iter().fold(0u64, |h, &d| h * 131 + d as u64));
    for s in 1..=budget.max_extension.max(1) {
        let order = (base.order() as u64).pow(s);
        if order > MAX_FIELD_ORDER as u64 {
            break;
        }
        let group = if s == 1 { g.clone() } else { g.extend_scalars(&Field::new(base.characteristic(), base.degree() * s)?)? };
        let field = group.field().clone();
        let ctx = Context::new(&group, budget.clone());
        let mut bases = Vec::new();
        for &(d, k) in &distinct {
            let b = ctx.invariant_basis(d)?;
            if b.len() < k {
                return Ok(None);
            }
            bases.push(b);
        }
        // Coordinate-aligned choices first.
        let choices: Vec<Vec<Vec<usize>>> =
            distinct.iter().zip(&bases).map(|(&(_, k), b)| subsets(b.len(), k, 64)).collect();
        let mut odometer = vec![0usize; choices.len()];
        for _ in 0..256 {
            let fs: Vec<Polynomial> = odometer
                .iter()
                .enumerate()
                .flat_map(|(j, &c)| choices[j][c].iter().map(|&i| bases[j][i].clone()).collect::<Vec<_>>())
                .collect();
            if is_hsop(&field, n, &fs)? {
                return Ok(Some((fs, field.order())));
            }
            let mut j = 0;
            while j < odometer.len() {
                odometer[j] += 1;
                if odometer[j] < choices[j].len() {
                    break;
                }
                odometer[j] = 0;
                j += 1;
            }
            if j == odometer.len() {
                break;
            }
        }
        let q = field.order();
        for _ in 0..budget.hsop_attempts {
            let mut fs = Vec::new();
            for (&(_, k), b) in distinct.iter().zip(&bases) {
                for _ in 0..k {
                    let mut p = Polynomial::zero(&field, n);
                    for x in b {
                        let c = Fe(rng.gen_range(0..q) as u16);
                        p = p.add(&x.scale(c));
                    }
                    fs.push(p);
                }
            }
            if fs.iter().all(|p| !p.is_zero()) && is_hsop(&field, n, &fs)? {
                return Ok(Some((fs, field.order())));
            }
        }
    }
    Ok(None)
}
