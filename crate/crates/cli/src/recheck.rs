//! Independent re-verification of the witnesses stored in a report.

use mil_core::field::Field;
use mil_core::invariants::{different, is_hsop, Budget, Character, Context};
use mil_core::linalg::Subspace;
use mil_core::poly::{ideal_graded_piece, Polynomial};
use mil_core::{Error, MatrixGroup, Result};

use crate::report::{RunReport, Status, Witness};

fn parse_all(f: &Field, n: usize, ps: &[String]) -> Result<Vec<Polynomial>> {
    ps.iter().map(|s| Polynomial::parse(f, n, s)).collect()
}

fn invariant(g: &MatrixGroup, p: &Polynomial) -> Result<bool> {
    for x in g.generators() {
        if &p.act(x)? != p {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Checks one witness from scratch; `Ok(false)` means it does not hold.
pub fn verify(w: &Witness) -> Result<bool> {
    match w {
        Witness::DirectSummand { group, theta, witness } => {
            let g = MatrixGroup::from_data(group)?;
            let f = g.field();
            let theta = Polynomial::parse(f, g.degree(), theta)?;
            let pre = Polynomial::parse(f, g.degree(), witness)?;
            let chi = Character::of_semi_invariant(&g, &theta)?;
            let image = Context::new(&g, Budget::default()).twisted_transfer(Some(&chi), &pre);
            Ok(image == theta && different(&g)?.theta == theta)
        }
        Witness::Parameters { group, field, polynomials, degrees } => {
            let g = MatrixGroup::from_data(group)?;
            let k = Field::new(field.p, field.r)?;
            if k.modulus() != field.modulus.as_slice() {
                return Ok(false);
            }
            let g = if k == *g.field() { g } else { g.extend_scalars(&k)? };
            let fs = parse_all(&k, g.degree(), polynomials)?;
            let mut prod: u64 = 1;
            for (p, &d) in fs.iter().zip(degrees) {
                if !p.is_homogeneous() || p.degree() != Some(d) || !invariant(&g, p)? {
                    return Ok(false);
                }
                prod *= d as u64;
            }
            Ok(fs.len() == g.degree() && degrees.len() == fs.len() && prod == g.order() as u64 && is_hsop(&k, g.degree(), &fs)?)
        }
        Witness::Contraction { group, generators, degree, polynomial } => {
            let g = MatrixGroup::from_data(group)?;
            let (f, n, d) = (g.field(), g.degree(), *degree);
            let gens = parse_all(f, n, generators)?;
            let p = Polynomial::parse(f, n, polynomial)?;
            if p.is_zero() || p.degree() != Some(d) || !p.is_homogeneous() || !invariant(&g, &p)? {
                return Ok(false);
            }
            if !ideal_graded_piece(f, n, &gens, d)?.contains(&p.to_dense(d)) {
                return Ok(false);
            }
            let ctx = Context::new(&g, Budget::default());
            let mut span = Vec::new();
            for h in &gens {
                let Some(e) = h.degree() else { continue };
                if e > d {
                    continue;
                }
                for u in ctx.invariant_basis(d - e)? {
                    span.push(u.mul(h).to_dense(d));
                }
            }
            Ok(!Subspace::from_vectors(f, p.to_dense(d).len(), span).contains(&p.to_dense(d)))
        }
        Witness::Invariants { group, polynomials } => {
            let g = MatrixGroup::from_data(group)?;
            for p in parse_all(g.field(), g.degree(), polynomials)? {
                if !invariant(&g, &p)? {
                    return Ok(false);
                }
            }
            Ok(true)
        }
    }
}

/// Round-trips the report through JSON, re-verifies every witness and
/// downgrades claims whose witness does not hold.
pub fn recheck(report: &RunReport) -> RunReport {
    let mut r: RunReport = serde_json::from_str(&report.to_json()).expect("report round-trips");
    for s in &mut r.scenarios {
        for c in &mut s.claims {
            let Some(w) = &c.witness else { continue };
            let ok = match verify(w) {
                Ok(ok) => ok,
                Err(Error::Budget(_)) | Err(Error::CapExceeded { .. }) => continue,
                Err(_) => false,
            };
            c.recheck = Some(ok);
            if !ok {
                c.status = Status::Fail;
            }
        }
    }
    r.refresh_status();
    r
}
