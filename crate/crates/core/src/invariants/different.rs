//! Reflecting hyperplanes and the Dedekind different `theta_G`.
//!
//! The exponent at a hyperplane is found by brute force on its inertia
//! group; when the budget allows, the product is then certified against
//! the defining divisibility condition for the whole group.

use std::collections::HashMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{Fe, Field};
use crate::group::MatrixGroup;
use crate::invariants::character::Character;
use crate::invariants::context::Context;
use crate::invariants::{coinvariant_bound_ctx, coinvariant_bound_upto, Budget};
use crate::linalg::{fixed_space, Matrix, Subspace};
use crate::poly::{degree_basis, Polynomial};

#[derive(Clone, Debug, Serialize)]
pub struct Hyperplane {
    /// Linear form vanishing on the hyperplane, monic.
    pub form: Polynomial,
    #[serde(skip)]
    pub coefficients: Vec<Fe>,
    #[serde(skip)]
    pub inertia: MatrixGroup,
    pub inertia_order: usize,
    pub e: usize,
    pub q: usize,
    pub orbit: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct ReflectionArrangement {
    pub hyperplanes: Vec<Hyperplane>,
    pub orbits: Vec<Vec<usize>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Certification {
    /// Exponents found on inertia groups and the product checked against
    /// the full group up to its coinvariant bound.
    Global,
    /// Exponents found on inertia groups only.
    Local,
}

#[derive(Clone, Debug, Serialize)]
pub struct ExponentRecord {
    pub hyperplane: usize,
    pub exponent: u32,
    pub lower_bound: u32,
    /// Coinvariant bound of the inertia group.
    pub inertia_bound: u32,
    /// Monomial whose twisted transfer is not divisible at `exponent + 1`.
    pub witness: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct DifferentData {
    pub arrangement: ReflectionArrangement,
    pub exponents: Vec<u32>,
    pub records: Vec<ExponentRecord>,
    pub theta: Polynomial,
    #[serde(skip)]
    pub character: Character,
    pub delta: u32,
    pub certification: Certification,
    /// Coinvariant bound of the group, when computed.
    pub coinvariant_bound: Option<u32>,
    /// Per orbit: monomial certifying maximality in the global check.
    pub global_witnesses: Vec<String>,
}

/// Row vector `c g^{-1}` normalized: `g . x_c = s x_{c'}`.
pub(crate) fn form_image(f: &Field, g_inv: &Matrix, c: &[Fe]) -> (Fe, Vec<Fe>) {
    let n = c.len();
    let mut w = vec![Fe::ZERO; n];
    for (i, &ci) in c.iter().enumerate() {
        if !ci.is_zero() {
            f.axpy(&mut w, ci, g_inv.row(i));
        }
    }
    let s = normalize(f, &mut w);
    (s, w)
}

/// Scales so the last nonzero coordinate is 1; returns the old value.
fn normalize(f: &Field, w: &mut [Fe]) -> Fe {
    let k = w.iter().rposition(|a| !a.is_zero()).expect("nonzero form");
    let s = w[k];
    let inv = f.inv(s).unwrap();
    for a in w.iter_mut() {
        *a = f.mul(*a, inv);
    }
    s
}

/// Annihilator of a hyperplane, normalized.
fn hyperplane_form(f: &Field, h: &Subspace) -> Vec<Fe> {
    let m = Matrix::from_rows(f, h.basis()).unwrap();
    let mut c = m.kernel().pop().expect("hyperplane has a one-dimensional annihilator");
    normalize(f, &mut c);
    c
}

pub fn arrangement(g: &MatrixGroup) -> ReflectionArrangement {
    let f = g.field();
    let n = g.degree();
    let mut by_form: HashMap<Vec<Fe>, usize> = HashMap::new();
    let mut forms: Vec<(Vec<Fe>, Subspace)> = Vec::new();
    for i in g.pseudo_reflections() {
        let h = fixed_space(g.element(i)).unwrap();
        let c = hyperplane_form(f, &h);
        if !by_form.contains_key(&c) {
            by_form.insert(c.clone(), forms.len());
            forms.push((c, h));
        }
    }
    let mut orbit_of = vec![usize::MAX; forms.len()];
    let mut orbits = Vec::new();
    let gens_inv: Vec<Matrix> = g.generators().iter().map(|x| x.inverse().unwrap()).collect();
    for start in 0..forms.len() {
        if orbit_of[start] != usize::MAX {
            continue;
        }
        let k = orbits.len();
        let mut members = vec![start];
        orbit_of[start] = k;
        let mut i = 0;
        while i < members.len() {
            let c = forms[members[i]].0.clone();
            for gi in &gens_inv {
                let (_, w) = form_image(f, gi, &c);
                let j = by_form[&w];
                if orbit_of[j] == usize::MAX {
                    orbit_of[j] = k;
                    members.push(j);
                }
            }
            i += 1;
        }
        members.sort_unstable();
        orbits.push(members);
    }
    let hyperplanes = forms
        .into_iter()
        .enumerate()
        .map(|(i, (c, h))| {
            let inertia = g.point_stabilizer(&h);
            let q = inertia.transvections().len() + 1;
            Hyperplane {
                form: Polynomial::linear_form(f, &c),
                coefficients: c,
                inertia_order: inertia.order(),
                e: inertia.order() / q,
                q,
                inertia,
                orbit: orbit_of[i],
            }
        })
        .collect();
    debug_assert!(n > 0 || orbits.is_empty());
    ReflectionArrangement { hyperplanes, orbits }
}

/// Character of `prod x_alpha^{d_alpha}` from the permutation action on the
/// hyperplane forms.
fn product_character(g: &MatrixGroup, forms: &[Vec<Fe>], exps: &[u32]) -> Result<Character> {
    let f = g.field();
    let mut values = Vec::with_capacity(g.order());
    for i in 0..g.order() {
        let g_inv = g.element(g.inverse_index(i));
        let mut v = Fe::ONE;
        for (c, &e) in forms.iter().zip(exps) {
            if e > 0 {
                let (s, _) = form_image(f, g_inv, c);
                v = f.mul(v, f.pow(s, e as u64));
            }
        }
        values.push(v);
    }
    Character::from_generator_values(
        g,
        &g.generators().iter().map(|x| values[g.index_of(x).unwrap()]).collect::<Vec<_>>(),
    )
    .and_then(|c| if c.values() == values.as_slice() { Ok(c) } else { Err(Error::NotCharacter("inconsistent".into())) })
}

fn valuation_at_least(p: &Polynomial, ell: &Polynomial, e: u32) -> Result<bool> {
    if p.is_zero() {
        return Ok(true);
    }
    let mut cur = p.clone();
    for _ in 0..e {
        match cur.divide_by_linear(ell)? {
            Some(q) => cur = q,
            None => return Ok(false),
        }
    }
    Ok(true)
}

/// First monomial of degree `< bound` whose twisted transfer fails the
/// divisibility test, if any.
fn divisibility_failure(
    ctx: &Context,
    chi: &Character,
    bound: u32,
    test: &dyn Fn(&Polynomial) -> Result<bool>,
) -> Result<Option<String>> {
    let f = ctx.field();
    let n = ctx.n();
    for d in 0..bound {
        let len = ctx.check_piece(d)?;
        let basis = degree_basis(n, d);
        for i in 0..len {
            let mut v = vec![Fe::ZERO; len];
            v[i] = Fe::ONE;
            let t = ctx.twisted_transfer_vec(Some(chi), d, &v);
            let p = Polynomial::from_dense(f, n, d, &t);
            if !test(&p)? {
                return Ok(Some(basis.monomial(i).to_string()));
            }
        }
    }
    Ok(None)
}

/// Exponent at one hyperplane by brute force on its inertia group.
fn local_exponent(h: &Hyperplane, idx: usize, budget: &Budget) -> Result<ExponentRecord> {
    let w = &h.inertia;
    let ctx = Context::new(w, budget.clone());
    let bound = coinvariant_bound_ctx(&ctx)?;
    let lower = (h.e.max(h.q) - 1) as u32;
    let forms = vec![h.coefficients.clone()];
    let test = |d: u32| -> Result<Option<String>> {
        let chi = product_character(w, &forms, &[d])?;
        divisibility_failure(&ctx, &chi, bound, &|p| valuation_at_least(p, &h.form, d))
    };
    if let Some(m) = test(lower)? {
        return Err(Error::Precondition(format!(
            "hyperplane {}: exponent lower bound {lower} violated by monomial {m}",
            h.form
        )));
    }
    let mut d = lower;
    loop {
        if d > bound {
            return Err(Error::Budget(format!("exponent search at {} did not terminate", h.form)));
        }
        match test(d + 1)? {
            None => d += 1,
            Some(m) => {
                return Ok(ExponentRecord { hyperplane: idx, exponent: d, lower_bound: lower, inertia_bound: bound, witness: m })
            }
        }
    }
}

/// The different of `G` with default budget.
pub fn different(g: &MatrixGroup) -> Result<DifferentData> {
    different_ctx(&Context::new(g, Budget::default()))
}

pub fn different_ctx(ctx: &Context) -> Result<DifferentData> {
    let g = ctx.group();
    let f = g.field();
    let n = g.degree();
    let arr = arrangement(g);
    let mut records = Vec::new();
    for (i, h) in arr.hyperplanes.iter().enumerate() {
        records.push(local_exponent(h, i, &ctx.budget)?);
    }
    let exponents: Vec<u32> = records.iter().map(|r| r.exponent).collect();
    for orbit in &arr.orbits {
        if orbit.iter().any(|&i| exponents[i] != exponents[orbit[0]]) {
            return Err(Error::Precondition("hyperplane exponents are not constant on an orbit".into()));
        }
    }
    let forms: Vec<Vec<Fe>> = arr.hyperplanes.iter().map(|h| h.coefficients.clone()).collect();
    let mut theta = Polynomial::one(f, n);
    for (h, &e) in arr.hyperplanes.iter().zip(&exponents) {
        theta = theta.mul(&h.form.pow(e));
    }
    let character = product_character(g, &forms, &exponents)?;
    for x in g.generators() {
        if theta.act(x)? != theta.scale(character.value(g.index_of(x).unwrap())) {
            return Err(Error::Precondition("different is not a semi-invariant".into()));
        }
    }
    let delta = exponents.iter().sum();
    let mut data = DifferentData {
        arrangement: arr,
        exponents,
        records,
        theta,
        character,
        delta,
        certification: Certification::Local,
        coinvariant_bound: None,
        global_witnesses: Vec::new(),
    };
    global_check(ctx, &mut data)?;
    Ok(data)
}

/// Certifies `theta_G` on the whole group when the budget allows.
fn global_check(ctx: &Context, data: &mut DifferentData) -> Result<()> {
    let n = ctx.n();
    let mut reach = 0u32;
    let mut work = 0u64;
    while work + crate::poly::monomial_count(n, reach) <= ctx.budget.max_check_monomials as u64 {
        work += crate::poly::monomial_count(n, reach);
        reach += 1;
    }
    let Ok(bound) = coinvariant_bound_upto(ctx, reach) else { return Ok(()) };
    data.coinvariant_bound = Some(bound);
    let g = ctx.group();
    let hs = &data.arrangement.hyperplanes;
    let forms: Vec<Vec<Fe>> = hs.iter().map(|h| h.coefficients.clone()).collect();
    let divisible = |p: &Polynomial, exps: &[u32]| -> Result<bool> {
        for (h, &e) in hs.iter().zip(exps) {
            if !valuation_at_least(p, &h.form, e)? {
                return Ok(false);
            }
        }
        Ok(true)
    };
    let exps = data.exponents.clone();
    if let Some(m) = divisibility_failure(ctx, &data.character, bound, &|p| divisible(p, &exps))? {
        return Err(Error::Precondition(format!("local exponents fail the global condition at monomial {m}")));
    }
    let mut witnesses = Vec::new();
    for orbit in &data.arrangement.orbits {
        let mut up = exps.clone();
        for &i in orbit {
            up[i] += 1;
        }
        let chi = product_character(g, &forms, &up)?;
        match divisibility_failure(ctx, &chi, bound, &|p| divisible(p, &up))? {
            Some(m) => witnesses.push(m),
            None => return Err(Error::Precondition("a larger exponent passes the global condition".into())),
        }
    }
    data.global_witnesses = witnesses;
    data.certification = Certification::Global;
    Ok(())
}

#[derive(Clone, Debug, Serialize)]
pub struct Factorization {
    pub theta_h: Polynomial,
    pub theta_quotient: Polynomial,
    /// `theta_H` computed from `H` itself agrees with the factor.
    pub consistent: bool,
    /// `theta_{G/H}` does not vanish on `U`.
    pub quotient_outside: bool,
}

/// Splits `theta_G` into the factors vanishing on `U` and the rest.
pub fn different_factorization(g: &MatrixGroup, h: &MatrixGroup, u: &Subspace) -> Result<Factorization> {
    let stab = g.point_stabilizer(u);
    if stab.elements() != h.elements() {
        return Err(Error::Precondition("H is not the point stabilizer of U".into()));
    }
    let dg = different(g)?;
    let f = g.field();
    let n = g.degree();
    let mut theta_h = Polynomial::one(f, n);
    let mut theta_q = Polynomial::one(f, n);
    for (hp, &e) in dg.arrangement.hyperplanes.iter().zip(&dg.exponents) {
        let vanishes = u.basis().iter().all(|v| hp.form.evaluate(v).is_zero());
        let p = hp.form.pow(e);
        if vanishes {
            theta_h = theta_h.mul(&p);
        } else {
            theta_q = theta_q.mul(&p);
        }
    }
    let dh = different(h)?;
    let quotient_outside = u.dim() == 0 || !theta_q.restrict(u.basis())?.is_zero();
    Ok(Factorization { consistent: dh.theta == theta_h, theta_h, theta_quotient: theta_q, quotient_outside })
}
