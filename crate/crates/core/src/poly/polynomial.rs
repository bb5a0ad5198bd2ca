use std::collections::{BTreeMap, HashMap};
use std::fmt;

use crate::error::{Error, Result};
use crate::field::{Fe, Field};
use crate::linalg::Matrix;
use crate::poly::monomial::{degree_basis, Monomial};
use crate::poly::substitution::degree_map;

/// A polynomial in `k[x_1, .., x_n]`. Zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq)]
pub struct Polynomial {
    field: Field,
    n: usize,
    terms: BTreeMap<Monomial, Fe>,
}

impl Polynomial {
    pub fn zero(field: &Field, n: usize) -> Polynomial {
        Polynomial { field: field.clone(), n, terms: BTreeMap::new() }
    }

    pub fn constant(field: &Field, n: usize, c: Fe) -> Polynomial {
        Polynomial::monomial(field, Monomial::one(n), c)
    }

    pub fn one(field: &Field, n: usize) -> Polynomial {
        Polynomial::constant(field, n, Fe::ONE)
    }

    /// The variable `x_{i+1}`.
    pub fn var(field: &Field, n: usize, i: usize) -> Polynomial {
        Polynomial::monomial(field, Monomial::var(n, i), Fe::ONE)
    }

    pub fn monomial(field: &Field, m: Monomial, c: Fe) -> Polynomial {
        let mut p = Polynomial::zero(field, m.nvars());
        if !c.is_zero() {
            p.terms.insert(m, c);
        }
        p
    }

    /// `sum_i coeffs[i] x_{i+1}`.
    pub fn linear_form(field: &Field, coeffs: &[Fe]) -> Polynomial {
        let n = coeffs.len();
        let terms = coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, &c)| (Monomial::var(n, i), c))
            .collect();
        Polynomial { field: field.clone(), n, terms }
    }

    pub fn from_terms(field: &Field, n: usize, terms: impl IntoIterator<Item = (Monomial, Fe)>) -> Polynomial {
        let mut p = Polynomial::zero(field, n);
        for (m, c) in terms {
            assert_eq!(m.nvars(), n, "monomial arity");
            p.add_term(m, c);
        }
        p
    }

    /// Homogeneous polynomial from coefficients on the degree-`d` basis.
    pub fn from_dense(field: &Field, n: usize, d: u32, v: &[Fe]) -> Polynomial {
        let basis = degree_basis(n, d);
        assert_eq!(v.len(), basis.len());
        let terms = v
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, &c)| (basis.monomial(i).clone(), c))
            .collect();
        Polynomial { field: field.clone(), n, terms }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn nvars(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, Fe> {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, m: &Monomial) -> Fe {
        self.terms.get(m).copied().unwrap_or(Fe::ZERO)
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut it = self.terms.keys().map(Monomial::degree);
        match it.next() {
            None => true,
            Some(d) => it.all(|e| e == d),
        }
    }

    /// Leading term under the monomial order.
    pub fn leading_term(&self) -> Option<(&Monomial, Fe)> {
        self.terms.iter().next_back().map(|(m, &c)| (m, c))
    }

    /// Scaled so the leading coefficient is 1.
    pub fn monic(&self) -> Polynomial {
        match self.leading_term() {
            None => self.clone(),
            Some((_, c)) => self.scale(self.field.inv(c).unwrap()),
        }
    }

    /// Coefficients `c` with `self = sum c_i x_{i+1}`, or `None` when not a
    /// linear form.
    pub fn linear_coefficients(&self) -> Option<Vec<Fe>> {
        let mut out = vec![Fe::ZERO; self.n];
        for (m, &c) in &self.terms {
            if m.degree() != 1 {
                return None;
            }
            out[m.0.iter().position(|&e| e == 1).unwrap()] = c;
        }
        Some(out)
    }

    /// Degree-`d` component as a coefficient vector on the degree-`d` basis.
    pub fn to_dense(&self, d: u32) -> Vec<Fe> {
        let basis = degree_basis(self.n, d);
        let mut v = vec![Fe::ZERO; basis.len()];
        for (m, &c) in &self.terms {
            if m.degree() == d {
                v[basis.index_of(&m.0).unwrap()] = c;
            }
        }
        v
    }

    pub fn homogeneous_component(&self, d: u32) -> Polynomial {
        let terms = self.terms.iter().filter(|(m, _)| m.degree() == d).map(|(m, &c)| (m.clone(), c)).collect();
        Polynomial { field: self.field.clone(), n: self.n, terms }
    }

    /// Degrees with a nonzero component, ascending.
    pub fn degrees(&self) -> Vec<u32> {
        let mut ds: Vec<u32> = self.terms.keys().map(Monomial::degree).collect();
        ds.sort_unstable();
        ds.dedup();
        ds
    }

    fn add_term(&mut self, m: Monomial, c: Fe) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                let s = self.field.add(*e.get(), c);
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    fn check(&self, other: &Polynomial) {
        assert_eq!(self.field, other.field, "polynomials over different fields");
        assert_eq!(self.n, other.n, "polynomials in different rings");
    }

    pub fn add(&self, other: &Polynomial) -> Polynomial {
        self.check(other);
        let mut out = self.clone();
        for (m, &c) in &other.terms {
            out.add_term(m.clone(), c);
        }
        out
    }

    pub fn sub(&self, other: &Polynomial) -> Polynomial {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Polynomial {
        self.scale(self.field.neg(Fe::ONE))
    }

    pub fn scale(&self, c: Fe) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(&self.field, self.n);
        }
        let terms = self.terms.iter().map(|(m, &a)| (m.clone(), self.field.mul(a, c))).collect();
        Polynomial { field: self.field.clone(), n: self.n, terms }
    }

    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        self.check(other);
        let f = &self.field;
        let mut acc: HashMap<Monomial, Fe> = HashMap::with_capacity(self.len() * other.len());
        for (a, &x) in &self.terms {
            for (b, &y) in &other.terms {
                let e = acc.entry(a.mul(b)).or_insert(Fe::ZERO);
                *e = f.add(*e, f.mul(x, y));
            }
        }
        let terms = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        Polynomial { field: f.clone(), n: self.n, terms }
    }

    pub fn mul_monomial(&self, m: &Monomial, c: Fe) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(&self.field, self.n);
        }
        let terms = self.terms.iter().map(|(a, &x)| (a.mul(m), self.field.mul(x, c))).collect();
        Polynomial { field: self.field.clone(), n: self.n, terms }
    }

    pub fn pow(&self, e: u32) -> Polynomial {
        let mut out = Polynomial::one(&self.field, self.n);
        for _ in 0..e {
            out = out.mul(self);
        }
        out
    }

    /// Applies `c -> f(c)` to every coefficient (e.g. a field automorphism).
    pub fn map_coefficients(&self, f: impl Fn(Fe) -> Fe) -> Polynomial {
        let terms = self.terms.iter().map(|(m, &c)| (m.clone(), f(c))).filter(|(_, c)| !c.is_zero()).collect();
        Polynomial { field: self.field.clone(), n: self.n, terms }
    }

    /// Linear change of variables `x_j -> sum_i s[j][i] y_i` where `s` is
    /// `n x m`; the result lives in `m` variables.
    pub fn substitute(&self, s: &Matrix) -> Result<Polynomial> {
        if s.rows() != self.n {
            return Err(Error::Shape(format!("substitution has {} rows, ring has {} variables", s.rows(), self.n)));
        }
        let m = s.cols();
        let mut out = Polynomial::zero(&self.field, m);
        for d in self.degrees() {
            let comp: Vec<(&Monomial, Fe)> =
                self.terms.iter().filter(|(mm, _)| mm.degree() == d).map(|(mm, &c)| (mm, c)).collect();
            if comp.len() > 24 && d > 1 {
                let map = degree_map(s, d);
                let img = map.apply(&self.field, &self.to_dense(d));
                out = out.add(&Polynomial::from_dense(&self.field, m, d, &img));
            } else {
                out = out.add(&self.substitute_sparse(s, &comp));
            }
        }
        Ok(out)
    }

    fn substitute_sparse(&self, s: &Matrix, terms: &[(&Monomial, Fe)]) -> Polynomial {
        let m = s.cols();
        let images: Vec<Polynomial> = (0..self.n).map(|j| Polynomial::linear_form(&self.field, s.row(j))).collect();
        let mut powers: HashMap<(usize, u32), Polynomial> = HashMap::new();
        let mut out = Polynomial::zero(&self.field, m);
        for &(mono, c) in terms {
            let mut t = Polynomial::constant(&self.field, m, c);
            for (j, &e) in mono.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let pw = powers.entry((j, e)).or_insert_with(|| images[j].pow(e));
                t = t.mul(pw);
            }
            out = out.add(&t);
        }
        out
    }

    /// `(g . f)(v) = f(g^{-1} v)`.
    pub fn act(&self, g: &Matrix) -> Result<Polynomial> {
        if !g.is_square() || g.rows() != self.n {
            return Err(Error::Shape(format!("{}x{} matrix on {} variables", g.rows(), g.cols(), self.n)));
        }
        self.substitute(&g.inverse()?)
    }

    /// Like [`act`](Self::act) with `g^{-1}` supplied by the caller.
    pub fn act_by_inverse(&self, g_inv: &Matrix) -> Result<Polynomial> {
        self.substitute(g_inv)
    }

    /// Exact quotient `self / ell`, or `None` when `ell` does not divide.
    pub fn divide_by_linear(&self, ell: &Polynomial) -> Result<Option<Polynomial>> {
        self.check(ell);
        let c = ell.linear_coefficients().filter(|c| c.iter().any(|a| !a.is_zero()));
        let Some(c) = c else {
            return Err(Error::NotLinear(ell.to_string()));
        };
        let f = &self.field;
        let k = c.iter().rposition(|a| !a.is_zero()).unwrap();
        let ck_inv = f.inv(c[k]).unwrap();
        let mut rem = self.clone();
        let mut quot = Polynomial::zero(f, self.n);
        loop {
            let pick = rem.terms.iter().filter(|(m, _)| m.0[k] > 0).max_by_key(|(m, _)| m.0[k]).map(|(m, &a)| (m.clone(), a));
            let Some((mut m, a)) = pick else { break };
            m.0[k] -= 1;
            let q = f.mul(a, ck_inv);
            rem = rem.sub(&ell.mul_monomial(&m, q));
            quot.add_term(m, q);
        }
        Ok(if rem.is_zero() { Some(quot) } else { None })
    }

    /// Largest `e` with `ell^e | self` (for nonzero `self`).
    pub fn valuation(&self, ell: &Polynomial) -> Result<u32> {
        if self.is_zero() {
            return Err(Error::Precondition("valuation of zero".into()));
        }
        let mut f = self.clone();
        let mut e = 0;
        while let Some(q) = f.divide_by_linear(ell)? {
            f = q;
            e += 1;
        }
        Ok(e)
    }

    /// Restriction to the subspace spanned by `basis` (vectors in `k^n`),
    /// as a polynomial in coordinates `t_1..t_k` along that basis.
    pub fn restrict(&self, basis: &[Vec<Fe>]) -> Result<Polynomial> {
        let s = Matrix::from_fn(&self.field, self.n, basis.len(), |j, k| basis[k][j]);
        self.substitute(&s)
    }

    /// Value at a point.
    pub fn evaluate(&self, v: &[Fe]) -> Fe {
        let f = &self.field;
        let mut acc = Fe::ZERO;
        for (m, &c) in &self.terms {
            let mut t = c;
            for (j, &e) in m.0.iter().enumerate() {
                t = f.mul(t, f.pow(v[j], e as u64));
            }
            acc = f.add(acc, t);
        }
        acc
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, &c)) in self.terms.iter().rev().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            if m.degree() == 0 {
                write!(f, "{}", self.field.format(c))?;
            } else if c == Fe::ONE {
                write!(f, "{m}")?;
            } else {
                write!(f, "{}*{m}", self.field.format(c))?;
            }
        }
        Ok(())
    }
}

impl serde::Serialize for Polynomial {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}
