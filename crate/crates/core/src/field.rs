//! Finite fields GF(p^r).
//!
//! An element is stored as the integer `c_0 + c_1 p + ... + c_{r-1} p^{r-1}`
//! where `c_0 + c_1 t + ...` is its residue modulo the field's modulus. The
//! prime subfield is therefore `0..p`, and `0`/`1` are the additive and
//! multiplicative identities in every field.
//!
//! Fields are cheap to clone (shared tables) and immutable after
//! construction.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Largest field order supported.
pub const MAX_FIELD_ORDER: u32 = 1 << 16;

/// Full addition/multiplication tables are built up to this order.
const TABLE_LIMIT: u32 = 1024;

/// A field element, interpreted relative to a [`Field`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Fe(pub u16);

impl Fe {
    pub const ZERO: Fe = Fe(0);
    pub const ONE: Fe = Fe(1);

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

struct FieldInner {
    p: u32,
    r: u32,
    order: u32,
    /// Monic modulus, constant term first, length r + 1.
    modulus: Vec<u32>,
    /// exp[k] = g^k for the fixed primitive element g, k in 0..2(q-1).
    exp: Vec<u16>,
    /// log[a] for a != 0.
    log: Vec<u32>,
    add: Vec<u16>,
    mul: Vec<u16>,
    neg: Vec<u16>,
    inv: Vec<u16>,
}

/// The finite field GF(p^r) with a canonical modulus.
#[derive(Clone)]
pub struct Field(Arc<FieldInner>);

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.p == other.0.p && self.0.r == other.0.r && self.0.modulus == other.0.modulus)
    }
}

impl Eq for Field {}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({}^{})", self.0.p, self.0.r)
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.r == 1 {
            write!(f, "GF({})", self.0.p)
        } else {
            write!(f, "GF({}^{})", self.0.p, self.0.r)
        }
    }
}

pub fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Splits `q` into `(p, r)` with `q = p^r`, or `None` if `q` is not a prime power.
pub fn prime_power(q: u32) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|d| q % d == 0)?;
    let (mut rest, mut r) = (q, 0);
    while rest % p == 0 {
        rest /= p;
        r += 1;
    }
    (rest == 1).then_some((p, r))
}

// ---- dense polynomials over F_p, constant term first ----

fn poly_trim(a: &mut Vec<u32>) {
    while a.len() > 1 && *a.last().unwrap() == 0 {
        a.pop();
    }
}

fn poly_rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    // m monic
    let mut a = a.to_vec();
    let dm = m.len() - 1;
    while a.len() > dm && a.len() > 1 {
        let lead = *a.last().unwrap();
        let shift = a.len() - 1 - dm;
        if lead != 0 {
            for (i, &c) in m.iter().enumerate() {
                let t = (a[shift + i] + p * p - (lead * c) % p) % p;
                a[shift + i] = t;
            }
        }
        a.pop();
    }
    poly_trim(&mut a);
    a
}

fn poly_mulmod(a: &[u32], b: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    let mut out = vec![0u32; a.len() + b.len()];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y) % p;
        }
    }
    poly_trim(&mut out);
    poly_rem(&out, m, p)
}

/// Monic polynomials of exact degree `d` over F_p.
fn monic_polys(p: u32, d: usize) -> impl Iterator<Item = Vec<u32>> {
    let count = (p as u64).pow(d as u32);
    (0..count).map(move |mut k| {
        let mut c = Vec::with_capacity(d + 1);
        for _ in 0..d {
            c.push((k % p as u64) as u32);
            k /= p as u64;
        }
        c.push(1);
        c
    })
}

/// Irreducibility by trial division against all monic polynomials of degree
/// at most `deg / 2`.
pub fn is_irreducible(poly: &[u32], p: u32) -> bool {
    let deg = poly.len() - 1;
    if deg == 0 {
        return false;
    }
    for d in 1..=deg / 2 {
        for divisor in monic_polys(p, d) {
            if poly_rem(poly, &divisor, p).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

fn encode(coeffs: &[u32], p: u32) -> u32 {
    coeffs.iter().rev().fold(0, |acc, &c| acc * p + c)
}

fn decode(mut v: u32, p: u32, r: u32) -> Vec<u32> {
    let mut c = Vec::with_capacity(r as usize);
    for _ in 0..r {
        c.push(v % p);
        v /= p;
    }
    c
}

impl Field {
    /// The field GF(p^r) with the lexicographically smallest (constant term
    /// first) monic irreducible modulus of degree `r`.
    pub fn new(p: u32, r: u32) -> Result<Field> {
        if !is_prime(p) {
            return Err(Error::InvalidField(format!("{p} is not prime")));
        }
        if r == 0 {
            return Err(Error::InvalidField("extension degree must be at least 1".into()));
        }
        let order = (p as u64).checked_pow(r).filter(|&q| q <= MAX_FIELD_ORDER as u64);
        let Some(order) = order else {
            return Err(Error::InvalidField(format!("{p}^{r} exceeds {MAX_FIELD_ORDER}")));
        };
        let modulus = if r == 1 {
            vec![0, 1]
        } else {
            // tuples (c_0, .., c_{r-1}) in lexicographic order: c_0 varies slowest
            let count = order as u32;
            (0..count)
                .map(|k| {
                    let mut c = decode(k, p, r);
                    c.reverse();
                    c.push(1);
                    c
                })
                .find(|m| is_irreducible(m, p))
                .expect("an irreducible polynomial of every degree exists")
        };
        Ok(Self::with_modulus(p, r, order as u32, modulus))
    }

    /// GF(q) for a prime power q.
    pub fn of_order(q: u32) -> Result<Field> {
        let (p, r) = prime_power(q).ok_or_else(|| Error::InvalidField(format!("{q} is not a prime power")))?;
        Field::new(p, r)
    }

    fn with_modulus(p: u32, r: u32, order: u32, modulus: Vec<u32>) -> Field {
        let q1 = order - 1;
        let mul_raw = |a: u32, b: u32| -> u32 {
            if r == 1 {
                ((a as u64 * b as u64) % p as u64) as u32
            } else {
                let prod = poly_mulmod(&decode(a, p, r), &decode(b, p, r), &modulus, p);
                encode(&prod, p)
            }
        };
        // smallest primitive element
        let mut exp = Vec::new();
        for g in 1..order {
            let mut powers = Vec::with_capacity(q1 as usize);
            let mut x = 1u32;
            let mut ok = true;
            for k in 0..q1 {
                if k > 0 && x == 1 {
                    ok = false;
                    break;
                }
                powers.push(x as u16);
                x = mul_raw(x, g);
            }
            if ok && x == 1 {
                exp = powers;
                break;
            }
        }
        let mut log = vec![0u32; order as usize];
        for (k, &v) in exp.iter().enumerate() {
            log[v as usize] = k as u32;
        }
        let doubled: Vec<u16> = exp.iter().chain(exp.iter()).copied().collect();

        let add_raw = |a: u32, b: u32| -> u32 {
            if p == 2 {
                a ^ b
            } else {
                let (x, y) = (decode(a, p, r), decode(b, p, r));
                let s: Vec<u32> = x.iter().zip(&y).map(|(u, v)| (u + v) % p).collect();
                encode(&s, p)
            }
        };
        let neg: Vec<u16> = (0..order)
            .map(|a| encode(&decode(a, p, r).iter().map(|&c| (p - c) % p).collect::<Vec<_>>(), p) as u16)
            .collect();
        let mut inv = vec![0u16; order as usize];
        for a in 1..order {
            let l = log[a as usize];
            inv[a as usize] = doubled[((q1 - l) % q1) as usize];
        }
        let (add, mul) = if order <= TABLE_LIMIT {
            let n = order as usize;
            let mut add = vec![0u16; n * n];
            let mut mul = vec![0u16; n * n];
            for a in 0..order {
                for b in 0..order {
                    let i = a as usize * n + b as usize;
                    add[i] = add_raw(a, b) as u16;
                    mul[i] = if a == 0 || b == 0 {
                        0
                    } else {
                        doubled[(log[a as usize] + log[b as usize]) as usize]
                    };
                }
            }
            (add, mul)
        } else {
            (Vec::new(), Vec::new())
        };
        Field(Arc::new(FieldInner {
            p,
            r,
            order,
            modulus,
            exp: doubled,
            log,
            add,
            mul,
            neg,
            inv,
        }))
    }

    pub fn characteristic(&self) -> u32 {
        self.0.p
    }

    pub fn degree(&self) -> u32 {
        self.0.r
    }

    pub fn order(&self) -> u32 {
        self.0.order
    }

    pub fn modulus(&self) -> &[u32] {
        &self.0.modulus
    }

    pub fn is_prime_field(&self) -> bool {
        self.0.r == 1
    }

    pub fn elements(&self) -> impl Iterator<Item = Fe> {
        (0..self.0.order).map(|v| Fe(v as u16))
    }

    /// The fixed primitive element `g`.
    pub fn primitive(&self) -> Fe {
        Fe(self.0.exp[1.min(self.0.order as usize - 2)])
    }

    /// `g^k` for the primitive element `g`; `k` may be negative.
    pub fn gen_pow(&self, k: i64) -> Fe {
        let q1 = (self.0.order - 1) as i64;
        Fe(self.0.exp[k.rem_euclid(q1) as usize])
    }

    /// Discrete logarithm to the base of the primitive element.
    pub fn log(&self, a: Fe) -> Option<u32> {
        (!a.is_zero()).then(|| self.0.log[a.index()])
    }

    /// Image of an integer in the prime subfield.
    pub fn from_int(&self, n: i64) -> Fe {
        Fe(n.rem_euclid(self.0.p as i64) as u16)
    }

    pub fn coefficients(&self, a: Fe) -> Vec<u32> {
        decode(a.0 as u32, self.0.p, self.0.r)
    }

    pub fn from_coefficients(&self, coeffs: &[u32]) -> Fe {
        let mut c: Vec<u32> = coeffs.iter().map(|&x| x % self.0.p).collect();
        c.resize(self.0.r as usize, 0);
        Fe(encode(&c, self.0.p) as u16)
    }

    #[inline]
    pub fn add(&self, a: Fe, b: Fe) -> Fe {
        let f = &*self.0;
        if !f.add.is_empty() {
            Fe(f.add[a.index() * f.order as usize + b.index()])
        } else if f.p == 2 {
            Fe(a.0 ^ b.0)
        } else {
            let (x, y) = (decode(a.0 as u32, f.p, f.r), decode(b.0 as u32, f.p, f.r));
            let s: Vec<u32> = x.iter().zip(&y).map(|(u, v)| (u + v) % f.p).collect();
            Fe(encode(&s, f.p) as u16)
        }
    }

    #[inline]
    pub fn neg(&self, a: Fe) -> Fe {
        Fe(self.0.neg[a.index()])
    }

    #[inline]
    pub fn sub(&self, a: Fe, b: Fe) -> Fe {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Fe, b: Fe) -> Fe {
        let f = &*self.0;
        if !f.mul.is_empty() {
            Fe(f.mul[a.index() * f.order as usize + b.index()])
        } else if a.is_zero() || b.is_zero() {
            Fe::ZERO
        } else {
            Fe(f.exp[(f.log[a.index()] + f.log[b.index()]) as usize])
        }
    }

    /// Multiplicative inverse; `None` for zero.
    #[inline]
    pub fn inv(&self, a: Fe) -> Option<Fe> {
        (!a.is_zero()).then(|| Fe(self.0.inv[a.index()]))
    }

    pub fn div(&self, a: Fe, b: Fe) -> Option<Fe> {
        self.inv(b).map(|bi| self.mul(a, bi))
    }

    pub fn pow(&self, a: Fe, e: u64) -> Fe {
        if e == 0 {
            return Fe::ONE;
        }
        if a.is_zero() {
            return Fe::ZERO;
        }
        let q1 = (self.0.order - 1) as u64;
        let l = (self.0.log[a.index()] as u64 * (e % q1)) % q1;
        Fe(self.0.exp[l as usize])
    }

    /// Multiplicative order of a nonzero element.
    pub fn element_order(&self, a: Fe) -> Option<u32> {
        let l = self.log(a)?;
        let q1 = self.0.order - 1;
        Some(q1 / gcd(l, q1))
    }

    /// `dst[i] += c * src[i]`.
    #[inline]
    pub fn axpy(&self, dst: &mut [Fe], c: Fe, src: &[Fe]) {
        if c.is_zero() {
            return;
        }
        let f = &*self.0;
        if !f.mul.is_empty() {
            let n = f.order as usize;
            let row = &f.mul[c.index() * n..(c.index() + 1) * n];
            if f.p == 2 {
                for (d, s) in dst.iter_mut().zip(src) {
                    d.0 ^= row[s.index()];
                }
            } else {
                for (d, s) in dst.iter_mut().zip(src) {
                    if !s.is_zero() {
                        d.0 = f.add[d.index() * n + row[s.index()] as usize];
                    }
                }
            }
        } else {
            for (d, s) in dst.iter_mut().zip(src) {
                if !s.is_zero() {
                    *d = self.add(*d, self.mul(c, *s));
                }
            }
        }
    }

    /// The Frobenius automorphism `a -> a^p`.
    pub fn frobenius(&self, a: Fe) -> Fe {
        self.pow(a, self.0.p as u64)
    }

    /// Order `q` of the subfield of index two; `None` for odd degree.
    pub fn half_order(&self) -> Option<u32> {
        (self.0.r % 2 == 0).then(|| self.0.p.pow(self.0.r / 2))
    }

    /// Conjugation `a -> a^q` of GF(q^2) over GF(q).
    pub fn conj(&self, a: Fe) -> Result<Fe> {
        let q = self.half_order().ok_or_else(|| {
            Error::InvalidField(format!("{self} is not a quadratic extension"))
        })?;
        Ok(self.pow(a, q as u64))
    }

    /// Relative norm `a^(q+1)` to GF(q).
    pub fn norm(&self, a: Fe) -> Result<Fe> {
        Ok(self.mul(a, self.conj(a)?))
    }

    /// Relative trace `a + a^q` to GF(q).
    pub fn trace(&self, a: Fe) -> Result<Fe> {
        Ok(self.add(a, self.conj(a)?))
    }

    /// Whether `a` lies in the subfield of order `p^s`.
    pub fn in_subfield(&self, a: Fe, s: u32) -> bool {
        self.pow(a, (self.0.p as u64).pow(s)) == a
    }

    /// Text form: decimal integers for prime fields, `0` or `g^k` otherwise.
    pub fn format(&self, a: Fe) -> String {
        if self.is_prime_field() {
            a.0.to_string()
        } else if a.is_zero() {
            "0".to_string()
        } else {
            format!("g^{}", self.0.log[a.index()])
        }
    }

    /// Parses the text form. Integers are accepted in every field and read
    /// in the prime subfield; `g`, `g^k` and `g^-k` are accepted in every
    /// field.
    pub fn parse(&self, s: &str) -> Result<Fe> {
        let s = s.trim();
        let bad = || Error::Parse(format!("bad field element {s:?} for {self}"));
        if let Some(rest) = s.strip_prefix('g') {
            if rest.is_empty() {
                return Ok(self.gen_pow(1));
            }
            let k: i64 = rest.strip_prefix('^').ok_or_else(bad)?.trim().parse().map_err(|_| bad())?;
            return Ok(self.gen_pow(k));
        }
        let (neg, digits) = match s.strip_prefix('-') {
            Some(d) => (true, d.trim()),
            None => (false, s),
        };
        let v: i64 = digits.parse().map_err(|_| bad())?;
        Ok(self.from_int(if neg { -v } else { v }))
    }

    /// Embedding of a subfield `sub` into `self`, sending the generator `t`
    /// of `sub` to the smallest root of its modulus in `self`.
    pub fn embedding_from(&self, sub: &Field) -> Result<Embedding> {
        if sub.0.p != self.0.p || self.0.r % sub.0.r != 0 {
            return Err(Error::InvalidField(format!("{sub} does not embed in {self}")));
        }
        let root = self
            .elements()
            .find(|&x| {
                let mut acc = Fe::ZERO;
                for &c in sub.0.modulus.iter().rev() {
                    acc = self.add(self.mul(acc, x), self.from_int(c as i64));
                }
                acc.is_zero()
            })
            .ok_or_else(|| Error::InvalidField(format!("no root of {sub} modulus in {self}")))?;
        let image = sub
            .elements()
            .map(|a| {
                let mut acc = Fe::ZERO;
                for &c in sub.coefficients(a).iter().rev() {
                    acc = self.add(self.mul(acc, root), self.from_int(c as i64));
                }
                acc
            })
            .collect();
        Ok(Embedding { source: sub.clone(), target: self.clone(), image })
    }
}

fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// A field homomorphism from a subfield into an extension.
#[derive(Clone, Debug)]
pub struct Embedding {
    pub source: Field,
    pub target: Field,
    image: Vec<Fe>,
}

impl Embedding {
    pub fn apply(&self, a: Fe) -> Fe {
        self.image[a.index()]
    }
}
