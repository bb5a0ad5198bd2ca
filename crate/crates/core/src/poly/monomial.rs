use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

/// Exponent vector of a monomial in `x_1, .., x_n`.
///
/// Ordered by degree, then graded reverse lexicographically with
/// `x_1 < x_2 < ... < x_n`: among monomials of equal degree, the one with the
/// smaller exponent of `x_1` is larger, ties broken on `x_2`, and so on.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn one(n: usize) -> Monomial {
        Monomial(vec![0; n])
    }

    pub fn var(n: usize, i: usize) -> Monomial {
        let mut e = vec![0; n];
        e[i] = 1;
        Monomial(e)
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| {
            for (a, b) in self.0.iter().zip(&other.0) {
                if a != b {
                    return b.cmp(a);
                }
            }
            Ordering::Equal
        })
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, &e) in self.0.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !first {
                write!(f, "*")?;
            }
            first = false;
            if e == 1 {
                write!(f, "x{}", i + 1)?;
            } else {
                write!(f, "x{}^{}", i + 1, e)?;
            }
        }
        if first {
            write!(f, "1")?;
        }
        Ok(())
    }
}

pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

/// Number of monomials of degree `d` in `n` variables.
pub fn monomial_count(n: usize, d: u32) -> u64 {
    if n == 0 {
        return u64::from(d == 0);
    }
    binomial(d as u64 + n as u64 - 1, n as u64 - 1)
}

/// The monomials of one degree in a fixed number of variables, in ascending
/// order, with index lookup and multiplication tables.
pub struct DegreeBasis {
    pub n: usize,
    pub degree: u32,
    monomials: Vec<Monomial>,
    index: HashMap<Vec<u32>, u32>,
    /// For each monomial: (first variable j with positive exponent, index
    /// of m / x_j in the previous degree). Empty in degree 0.
    down: Vec<(u32, u32)>,
    up: OnceLock<Vec<u32>>,
}

impl DegreeBasis {
    pub fn len(&self) -> usize {
        self.monomials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monomials.is_empty()
    }

    pub fn monomials(&self) -> &[Monomial] {
        &self.monomials
    }

    pub fn monomial(&self, i: usize) -> &Monomial {
        &self.monomials[i]
    }

    pub fn index_of(&self, exps: &[u32]) -> Option<usize> {
        self.index.get(exps).map(|&i| i as usize)
    }

    pub fn down(&self, i: usize) -> (usize, usize) {
        let (j, k) = self.down[i];
        (j as usize, k as usize)
    }

    /// Table `t[i * n + v]` = index of `monomial(i) * x_v` in the next degree.
    pub fn up(&self) -> &[u32] {
        self.up.get_or_init(|| {
            let next = degree_basis(self.n, self.degree + 1);
            let mut t = Vec::with_capacity(self.len() * self.n);
            let mut e = vec![0u32; self.n];
            for m in &self.monomials {
                for v in 0..self.n {
                    e.copy_from_slice(&m.0);
                    e[v] += 1;
                    t.push(next.index_of(&e).unwrap() as u32);
                }
            }
            t
        })
    }
}

fn enumerate(n: usize, d: u32) -> Vec<Monomial> {
    fn rec(n: usize, i: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Monomial>) {
        if i + 1 == n {
            cur[i] = left;
            out.push(Monomial(cur.clone()));
            return;
        }
        for e in 0..=left {
            cur[i] = e;
            rec(n, i + 1, left - e, cur, out);
        }
        cur[i] = 0;
    }
    if n == 0 {
        return if d == 0 { vec![Monomial(vec![])] } else { vec![] };
    }
    let mut out = Vec::new();
    rec(n, 0, d, &mut vec![0; n], &mut out);
    out.sort();
    out
}

type Cache = Mutex<HashMap<(usize, u32), Arc<DegreeBasis>>>;

fn cache() -> &'static Cache {
    static CACHE: OnceLock<Cache> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Shared basis of degree-`d` monomials in `n` variables.
pub fn degree_basis(n: usize, d: u32) -> Arc<DegreeBasis> {
    if let Some(b) = cache().lock().unwrap().get(&(n, d)) {
        return b.clone();
    }
    let monomials = enumerate(n, d);
    let index: HashMap<Vec<u32>, u32> =
        monomials.iter().enumerate().map(|(i, m)| (m.0.clone(), i as u32)).collect();
    let down = if d == 0 {
        Vec::new()
    } else {
        let prev = degree_basis(n, d - 1);
        monomials
            .iter()
            .map(|m| {
                let j = m.0.iter().position(|&e| e > 0).unwrap();
                let mut e = m.0.clone();
                e[j] -= 1;
                (j as u32, prev.index_of(&e).unwrap() as u32)
            })
            .collect()
    };
    let basis = Arc::new(DegreeBasis { n, degree: d, monomials, index, down, up: OnceLock::new() });
    cache().lock().unwrap().entry((n, d)).or_insert(basis).clone()
}

/// All monomials of degree `d` in `n` variables in ascending order.
pub fn homogeneous_basis(n: usize, d: u32) -> Vec<Monomial> {
    degree_basis(n, d).monomials().to_vec()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts() {
        assert_eq!(homogeneous_basis(2, 0).len(), 1);
        assert_eq!(homogeneous_basis(2, 3).len(), 4);
        assert_eq!(homogeneous_basis(3, 4).len(), 15);
        for n in 1..5 {
            for d in 0..7 {
                assert_eq!(homogeneous_basis(n, d).len() as u64, monomial_count(n, d));
            }
        }
    }

    #[test]
    fn variable_order() {
        let x1 = Monomial::var(3, 0);
        let x2 = Monomial::var(3, 1);
        let x3 = Monomial::var(3, 2);
        assert!(x1 < x2 && x2 < x3);
        // grevlex: x2^2 > x1*x3 since x1 has smaller exponent in x2^2
        assert!(Monomial(vec![0, 2, 0]) > Monomial(vec![1, 0, 1]));
        assert!(Monomial(vec![0, 0, 1]) < Monomial(vec![2, 0, 0]));
    }

    #[test]
    fn order_is_multiplicative() {
        let ms = homogeneous_basis(3, 3);
        let w = Monomial(vec![1, 0, 2]);
        for a in &ms {
            for b in &ms {
                assert_eq!(a.cmp(b), a.mul(&w).cmp(&b.mul(&w)));
            }
        }
    }

    #[test]
    fn up_and_down_tables_agree() {
        let b = degree_basis(3, 4);
        let next = degree_basis(3, 5);
        for i in 0..b.len() {
            for v in 0..3 {
                let j = b.up()[i * 3 + v] as usize;
                assert_eq!(next.monomial(j), &b.monomial(i).mul(&Monomial::var(3, v)));
            }
        }
        for i in 0..next.len() {
            let (v, k) = next.down(i);
            assert_eq!(b.monomial(k).mul(&Monomial::var(3, v)), *next.monomial(i));
        }
    }
}
