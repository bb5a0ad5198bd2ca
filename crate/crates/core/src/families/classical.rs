//! Point stabilizers in finite classical groups.

use crate::error::{Error, Result};
use crate::field::{prime_power, Fe, Field};
use crate::group::{enumeration_cap, MatrixGroup};
use crate::linalg::Matrix;

fn field_of_order(q: u32) -> Result<Field> {
    Field::of_order(q).map_err(|e| Error::InvalidParameters(format!("q = {q}: {e}")))
}

/// `GF(q^2)` for a prime power `q`.
pub fn unitary_field(q: u32) -> Result<Field> {
    let (p, r) = prime_power(q).ok_or_else(|| Error::InvalidParameters(format!("q = {q} is not a prime power")))?;
    Field::new(p, 2 * r)
}

/// `[[I, 0], [B, I]]`.
pub fn block_lower(b: &Matrix) -> Matrix {
    let n = b.rows();
    let f = b.field();
    Matrix::from_fn(f, 2 * n, 2 * n, |i, j| {
        if i == j {
            Fe::ONE
        } else if i >= n && j < n {
            b[(i - n, j)]
        } else {
            Fe::ZERO
        }
    })
}

/// `diag(A, D)`.
pub fn block_diagonal(a: &Matrix, d: &Matrix) -> Matrix {
    let n = a.rows();
    let m = d.rows();
    Matrix::from_fn(a.field(), n + m, n + m, |i, j| {
        if i < n && j < n {
            a[(i, j)]
        } else if i >= n && j >= n {
            d[(i - n, j - n)]
        } else {
            Fe::ZERO
        }
    })
}

fn unit(f: &Field, n: usize, i: usize, j: usize, c: Fe) -> Matrix {
    Matrix::from_fn(f, n, n, |r, s| if (r, s) == (i, j) { c } else { Fe::ZERO })
}

fn check_order(g: &MatrixGroup, expected: u64) -> Result<()> {
    if g.order() as u64 != expected {
        return Err(Error::Precondition(format!("constructed order {} differs from {expected}", g.order())));
    }
    Ok(())
}

fn closure_checked(f: &Field, n: usize, gens: Vec<Matrix>, expected: u64) -> Result<MatrixGroup> {
    let cap = enumeration_cap();
    if expected > cap as u64 {
        return Err(Error::CapExceeded { cap, reached: 0 });
    }
    let g = MatrixGroup::closure(f, n, gens, cap)?;
    check_order(&g, expected)?;
    Ok(g)
}

/// The stabilizers attached to `GU_3(q)`.
#[derive(Clone, Debug)]
pub struct Gu3 {
    pub q: u32,
    pub field: Field,
    /// `H`: the point stabilizer of `<e_3>` in `GU_3(q)`.
    pub h: MatrixGroup,
    /// The subgroup where `b = 1`.
    pub h_tilde: MatrixGroup,
    pub tau: Matrix,
    /// Primitive `(q+1)`-st root of unity with `tau = diag(1, eta^-1, 1)`.
    pub eta: Fe,
}

impl Gu3 {
    /// `H_m = <H~, tau^m>` for `m | q + 1`.
    pub fn h_m(&self, m: u32) -> Result<MatrixGroup> {
        if m == 0 || (self.q + 1) % m != 0 {
            return Err(Error::InvalidParameters(format!("m = {m} does not divide q + 1 = {}", self.q + 1)));
        }
        let mut gens = self.h_tilde.generators().to_vec();
        gens.push(self.tau.pow(m as u64)?);
        closure_checked(&self.field, 3, gens, (self.q as u64).pow(3) * ((self.q + 1) / m) as u64)
    }

    /// The hermitian form preserved by `H`.
    pub fn gram(&self) -> Matrix {
        super::forms::antidiagonal(&self.field, 3)
    }
}

/// `H = { [[1,0,0],[a,b,0],[c,d,1]] : b^{q+1} = 1, d = -b a^q, c + c^q + a^{q+1} = 0 }`.
pub fn gu3_stabilizers(q: u32) -> Result<Gu3> {
    let f = unitary_field(q)?;
    let qq = q as u64;
    if (qq + 1) * qq.pow(3) > enumeration_cap() as u64 {
        return Err(Error::CapExceeded { cap: enumeration_cap(), reached: 0 });
    }
    let mut all = Vec::new();
    let mut tilde = Vec::new();
    for a in f.elements() {
        let aq = f.pow(a, qq);
        let rhs = f.neg(f.mul(a, aq));
        let cs: Vec<Fe> = f.elements().filter(|&c| f.add(c, f.pow(c, qq)) == rhs).collect();
        for b in f.elements().filter(|&b| !b.is_zero() && f.pow(b, qq + 1) == Fe::ONE) {
            let d = f.neg(f.mul(b, aq));
            for &c in &cs {
                let g = Matrix::from_rows(
                    &f,
                    &[vec![Fe::ONE, Fe::ZERO, Fe::ZERO], vec![a, b, Fe::ZERO], vec![c, d, Fe::ONE]],
                )?;
                if b == Fe::ONE {
                    tilde.push(g.clone());
                }
                all.push(g);
            }
        }
    }
    let h = MatrixGroup::from_elements(&f, 3, all)?;
    let h_tilde = MatrixGroup::from_elements(&f, 3, tilde)?;
    check_order(&h, (qq + 1) * qq.pow(3))?;
    check_order(&h_tilde, qq.pow(3))?;
    let eta = f.gen_pow(q as i64 - 1);
    let tau = Matrix::from_rows(
        &f,
        &[
            vec![Fe::ONE, Fe::ZERO, Fe::ZERO],
            vec![Fe::ZERO, f.inv(eta).unwrap(), Fe::ZERO],
            vec![Fe::ZERO, Fe::ZERO, Fe::ONE],
        ],
    )?;
    Ok(Gu3 { q, field: f, h, h_tilde, tau, eta })
}

/// The abelian transvection group `G_n` over `GF(q^2)` with its normalizer
/// generators.
#[derive(Clone, Debug)]
pub struct UnitaryTransvectionFamily {
    pub q: u32,
    pub n: usize,
    pub group: MatrixGroup,
    pub normalizer: Vec<Matrix>,
}

/// `G_n = { [[I, 0], [B, I]] : conj(B) = -B^T }` over `GF(q^2)`, order `q^{n^2}`.
pub fn unitary_transvection_family(q: u32, n: usize) -> Result<UnitaryTransvectionFamily> {
    if n < 2 {
        return Err(Error::InvalidParameters(format!("need 2n >= 4, got n = {n}")));
    }
    let f = unitary_field(q)?;
    let qq = q as u64;
    let trace_zero: Vec<Fe> = f.elements().filter(|&b| f.add(b, f.pow(b, qq)).is_zero()).collect();
    let diagonal = additive_basis(&f, &trace_zero);
    let off = prime_basis(&f);
    let mut gens = Vec::new();
    for i in 0..n {
        for &b0 in &diagonal {
            gens.push(block_lower(&unit(&f, n, i, i, b0)));
        }
        for j in i + 1..n {
            for &z in &off {
                let mut b = unit(&f, n, i, j, z);
                b[(j, i)] = f.neg(f.pow(z, qq));
                gens.push(block_lower(&b));
            }
        }
    }
    let group = closure_checked(&f, 2 * n, gens, qq.pow((n * n) as u32))?;
    let mut normalizer = Vec::new();
    let mut lift = |a: &Matrix| -> Result<()> {
        let abar = a.map(|x| f.pow(x, qq));
        normalizer.push(block_diagonal(a, &abar.inverse()?.transpose()));
        Ok(())
    };
    let mut d = Matrix::identity(&f, n);
    d[(0, 0)] = f.primitive();
    lift(&d)?;
    let mut t = Matrix::identity(&f, n);
    t[(1, 0)] = Fe::ONE;
    lift(&t)?;
    let cycle = Matrix::from_fn(&f, n, n, |i, j| if i == (j + 1) % n { Fe::ONE } else { Fe::ZERO });
    lift(&cycle)?;
    Ok(UnitaryTransvectionFamily { q, n, group, normalizer })
}

/// `{ [[I, 0], [B, I]] }` over `F_q` with `B` ranging over an `F_q`-basis
/// of the given shapes.
fn block_family(f: &Field, m: usize, shapes: Vec<Matrix>, expected: u64) -> Result<MatrixGroup> {
    let mut gens = Vec::new();
    for b in shapes {
        for c in prime_basis(f) {
            gens.push(block_lower(&b.scale(c)));
        }
    }
    closure_checked(f, 2 * m, gens, expected)
}

/// A basis over `F_p` of the additive group spanned by `elems`.
fn additive_basis(f: &Field, elems: &[Fe]) -> Vec<Fe> {
    let mut span = std::collections::HashSet::from([Fe::ZERO]);
    let mut basis = Vec::new();
    for &e in elems {
        if span.contains(&e) {
            continue;
        }
        basis.push(e);
        let old: Vec<Fe> = span.iter().copied().collect();
        for s in old {
            let mut t = s;
            for _ in 1..f.characteristic() {
                t = f.add(t, e);
                span.insert(t);
            }
        }
    }
    basis
}

/// Powers of the primitive element spanning `F_q` over `F_p`.
fn prime_basis(f: &Field) -> Vec<Fe> {
    (0..f.degree() as i64).map(|k| f.gen_pow(k)).collect()
}

/// Symmetric `B` (symplectic stabilizer, also the abelian group `G_m` over
/// `F_q`): order `q^{m(m+1)/2}`.
pub fn symplectic_stabilizer(q: u32, m: usize) -> Result<MatrixGroup> {
    if m < 1 {
        return Err(Error::InvalidParameters("m must be positive".into()));
    }
    let f = field_of_order(q)?;
    let mut shapes = Vec::new();
    for i in 0..m {
        for j in i..m {
            let mut b = unit(&f, m, i, j, Fe::ONE);
            b[(j, i)] = Fe::ONE;
            shapes.push(b);
        }
    }
    block_family(&f, m, shapes, (q as u64).pow((m * (m + 1) / 2) as u32))
}

/// Alternating `B = -B^T`, `q` odd: order `q^{m(m-1)/2}`.
pub fn orthogonal_plus_stabilizer_odd(q: u32, m: usize) -> Result<MatrixGroup> {
    let f = field_of_order(q)?;
    if f.characteristic() == 2 {
        return Err(Error::InvalidParameters(format!("q = {q} must be odd")));
    }
    let mut shapes = Vec::new();
    for i in 0..m {
        for j in i + 1..m {
            let mut b = unit(&f, m, i, j, Fe::ONE);
            b[(j, i)] = f.neg(Fe::ONE);
            shapes.push(b);
        }
    }
    block_family(&f, m, shapes, (q as u64).pow((m * m.saturating_sub(1) / 2) as u32))
}

/// Symmetric `B` with zero diagonal, `q` even: order `q^{m(m-1)/2}`.
pub fn orthogonal_plus_stabilizer_even(q: u32, m: usize) -> Result<MatrixGroup> {
    let f = field_of_order(q)?;
    if f.characteristic() != 2 {
        return Err(Error::InvalidParameters(format!("q = {q} must be even")));
    }
    let mut shapes = Vec::new();
    for i in 0..m {
        for j in i + 1..m {
            let mut b = unit(&f, m, i, j, Fe::ONE);
            b[(j, i)] = Fe::ONE;
            shapes.push(b);
        }
    }
    block_family(&f, m, shapes, (q as u64).pow((m * m.saturating_sub(1) / 2) as u32))
}

/// Stabilizers of `<e_3>` in the orthogonal group of `2 x_1 x_3 + x_2^2`.
#[derive(Clone, Debug)]
pub struct Go3 {
    pub q: u32,
    /// `a = +-1`: order `2q`.
    pub h: MatrixGroup,
    /// `a = 1`: order `q`.
    pub h_minus: MatrixGroup,
}

/// `[[1,0,0],[-b,a,0],[-b^2/2, ab, 1]]`.
pub fn go3_element(f: &Field, a: Fe, b: Fe) -> Result<Matrix> {
    let half = f.inv(f.from_int(2)).ok_or_else(|| Error::InvalidParameters("q must be odd".into()))?;
    let c = f.neg(f.mul(f.mul(b, b), half));
    Matrix::from_rows(
        f,
        &[vec![Fe::ONE, Fe::ZERO, Fe::ZERO], vec![f.neg(b), a, Fe::ZERO], vec![c, f.mul(a, b), Fe::ONE]],
    )
}

pub fn go3_stabilizers(q: u32) -> Result<Go3> {
    let f = field_of_order(q)?;
    if f.characteristic() == 2 {
        return Err(Error::InvalidParameters(format!("q = {q} must be odd")));
    }
    let minus_one = f.neg(Fe::ONE);
    let mut gens_minus = Vec::new();
    for c in prime_basis(&f) {
        gens_minus.push(go3_element(&f, Fe::ONE, c)?);
    }
    let h_minus = closure_checked(&f, 3, gens_minus.clone(), q as u64)?;
    let mut gens = gens_minus;
    gens.push(go3_element(&f, minus_one, Fe::ZERO)?);
    let h = closure_checked(&f, 3, gens, 2 * q as u64)?;
    Ok(Go3 { q, h, h_minus })
}
