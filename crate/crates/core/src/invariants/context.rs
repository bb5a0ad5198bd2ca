//! Per-group caches: degreewise action maps, invariant spaces and a
//! subgroup chain for fast transfers.

use std::cell::RefCell;
use std::collections::HashMap;
use std::rc::Rc;

use crate::error::{Error, Result};
use crate::field::{Fe, Field};
use crate::group::MatrixGroup;
use crate::invariants::character::Character;
use crate::invariants::Budget;
use crate::linalg::{Matrix, Subspace};
use crate::poly::{monomial_count, Polynomial, SparseMap, SubstitutionPowers};

/// One step `G_{i-1} < G_i` of a subgroup chain, with right coset
/// representatives of `G_{i-1}` in `G_i`.
#[derive(Clone, Debug)]
pub(crate) enum ChainStep {
    /// Representatives `1, g, .., g^{m-1}`.
    Powers { element: usize, count: usize },
    Reps(Vec<usize>),
}

/// A chain `1 = G_0 < G_1 < .. < G_r = G`.
#[derive(Clone, Debug)]
pub(crate) struct TransferPlan {
    pub steps: Vec<ChainStep>,
}

const TABLE_LIMIT: usize = 1500;

fn index_closure(start: &[bool], gens: &[usize], mul: &dyn Fn(usize, usize) -> usize) -> Vec<bool> {
    let mut member = start.to_vec();
    let mut queue: Vec<usize> = (0..member.len()).filter(|&i| member[i]).collect();
    while let Some(x) = queue.pop() {
        for &g in gens {
            let y = mul(x, g);
            if !member[y] {
                member[y] = true;
                queue.push(y);
            }
        }
    }
    member
}

impl TransferPlan {
    pub fn build(g: &MatrixGroup) -> TransferPlan {
        let n = g.order();
        let table: Option<Vec<u32>> = (n <= TABLE_LIMIT).then(|| {
            let mut t = vec![0u32; n * n];
            for i in 0..n {
                for j in 0..n {
                    t[i * n + j] = g.mul_index(i, j) as u32;
                }
            }
            t
        });
        let mul = |i: usize, j: usize| match &table {
            Some(t) => t[i * n + j] as usize,
            None => g.mul_index(i, j),
        };
        let id = g.identity_index();
        let mut member = vec![false; n];
        member[id] = true;
        let mut size = 1;
        let mut chain_gens: Vec<usize> = Vec::new();
        let mut steps = Vec::new();
        let gen_idx: Vec<usize> = g.generators().iter().map(|x| g.index_of(x).unwrap()).collect();
        while size < n {
            // With a table, pick the element giving the smallest next subgroup.
            let candidates: Vec<usize> = if table.is_some() {
                (0..n).filter(|&x| !member[x]).collect()
            } else {
                gen_idx.iter().copied().filter(|&x| !member[x]).take(1).collect()
            };
            let mut best: Option<(usize, Vec<bool>, usize)> = None;
            for &c in &candidates {
                let mut gens = chain_gens.clone();
                gens.push(c);
                let start: Vec<bool> = member.iter().enumerate().map(|(i, &m)| m || i == c).collect();
                let next = index_closure(&start, &gens, &mul);
                let s = next.iter().filter(|&&b| b).count();
                if best.as_ref().map_or(true, |b| s < b.2) {
                    best = Some((c, next, s));
                }
            }
            let (c, next, s) = best.unwrap();
            let m = s / size;
            let mut ok = true;
            let mut x = c;
            for _ in 1..m {
                if member[x] {
                    ok = false;
                    break;
                }
                x = mul(x, c);
            }
            if ok {
                steps.push(ChainStep::Powers { element: c, count: m });
            } else {
                let mut covered = vec![false; n];
                let mut reps = Vec::new();
                for y in 0..n {
                    if next[y] && !covered[y] {
                        reps.push(y);
                        for h in 0..n {
                            if member[h] {
                                covered[mul(h, y)] = true;
                            }
                        }
                    }
                }
                steps.push(ChainStep::Reps(reps));
            }
            chain_gens.push(c);
            member = next;
            size = s;
        }
        TransferPlan { steps }
    }
}

/// Caches for computations on one group.
pub struct Context<'g> {
    group: &'g MatrixGroup,
    pub budget: Budget,
    streams: RefCell<HashMap<usize, SubstitutionPowers>>,
    maps: RefCell<HashMap<(usize, u32), Rc<SparseMap>>>,
    invariants: RefCell<HashMap<u32, Rc<Subspace>>>,
    plan: RefCell<Option<Rc<TransferPlan>>>,
}

impl<'g> Context<'g> {
    pub fn new(group: &'g MatrixGroup, budget: Budget) -> Context<'g> {
        Context {
            group,
            budget,
            streams: RefCell::default(),
            maps: RefCell::default(),
            invariants: RefCell::default(),
            plan: RefCell::default(),
        }
    }

    pub fn group(&self) -> &'g MatrixGroup {
        self.group
    }

    pub fn field(&self) -> &'g Field {
        self.group.field()
    }

    pub fn n(&self) -> usize {
        self.group.degree()
    }

    /// Size of the degree `d` piece, or a budget error if it is too large.
    pub fn check_piece(&self, d: u32) -> Result<usize> {
        let len = monomial_count(self.n(), d);
        if d > self.budget.max_degree || len > self.budget.max_piece as u64 {
            return Err(Error::Budget(format!("degree {d} piece of dimension {len} exceeds the budget")));
        }
        Ok(len as usize)
    }

    /// `rho_d(g)` on the degree-`d` monomial basis: coefficients of `f` to
    /// coefficients of `g . f`.
    pub fn rho(&self, element: usize, d: u32) -> Rc<SparseMap> {
        if let Some(m) = self.maps.borrow().get(&(element, d)) {
            return m.clone();
        }
        let mut streams = self.streams.borrow_mut();
        let stream = streams.entry(element).or_insert_with(|| {
            let inv = self.group.element(self.group.inverse_index(element));
            SubstitutionPowers::new(inv)
        });
        if stream.degree() > d {
            let inv = self.group.element(self.group.inverse_index(element));
            *stream = SubstitutionPowers::new(inv);
        }
        let map = Rc::new(stream.seek(d).clone());
        self.maps.borrow_mut().insert((element, d), map.clone());
        map
    }

    pub(crate) fn plan(&self) -> Rc<TransferPlan> {
        self.plan.borrow_mut().get_or_insert_with(|| Rc::new(TransferPlan::build(self.group))).clone()
    }

    fn generator_indices(&self) -> Vec<usize> {
        self.group.generators().iter().map(|x| self.group.index_of(x).unwrap()).collect()
    }

    /// `{ v : rho_d(g) v = chi(g) v }` over the generators.
    pub fn semi_invariants(&self, chi: Option<&Character>, d: u32) -> Result<Subspace> {
        let len = self.check_piece(d)?;
        let f = self.field();
        let ops: Vec<(Rc<SparseMap>, Fe)> = self
            .generator_indices()
            .into_iter()
            .map(|i| (self.rho(i, d), chi.map_or(Fe::ONE, |c| c.value(i))))
            .collect();
        Ok(common_kernel(f, len, &ops))
    }

    pub fn invariants(&self, d: u32) -> Result<Rc<Subspace>> {
        if let Some(s) = self.invariants.borrow().get(&d) {
            return Ok(s.clone());
        }
        let s = Rc::new(self.semi_invariants(None, d)?);
        self.invariants.borrow_mut().insert(d, s.clone());
        Ok(s)
    }

    /// Basis of `A^G_d` as polynomials.
    pub fn invariant_basis(&self, d: u32) -> Result<Vec<Polynomial>> {
        let s = self.invariants(d)?;
        Ok(s.basis().iter().map(|v| Polynomial::from_dense(self.field(), self.n(), d, v)).collect())
    }

    /// `sum_sigma chi(sigma)^{-1} rho_d(sigma) v`, through the subgroup chain.
    pub fn twisted_transfer_vec(&self, chi: Option<&Character>, d: u32, v: &[Fe]) -> Vec<Fe> {
        let f = self.field();
        let plan = self.plan();
        let coef = |i: usize| chi.map_or(Fe::ONE, |c| f.inv(c.value(i)).unwrap());
        let mut cur = v.to_vec();
        for step in plan.steps.iter().rev() {
            match step {
                ChainStep::Powers { element, count } => {
                    let rho = self.rho(*element, d);
                    let c = coef(*element);
                    let mut acc = cur.clone();
                    for _ in 1..*count {
                        let mut next = cur.clone();
                        rho.apply_add(f, &acc, c, &mut next);
                        acc = next;
                    }
                    cur = acc;
                }
                ChainStep::Reps(reps) => {
                    let mut out = vec![Fe::ZERO; cur.len()];
                    for &t in reps {
                        if t == self.group.identity_index() {
                            f.axpy(&mut out, coef(t), &cur);
                        } else {
                            self.rho(t, d).apply_add(f, &cur, coef(t), &mut out);
                        }
                    }
                    cur = out;
                }
            }
        }
        cur
    }

    /// Twisted transfer of an arbitrary polynomial, degree by degree.
    pub fn twisted_transfer(&self, chi: Option<&Character>, p: &Polynomial) -> Polynomial {
        let mut out = Polynomial::zero(self.field(), self.n());
        for d in p.degrees() {
            let v = self.twisted_transfer_vec(chi, d, &p.to_dense(d));
            out = out.add(&Polynomial::from_dense(self.field(), self.n(), d, &v));
        }
        out
    }
}

/// `∩ ker(M_i - c_i I)` for square sparse maps on a space of dimension `len`.
pub(crate) fn common_kernel(f: &Field, len: usize, ops: &[(Rc<SparseMap>, Fe)]) -> Subspace {
    let mut basis: Vec<Vec<Fe>> = (0..len)
        .map(|i| {
            let mut e = vec![Fe::ZERO; len];
            e[i] = Fe::ONE;
            e
        })
        .collect();
    let mut first = true;
    for (m, c) in ops {
        if basis.is_empty() {
            break;
        }
        let images: Vec<Vec<Fe>> = if first {
            (0..len)
                .map(|j| {
                    let mut col = m.column_dense(j);
                    col[j] = f.sub(col[j], *c);
                    col
                })
                .collect()
        } else {
            basis
                .iter()
                .map(|v| {
                    let mut w = m.apply(f, v);
                    f.axpy(&mut w, f.neg(*c), v);
                    w
                })
                .collect()
        };
        first = false;
        let k = images.len();
        let mat = Matrix::from_fn(f, len, k, |r, j| images[j][r]);
        let combos = mat.kernel();
        basis = combos
            .iter()
            .map(|a| {
                let mut v = vec![Fe::ZERO; len];
                for (j, &aj) in a.iter().enumerate() {
                    if !aj.is_zero() {
                        f.axpy(&mut v, aj, &basis[j]);
                    }
                }
                v
            })
            .collect();
    }
    Subspace::from_vectors(f, len, basis)
}
