//! Finite matrix groups given by generators, fully enumerated.

use std::collections::{HashMap, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Fe, Field};
use crate::linalg::{fixed_space, Matrix, Subspace};

pub const DEFAULT_CAP: usize = 1_000_000;

/// Enumeration cap, overridable through the `MIL_CAP` environment variable.
pub fn enumeration_cap() -> usize {
    std::env::var("MIL_CAP").ok().and_then(|s| s.trim().parse().ok()).unwrap_or(DEFAULT_CAP)
}

/// `rank(g - I) = 1`.
pub fn is_pseudo_reflection(g: &Matrix) -> bool {
    g.sub(&Matrix::identity(g.field(), g.rows())).map(|d| d.rank() == 1).unwrap_or(false)
}

/// `rank(g - I) = 1` and `(g - I)^2 = 0`.
pub fn is_transvection(g: &Matrix) -> bool {
    match g.sub(&Matrix::identity(g.field(), g.rows())) {
        Ok(d) => d.rank() == 1 && d.mul(&d).map(|s| s.is_zero()).unwrap_or(false),
        Err(_) => false,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ElementInfo {
    pub order: u32,
    pub fixed_dim: usize,
    pub is_pseudo_reflection: bool,
    pub is_transvection: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Census {
    pub order: usize,
    pub pseudo_reflections: usize,
    pub transvections: usize,
    /// Pseudo-reflection counts keyed by element order.
    pub reflections_by_order: Vec<(u32, usize)>,
}

/// Right cosets `H g_i` of a subgroup.
#[derive(Clone, Debug)]
pub struct CosetDecomposition {
    pub representatives: Vec<usize>,
    /// `coset_of[j]` is the position in `representatives` of the coset of element `j`.
    pub coset_of: Vec<usize>,
}

/// Result of splitting off coordinates on which the group acts trivially.
#[derive(Clone, Debug)]
pub struct TrivialSplit {
    pub group: MatrixGroup,
    /// Coordinates kept, in order.
    pub kept: Vec<usize>,
    /// Fixed coordinates that were split off.
    pub removed: Vec<usize>,
    pub split: bool,
}

#[derive(Clone)]
pub struct MatrixGroup {
    field: Field,
    n: usize,
    generators: Vec<Matrix>,
    elements: Vec<Matrix>,
    index: HashMap<Vec<Fe>, usize>,
    info: Vec<ElementInfo>,
    inverse: Vec<usize>,
}

impl fmt::Debug for MatrixGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MatrixGroup(order {} in GL({}, {}))", self.order(), self.n, self.field.order())
    }
}

fn check_generators(field: &Field, n: usize, gens: &[Matrix]) -> Result<()> {
    for g in gens {
        if g.field() != field || g.rows() != n || g.cols() != n {
            return Err(Error::Shape(format!("generator is {}x{}, expected {n}x{n} over {field}", g.rows(), g.cols())));
        }
        if g.determinant()?.is_zero() {
            return Err(Error::Singular);
        }
    }
    Ok(())
}

fn enumerate(field: &Field, n: usize, gens: &[Matrix], cap: usize) -> Result<Vec<Matrix>> {
    let id = Matrix::identity(field, n);
    let mut seen: HashMap<Vec<Fe>, ()> = HashMap::new();
    seen.insert(id.entries().to_vec(), ());
    let mut out = vec![id.clone()];
    let mut queue = VecDeque::from([id]);
    while let Some(x) = queue.pop_front() {
        for g in gens {
            let y = x.mul(g)?;
            if seen.contains_key(y.entries()) {
                continue;
            }
            if out.len() >= cap {
                return Err(Error::CapExceeded { cap, reached: out.len() + 1 });
            }
            seen.insert(y.entries().to_vec(), ());
            out.push(y.clone());
            queue.push_back(y);
        }
    }
    Ok(out)
}

fn element_order(g: &Matrix, limit: usize) -> u32 {
    let mut x = g.clone();
    let mut k = 1u32;
    while !x.is_identity() {
        x = x.mul(g).unwrap();
        k += 1;
        assert!((k as usize) <= limit, "element order exceeds group order");
    }
    k
}

impl MatrixGroup {
    /// The group generated by `gens`, enumerated up to `cap` elements.
    pub fn closure(field: &Field, n: usize, gens: Vec<Matrix>, cap: usize) -> Result<MatrixGroup> {
        check_generators(field, n, &gens)?;
        let elements = enumerate(field, n, &gens, cap)?;
        Ok(MatrixGroup::assemble(field, n, gens, elements))
    }

    /// [`closure`](Self::closure) with the default cap.
    pub fn generate(field: &Field, n: usize, gens: Vec<Matrix>) -> Result<MatrixGroup> {
        MatrixGroup::closure(field, n, gens, enumeration_cap())
    }

    pub fn trivial(field: &Field, n: usize) -> MatrixGroup {
        MatrixGroup::assemble(field, n, Vec::new(), vec![Matrix::identity(field, n)])
    }

    /// Group from a set of matrices already closed under multiplication.
    /// Generators are chosen greedily in canonical order.
    pub fn from_elements(field: &Field, n: usize, mut elements: Vec<Matrix>) -> Result<MatrixGroup> {
        check_generators(field, n, &elements)?;
        elements.sort_by(|a, b| a.entries().cmp(b.entries()));
        elements.dedup_by(|a, b| a.entries() == b.entries());
        let set: HashMap<Vec<Fe>, ()> = elements.iter().map(|g| (g.entries().to_vec(), ())).collect();
        let mut gens: Vec<Matrix> = Vec::new();
        let mut current: HashMap<Vec<Fe>, ()> = HashMap::new();
        current.insert(Matrix::identity(field, n).entries().to_vec(), ());
        for g in &elements {
            if current.contains_key(g.entries()) {
                continue;
            }
            gens.push(g.clone());
            let sub = enumerate(field, n, &gens, elements.len() + 1)
                .map_err(|_| Error::NotSubgroup("element set is not closed".into()))?;
            current = sub.iter().map(|x| (x.entries().to_vec(), ())).collect();
            if current.keys().any(|k| !set.contains_key(k)) {
                return Err(Error::NotSubgroup("element set is not closed".into()));
            }
        }
        if current.len() != set.len() {
            return Err(Error::NotSubgroup("element set is not closed".into()));
        }
        Ok(MatrixGroup::assemble(field, n, gens, elements))
    }

    fn assemble(field: &Field, n: usize, generators: Vec<Matrix>, mut elements: Vec<Matrix>) -> MatrixGroup {
        elements.sort_by(|a, b| a.entries().cmp(b.entries()));
        let index: HashMap<Vec<Fe>, usize> =
            elements.iter().enumerate().map(|(i, g)| (g.entries().to_vec(), i)).collect();
        let limit = elements.len();
        let id = Matrix::identity(field, n);
        let info = elements
            .iter()
            .map(|g| {
                let d = g.sub(&id).unwrap();
                let rank = d.rank();
                ElementInfo {
                    order: element_order(g, limit),
                    fixed_dim: n - rank,
                    is_pseudo_reflection: rank == 1,
                    is_transvection: rank == 1 && d.mul(&d).unwrap().is_zero(),
                }
            })
            .collect();
        let inverse = elements.iter().map(|g| index[g.inverse().unwrap().entries()]).collect();
        MatrixGroup { field: field.clone(), n, generators, elements, index, info, inverse }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn generators(&self) -> &[Matrix] {
        &self.generators
    }

    pub fn elements(&self) -> &[Matrix] {
        &self.elements
    }

    pub fn element(&self, i: usize) -> &Matrix {
        &self.elements[i]
    }

    pub fn info(&self, i: usize) -> &ElementInfo {
        &self.info[i]
    }

    pub fn index_of(&self, g: &Matrix) -> Option<usize> {
        self.index.get(g.entries()).copied()
    }

    pub fn contains(&self, g: &Matrix) -> bool {
        self.index.contains_key(g.entries())
    }

    pub fn identity_index(&self) -> usize {
        self.index[Matrix::identity(&self.field, self.n).entries()]
    }

    pub fn inverse_index(&self, i: usize) -> usize {
        self.inverse[i]
    }

    /// Index of `elements[i] * elements[j]`.
    pub fn mul_index(&self, i: usize, j: usize) -> usize {
        self.index[self.elements[i].mul(&self.elements[j]).unwrap().entries()]
    }

    pub fn is_trivial(&self) -> bool {
        self.order() == 1
    }

    pub fn is_abelian(&self) -> bool {
        let gs = &self.generators;
        gs.iter().enumerate().all(|(i, a)| gs[i + 1..].iter().all(|b| a.mul(b).unwrap() == b.mul(a).unwrap()))
    }

    /// Order is a power of the characteristic.
    pub fn is_p_group(&self) -> bool {
        let p = self.field.characteristic() as usize;
        let mut m = self.order();
        while m % p == 0 {
            m /= p;
        }
        m == 1
    }

    pub fn is_nonmodular(&self) -> bool {
        self.order() % self.field.characteristic() as usize != 0
    }

    pub fn pseudo_reflections(&self) -> Vec<usize> {
        (0..self.order()).filter(|&i| self.info[i].is_pseudo_reflection).collect()
    }

    pub fn transvections(&self) -> Vec<usize> {
        (0..self.order()).filter(|&i| self.info[i].is_transvection).collect()
    }

    pub fn census(&self) -> Census {
        let mut by_order: Vec<(u32, usize)> = Vec::new();
        for i in self.pseudo_reflections() {
            let o = self.info[i].order;
            match by_order.iter_mut().find(|(k, _)| *k == o) {
                Some(slot) => slot.1 += 1,
                None => by_order.push((o, 1)),
            }
        }
        by_order.sort_unstable();
        Census {
            order: self.order(),
            pseudo_reflections: self.pseudo_reflections().len(),
            transvections: self.transvections().len(),
            reflections_by_order: by_order,
        }
    }

    /// Subgroup generated by the listed elements.
    pub fn subgroup(&self, indices: &[usize]) -> MatrixGroup {
        let gens: Vec<Matrix> = indices.iter().map(|&i| self.elements[i].clone()).collect();
        let elements = enumerate(&self.field, self.n, &gens, self.order()).expect("subgroup of a finite group");
        MatrixGroup::assemble(&self.field, self.n, gens, elements)
    }

    pub fn reflection_subgroup(&self) -> MatrixGroup {
        self.subgroup(&self.pseudo_reflections())
    }

    pub fn transvection_subgroup(&self) -> MatrixGroup {
        self.subgroup(&self.transvections())
    }

    pub fn is_reflection_group(&self) -> bool {
        self.reflection_subgroup().order() == self.order()
    }

    pub fn is_subgroup_of(&self, other: &MatrixGroup) -> bool {
        self.field == other.field && self.n == other.n && self.elements.iter().all(|g| other.contains(g))
    }

    /// `{ g : g u = u for all u in U }`.
    pub fn point_stabilizer(&self, u: &Subspace) -> MatrixGroup {
        assert_eq!(u.ambient(), self.n);
        let keep: Vec<Matrix> = self
            .elements
            .iter()
            .filter(|g| u.basis().iter().all(|v| &g.mul_vec(v).unwrap() == v))
            .cloned()
            .collect();
        if keep.len() == self.order() {
            return self.clone();
        }
        MatrixGroup::from_elements(&self.field, self.n, keep).expect("stabilizer is a subgroup")
    }

    /// `V^G`.
    pub fn fixed_space(&self) -> Subspace {
        let mut s = Subspace::full(&self.field, self.n);
        for g in &self.generators {
            s = s.intersection(&fixed_space(g).unwrap());
        }
        s
    }

    /// Coefficient vectors of the invariant linear forms.
    pub fn fixed_linear_forms(&self) -> Subspace {
        let mut s = Subspace::full(&self.field, self.n);
        for g in &self.generators {
            s = s.intersection(&fixed_space(&g.transpose()).unwrap());
        }
        s
    }

    /// Decomposition `G = disjoint union of H g_i`, representatives chosen
    /// minimal in canonical order.
    pub fn right_cosets(&self, h: &MatrixGroup) -> Result<CosetDecomposition> {
        if !h.is_subgroup_of(self) {
            return Err(Error::NotSubgroup(format!("{h:?} is not contained in {self:?}")));
        }
        let mut coset_of = vec![usize::MAX; self.order()];
        let mut representatives = Vec::new();
        for g in 0..self.order() {
            if coset_of[g] != usize::MAX {
                continue;
            }
            let c = representatives.len();
            representatives.push(g);
            for x in h.elements() {
                let j = self.index[x.mul(&self.elements[g])?.entries()];
                coset_of[j] = c;
            }
        }
        Ok(CosetDecomposition { representatives, coset_of })
    }

    /// Splits off the largest set of standard basis vectors fixed by the
    /// group whose complementary coordinate subspace is stable.
    pub fn split_trivial_summand(&self) -> TrivialSplit {
        let n = self.n;
        let mut fixed: Vec<bool> = (0..n)
            .map(|i| self.generators.iter().all(|g| (0..n).all(|r| g[(r, i)] == if r == i { Fe::ONE } else { Fe::ZERO })))
            .collect();
        loop {
            let mut changed = false;
            for i in 0..n {
                if fixed[i] && self.generators.iter().any(|g| (0..n).any(|j| !fixed[j] && !g[(i, j)].is_zero())) {
                    fixed[i] = false;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        let kept: Vec<usize> = (0..n).filter(|&i| !fixed[i]).collect();
        let removed: Vec<usize> = (0..n).filter(|&i| fixed[i]).collect();
        if removed.is_empty() {
            return TrivialSplit { group: self.clone(), kept, removed, split: false };
        }
        let restrict = |g: &Matrix| Matrix::from_fn(&self.field, kept.len(), kept.len(), |a, b| g[(kept[a], kept[b])]);
        let gens: Vec<Matrix> = self.generators.iter().map(restrict).collect();
        let elements: Vec<Matrix> = self.elements.iter().map(restrict).collect();
        let group = MatrixGroup::assemble(&self.field, kept.len(), gens, elements);
        TrivialSplit { group, kept, removed, split: true }
    }

    /// The same matrices over an extension field.
    pub fn extend_scalars(&self, target: &Field) -> Result<MatrixGroup> {
        let emb = target.embedding_from(&self.field)?;
        let map = |g: &Matrix| Matrix::from_fn(target, self.n, self.n, |i, j| emb.apply(g[(i, j)]));
        let gens = self.generators.iter().map(map).collect();
        let elements = self.elements.iter().map(map).collect();
        Ok(MatrixGroup::assemble(target, self.n, gens, elements))
    }

    pub fn to_data(&self) -> GroupData {
        GroupData {
            field: FieldData {
                p: self.field.characteristic(),
                r: self.field.degree(),
                modulus: self.field.modulus().to_vec(),
            },
            n: self.n,
            order: self.order(),
            generators: self
                .generators
                .iter()
                .map(|g| (0..self.n).map(|i| g.row(i).iter().map(|&a| self.field.format(a)).collect()).collect())
                .collect(),
        }
    }

    pub fn from_data(data: &GroupData) -> Result<MatrixGroup> {
        let field = Field::new(data.field.p, data.field.r)?;
        if field.modulus() != data.field.modulus.as_slice() {
            return Err(Error::InvalidField(format!("modulus {:?} is not the canonical one", data.field.modulus)));
        }
        let mut gens = Vec::new();
        for g in &data.generators {
            let rows: Result<Vec<Vec<Fe>>> = g.iter().map(|r| r.iter().map(|s| field.parse(s)).collect()).collect();
            gens.push(Matrix::from_rows(&field, &rows?)?);
        }
        let group = MatrixGroup::generate(&field, data.n, gens)?;
        if group.order() != data.order {
            return Err(Error::Precondition(format!("declared order {} but generated {}", data.order, group.order())));
        }
        Ok(group)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldData {
    pub p: u32,
    pub r: u32,
    pub modulus: Vec<u32>,
}

/// Serializable description of a group by generators.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupData {
    pub field: FieldData,
    pub n: usize,
    pub order: usize,
    pub generators: Vec<Vec<Vec<String>>>,
}
