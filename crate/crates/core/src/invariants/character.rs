use crate::error::{Error, Result};
use crate::field::Fe;
use crate::group::MatrixGroup;
use crate::poly::Polynomial;

/// A homomorphism `G -> k^x`, tabulated on the canonical element order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Character {
    values: Vec<Fe>,
}

impl Character {
    pub fn trivial(g: &MatrixGroup) -> Character {
        Character { values: vec![Fe::ONE; g.order()] }
    }

    /// Checks `chi(xy) = chi(x) chi(y)` on all pairs.
    pub fn from_values(g: &MatrixGroup, values: Vec<Fe>) -> Result<Character> {
        if values.len() != g.order() {
            return Err(Error::NotCharacter(format!("{} values for a group of order {}", values.len(), g.order())));
        }
        let f = g.field();
        if values[g.identity_index()] != Fe::ONE {
            return Err(Error::NotCharacter("value at the identity is not 1".into()));
        }
        for i in 0..g.order() {
            for j in 0..g.order() {
                if values[g.mul_index(i, j)] != f.mul(values[i], values[j]) {
                    return Err(Error::NotCharacter(format!("not multiplicative at elements {i}, {j}")));
                }
            }
        }
        Ok(Character { values })
    }

    /// Extends values on the generators along the Cayley graph, checking
    /// consistency on every edge.
    pub fn from_generator_values(g: &MatrixGroup, gen_values: &[Fe]) -> Result<Character> {
        let gens = g.generators();
        if gens.len() != gen_values.len() {
            return Err(Error::NotCharacter("one value per generator required".into()));
        }
        let f = g.field();
        let gen_idx: Vec<usize> = gens.iter().map(|x| g.index_of(x).unwrap()).collect();
        let mut values: Vec<Option<Fe>> = vec![None; g.order()];
        let id = g.identity_index();
        values[id] = Some(Fe::ONE);
        let mut queue = std::collections::VecDeque::from([id]);
        while let Some(x) = queue.pop_front() {
            let vx = values[x].unwrap();
            for (k, &s) in gen_idx.iter().enumerate() {
                let y = g.mul_index(x, s);
                let vy = f.mul(vx, gen_values[k]);
                match values[y] {
                    None => {
                        values[y] = Some(vy);
                        queue.push_back(y);
                    }
                    Some(v) if v != vy => {
                        return Err(Error::NotCharacter("generator values do not define a homomorphism".into()));
                    }
                    _ => {}
                }
            }
        }
        Ok(Character { values: values.into_iter().map(Option::unwrap).collect() })
    }

    /// The character of a semi-invariant `f`: `g . f = chi(g) f`.
    pub fn of_semi_invariant(g: &MatrixGroup, f: &Polynomial) -> Result<Character> {
        let field = g.field();
        let (lead, c) = f.leading_term().ok_or_else(|| Error::NotInvariant("zero polynomial".into()))?;
        let mut gen_values = Vec::new();
        for x in g.generators() {
            let y = f.act(x)?;
            let v = field.div(y.coefficient(lead), c).unwrap();
            if y != f.scale(v) {
                return Err(Error::NotInvariant(format!("{f} is not a semi-invariant")));
            }
            gen_values.push(v);
        }
        Character::from_generator_values(g, &gen_values)
    }

    pub fn value(&self, i: usize) -> Fe {
        self.values[i]
    }

    pub fn values(&self) -> &[Fe] {
        &self.values
    }

    pub fn is_trivial(&self) -> bool {
        self.values.iter().all(|&v| v == Fe::ONE)
    }

    /// Restriction to a subgroup.
    pub fn restrict(&self, g: &MatrixGroup, h: &MatrixGroup) -> Character {
        Character { values: h.elements().iter().map(|x| self.values[g.index_of(x).unwrap()]).collect() }
    }

    pub fn pow(&self, g: &MatrixGroup, e: u64) -> Character {
        let f = g.field();
        Character { values: self.values.iter().map(|&v| f.pow(v, e)).collect() }
    }
}
