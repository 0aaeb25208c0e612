use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest group materialized unless a caller asks for more.
pub const DEFAULT_ORDER_BOUND: usize = 720;

/// A permutation of `0..n` acting on the right: `i·g = g[i]`.
pub type Perm = Vec<usize>;

pub fn validate_perm(p: &[usize], degree: usize) -> Result<()> {
    if p.len() != degree {
        return Err(Error::InvalidPermutation(format!("{p:?} has length {}, expected {degree}", p.len())));
    }
    let mut seen = vec![false; degree];
    for &x in p {
        if x >= degree || std::mem::replace(&mut seen[x], true) {
            return Err(Error::InvalidPermutation(format!("{p:?} is not a bijection of 0..{degree}")));
        }
    }
    Ok(())
}

/// `gh`: first `g`, then `h`.
pub fn compose(g: &[usize], h: &[usize]) -> Perm {
    g.iter().map(|&x| h[x]).collect()
}

pub fn invert(g: &[usize]) -> Perm {
    let mut inv = vec![0; g.len()];
    for (i, &x) in g.iter().enumerate() {
        inv[x] = i;
    }
    inv
}

/// Cycle notation, fixed points omitted; `()` for the identity.
pub fn cycle_string(g: &[usize]) -> String {
    let mut seen = vec![false; g.len()];
    let mut out = String::new();
    for start in 0..g.len() {
        if seen[start] || g[start] == start {
            continue;
        }
        let mut cycle = Vec::new();
        let mut x = start;
        while !seen[x] {
            seen[x] = true;
            cycle.push(x.to_string());
            x = g[x];
        }
        out.push_str(&format!("({})", cycle.join(" ")));
    }
    if out.is_empty() {
        "()".into()
    } else {
        out
    }
}

/// A finite permutation group, fully enumerated.
///
/// Element 0 is the identity; the rest appear in breadth-first order over
/// right multiplication by the generators, and each records the edge that
/// reached it so that maps defined on generators extend along words.
#[derive(Clone, Debug)]
pub struct FiniteGroup {
    degree: usize,
    generators: Vec<Perm>,
    elements: Vec<Perm>,
    index: HashMap<Perm, usize>,
    table: Vec<usize>,
    inverses: Vec<usize>,
    /// `(parent, generator)` with `element = parent · generator`.
    tree: Vec<Option<(usize, usize)>>,
}

impl PartialEq for FiniteGroup {
    fn eq(&self, other: &Self) -> bool {
        self.degree == other.degree && self.generators == other.generators && self.elements == other.elements
    }
}

impl Eq for FiniteGroup {}

#[derive(Serialize, Deserialize)]
struct RawGroup {
    degree: usize,
    generators: Vec<Perm>,
}

impl Serialize for FiniteGroup {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        RawGroup { degree: self.degree, generators: self.generators.clone() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for FiniteGroup {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = RawGroup::deserialize(d)?;
        FiniteGroup::new(raw.degree, raw.generators).map_err(serde::de::Error::custom)
    }
}

impl FiniteGroup {
    pub fn new(degree: usize, generators: Vec<Perm>) -> Result<FiniteGroup> {
        FiniteGroup::with_bound(degree, generators, DEFAULT_ORDER_BOUND)
    }

    pub fn with_bound(degree: usize, generators: Vec<Perm>, bound: usize) -> Result<FiniteGroup> {
        for g in &generators {
            validate_perm(g, degree)?;
        }
        let identity: Perm = (0..degree).collect();
        let mut elements = vec![identity.clone()];
        let mut index = HashMap::from([(identity, 0)]);
        let mut tree = vec![None];
        let mut i = 0;
        while i < elements.len() {
            for (k, g) in generators.iter().enumerate() {
                let h = compose(&elements[i], g);
                if !index.contains_key(&h) {
                    if elements.len() == bound {
                        return Err(Error::GroupTooLarge(bound));
                    }
                    index.insert(h.clone(), elements.len());
                    elements.push(h);
                    tree.push(Some((i, k)));
                }
            }
            i += 1;
        }
        let n = elements.len();
        let mut table = vec![0; n * n];
        for a in 0..n {
            for b in 0..n {
                table[a * n + b] = index[&compose(&elements[a], &elements[b])];
            }
        }
        let inverses = elements.iter().map(|g| index[&invert(g)]).collect();
        Ok(FiniteGroup { degree, generators, elements, index, table, inverses, tree })
    }

    pub fn trivial() -> FiniteGroup {
        FiniteGroup::new(1, Vec::new()).expect("trivial group")
    }

    pub fn cyclic(n: usize) -> FiniteGroup {
        let gens = if n > 1 { vec![(0..n).map(|i| (i + 1) % n).collect()] } else { Vec::new() };
        FiniteGroup::new(n.max(1), gens).expect("cyclic group")
    }

    /// `S_n` generated by an `n`-cycle and a transposition.
    pub fn symmetric(n: usize) -> Result<FiniteGroup> {
        let mut gens = Vec::new();
        if n > 2 {
            gens.push((0..n).map(|i| (i + 1) % n).collect());
        }
        if n > 1 {
            let mut t: Perm = (0..n).collect();
            t.swap(0, 1);
            gens.push(t);
        }
        FiniteGroup::new(n.max(1), gens)
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn generators(&self) -> &[Perm] {
        &self.generators
    }

    /// Element indices of the generators.
    pub fn generator_indices(&self) -> Vec<usize> {
        self.generators.iter().map(|g| self.index[g]).collect()
    }

    pub fn elements(&self) -> &[Perm] {
        &self.elements
    }

    pub fn element(&self, i: usize) -> &Perm {
        &self.elements[i]
    }

    pub fn index_of(&self, g: &[usize]) -> Option<usize> {
        self.index.get(g).copied()
    }

    pub fn identity(&self) -> usize {
        0
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order() + b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inverses[a]
    }

    pub fn label(&self, a: usize) -> String {
        cycle_string(&self.elements[a])
    }

    pub fn is_abelian(&self) -> bool {
        let n = self.order();
        (0..n).all(|a| (0..n).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    /// Extends images of the generators to a homomorphism on all elements, walking the
    /// enumeration tree; fails with `(x, k)` when `img(x·s_k) ≠ img(x)·img(s_k)`.
    pub fn extend_hom<T: Clone + PartialEq>(
        &self,
        gens: &[T],
        one: T,
        mul: impl Fn(&T, &T) -> T,
    ) -> std::result::Result<Vec<T>, (usize, usize)> {
        let mut out: Vec<T> = Vec::with_capacity(self.order());
        out.push(one);
        for t in &self.tree[1..] {
            let (parent, k) = t.expect("non-identity elements have a parent");
            let v = mul(&out[parent], &gens[k]);
            out.push(v);
        }
        let gen_idx = self.generator_indices();
        for x in 0..self.order() {
            for (k, &s) in gen_idx.iter().enumerate() {
                if out[self.mul(x, s)] != mul(&out[x], &gens[k]) {
                    return Err((x, k));
                }
            }
        }
        Ok(out)
    }
}

impl fmt::Display for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let gens: Vec<String> = self.generators.iter().map(|g| cycle_string(g)).collect();
        write!(f, "<{}> of order {} on {} points", gens.join(", "), self.order(), self.degree)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_groups() {
        assert_eq!(FiniteGroup::trivial().order(), 1);
        assert_eq!(FiniteGroup::new(2, vec![vec![1, 0]]).unwrap().order(), 2);
        let s3 = FiniteGroup::new(3, vec![vec![1, 2, 0], vec![1, 0, 2]]).unwrap();
        assert_eq!(s3.order(), 6);
        assert!(!s3.is_abelian());
        assert_eq!(FiniteGroup::symmetric(4).unwrap().order(), 24);
        assert!(matches!(FiniteGroup::symmetric(7), Err(Error::GroupTooLarge(720))));
        assert!(FiniteGroup::new(3, vec![vec![0, 0, 1]]).is_err());
    }

    #[test]
    fn table_is_consistent() {
        let g = FiniteGroup::symmetric(4).unwrap();
        for a in 0..g.order() {
            assert_eq!(g.mul(a, g.inv(a)), 0);
            for b in 0..g.order() {
                assert_eq!(g.element(g.mul(a, b)), &compose(g.element(a), g.element(b)));
            }
        }
        let perms = g.extend_hom(g.generators(), (0..4).collect::<Perm>(), |a, b| compose(a, b)).unwrap();
        assert_eq!(perms, g.elements());
        assert_eq!(cycle_string(&[1, 2, 0, 3]), "(0 1 2)");
    }
}
