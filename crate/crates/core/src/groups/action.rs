use std::sync::Arc;

use crate::error::{Error, Result};

use super::group::{compose, validate_perm, FiniteGroup, Perm};

/// A subgroup with its own enumeration, the embedding into the parent, and
/// right coset representatives (`G = ⊔ H·r`, smallest parent index per coset).
#[derive(Clone, Debug)]
pub struct Subgroup {
    parent: Arc<FiniteGroup>,
    group: Arc<FiniteGroup>,
    to_parent: Vec<usize>,
    from_parent: Vec<Option<usize>>,
    coset_reps: Vec<usize>,
    /// For each parent element `g`: the coset of `g`.
    coset_of: Vec<usize>,
}

impl PartialEq for Subgroup {
    fn eq(&self, other: &Self) -> bool {
        self.parent == other.parent && self.to_parent == other.to_parent
    }
}

impl Subgroup {
    /// The subgroup generated by the given parent elements.
    pub fn generated(parent: Arc<FiniteGroup>, gens: &[usize]) -> Result<Subgroup> {
        let perms: Vec<Perm> = gens.iter().map(|&g| parent.element(g).clone()).collect();
        let group = FiniteGroup::with_bound(parent.degree(), perms, parent.order().max(1))?;
        Subgroup::from_group(parent, Arc::new(group))
    }

    /// A subset that must already be closed under multiplication.
    pub fn from_members(parent: Arc<FiniteGroup>, members: &[usize]) -> Result<Subgroup> {
        let mut set = vec![false; parent.order()];
        for &m in members {
            *set.get_mut(m).ok_or(Error::NotASubgroup)? = true;
        }
        if !set[0] || members.iter().any(|&a| members.iter().any(|&b| !set[parent.mul(a, b)])) {
            return Err(Error::NotASubgroup);
        }
        // greedy generating set in parent order
        let mut gens = Vec::new();
        let mut span = Subgroup::generated(parent.clone(), &[])?;
        for m in 0..parent.order() {
            if set[m] && span.from_parent[m].is_none() {
                gens.push(m);
                span = Subgroup::generated(parent.clone(), &gens)?;
            }
        }
        Ok(span)
    }

    fn from_group(parent: Arc<FiniteGroup>, group: Arc<FiniteGroup>) -> Result<Subgroup> {
        let to_parent: Vec<usize> =
            group.elements().iter().map(|p| parent.index_of(p).ok_or(Error::NotASubgroup)).collect::<Result<_>>()?;
        let mut from_parent = vec![None; parent.order()];
        for (i, &p) in to_parent.iter().enumerate() {
            from_parent[p] = Some(i);
        }
        let mut coset_of = vec![usize::MAX; parent.order()];
        let mut coset_reps = Vec::new();
        for g in 0..parent.order() {
            if coset_of[g] != usize::MAX {
                continue;
            }
            let c = coset_reps.len();
            coset_reps.push(g);
            for &h in &to_parent {
                coset_of[parent.mul(h, g)] = c;
            }
        }
        Ok(Subgroup { parent, group, to_parent, from_parent, coset_reps, coset_of })
    }

    pub fn whole(parent: Arc<FiniteGroup>) -> Subgroup {
        let gens = parent.generator_indices();
        Subgroup::generated(parent, &gens).expect("whole group")
    }

    pub fn trivial(parent: Arc<FiniteGroup>) -> Subgroup {
        Subgroup::generated(parent, &[]).expect("trivial subgroup")
    }

    pub fn parent(&self) -> &Arc<FiniteGroup> {
        &self.parent
    }

    /// The subgroup as a group in its own right.
    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn order(&self) -> usize {
        self.to_parent.len()
    }

    pub fn index(&self) -> usize {
        self.coset_reps.len()
    }

    pub fn to_parent(&self, h: usize) -> usize {
        self.to_parent[h]
    }

    pub fn members(&self) -> &[usize] {
        &self.to_parent
    }

    pub fn from_parent(&self, g: usize) -> Option<usize> {
        self.from_parent[g]
    }

    pub fn contains(&self, g: usize) -> bool {
        self.from_parent[g].is_some()
    }

    pub fn coset_reps(&self) -> &[usize] {
        &self.coset_reps
    }

    /// Writes `g = h·r` with `h` in the subgroup (own index) and `r` the `k`-th representative.
    pub fn decompose(&self, g: usize) -> (usize, usize) {
        let k = self.coset_of[g];
        let r = self.coset_reps[k];
        let h = self.parent.mul(g, self.parent.inv(r));
        (self.from_parent[h].expect("coset decomposition"), k)
    }
}

/// A right action of a group on `0..size`, stored per element.
#[derive(Clone, Debug, PartialEq)]
pub struct SetAction {
    group: Arc<FiniteGroup>,
    size: usize,
    perms: Vec<Perm>,
}

impl SetAction {
    /// From images of the generators; rejected unless it extends to a homomorphism.
    pub fn new(group: Arc<FiniteGroup>, size: usize, generator_perms: Vec<Perm>) -> Result<SetAction> {
        if generator_perms.len() != group.generators().len() {
            return Err(Error::InvalidAction(format!(
                "{} permutations for {} generators",
                generator_perms.len(),
                group.generators().len()
            )));
        }
        for p in &generator_perms {
            validate_perm(p, size).map_err(|e| Error::InvalidAction(e.to_string()))?;
        }
        let perms = group.extend_hom(&generator_perms, (0..size).collect(), |a, b| compose(a, b)).map_err(|(x, k)| {
            Error::InvalidAction(format!("relation violated at {} · generator {k}", group.label(x)))
        })?;
        Ok(SetAction { group, size, perms })
    }

    /// The defining action on `0..degree`.
    pub fn natural(group: Arc<FiniteGroup>) -> SetAction {
        let size = group.degree();
        let perms = group.elements().to_vec();
        SetAction { group, size, perms }
    }

    pub fn trivial(group: Arc<FiniteGroup>, size: usize) -> SetAction {
        let perms = vec![(0..size).collect(); group.order()];
        SetAction { group, size, perms }
    }

    /// Right regular action on the group's own elements.
    pub fn regular(group: Arc<FiniteGroup>) -> SetAction {
        let n = group.order();
        let perms = (0..n).map(|g| (0..n).map(|x| group.mul(x, g)).collect()).collect();
        SetAction { group, size: n, perms }
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn apply(&self, x: usize, g: usize) -> usize {
        self.perms[g][x]
    }

    pub fn perm(&self, g: usize) -> &Perm {
        &self.perms[g]
    }

    pub fn orbit(&self, x: usize) -> Vec<usize> {
        let mut seen = vec![false; self.size];
        let mut orbit = Vec::new();
        for perm in &self.perms {
            let y = perm[x];
            if !std::mem::replace(&mut seen[y], true) {
                orbit.push(y);
            }
        }
        orbit.sort_unstable();
        orbit
    }

    /// Orbits, each sorted, ordered by smallest member (which is the canonical representative).
    pub fn orbits(&self) -> Vec<Vec<usize>> {
        let mut done = vec![false; self.size];
        let mut out = Vec::new();
        for x in 0..self.size {
            if done[x] {
                continue;
            }
            let o = self.orbit(x);
            for &y in &o {
                done[y] = true;
            }
            out.push(o);
        }
        out
    }

    pub fn stabilizer(&self, x: usize) -> Subgroup {
        let members: Vec<usize> = (0..self.group.order()).filter(|&g| self.perms[g][x] == x).collect();
        Subgroup::from_members(self.group.clone(), &members).expect("stabilizers are subgroups")
    }

    /// Some `g` with `x·g = y`, if any (smallest index).
    pub fn transporter(&self, x: usize, y: usize) -> Option<usize> {
        (0..self.group.order()).find(|&g| self.perms[g][x] == y)
    }
}
