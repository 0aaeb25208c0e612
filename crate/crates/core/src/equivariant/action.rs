use std::sync::Arc;

use crate::algebra::Algebra;
use crate::error::{Error, Result};
use crate::groups::{validate_perm, FiniteGroup, Perm, Subgroup};
use crate::linalg::{axpy, Matrix};
use crate::scalars::Scalar;

/// A right action of a finite group on an algebra by automorphisms: `a^g = a R_g`
/// on coordinate rows, so `R_{gh} = R_g R_h`.
#[derive(Clone, Debug)]
pub struct AlgebraAction {
    group: Arc<FiniteGroup>,
    algebra: Arc<Algebra>,
    maps: Vec<Matrix>,
}

impl PartialEq for AlgebraAction {
    fn eq(&self, other: &Self) -> bool {
        (Arc::ptr_eq(&self.group, &other.group) || self.group == other.group)
            && (Arc::ptr_eq(&self.algebra, &other.algebra) || self.algebra == other.algebra)
            && self.maps == other.maps
    }
}

impl AlgebraAction {
    /// From one matrix per group generator; validated to be automorphisms that
    /// respect the group's relations.
    pub fn new(group: Arc<FiniteGroup>, algebra: Arc<Algebra>, generator_maps: Vec<Matrix>) -> Result<AlgebraAction> {
        if generator_maps.len() != group.generators().len() {
            return Err(Error::InvalidAction(format!(
                "{} matrices for {} generators",
                generator_maps.len(),
                group.generators().len()
            )));
        }
        for (k, r) in generator_maps.iter().enumerate() {
            check_automorphism(&algebra, r).map_err(|e| Error::InvalidAction(format!("generator {k}: {e}")))?;
        }
        let d = algebra.dim();
        let f = algebra.field();
        let maps = group
            .extend_hom(&generator_maps, Matrix::identity(f, d), |a, b| a.mul(b))
            .map_err(|(x, k)| Error::InvalidAction(format!("relation violated at {} · generator {k}", group.label(x))))?;
        Ok(AlgebraAction { group, algebra, maps })
    }

    /// From matrices for every element (in group order), all validated.
    pub fn from_element_maps(group: Arc<FiniteGroup>, algebra: Arc<Algebra>, maps: Vec<Matrix>) -> Result<AlgebraAction> {
        if maps.len() != group.order() {
            return Err(Error::InvalidAction(format!("{} matrices for a group of order {}", maps.len(), group.order())));
        }
        let gens: Vec<Matrix> = group.generator_indices().iter().map(|&g| maps[g].clone()).collect();
        let action = AlgebraAction::new(group, algebra, gens)?;
        if action.maps != maps {
            return Err(Error::InvalidAction("element matrices are not determined by the generators".into()));
        }
        Ok(action)
    }

    pub fn trivial(group: Arc<FiniteGroup>, algebra: Arc<Algebra>) -> AlgebraAction {
        let id = Matrix::identity(algebra.field(), algebra.dim());
        let maps = vec![id; group.order()];
        AlgebraAction { group, algebra, maps }
    }

    /// Action on a path algebra induced by permutations of vertices and arrows, one pair per generator.
    pub fn permuting_paths(
        group: Arc<FiniteGroup>,
        algebra: Arc<Algebra>,
        generators: &[(Perm, Perm)],
    ) -> Result<AlgebraAction> {
        let f = algebra.field();
        let gens = generators
            .iter()
            .map(|(vp, ap)| {
                validate_perm(ap, ap.len()).map_err(|e| Error::InvalidAction(e.to_string()))?;
                Ok((vp.clone(), Matrix::permutation(f, ap)))
            })
            .collect::<Result<Vec<_>>>()?;
        AlgebraAction::linear_on_arrows(group, algebra, &gens)
    }

    /// Action on a path algebra given per generator by a vertex permutation and a matrix sending
    /// each arrow to a combination of arrows (row `a` is the image of arrow `a`); paths map to
    /// products of arrow images.
    pub fn linear_on_arrows(
        group: Arc<FiniteGroup>,
        algebra: Arc<Algebra>,
        generators: &[(Perm, Matrix)],
    ) -> Result<AlgebraAction> {
        let pb = algebra.path_basis().ok_or(Error::NotPathAlgebra)?;
        let f = algebra.field();
        let d = algebra.dim();
        let n = pb.quiver.vertex_count();
        let m = pb.quiver.arrows().len();
        let mut mats = Vec::new();
        for (vp, am) in generators {
            if vp.len() != n || am.shape() != (m, m) {
                return Err(Error::InvalidAction("vertex permutation or arrow matrix has the wrong size".into()));
            }
            validate_perm(vp, n).map_err(|e| Error::InvalidAction(e.to_string()))?;
            let arrow_image = |a: usize| {
                let mut v = algebra.zero();
                for b in 0..m {
                    axpy(&mut v, am.get(a, b), &algebra.basis(pb.arrow(b)));
                }
                v
            };
            let rows: Vec<Vec<Scalar>> = pb
                .paths
                .iter()
                .map(|p| {
                    if p.arrows.is_empty() {
                        algebra.basis(pb.vertex(vp[p.source]))
                    } else {
                        p.arrows.iter().skip(1).fold(arrow_image(p.arrows[0]), |acc, &a| algebra.mul(&acc, &arrow_image(a)))
                    }
                })
                .collect();
            mats.push(Matrix::from_rows(f, d, rows)?);
        }
        AlgebraAction::new(group, algebra, mats)
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn algebra(&self) -> &Arc<Algebra> {
        &self.algebra
    }

    /// `R_g`.
    pub fn map(&self, g: usize) -> &Matrix {
        &self.maps[g]
    }

    pub fn maps(&self) -> &[Matrix] {
        &self.maps
    }

    /// `a^g`.
    pub fn apply(&self, a: &[Scalar], g: usize) -> Vec<Scalar> {
        self.maps[g].vec_mul(a)
    }

    /// The same algebra acted on by a subgroup.
    pub fn restrict(&self, sub: &Subgroup) -> Result<AlgebraAction> {
        if **sub.parent() != *self.group {
            return Err(Error::GroupMismatch);
        }
        let maps = sub.members().iter().map(|&g| self.maps[g].clone()).collect();
        Ok(AlgebraAction { group: sub.group().clone(), algebra: self.algebra.clone(), maps })
    }
}

fn check_automorphism(a: &Algebra, r: &Matrix) -> Result<()> {
    let d = a.dim();
    if r.shape() != (d, d) || r.field() != a.field() {
        return Err(Error::ShapeMismatch("action matrix has the wrong shape".into()));
    }
    if !r.is_invertible() {
        return Err(Error::InvalidAction("action matrix is singular".into()));
    }
    if r.vec_mul(a.unit()) != a.unit() {
        return Err(Error::InvalidAction("the unit is not fixed".into()));
    }
    for i in 0..d {
        for j in 0..d {
            let lhs = r.vec_mul(&a.mul(&a.basis(i), &a.basis(j)));
            let rhs = a.mul(r.row(i), r.row(j));
            if lhs != rhs {
                return Err(Error::InvalidAction(format!(
                    "not multiplicative on ({}, {})",
                    a.labels()[i],
                    a.labels()[j]
                )));
            }
        }
    }
    if let Some(pb) = a.path_basis() {
        let n = pb.quiver.vertex_count();
        let m = pb.quiver.arrows().len();
        for v in 0..n {
            let img = r.row(pb.vertex(v));
            let hits: Vec<usize> = (0..d).filter(|&k| !img[k].is_zero()).collect();
            if hits.len() != 1 || hits[0] >= n || !img[hits[0]].is_one() {
                return Err(Error::InvalidAction("trivial paths must be permuted".into()));
            }
        }
        for k in 0..m {
            let img = r.row(pb.arrow(k));
            if (0..d).any(|i| !img[i].is_zero() && !(n..n + m).contains(&i)) {
                return Err(Error::InvalidAction("arrows must map into the span of arrows".into()));
            }
        }
    }
    Ok(())
}

/// The skew group algebra `G ⋉ A`: basis `(g, b_i)` at index `g·dim A + i`, product
/// `(g, a)(h, b) = (gh, a^h b)`.
#[derive(Clone, Debug)]
pub struct SkewAlgebra {
    pub action: Arc<AlgebraAction>,
    pub algebra: Arc<Algebra>,
}

pub fn skew_algebra(action: Arc<AlgebraAction>) -> Result<SkewAlgebra> {
    let g = action.group.clone();
    let a = action.algebra.clone();
    let f = a.field();
    let (n, d) = (g.order(), a.dim());
    let labels = (0..n * d).map(|x| format!("({},{})", g.label(x / d), a.labels()[x % d])).collect();
    let mut unit = vec![f.zero(); n * d];
    unit[..d].clone_from_slice(a.unit());
    let table = Algebra::from_products(f, labels, unit, |x, y| {
        let (gi, i) = (x / d, x % d);
        let (hi, j) = (y / d, y % d);
        let gh = g.mul(gi, hi);
        let rh = &action.maps[hi];
        let mut out = vec![f.zero(); n * d];
        for k in 0..d {
            let c = rh.get(i, k);
            if c.is_zero() {
                continue;
            }
            for (l, e) in a.product(k, j) {
                out[gh * d + l].add_mul_assign(c, e);
            }
        }
        out
    })?;
    // generators: A's generators at the identity, then the group generators
    let mut gens: Vec<Vec<Scalar>> = a
        .generators()
        .iter()
        .map(|x| {
            let mut v = vec![f.zero(); n * d];
            v[..d].clone_from_slice(x);
            v
        })
        .collect();
    for s in g.generator_indices() {
        let mut v = vec![f.zero(); n * d];
        v[s * d..(s + 1) * d].clone_from_slice(a.unit());
        gens.push(v);
    }
    let algebra = table.with_generators(gens)?;
    Ok(SkewAlgebra { action, algebra: Arc::new(algebra) })
}

impl SkewAlgebra {
    pub fn dim(&self) -> usize {
        self.algebra.dim()
    }

    /// `(g, a)`.
    pub fn pair(&self, g: usize, a: &[Scalar]) -> Vec<Scalar> {
        let d = self.action.algebra.dim();
        let mut v = self.algebra.zero();
        v[g * d..(g + 1) * d].clone_from_slice(a);
        v
    }

    /// `a ↦ (1, a)`.
    pub fn embed(&self, a: &[Scalar]) -> Vec<Scalar> {
        self.pair(self.action.group.identity(), a)
    }

    /// `(g, 1)`.
    pub fn group_element(&self, g: usize) -> Vec<Scalar> {
        self.pair(g, self.action.algebra.unit())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::Field;

    pub(crate) fn swap_kxk(field: Field) -> Arc<AlgebraAction> {
        let a = Arc::new(crate::algebra::Algebra::path_algebra(
            &crate::algebra::Quiver::from_edges(2, &[]).unwrap(),
            field,
        ));
        let c2 = Arc::new(FiniteGroup::cyclic(2));
        Arc::new(AlgebraAction::permuting_paths(c2, a, &[(vec![1, 0], vec![])]).unwrap())
    }

    #[test]
    fn skew_product_of_swapped_idempotents() {
        let f = Field::Rationals;
        let act = swap_kxk(f);
        let s = skew_algebra(act.clone()).unwrap();
        assert_eq!(s.dim(), 4);
        let e0 = act.algebra().basis(0);
        let e1 = act.algebra().basis(1);
        // (s, e0)(s, e1) = (1, e0^s e1) = (1, e1)
        let lhs = s.algebra.mul(&s.pair(1, &e0), &s.pair(1, &e1));
        assert_eq!(lhs, s.embed(&e1));
        assert_eq!(s.algebra.unit(), s.embed(act.algebra().unit()).as_slice());
    }

    #[test]
    fn trivial_group_and_trivial_algebra() {
        let f = Field::Prime(5);
        let a = Arc::new(crate::algebra::Algebra::path_algebra(
            &crate::algebra::Quiver::from_edges(2, &[("x", 0, 1)]).unwrap(),
            f,
        ));
        let one = Arc::new(FiniteGroup::trivial());
        let s = skew_algebra(Arc::new(AlgebraAction::trivial(one, a.clone()))).unwrap();
        assert_eq!(s.algebra.table(), a.table());
        let k = Arc::new(crate::algebra::matrix_algebra(f, 1));
        let s3 = Arc::new(FiniteGroup::symmetric(3).unwrap());
        let ks3 = skew_algebra(Arc::new(AlgebraAction::trivial(s3, k))).unwrap();
        assert_eq!(ks3.dim(), 6);
        assert!(!ks3.algebra.is_commutative());
    }

    #[test]
    fn bad_actions_are_rejected() {
        let f = Field::Rationals;
        let a = Arc::new(crate::algebra::Algebra::path_algebra(
            &crate::algebra::Quiver::from_edges(2, &[("x", 0, 1)]).unwrap(),
            f,
        ));
        let c2 = Arc::new(FiniteGroup::cyclic(2));
        // swapping the vertices of 0 → 1 reverses the arrow
        assert!(AlgebraAction::permuting_paths(c2.clone(), a.clone(), &[(vec![1, 0], vec![0])]).is_err());
        // scaling the arrow by 2 is an automorphism but has order ≠ 2
        let mut r = Matrix::identity(f, 3);
        r.set(2, 2, f.from_i64(2));
        assert!(AlgebraAction::new(c2, a, vec![r]).is_err());
    }
}
