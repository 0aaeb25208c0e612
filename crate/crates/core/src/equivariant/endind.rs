use std::sync::Arc;

use crate::error::{Error, Result};
use crate::groups::Subgroup;
use crate::linalg::Matrix;
use crate::modules::{end_algebra, EndAlgebra};
use crate::scalars::Scalar;

use super::action::{skew_algebra, AlgebraAction, SkewAlgebra};
use super::module::{induce, restrict, to_skew_module, EquivariantModule};

/// `End(Ind T) ≅ G ⋉ End(T)` for an equivariant module `T`, with `Ind = Ind_1^G Res`.
#[derive(Clone, Debug)]
pub struct EndOfInduced {
    pub induced: EquivariantModule,
    /// Endomorphisms of the induced module over the skew algebra.
    pub end: EndAlgebra,
    /// `End(T)` with `G` acting by `X ↦ Λ_g⁻¹ X Λ_g`.
    pub end_of_t: EndAlgebra,
    pub conjugation: Arc<AlgebraAction>,
    pub skew: SkewAlgebra,
    /// Row `k` holds the image of the `k`-th basis element of `G ⋉ End(T)` in `end` coordinates.
    pub iso: Matrix,
}

impl EndOfInduced {
    pub fn apply(&self, x: &[Scalar]) -> Vec<Scalar> {
        self.iso.vec_mul(x)
    }
}

/// The conjugation action of the group on `End(T)`.
pub fn conjugation_action(t: &EquivariantModule, end_t: &EndAlgebra) -> Result<AlgebraAction> {
    let g = t.action().group();
    let basis = end_t.hom.basis();
    let f = t.module().field();
    let mut maps = Vec::with_capacity(g.order());
    for x in 0..g.order() {
        let lam = t.lambda(x);
        let inv = lam.inverse().ok_or_else(|| Error::InvalidLinearisation("singular linearisation".into()))?;
        let rows = basis
            .iter()
            .map(|b| end_t.element(&inv.mul(b).mul(lam)).ok_or_else(|| Error::Verification("conjugate is not an endomorphism".into())))
            .collect::<Result<Vec<_>>>()?;
        maps.push(Matrix::from_rows(f, basis.len(), rows)?);
    }
    AlgebraAction::from_element_maps(g.clone(), end_t.algebra.clone(), maps)
}

pub fn end_of_induced(t: &EquivariantModule) -> Result<EndOfInduced> {
    let full = t.action().clone();
    let g = full.group().clone();
    let trivial = Subgroup::trivial(g.clone());
    let induced = induce(&trivial, &restrict(t, &trivial)?, &full)?;
    let big_skew = skew_algebra(full.clone())?;
    let end = end_algebra(&to_skew_module(&induced, &big_skew)?)?;

    let end_of_t = end_algebra(t.module())?;
    let conjugation = Arc::new(conjugation_action(t, &end_of_t)?);
    let skew = skew_algebra(conjugation.clone())?;

    // (g, φ) ↦ block matrix with X_φ Λ_{g⁻¹} in every block (s → g s)
    let n = g.order();
    let dt = t.dim();
    let f = t.module().field();
    let basis = end_of_t.hom.basis();
    let de = basis.len();
    let mut rows = Vec::with_capacity(n * de);
    for x in 0..n {
        let back = t.lambda(g.inv(x));
        for phi in &basis {
            let z = phi.mul(back);
            let mut y = Matrix::zeros(f, n * dt, n * dt);
            for s in 0..n {
                y.set_block(s * dt, g.mul(x, s) * dt, &z);
            }
            let coords = end
                .element(&y)
                .ok_or_else(|| Error::Verification("image is not an endomorphism of the induced module".into()))?;
            rows.push(coords);
        }
    }
    let iso = Matrix::from_rows(f, end.algebra.dim(), rows)?;
    let out = EndOfInduced { induced, end, end_of_t, conjugation, skew, iso };
    verify_isomorphism(&out)?;
    Ok(out)
}

fn verify_isomorphism(e: &EndOfInduced) -> Result<()> {
    if !e.iso.is_invertible() {
        return Err(Error::Verification("End(Ind T) and G ⋉ End(T) differ in dimension or the map is singular".into()));
    }
    let s = &e.skew.algebra;
    let target = &e.end.algebra;
    if e.apply(s.unit()) != target.unit() {
        return Err(Error::Verification("isomorphism is not unital".into()));
    }
    let d = s.dim();
    let bad = crate::par::map_range(d, |i| {
        (0..d).find(|&j| {
            let lhs = e.apply(&s.mul(&s.basis(i), &s.basis(j)));
            let rhs = target.mul(e.iso.row(i), e.iso.row(j));
            lhs != rhs
        })
    });
    if bad.iter().any(Option::is_some) {
        return Err(Error::Verification("isomorphism is not multiplicative".into()));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{Algebra, Quiver};
    use crate::equivariant::{canonical_linearisation, equivariant_hom, from_skew_module, twist};
    use crate::groups::{FiniteGroup, SetAction};
    use crate::modules::{hom_space, iso_test, ModuleRep};
    use crate::options::Options;
    use crate::scalars::Field;

    fn star(field: Field) -> Arc<AlgebraAction> {
        let q = Quiver::from_edges(3, &[("a", 0, 1), ("b", 0, 2)]).unwrap();
        let a = Arc::new(Algebra::path_algebra(&q, field));
        let c2 = Arc::new(FiniteGroup::cyclic(2));
        Arc::new(AlgebraAction::permuting_paths(c2, a, &[(vec![0, 2, 1], vec![1, 0])]).unwrap())
    }

    fn s3_on_points(field: Field) -> Arc<AlgebraAction> {
        let a = Arc::new(Algebra::path_algebra(&Quiver::from_edges(3, &[]).unwrap(), field));
        let g = Arc::new(FiniteGroup::symmetric(3).unwrap());
        let gens: Vec<_> = g.generators().iter().map(|p| (p.clone(), vec![])).collect();
        Arc::new(AlgebraAction::permuting_paths(g, a, &gens).unwrap())
    }

    #[test]
    fn end_of_induced_canonical() {
        for act in [star(Field::Rationals), s3_on_points(Field::Prime(5)), star(Field::Prime(7))] {
            let t = canonical_linearisation(act.clone());
            let e = end_of_induced(&t).unwrap();
            let n = act.group().order();
            assert_eq!(e.end.algebra.dim(), n * e.end_of_t.algebra.dim());
            assert_eq!(e.end_of_t.algebra.dim(), act.algebra().dim());
        }
    }

    #[test]
    fn dictionary_round_trip_and_homs() {
        let act = star(Field::Rationals);
        let skew = skew_algebra(act.clone()).unwrap();
        let t = canonical_linearisation(act.clone());
        let m = to_skew_module(&t, &skew).unwrap();
        m.validate().unwrap();
        assert_eq!(from_skew_module(&m, &skew).unwrap(), t);
        let regular = ModuleRep::regular(skew.algebra.clone());
        let back = from_skew_module(&regular, &skew).unwrap();
        assert_eq!(back.dim(), 2 * act.algebra().dim());
        // Ind_1^G A ≅ regular skew module
        let trivial = Subgroup::trivial(act.group().clone());
        let ind = induce(&trivial, &restrict(&t, &trivial).unwrap(), &act).unwrap();
        let ind_skew = to_skew_module(&ind, &skew).unwrap();
        assert!(iso_test(&ind_skew, &regular, &Options::default()).unwrap().is_isomorphic());
        assert_eq!(
            equivariant_hom(&t, &t).unwrap().dim(),
            hom_space(&m, &m).unwrap().dim()
        );
    }

    #[test]
    fn induction_from_stabilizers() {
        let act = s3_on_points(Field::Rationals);
        let g = act.group().clone();
        let h = SetAction::natural(g.clone()).stabilizer(0);
        let t = canonical_linearisation(act.clone());
        let res = restrict(&t, &h).unwrap();
        let ind = induce(&h, &res, &act).unwrap();
        assert_eq!(ind.dim(), 3 * t.dim());
        // adjunction: Hom_G(Ind N, M) = Hom_H(N, Res M) and Hom_G(M, Ind N) = Hom_H(Res M, N)
        let left = equivariant_hom(&ind, &t).unwrap().dim();
        let right = equivariant_hom(&res, &restrict(&t, &h).unwrap()).unwrap().dim();
        assert_eq!(left, right);
        assert_eq!(equivariant_hom(&t, &ind).unwrap().dim(), right);
        // twisting by the identity changes nothing; a twist by an involution twice returns
        let s = g.generator_indices()[1];
        let once = twist(t.module(), &act, s).unwrap();
        assert_eq!(twist(&once, &act, s).unwrap(), *t.module());
    }
}
