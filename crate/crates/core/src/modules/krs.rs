use crate::algebra::{Certainty, DivisionVerdict};
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::options::Options;
use crate::par;
use crate::scalars::{Field, Scalar};

use super::hom::{end_algebra, hom_space, HomSpace};
use super::module::ModuleRep;

#[derive(Clone, Debug)]
pub enum Indecomposability {
    Yes(Certainty),
    /// A nontrivial idempotent endomorphism (as a matrix).
    No(Matrix),
}

impl Indecomposability {
    pub fn is_yes(&self) -> bool {
        matches!(self, Indecomposability::Yes(_))
    }
}

/// `M` is indecomposable iff `End(M)` is local, i.e. `End(M)/rad` is a division algebra.
pub fn is_indecomposable(module: &ModuleRep, opts: &Options) -> Result<Indecomposability> {
    if module.dim() == 0 {
        return Ok(Indecomposability::No(Matrix::zeros(module.field(), 0, 0)));
    }
    let end = end_algebra(module)?;
    let e = &end.algebra;
    let rad = e.radical()?;
    let q = e.quotient(&rad)?;
    match q.algebra.is_division_algebra(opts)? {
        DivisionVerdict::Certified => Ok(Indecomposability::Yes(Certainty::Certified)),
        DivisionVerdict::ProbablyYes { samples } => Ok(Indecomposability::Yes(Certainty::Probable { samples })),
        DivisionVerdict::No(_) => {
            let prims = e.primitive_idempotents(opts)?;
            let first = prims.idempotents.first().ok_or(Error::Verification("empty decomposition".into()))?;
            Ok(Indecomposability::No(end.matrix(first)))
        }
    }
}

/// One indecomposable summand `S` of `M` with `inclusion: S → M`, `projection: M → S`
/// (`inclusion · projection = I`) and an isomorphism onto its class representative.
#[derive(Clone, Debug)]
pub struct Summand {
    pub module: ModuleRep,
    pub inclusion: Matrix,
    pub projection: Matrix,
    pub class: usize,
    pub to_representative: Matrix,
}

#[derive(Clone, Debug)]
pub struct KrsClass {
    pub representative: ModuleRep,
    pub multiplicity: usize,
    pub members: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct KrsDecomposition {
    pub summands: Vec<Summand>,
    pub classes: Vec<KrsClass>,
    pub certainty: Certainty,
}

impl KrsDecomposition {
    /// `(dim, multiplicity)` per class, sorted; independent of the seed.
    pub fn signature(&self) -> Vec<(usize, usize)> {
        let mut s: Vec<_> = self.classes.iter().map(|c| (c.representative.dim(), c.multiplicity)).collect();
        s.sort_unstable();
        s
    }

    /// Class representatives in order of first appearance.
    pub fn representatives(&self) -> Vec<&ModuleRep> {
        self.classes.iter().map(|c| &c.representative).collect()
    }

    /// Embedding of the representative of a summand's class into `M` through that summand.
    pub fn embedding_from_representative(&self, summand: usize) -> Matrix {
        let s = &self.summands[summand];
        let back = s.to_representative.inverse().expect("summand isomorphism");
        back.mul(&s.inclusion)
    }
}

/// Iso between indecomposables via the pairing `Hom(S,T) × Hom(T,S) → End(S)`:
/// `S ≅ T` iff some composite is invertible, and then the first factor is an iso.
fn pairing_iso(s: &ModuleRep, t: &ModuleRep) -> Result<Option<Matrix>> {
    if s.dim() != t.dim() {
        return Ok(None);
    }
    let st = hom_space(s, t)?;
    if st.is_zero() {
        return Ok(None);
    }
    let ts = hom_space(t, s)?;
    for f in st.basis() {
        if ts.basis().iter().any(|g| f.mul(g).is_invertible()) {
            return Ok(Some(f));
        }
    }
    Ok(None)
}

pub fn krs_decompose(module: &ModuleRep, opts: &Options) -> Result<KrsDecomposition> {
    let f = module.field();
    if module.dim() == 0 {
        return Ok(KrsDecomposition { summands: Vec::new(), classes: Vec::new(), certainty: Certainty::Certified });
    }
    let end = end_algebra(module)?;
    let prims = end.algebra.primitive_idempotents(opts)?;
    let pieces = par::map(&prims.idempotents, |e| -> Result<(ModuleRep, Matrix, Matrix)> {
        let x = end.matrix(e);
        let image = x.row_space();
        let inclusion = image.basis_matrix();
        let projection = x.select_columns(image.pivots());
        let action = module.action().iter().map(|m| inclusion.mul(m).mul(&projection)).collect();
        Ok((ModuleRep::new_unchecked(module.algebra().clone(), action)?, inclusion, projection))
    });
    let mut summands: Vec<Summand> = Vec::new();
    let mut classes: Vec<KrsClass> = Vec::new();
    for piece in pieces {
        let (sub, inclusion, projection) = piece?;
        let mut found = None;
        for (ci, class) in classes.iter().enumerate() {
            if let Some(iso) = pairing_iso(&sub, &class.representative)? {
                found = Some((ci, iso));
                break;
            }
        }
        let (class, to_representative) = match found {
            Some((ci, iso)) => (ci, iso),
            None => {
                classes.push(KrsClass { representative: sub.clone(), multiplicity: 0, members: Vec::new() });
                (classes.len() - 1, Matrix::identity(f, sub.dim()))
            }
        };
        classes[class].multiplicity += 1;
        classes[class].members.push(summands.len());
        summands.push(Summand { module: sub, inclusion, projection, class, to_representative });
    }
    let total: usize = summands.iter().map(|s| s.module.dim()).sum();
    if total != module.dim() {
        return Err(Error::Verification(format!("summand dimensions add up to {total}, not {}", module.dim())));
    }
    Ok(KrsDecomposition { summands, classes, certainty: prims.certainty })
}

#[derive(Clone, Debug, PartialEq)]
pub enum IsoVerdict {
    /// An invertible intertwiner `M → N`.
    Isomorphic(Matrix),
    NotIsomorphic(NonIsoReason),
    /// Summands matched only up to an uncertified decomposition.
    ProbablyNot { samples: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NonIsoReason {
    Dimension { source: usize, target: usize },
    NoHomomorphisms,
    /// `det(Σ tᵢ Xᵢ)` vanishes on a grid large enough to force it to be zero.
    SingularGrid { points: usize },
    /// Every homomorphism was enumerated (finite field) and none is invertible.
    Exhausted { points: usize },
    /// Decompositions into indecomposables differ.
    Summands,
}

impl IsoVerdict {
    pub fn is_isomorphic(&self) -> bool {
        matches!(self, IsoVerdict::Isomorphic(_))
    }

    pub fn map(&self) -> Option<&Matrix> {
        match self {
            IsoVerdict::Isomorphic(m) => Some(m),
            _ => None,
        }
    }
}

fn combination(hom: &HomSpace, basis: &[Matrix], coeffs: &[Scalar]) -> Matrix {
    let (m, n) = hom.shape();
    let mut x = Matrix::zeros(hom.space().field(), m, n);
    for (c, b) in coeffs.iter().zip(basis) {
        if !c.is_zero() {
            x.add_scaled_assign(c, b);
        }
    }
    x
}

/// Walks the points of `{0..size}^d` in lexicographic order.
fn grid_points(field: Field, d: usize, size: usize) -> impl Iterator<Item = Vec<Scalar>> {
    let total = size.checked_pow(d as u32).unwrap_or(usize::MAX);
    (0..total).map(move |mut k| {
        (0..d)
            .map(|_| {
                let c = field.from_i64((k % size) as i64);
                k /= size;
                c
            })
            .collect()
    })
}

pub fn iso_test(source: &ModuleRep, target: &ModuleRep, opts: &Options) -> Result<IsoVerdict> {
    source.check_same_algebra(target)?;
    let (m, n) = (source.dim(), target.dim());
    if m != n {
        return Ok(IsoVerdict::NotIsomorphic(NonIsoReason::Dimension { source: m, target: n }));
    }
    let f = source.field();
    if m == 0 {
        return Ok(IsoVerdict::Isomorphic(Matrix::zeros(f, 0, 0)));
    }
    if source == target {
        return Ok(IsoVerdict::Isomorphic(Matrix::identity(f, m)));
    }
    let hom = hom_space(source, target)?;
    if hom.is_zero() {
        return Ok(IsoVerdict::NotIsomorphic(NonIsoReason::NoHomomorphisms));
    }
    let basis = hom.basis();
    let d = basis.len();
    if let Some(b) = basis.iter().find(|b| b.is_invertible()) {
        return Ok(IsoVerdict::Isomorphic(b.clone()));
    }
    let mut rng = opts.rng(0x150);
    let range = 4 * m as i64 + 4;
    for _ in 0..opts.max_samples {
        let coeffs: Vec<Scalar> = (0..d).map(|_| f.random(&mut rng, range)).collect();
        let x = combination(&hom, &basis, &coeffs);
        if x.is_invertible() {
            return Ok(IsoVerdict::Isomorphic(x));
        }
    }
    // det(Σ tᵢ Xᵢ) has degree ≤ m in each tᵢ, so vanishing on an (m+1)^d grid forces it to be zero
    let fits = |size: usize| size.checked_pow(d as u32).is_some_and(|t| t <= opts.grid_budget);
    let exhaustive = matches!(f, Field::Prime(p) if (p as usize) <= m);
    let size = if exhaustive { f.order().unwrap_or(0) as usize } else { m + 1 };
    if fits(size) {
        for point in grid_points(f, d, size) {
            let x = combination(&hom, &basis, &point);
            if x.is_invertible() {
                return Ok(IsoVerdict::Isomorphic(x));
            }
        }
        let points = size.pow(d as u32);
        let reason = if exhaustive { NonIsoReason::Exhausted { points } } else { NonIsoReason::SingularGrid { points } };
        return Ok(IsoVerdict::NotIsomorphic(reason));
    }
    structural_iso(source, target, opts)
}

/// Compares decompositions into indecomposables and assembles an isomorphism summand by summand.
fn structural_iso(source: &ModuleRep, target: &ModuleRep, opts: &Options) -> Result<IsoVerdict> {
    let ks = krs_decompose(source, opts)?;
    let kt = krs_decompose(target, opts)?;
    let certainty = ks.certainty.and(kt.certainty);
    let not = |c: Certainty| match c {
        Certainty::Certified => IsoVerdict::NotIsomorphic(NonIsoReason::Summands),
        Certainty::Probable { samples } => IsoVerdict::ProbablyNot { samples },
    };
    if ks.signature() != kt.signature() {
        return Ok(not(certainty));
    }
    // match classes of the source to classes of the target
    let mut class_iso: Vec<Option<(usize, Matrix)>> = vec![None; ks.classes.len()];
    let mut used = vec![false; kt.classes.len()];
    for (i, c) in ks.classes.iter().enumerate() {
        for (j, t) in kt.classes.iter().enumerate() {
            if used[j] || t.multiplicity != c.multiplicity {
                continue;
            }
            if let Some(iso) = pairing_iso(&c.representative, &t.representative)? {
                used[j] = true;
                class_iso[i] = Some((j, iso));
                break;
            }
        }
        if class_iso[i].is_none() {
            return Ok(not(certainty));
        }
    }
    let f = source.field();
    let mut x = Matrix::zeros(f, source.dim(), target.dim());
    let mut next_member = vec![0usize; kt.classes.len()];
    for s in &ks.summands {
        let (j, rep_iso) = class_iso[s.class].as_ref().expect("matched");
        let t_idx = kt.classes[*j].members[next_member[*j]];
        next_member[*j] += 1;
        let t = &kt.summands[t_idx];
        let to_t = t.to_representative.inverse().expect("summand isomorphism");
        // M → S → rep(S) → rep(T) → T → N
        let piece = s.projection.mul(&s.to_representative).mul(rep_iso).mul(&to_t).mul(&t.inclusion);
        x = x.add(&piece);
    }
    if !x.is_invertible() || !super::hom::is_homomorphism(source, target, &x) {
        return Err(Error::Verification("assembled isomorphism failed verification".into()));
    }
    Ok(IsoVerdict::Isomorphic(x))
}

/// Idempotent endomorphism projecting onto a summand along the others.
pub fn summand_idempotent(decomposition: &KrsDecomposition, index: usize) -> Matrix {
    let s = &decomposition.summands[index];
    s.projection.mul(&s.inclusion)
}

/// `1 - e` for an idempotent matrix.
pub fn complement_idempotent(e: &Matrix) -> Matrix {
    let f = e.field();
    let mut out = Matrix::identity(f, e.rows());
    out.add_scaled_assign(&-f.one(), e);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{Algebra, Quiver};
    use std::sync::Arc;

    fn cyclic(field: Field, n: usize) -> Arc<Algebra> {
        let labels = (0..n).map(|i| format!("g{i}")).collect();
        let mut unit = vec![field.zero(); n];
        unit[0] = field.one();
        Arc::new(
            Algebra::from_products(field, labels, unit, |i, j| {
                let mut v = vec![field.zero(); n];
                v[(i + j) % n] = field.one();
                v
            })
            .unwrap(),
        )
    }

    fn s3(field: Field) -> Arc<Algebra> {
        let perms: Vec<[usize; 3]> = vec![[0, 1, 2], [1, 2, 0], [2, 0, 1], [1, 0, 2], [0, 2, 1], [2, 1, 0]];
        let labels = (0..6).map(|i| format!("g{i}")).collect();
        let mut unit = vec![field.zero(); 6];
        unit[0] = field.one();
        Arc::new(
            Algebra::from_products(field, labels, unit, |i, j| {
                let h: [usize; 3] = std::array::from_fn(|x| perms[j][perms[i][x]]);
                let mut v = vec![field.zero(); 6];
                v[perms.iter().position(|p| *p == h).unwrap()] = field.one();
                v
            })
            .unwrap(),
        )
    }

    #[test]
    fn regular_module_of_a2_splits_into_projectives() {
        let a = Arc::new(Algebra::path_algebra(&Quiver::from_edges(2, &[("a", 0, 1)]).unwrap(), Field::Rationals));
        let opts = Options::default();
        let k = krs_decompose(&ModuleRep::regular(a.clone()), &opts).unwrap();
        assert_eq!(k.signature(), vec![(1, 1), (2, 1)]);
        for (i, s) in k.summands.iter().enumerate() {
            assert!(s.inclusion.mul(&s.projection).is_identity());
            let p = ModuleRep::projective(a.clone(), if s.module.dim() == 2 { 0 } else { 1 }).unwrap();
            assert!(iso_test(&s.module, &p, &opts).unwrap().is_isomorphic(), "summand {i}");
        }
        let p0 = ModuleRep::projective(a.clone(), 0).unwrap();
        let p1 = ModuleRep::projective(a, 1).unwrap();
        assert!(is_indecomposable(&p0, &opts).unwrap().is_yes());
        assert_eq!(
            iso_test(&p0, &p1, &opts).unwrap(),
            IsoVerdict::NotIsomorphic(NonIsoReason::Dimension { source: 2, target: 1 })
        );
    }

    #[test]
    fn cyclic_group_of_order_three() {
        let opts = Options::default();
        let q = ModuleRep::regular(cyclic(Field::Rationals, 3));
        match is_indecomposable(&q, &opts).unwrap() {
            Indecomposability::No(e) => assert_eq!(e.mul(&e), e),
            other => panic!("{other:?}"),
        }
        assert_eq!(krs_decompose(&q, &opts).unwrap().signature(), vec![(1, 1), (2, 1)]);
        let f7 = ModuleRep::regular(cyclic(Field::Prime(7), 3));
        assert_eq!(krs_decompose(&f7, &opts).unwrap().signature(), vec![(1, 1), (1, 1), (1, 1)]);
        // F_3 C_3 is local
        let f3 = ModuleRep::regular(cyclic(Field::Prime(3), 3));
        assert!(is_indecomposable(&f3, &opts).unwrap().is_yes());
    }

    #[test]
    fn symmetric_group_regular_module() {
        let a = s3(Field::Rationals);
        let m = ModuleRep::regular(a);
        for seed in [0, 1, 17] {
            let k = krs_decompose(&m, &Options::with_seed(seed)).unwrap();
            assert_eq!(k.signature(), vec![(1, 1), (1, 1), (2, 2)]);
            assert!(k.certainty.is_certified());
        }
    }

    #[test]
    fn isomorphism_of_shuffled_sums() {
        let opts = Options::default();
        let a = s3(Field::Rationals);
        let m = ModuleRep::regular(a.clone());
        let k = krs_decompose(&m, &opts).unwrap();
        let two = k.classes.iter().find(|c| c.representative.dim() == 2).unwrap();
        let one = k.classes.iter().find(|c| c.representative.dim() == 1).unwrap();
        let x = ModuleRep::direct_sum(&[&two.representative, &one.representative]).unwrap();
        let y = ModuleRep::direct_sum(&[&one.representative, &two.representative]).unwrap();
        let v = iso_test(&x, &y, &opts).unwrap();
        let map = v.map().expect("isomorphic");
        assert!(map.is_invertible() && crate::modules::is_homomorphism(&x, &y, map));
        // structural route: a grid budget of zero forces the decomposition comparison
        let tight = Options { grid_budget: 0, max_samples: 0, ..Options::default() };
        assert!(iso_test(&x, &y, &tight).unwrap().is_isomorphic());
        let z = ModuleRep::direct_sum(&[&one.representative, &one.representative, &one.representative]).unwrap();
        assert!(!iso_test(&x, &z, &opts).unwrap().is_isomorphic());
        assert!(!iso_test(&x, &z, &tight).unwrap().is_isomorphic());
    }
}
