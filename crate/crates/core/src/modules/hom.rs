use std::sync::Arc;

use crate::algebra::Algebra;
use crate::error::{Error, Result};
use crate::linalg::{Matrix, Subspace};
use crate::par;
use crate::scalars::{Field, Scalar};

use super::module::ModuleRep;

/// Module homomorphisms `M → N` as matrices `X` with `M_a X = X N_a`.
///
/// The basis is the echelon basis of the flattened matrices, so equal
/// spaces have equal bases.
#[derive(Clone, Debug)]
pub struct HomSpace {
    source_dim: usize,
    target_dim: usize,
    field: Field,
    space: Subspace,
}

impl HomSpace {
    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    pub fn is_zero(&self) -> bool {
        self.space.is_zero()
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.source_dim, self.target_dim)
    }

    pub fn basis(&self) -> Vec<Matrix> {
        self.space.basis().iter().map(|v| Matrix::from_flat(self.field, self.source_dim, self.target_dim, v)).collect()
    }

    pub fn space(&self) -> &Subspace {
        &self.space
    }

    pub fn contains(&self, x: &Matrix) -> bool {
        x.shape() == self.shape() && self.space.contains(x.entries())
    }

    pub fn coordinates(&self, x: &Matrix) -> Option<Vec<Scalar>> {
        if x.shape() != self.shape() {
            return None;
        }
        self.space.coordinates(x.entries())
    }

    pub fn element(&self, coords: &[Scalar]) -> Matrix {
        Matrix::from_flat(self.field, self.source_dim, self.target_dim, &self.space.vector(coords))
    }

    /// Wraps a subspace of flattened `m × n` matrices already known to consist of homomorphisms.
    pub(crate) fn from_space(source_dim: usize, target_dim: usize, space: Subspace) -> HomSpace {
        HomSpace { source_dim, target_dim, field: space.field(), space }
    }
}

/// Linear constraints `M_a X - X N_a = 0` on the row-major entries of `X`, one row per entry.
fn intertwiner_rows(ma: &Matrix, na: &Matrix) -> Vec<Vec<Scalar>> {
    let (m, n) = (ma.rows(), na.rows());
    let f = ma.field();
    par::map_range(m * n, |il| {
        let (i, l) = (il / n, il % n);
        let mut row = vec![f.zero(); m * n];
        for k in 0..m {
            let c = ma.get(i, k);
            if !c.is_zero() {
                row[k * n + l] = &row[k * n + l] + c;
            }
        }
        for k in 0..n {
            let c = na.get(k, l);
            if !c.is_zero() {
                row[i * n + k] = &row[i * n + k] - c;
            }
        }
        row
    })
}

/// Intertwiners between two families of matrices indexed alike (`src[t] X = X dst[t]`).
pub fn intertwiners(field: Field, m: usize, n: usize, src: &[Matrix], dst: &[Matrix]) -> Subspace {
    let total = m * n;
    if total == 0 {
        return Subspace::zero(field, 0);
    }
    let mut space = Subspace::full(field, total);
    for (ma, na) in src.iter().zip(dst) {
        if space.is_zero() {
            break;
        }
        if space.dim() == total {
            let eqs = Matrix::from_rows(field, total, intertwiner_rows(ma, na)).expect("square system");
            space = eqs.kernel();
            continue;
        }
        // restrict to the current solutions X = Σ t_k B_k
        let basis = space.basis().to_vec();
        let images = par::map(&basis, |b| {
            let x = Matrix::from_flat(field, m, n, b);
            ma.mul(&x).sub(&x.mul(na)).flatten()
        });
        let g = Matrix::from_rows(field, total, images).expect("rectangular");
        let kernel = g.left_kernel();
        let vectors = kernel.basis().iter().map(|c| space.vector(c)).collect();
        space = Subspace::span(field, total, vectors);
    }
    space
}

pub fn hom_space(source: &ModuleRep, target: &ModuleRep) -> Result<HomSpace> {
    source.check_same_algebra(target)?;
    let a = source.algebra();
    let gens = a.generators();
    let src: Vec<Matrix> = gens.iter().map(|g| source.act_matrix(g)).collect();
    let dst: Vec<Matrix> = gens.iter().map(|g| target.act_matrix(g)).collect();
    let (m, n) = (source.dim(), target.dim());
    let space = intertwiners(source.field(), m, n, &src, &dst);
    Ok(HomSpace { source_dim: m, target_dim: n, field: source.field(), space })
}

/// Whether `x` is a module homomorphism `source → target`.
pub fn is_homomorphism(source: &ModuleRep, target: &ModuleRep, x: &Matrix) -> bool {
    x.shape() == (source.dim(), target.dim())
        && source.action().iter().zip(target.action()).all(|(ma, na)| ma.mul(x) == x.mul(na))
}

/// `End(M)` with product `φ·ψ = φ∘ψ` (matrix `X_ψ X_φ` in the row convention).
#[derive(Clone, Debug)]
pub struct EndAlgebra {
    pub algebra: Arc<Algebra>,
    pub hom: HomSpace,
}

impl EndAlgebra {
    /// Matrix of an element given in algebra coordinates.
    pub fn matrix(&self, x: &[Scalar]) -> Matrix {
        self.hom.element(x)
    }

    pub fn element(&self, x: &Matrix) -> Option<Vec<Scalar>> {
        self.hom.coordinates(x)
    }
}

pub fn end_algebra(module: &ModuleRep) -> Result<EndAlgebra> {
    let hom = hom_space(module, module)?;
    let basis = hom.basis();
    let f = module.field();
    let unit = hom
        .coordinates(&Matrix::identity(f, module.dim()))
        .ok_or_else(|| Error::Verification("identity is not an endomorphism".into()))?;
    let labels = (0..basis.len()).map(|i| format!("f{i}")).collect();
    let algebra = Algebra::from_products(f, labels, unit, |i, j| {
        hom.coordinates(&basis[j].mul(&basis[i])).expect("endomorphisms compose")
    })?;
    Ok(EndAlgebra { algebra: Arc::new(algebra), hom })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Quiver;

    fn a2() -> Arc<Algebra> {
        Arc::new(Algebra::path_algebra(&Quiver::from_edges(2, &[("a", 0, 1)]).unwrap(), Field::Rationals))
    }

    #[test]
    fn homs_between_projectives() {
        let a = a2();
        let p0 = ModuleRep::projective(a.clone(), 0).unwrap();
        let p1 = ModuleRep::projective(a.clone(), 1).unwrap();
        // Hom(P(i), P(j)) ≅ e_j A e_i: paths from j to i
        assert_eq!(hom_space(&p1, &p0).unwrap().dim(), 1);
        assert_eq!(hom_space(&p0, &p1).unwrap().dim(), 0);
        assert_eq!(hom_space(&p0, &p0).unwrap().dim(), 1);
        let id = Matrix::identity(Field::Rationals, 2);
        assert!(hom_space(&p0, &p0).unwrap().contains(&id));
    }

    #[test]
    fn end_of_regular_module_has_algebra_dimension() {
        let a = a2();
        let e = end_algebra(&ModuleRep::regular(a.clone())).unwrap();
        assert_eq!(e.algebra.dim(), a.dim());
        let p = ModuleRep::projective(a, 0).unwrap();
        let pp = ModuleRep::direct_sum(&[&p, &p]).unwrap();
        assert_eq!(end_algebra(&pp).unwrap().algebra.dim(), 4);
    }
}
