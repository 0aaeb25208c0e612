use std::sync::Arc;

use crate::algebra::Algebra;
use crate::error::{Error, Result};
use crate::linalg::{Matrix, Subspace};
use crate::par;
use crate::scalars::{Field, Scalar};

/// A finite-dimensional right module: `m·b_i = m M_i` on row vectors, so `M_{ab} = M_a M_b`.
#[derive(Clone, Debug)]
pub struct ModuleRep {
    algebra: Arc<Algebra>,
    dim: usize,
    action: Vec<Matrix>,
}

impl PartialEq for ModuleRep {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim && self.action == other.action && same_algebra(&self.algebra, &other.algebra)
    }
}

impl Eq for ModuleRep {}

pub(crate) fn same_algebra(a: &Arc<Algebra>, b: &Arc<Algebra>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

impl ModuleRep {
    /// Validated constructor: one `dim × dim` matrix per basis element, unit acts
    /// as the identity and `M_{b_i b_j} = M_i M_j`.
    pub fn new(algebra: Arc<Algebra>, action: Vec<Matrix>) -> Result<ModuleRep> {
        let m = ModuleRep::new_unchecked(algebra, action)?;
        m.validate()?;
        Ok(m)
    }

    /// Shape checks only; for constructions that are modules by design.
    pub(crate) fn new_unchecked(algebra: Arc<Algebra>, action: Vec<Matrix>) -> Result<ModuleRep> {
        if action.len() != algebra.dim() {
            return Err(Error::InvalidModule(format!(
                "{} action matrices for an algebra of dimension {}",
                action.len(),
                algebra.dim()
            )));
        }
        let dim = action.first().map_or(0, Matrix::rows);
        for m in &action {
            if m.shape() != (dim, dim) || m.field() != algebra.field() {
                return Err(Error::InvalidModule("action matrices must be square of a common size".into()));
            }
        }
        Ok(ModuleRep { algebra, dim, action })
    }

    pub fn validate(&self) -> Result<()> {
        let a = &self.algebra;
        if !self.act_matrix(a.unit()).is_identity() {
            return Err(Error::InvalidModule("the unit does not act as the identity".into()));
        }
        let d = a.dim();
        let bad = par::map_range(d, |i| {
            (0..d).find(|&j| self.act_matrix(&a.mul(&a.basis(i), &a.basis(j))) != self.action[i].mul(&self.action[j]))
                .map(|j| (i, j))
        });
        if let Some((i, j)) = bad.into_iter().flatten().next() {
            return Err(Error::InvalidModule(format!(
                "action is not multiplicative on the basis pair ({}, {})",
                a.labels()[i],
                a.labels()[j]
            )));
        }
        Ok(())
    }

    /// The regular right module `A_A`.
    pub fn regular(algebra: Arc<Algebra>) -> ModuleRep {
        let action = (0..algebra.dim()).map(|i| algebra.right_matrix(&algebra.basis(i))).collect();
        ModuleRep::new_unchecked(algebra, action).expect("regular module shape")
    }

    pub fn zero(algebra: Arc<Algebra>) -> ModuleRep {
        let f = algebra.field();
        let action = vec![Matrix::zeros(f, 0, 0); algebra.dim()];
        ModuleRep { algebra, dim: 0, action }
    }

    /// The right ideal `eA` of an idempotent, as a module.
    pub fn right_ideal(algebra: Arc<Algebra>, e: &[Scalar]) -> Result<ModuleRep> {
        let space = algebra.sandwich(e, algebra.unit());
        let regular = ModuleRep::regular(algebra);
        regular.submodule(&space)
    }

    /// Indecomposable projective `P(v) = e_v A` of a path algebra, with the paths from `v` as basis.
    pub fn projective(algebra: Arc<Algebra>, vertex: usize) -> Result<ModuleRep> {
        let pb = algebra.path_basis().ok_or(Error::NotPathAlgebra)?;
        if vertex >= pb.quiver.vertex_count() {
            return Err(Error::UnknownVertex(vertex.to_string()));
        }
        let e = algebra.basis(pb.vertex(vertex));
        ModuleRep::right_ideal(algebra, &e)
    }

    /// Simple module `S(v)` of a path algebra: one dimension, `e_v` acts as 1, all else as 0.
    pub fn simple(algebra: Arc<Algebra>, vertex: usize) -> Result<ModuleRep> {
        let pb = algebra.path_basis().ok_or(Error::NotPathAlgebra)?;
        if vertex >= pb.quiver.vertex_count() {
            return Err(Error::UnknownVertex(vertex.to_string()));
        }
        let f = algebra.field();
        let target = pb.vertex(vertex);
        let action = (0..algebra.dim()).map(|i| Matrix::from_rows(f, 1, vec![vec![if i == target { f.one() } else { f.zero() }]])).collect::<Result<Vec<_>>>()?;
        ModuleRep::new_unchecked(algebra, action)
    }

    pub fn algebra(&self) -> &Arc<Algebra> {
        &self.algebra
    }

    pub fn field(&self) -> Field {
        self.algebra.field()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn action(&self) -> &[Matrix] {
        &self.action
    }

    /// Action matrix of an arbitrary algebra element.
    pub fn act_matrix(&self, x: &[Scalar]) -> Matrix {
        let mut m = Matrix::zeros(self.field(), self.dim, self.dim);
        for (c, a) in x.iter().zip(&self.action) {
            m.add_scaled_assign(c, a);
        }
        m
    }

    pub fn act(&self, v: &[Scalar], x: &[Scalar]) -> Vec<Scalar> {
        self.act_matrix(x).vec_mul(v)
    }

    pub fn check_same_algebra(&self, other: &ModuleRep) -> Result<()> {
        if same_algebra(&self.algebra, &other.algebra) {
            Ok(())
        } else {
            Err(Error::AlgebraMismatch)
        }
    }

    /// Whether `space` is closed under the action.
    pub fn is_submodule(&self, space: &Subspace) -> bool {
        space.basis().iter().all(|v| self.action.iter().all(|m| space.contains(&m.vec_mul(v))))
    }

    /// Submodule on an invariant subspace, in the subspace's echelon basis.
    pub fn submodule(&self, space: &Subspace) -> Result<ModuleRep> {
        Ok(self.submodule_with_maps(space)?.0)
    }

    /// Submodule with its inclusion `B` (rows = basis) and a retraction `P` with `B·P = I`.
    pub fn submodule_with_maps(&self, space: &Subspace) -> Result<(ModuleRep, Matrix, Matrix)> {
        if space.ambient_dim() != self.dim || !self.is_submodule(space) {
            return Err(Error::InvalidModule("subspace is not a submodule".into()));
        }
        let b = space.basis_matrix();
        let p = Matrix::identity(self.field(), self.dim).select_columns(space.pivots());
        let action = self.action.iter().map(|m| b.mul(m).mul(&p)).collect();
        let sub = ModuleRep::new_unchecked(self.algebra.clone(), action)?;
        Ok((sub, b, p))
    }

    /// Quotient module `M / W` with the projection `M → M/W`.
    pub fn quotient_with_map(&self, space: &Subspace) -> Result<(ModuleRep, Matrix)> {
        if space.ambient_dim() != self.dim || !self.is_submodule(space) {
            return Err(Error::InvalidModule("subspace is not a submodule".into()));
        }
        let comp = space.complement_indices();
        let f = self.field();
        let proj_rows: Vec<Vec<Scalar>> = (0..self.dim)
            .map(|i| {
                let mut e = vec![f.zero(); self.dim];
                e[i] = f.one();
                let r = space.reduce(&e);
                comp.iter().map(|&c| r[c].clone()).collect()
            })
            .collect();
        let proj = Matrix::from_rows(f, comp.len(), proj_rows)?;
        let lift = Matrix::identity(f, self.dim).select_rows(&comp);
        let action = self.action.iter().map(|m| lift.mul(m).mul(&proj)).collect();
        Ok((ModuleRep::new_unchecked(self.algebra.clone(), action)?, proj))
    }

    /// Image of a module endomorphism or homomorphism `v ↦ v X` as a submodule of the target.
    pub fn image_of(target: &ModuleRep, x: &Matrix) -> Result<ModuleRep> {
        target.submodule(&x.row_space())
    }

    pub fn direct_sum(parts: &[&ModuleRep]) -> Result<ModuleRep> {
        let first = parts.first().ok_or_else(|| Error::InvalidModule("empty direct sum".into()))?;
        for p in parts {
            first.check_same_algebra(p)?;
        }
        let f = first.field();
        let action = (0..first.algebra.dim())
            .map(|i| Matrix::block_diagonal(f, &parts.iter().map(|p| p.action[i].clone()).collect::<Vec<_>>()))
            .collect();
        ModuleRep::new_unchecked(first.algebra.clone(), action)
    }

    /// Same action on a new basis: rows of `p` are the new basis vectors (`p` invertible).
    pub fn change_basis(&self, p: &Matrix) -> Result<ModuleRep> {
        let inv = p.inverse().ok_or_else(|| Error::InvalidModule("change of basis is singular".into()))?;
        let action = self.action.iter().map(|m| p.mul(m).mul(&inv)).collect();
        ModuleRep::new_unchecked(self.algebra.clone(), action)
    }

    /// Restriction along an algebra map `φ: B → A` given by the images of B's basis.
    pub fn restrict_along(&self, source: Arc<Algebra>, images: &[Vec<Scalar>]) -> Result<ModuleRep> {
        if images.len() != source.dim() {
            return Err(Error::DimensionMismatch { expected: source.dim(), got: images.len() });
        }
        let action = images.iter().map(|x| self.act_matrix(x)).collect();
        ModuleRep::new(source, action)
    }

    /// Submodule generated by the given vectors.
    pub fn generated_submodule(&self, vectors: &[Vec<Scalar>]) -> Subspace {
        let mut all = Vec::with_capacity(vectors.len() * self.action.len());
        for v in vectors {
            for m in &self.action {
                all.push(m.vec_mul(v));
            }
        }
        Subspace::span(self.field(), self.dim, all)
    }

    /// A generating set chosen greedily from the standard basis.
    pub fn generators(&self) -> Vec<Vec<Scalar>> {
        let f = self.field();
        let mut gens = Vec::new();
        let mut span = Subspace::zero(f, self.dim);
        for i in 0..self.dim {
            let mut e = vec![f.zero(); self.dim];
            e[i] = f.one();
            if !span.contains(&e) {
                gens.push(e);
                span = self.generated_submodule(&gens);
            }
        }
        gens
    }
}
