use std::sync::Arc;

use crate::algebra::{quaternion_algebra, DivisionVerdict};
use crate::equivariant::{canonical_linearisation, equivariant_hom, skew_algebra, to_skew_module, AlgebraAction, EquivariantModule};
use crate::error::{Error, Result};
use crate::grouprep::{irreducibles, tensor_rep_module};
use crate::groups::FiniteGroup;
use crate::linalg::Matrix;
use crate::modules::{end_algebra, EndAlgebra};
use crate::options::Options;
use crate::scalars::Field;

/// `S_3` acting on the quaternions `(-1,-1)` by permuting `i, j, k`, twisted by the sign.
pub fn quaternion_action(field: Field) -> Result<Arc<AlgebraAction>> {
    let h = Arc::new(quaternion_algebra(field, -1, -1)?);
    let g = Arc::new(FiniteGroup::symmetric(3)?);
    let maps = g
        .generators()
        .iter()
        .map(|p| {
            let odd = (0..3).filter(|&i| p[i] != i).count() == 2;
            let s = field.from_i64(if odd { -1 } else { 1 });
            let mut m = Matrix::zeros(field, 4, 4);
            m.set(0, 0, field.one());
            for i in 0..3 {
                m.set(1 + i, 1 + p[i], s.clone());
            }
            m
        })
        .collect();
    Ok(Arc::new(AlgebraAction::new(g, h, maps)?))
}

#[derive(Clone, Debug)]
pub struct QuaternionReport {
    /// `ρ ⊗ ℍ` for the two-dimensional irreducible `ρ`.
    pub module: EquivariantModule,
    pub hom_dim: usize,
    pub end: EndAlgebra,
    pub verdict: DivisionVerdict,
}

/// Equivariant endomorphisms of `ρ ⊗ ℍ`: a weakly exceptional object whose induced object is not
/// weakly exceptional.
pub fn quaternion_counterexample(field: Field, opts: &Options) -> Result<QuaternionReport> {
    let action = quaternion_action(field)?;
    let table = irreducibles(action.group().clone(), field, opts)?;
    let rho = table
        .entries
        .iter()
        .find(|e| e.dim == 2)
        .ok_or_else(|| Error::Verification("no two-dimensional irreducible".into()))?;
    let module = tensor_rep_module(&rho.module, &canonical_linearisation(action.clone()))?;
    let hom_dim = equivariant_hom(&module, &module)?.dim();
    let skew = skew_algebra(action)?;
    let end = end_algebra(&to_skew_module(&module, &skew)?)?;
    let verdict = end.algebra.is_division_algebra(opts)?;
    Ok(QuaternionReport { module, hom_dim, end, verdict })
}
