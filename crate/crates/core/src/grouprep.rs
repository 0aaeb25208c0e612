//! Group algebras and their irreducible representations over the base field.

use std::cmp::Ordering;
use std::sync::Arc;

use crate::algebra::{Algebra, Certainty};
use crate::equivariant::EquivariantModule;
use crate::error::{Error, Result};
use crate::groups::FiniteGroup;
use crate::linalg::Matrix;
use crate::modules::{end_algebra, krs_decompose, ModuleRep};
use crate::options::Options;
use crate::scalars::{Field, Scalar};

/// `kG` with basis the group elements (in group order) and `g·h = gh`.
#[derive(Clone, Debug)]
pub struct GroupAlgebra {
    pub group: Arc<FiniteGroup>,
    pub algebra: Arc<Algebra>,
}

pub fn group_algebra(group: Arc<FiniteGroup>, field: Field) -> Result<GroupAlgebra> {
    let n = group.order();
    if let Field::Prime(p) = field {
        if (n as u64).is_multiple_of(p) {
            return Err(Error::CharacteristicDividesOrder { characteristic: p, order: n });
        }
    }
    let labels = (0..n).map(|g| group.label(g)).collect();
    let mut unit = vec![field.zero(); n];
    unit[group.identity()] = field.one();
    let algebra = Algebra::from_products(field, labels, unit, |i, j| {
        let mut v = vec![field.zero(); n];
        v[group.mul(i, j)] = field.one();
        v
    })?;
    let gens = group
        .generator_indices()
        .into_iter()
        .map(|g| {
            let mut v = vec![field.zero(); n];
            v[g] = field.one();
            v
        })
        .collect();
    let algebra = algebra.with_generators(gens)?;
    Ok(GroupAlgebra { group, algebra: Arc::new(algebra) })
}

impl GroupAlgebra {
    pub fn regular(&self) -> ModuleRep {
        ModuleRep::regular(self.algebra.clone())
    }

    pub fn trivial_representation(&self) -> ModuleRep {
        let f = self.algebra.field();
        let one = Matrix::identity(f, 1);
        ModuleRep::new(self.algebra.clone(), vec![one; self.group.order()]).expect("trivial representation")
    }

    /// `ρ_g`, the matrix of a group element.
    pub fn matrix<'a>(&self, rho: &'a ModuleRep, g: usize) -> &'a Matrix {
        &rho.action()[g]
    }
}

/// Character values `tr ρ_g` in group order.
pub fn character(rho: &ModuleRep) -> Vec<Scalar> {
    rho.action().iter().map(Matrix::trace).collect()
}

#[derive(Clone, Debug)]
pub struct Irreducible {
    pub module: ModuleRep,
    pub dim: usize,
    /// `dim_k End(ρ)`.
    pub endo_dim: usize,
    /// Copies of `ρ` in the regular representation, `dim ρ / dim End(ρ)`.
    pub multiplicity: usize,
}

#[derive(Clone, Debug)]
pub struct IrreducibleTable {
    pub group_algebra: GroupAlgebra,
    pub entries: Vec<Irreducible>,
    pub certainty: Certainty,
}

fn compare_characters(a: &[Scalar], b: &[Scalar]) -> Ordering {
    a.iter().zip(b).map(|(x, y)| x.canonical_cmp(y)).find(|o| o.is_ne()).unwrap_or(Ordering::Equal)
}

/// Irreducibles as the isomorphism classes of summands of the regular module.
/// Entries are ordered by dimension, endomorphism dimension, then character (trivial first).
pub fn irreducibles(group: Arc<FiniteGroup>, field: Field, opts: &Options) -> Result<IrreducibleTable> {
    let ga = group_algebra(group.clone(), field)?;
    let k = krs_decompose(&ga.regular(), opts)?;
    let mut entries = Vec::new();
    for class in &k.classes {
        let rho = class.representative.clone();
        let dim = rho.dim();
        let endo_dim = end_algebra(&rho)?.algebra.dim();
        if endo_dim == 0 || dim % endo_dim != 0 || dim / endo_dim != class.multiplicity {
            return Err(Error::Verification(format!(
                "irreducible of dimension {dim} has endomorphism dimension {endo_dim} but multiplicity {}",
                class.multiplicity
            )));
        }
        entries.push(Irreducible { module: rho, dim, endo_dim, multiplicity: class.multiplicity });
    }
    let n = group.order();
    let total: usize = entries.iter().map(|e| e.multiplicity * e.dim).sum();
    let squares: usize = entries.iter().map(|e| e.dim * e.dim / e.endo_dim).sum();
    if total != n || squares != n {
        return Err(Error::Verification(format!("irreducibles account for {total} (and {squares}) of {n}")));
    }
    let one = field.one();
    let key = |e: &Irreducible| {
        let chi = character(&e.module);
        let trivial = e.dim == 1 && chi.iter().all(|c| *c == one);
        (e.dim, e.endo_dim, !trivial, chi)
    };
    entries.sort_by(|a, b| {
        let (ka, kb) = (key(a), key(b));
        (ka.0, ka.1, ka.2).cmp(&(kb.0, kb.1, kb.2)).then_with(|| compare_characters(&ka.3, &kb.3))
    });
    Ok(IrreducibleTable { group_algebra: ga, entries, certainty: k.certainty })
}

/// `V ⊗ M` with `A` acting on `M` and linearisation `ρ_g ⊗ λ_g`.
pub fn tensor_rep_module(rho: &ModuleRep, m: &EquivariantModule) -> Result<EquivariantModule> {
    let group = m.action().group();
    if rho.algebra().dim() != group.order() {
        return Err(Error::GroupMismatch);
    }
    if rho.field() != m.module().field() {
        return Err(Error::FieldMismatch(rho.field().to_string(), m.module().field().to_string()));
    }
    let f = rho.field();
    let id = Matrix::identity(f, rho.dim());
    let action = m.module().action().iter().map(|ma| id.kronecker(ma)).collect::<Result<Vec<_>>>()?;
    let module = ModuleRep::new(m.action().algebra().clone(), action)?;
    let lin = (0..group.order())
        .map(|g| rho.action()[g].kronecker(m.lambda(g)))
        .collect::<Result<Vec<_>>>()?;
    EquivariantModule::from_element_maps(m.action().clone(), module, lin)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modules::hom_space;

    fn dims(t: &IrreducibleTable) -> Vec<(usize, usize, usize)> {
        t.entries.iter().map(|e| (e.dim, e.endo_dim, e.multiplicity)).collect()
    }

    #[test]
    fn tables_over_small_fields() {
        let opts = Options::default();
        let s3 = Arc::new(FiniteGroup::symmetric(3).unwrap());
        let c3 = Arc::new(FiniteGroup::cyclic(3));
        let t = irreducibles(s3.clone(), Field::Rationals, &opts).unwrap();
        assert_eq!(dims(&t), vec![(1, 1, 1), (1, 1, 1), (2, 1, 2)]);
        assert_eq!(character(&t.entries[0].module), vec![Field::Rationals.one(); 6]);
        assert_eq!(dims(&irreducibles(c3.clone(), Field::Rationals, &opts).unwrap()), vec![(1, 1, 1), (2, 2, 1)]);
        assert_eq!(dims(&irreducibles(c3, Field::Prime(7), &opts).unwrap()), vec![(1, 1, 1); 3]);
        assert!(matches!(
            group_algebra(s3, Field::Prime(2)),
            Err(Error::CharacteristicDividesOrder { characteristic: 2, order: 6 })
        ));
    }

    #[test]
    fn schur_orthogonality() {
        let s3 = Arc::new(FiniteGroup::symmetric(3).unwrap());
        let t = irreducibles(s3, Field::Prime(5), &Options::default()).unwrap();
        for (i, a) in t.entries.iter().enumerate() {
            for (j, b) in t.entries.iter().enumerate() {
                let d = hom_space(&a.module, &b.module).unwrap().dim();
                assert_eq!(d, if i == j { a.endo_dim } else { 0 });
            }
        }
        assert!(t.group_algebra.algebra.radical().unwrap().is_zero());
    }
}
