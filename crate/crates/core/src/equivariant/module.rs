use std::sync::Arc;

use crate::error::{Error, Result};
use crate::groups::Subgroup;
use crate::linalg::Matrix;
use crate::modules::{intertwiners, HomSpace, ModuleRep};

use super::action::{AlgebraAction, SkewAlgebra};

/// A module with a strict `G`-linearisation: `λ_g(m·a) = λ_g(m)·a^g` and
/// `λ_h ∘ λ_g = λ_{gh}`; as row matrices `M_a Λ_g = Λ_g M_{a^g}` and `Λ_{gh} = Λ_g Λ_h`.
#[derive(Clone, Debug)]
pub struct EquivariantModule {
    action: Arc<AlgebraAction>,
    module: ModuleRep,
    linearisation: Vec<Matrix>,
}

impl PartialEq for EquivariantModule {
    fn eq(&self, other: &Self) -> bool {
        self.module == other.module && self.linearisation == other.linearisation && *self.action == *other.action
    }
}

impl EquivariantModule {
    /// From one matrix per group generator; extended to all elements and validated.
    pub fn new(action: Arc<AlgebraAction>, module: ModuleRep, generator_maps: Vec<Matrix>) -> Result<EquivariantModule> {
        let group = action.group().clone();
        if generator_maps.len() != group.generators().len() {
            return Err(Error::InvalidLinearisation(format!(
                "{} matrices for {} generators",
                generator_maps.len(),
                group.generators().len()
            )));
        }
        let id = Matrix::identity(module.field(), module.dim());
        let lin = group.extend_hom(&generator_maps, id, |a, b| a.mul(b)).map_err(|(x, k)| {
            Error::InvalidLinearisation(format!("cocycle fails at {} · generator {k}", group.label(x)))
        })?;
        EquivariantModule::from_element_maps(action, module, lin)
    }

    /// From one matrix per group element (in group order), validated.
    pub fn from_element_maps(action: Arc<AlgebraAction>, module: ModuleRep, lin: Vec<Matrix>) -> Result<EquivariantModule> {
        let m = EquivariantModule { action, module, linearisation: lin };
        m.validate()?;
        Ok(m)
    }

    fn validate(&self) -> Result<()> {
        let g = self.action.group();
        let n = self.module.dim();
        if !Arc::ptr_eq(self.module.algebra(), self.action.algebra()) && **self.module.algebra() != **self.action.algebra() {
            return Err(Error::AlgebraMismatch);
        }
        if self.linearisation.len() != g.order() {
            return Err(Error::InvalidLinearisation("one matrix per group element is required".into()));
        }
        if self.linearisation.iter().any(|l| l.shape() != (n, n)) {
            return Err(Error::InvalidLinearisation("linearisation matrices must match the module".into()));
        }
        if !self.linearisation[g.identity()].is_identity() {
            return Err(Error::InvalidLinearisation("the identity must act trivially".into()));
        }
        for s in g.generator_indices() {
            for x in 0..g.order() {
                if self.linearisation[g.mul(x, s)] != self.linearisation[x].mul(&self.linearisation[s]) {
                    return Err(Error::InvalidLinearisation(format!("cocycle fails at {} · {}", g.label(x), g.label(s))));
                }
            }
        }
        let a = self.action.algebra();
        for (gi, lam) in self.linearisation.iter().enumerate() {
            for i in 0..a.dim() {
                let twisted = self.module.act_matrix(&self.action.apply(&a.basis(i), gi));
                if self.module.action()[i].mul(lam) != lam.mul(&twisted) {
                    return Err(Error::InvalidLinearisation(format!(
                        "λ for {} is not semilinear at {}",
                        g.label(gi),
                        a.labels()[i]
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn action(&self) -> &Arc<AlgebraAction> {
        &self.action
    }

    pub fn module(&self) -> &ModuleRep {
        &self.module
    }

    pub fn dim(&self) -> usize {
        self.module.dim()
    }

    pub fn linearisation(&self) -> &[Matrix] {
        &self.linearisation
    }

    /// `Λ_g`.
    pub fn lambda(&self, g: usize) -> &Matrix {
        &self.linearisation[g]
    }

    pub fn direct_sum(parts: &[&EquivariantModule]) -> Result<EquivariantModule> {
        let first = parts.first().ok_or_else(|| Error::InvalidModule("empty direct sum".into()))?;
        if parts.iter().any(|p| *p.action != *first.action) {
            return Err(Error::GroupMismatch);
        }
        let module = ModuleRep::direct_sum(&parts.iter().map(|p| &p.module).collect::<Vec<_>>())?;
        let f = module.field();
        let lin = (0..first.action.group().order())
            .map(|g| Matrix::block_diagonal(f, &parts.iter().map(|p| p.linearisation[g].clone()).collect::<Vec<_>>()))
            .collect();
        Ok(EquivariantModule { action: first.action.clone(), module, linearisation: lin })
    }
}

/// `A` as a right module over itself with `λ_g = R_g`.
pub fn canonical_linearisation(action: Arc<AlgebraAction>) -> EquivariantModule {
    let module = ModuleRep::regular(action.algebra().clone());
    let lin = action.maps().to_vec();
    EquivariantModule { action, module, linearisation: lin }
}

fn check_skew(skew: &SkewAlgebra, action: &AlgebraAction) -> Result<()> {
    if *skew.action != *action {
        return Err(Error::GroupMismatch);
    }
    Ok(())
}

/// `m·(g, a) = λ_g(m)·a`.
pub fn to_skew_module(m: &EquivariantModule, skew: &SkewAlgebra) -> Result<ModuleRep> {
    check_skew(skew, &m.action)?;
    let g = m.action.group();
    let d = m.action.algebra().dim();
    let action = (0..g.order() * d).map(|x| m.linearisation[x / d].mul(&m.module.action()[x % d])).collect();
    ModuleRep::new_unchecked(skew.algebra.clone(), action)
}

/// Underlying module along `a ↦ (1, a)` with `λ_g(m) = m·(g, 1)`.
pub fn from_skew_module(n: &ModuleRep, skew: &SkewAlgebra) -> Result<EquivariantModule> {
    if !Arc::ptr_eq(n.algebra(), &skew.algebra) && **n.algebra() != *skew.algebra {
        return Err(Error::AlgebraMismatch);
    }
    let a = skew.action.algebra();
    let action = (0..a.dim()).map(|i| n.act_matrix(&skew.embed(&a.basis(i)))).collect();
    let module = ModuleRep::new_unchecked(a.clone(), action)?;
    let lin = (0..skew.action.group().order()).map(|g| n.act_matrix(&skew.group_element(g))).collect();
    let out = EquivariantModule { action: skew.action.clone(), module, linearisation: lin };
    debug_assert!(out.validate().is_ok());
    Ok(out)
}

/// `g_*M`: the same space with `m ⋆ a = m·a^g`.
pub fn twist(m: &ModuleRep, action: &AlgebraAction, g: usize) -> Result<ModuleRep> {
    if !Arc::ptr_eq(m.algebra(), action.algebra()) && **m.algebra() != **action.algebra() {
        return Err(Error::AlgebraMismatch);
    }
    let r = action.map(g);
    let mats = (0..r.rows()).map(|i| m.act_matrix(r.row(i))).collect();
    ModuleRep::new_unchecked(m.algebra().clone(), mats)
}

/// Forgets the linearisation outside a subgroup.
pub fn restrict(m: &EquivariantModule, sub: &Subgroup) -> Result<EquivariantModule> {
    let action = Arc::new(m.action.restrict(sub)?);
    let lin = sub.members().iter().map(|&g| m.linearisation[g].clone()).collect();
    Ok(EquivariantModule { action, module: m.module.clone(), linearisation: lin })
}

/// `Ind_H^G M = ⊕_r M ⊗ (r, 1)` over right coset representatives `r`: block `r` carries
/// `(r⁻¹)_* M`, and `λ_g` sends block `r` to block `r'` through `λ^M_h`, where `r g = h r'`.
pub fn induce(sub: &Subgroup, m: &EquivariantModule, full: &Arc<AlgebraAction>) -> Result<EquivariantModule> {
    if **sub.parent() != **full.group() {
        return Err(Error::NotASubgroup);
    }
    if *m.action != full.restrict(sub)? {
        return Err(Error::GroupMismatch);
    }
    let g = full.group();
    let f = m.module.field();
    let reps = sub.coset_reps();
    let k = reps.len();
    let n = m.dim();
    let blocks: Vec<ModuleRep> = reps.iter().map(|&r| twist(&m.module, full, g.inv(r))).collect::<Result<_>>()?;
    let module = ModuleRep::direct_sum(&blocks.iter().collect::<Vec<_>>())?;
    let lin = (0..g.order())
        .map(|x| {
            let mut l = Matrix::zeros(f, k * n, k * n);
            for (i, &r) in reps.iter().enumerate() {
                let (h, j) = sub.decompose(g.mul(r, x));
                l.set_block(i * n, j * n, &m.linearisation[h]);
            }
            l
        })
        .collect();
    let out = EquivariantModule { action: full.clone(), module, linearisation: lin };
    out.validate().map_err(|e| Error::Verification(format!("induced module: {e}")))?;
    Ok(out)
}

/// `Hom(M, N)^G`: homomorphisms commuting with the linearisations.
pub fn equivariant_hom(m: &EquivariantModule, n: &EquivariantModule) -> Result<HomSpace> {
    if *m.action != *n.action {
        return Err(Error::GroupMismatch);
    }
    m.module.check_same_algebra(&n.module)?;
    let a = m.action.algebra();
    let mut src: Vec<Matrix> = a.generators().iter().map(|x| m.module.act_matrix(x)).collect();
    let mut dst: Vec<Matrix> = a.generators().iter().map(|x| n.module.act_matrix(x)).collect();
    for s in m.action.group().generator_indices() {
        src.push(m.linearisation[s].clone());
        dst.push(n.linearisation[s].clone());
    }
    let space = intertwiners(a.field(), m.dim(), n.dim(), &src, &dst);
    Ok(HomSpace::from_space(m.dim(), n.dim(), space))
}
