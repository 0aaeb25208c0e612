use std::sync::Arc;

use serde::Serialize;

use crate::algebra::Algebra;
use crate::equivariant::{AlgebraAction, EquivariantModule};
use crate::error::{Error, Result};
use crate::groups::{SetAction, Subgroup};
use crate::linalg::is_zero_vec;
use crate::modules::{ext1, hom_space, ModuleRep};
use crate::options::Options;
use crate::scalars::Scalar;

use super::Check;

/// One orbit of vertices: a representative `i`, its stabilizer `H_i`, and `P(i) = e_i A`
/// with the `H_i`-linearisation obtained by restricting the action.
#[derive(Clone, Debug)]
pub struct Block {
    pub orbit: Vec<usize>,
    pub representative: usize,
    pub stabilizer: Subgroup,
    pub linearisation: EquivariantModule,
}

/// An algebra with a complete set of orthogonal idempotents ("vertices") permuted by a
/// group action, grouped into orbits in an order meant to be semi-orthogonal.
#[derive(Clone, Debug)]
pub struct ExceptionalSetup {
    pub action: Arc<AlgebraAction>,
    pub idempotents: Vec<Vec<Scalar>>,
    pub vertex_action: SetAction,
    pub blocks: Vec<Block>,
}

impl ExceptionalSetup {
    /// Vertices are the trivial paths of a path algebra.
    pub fn for_path_algebra(action: Arc<AlgebraAction>, order: Option<Vec<usize>>) -> Result<ExceptionalSetup> {
        let a = action.algebra();
        let pb = a.path_basis().ok_or(Error::NotPathAlgebra)?;
        let idem = (0..pb.quiver.vertex_count()).map(|v| a.basis(pb.vertex(v))).collect();
        ExceptionalSetup::new(action, idem, order)
    }

    /// `order`, if given, lists the orbits by their smallest vertex; otherwise orbits are sorted so
    /// that no later orbit maps nonzero into an earlier one (sinks first).
    pub fn new(action: Arc<AlgebraAction>, idempotents: Vec<Vec<Scalar>>, order: Option<Vec<usize>>) -> Result<ExceptionalSetup> {
        let a = action.algebra().clone();
        let f = a.field();
        let n = idempotents.len();
        if n == 0 {
            return Err(Error::InvalidSetup("no vertex idempotents".into()));
        }
        let (p, group_order) = (f.characteristic(), action.group().order());
        if p > 0 && (group_order as u64).is_multiple_of(p) {
            return Err(Error::CharacteristicDividesOrder { characteristic: p, order: group_order });
        }
        check_idempotents(&a, &idempotents)?;
        let vertex_action = vertex_permutations(&action, &idempotents)?;

        let orbits = vertex_action.orbits();
        let order = match order {
            Some(o) => {
                let mut sorted = o.clone();
                sorted.sort_unstable();
                let mins: Vec<usize> = orbits.iter().map(|o| o[0]).collect();
                if sorted != mins {
                    return Err(Error::InvalidSetup(format!("block order {o:?} does not list the orbits {mins:?}")));
                }
                o.iter().map(|m| mins.iter().position(|x| x == m).expect("listed orbit")).collect()
            }
            None => default_order(&a, &idempotents, &orbits)?,
        };
        let regular = ModuleRep::regular(a.clone());
        let mut blocks = Vec::new();
        for k in order {
            let orbit = orbits[k].clone();
            let rep = orbit[0];
            let stabilizer = vertex_action.stabilizer(rep);
            let space = a.sandwich(&idempotents[rep], a.unit());
            let (module, incl, proj) = regular.submodule_with_maps(&space)?;
            let sub_action = Arc::new(action.restrict(&stabilizer)?);
            let lin = stabilizer.members().iter().map(|&h| incl.mul(action.map(h)).mul(&proj)).collect();
            let linearisation = EquivariantModule::from_element_maps(sub_action, module, lin)?;
            blocks.push(Block { orbit, representative: rep, stabilizer, linearisation });
        }
        Ok(ExceptionalSetup { action, idempotents, vertex_action, blocks })
    }

    pub fn algebra(&self) -> &Arc<Algebra> {
        self.action.algebra()
    }

    pub fn projective(&self, vertex: usize) -> Result<ModuleRep> {
        ModuleRep::right_ideal(self.algebra().clone(), &self.idempotents[vertex])
    }
}

fn check_idempotents(a: &Algebra, idem: &[Vec<Scalar>]) -> Result<()> {
    let mut sum = a.zero();
    for (i, e) in idem.iter().enumerate() {
        if e.len() != a.dim() {
            return Err(Error::DimensionMismatch { expected: a.dim(), got: e.len() });
        }
        if is_zero_vec(e) {
            return Err(Error::InvalidSetup(format!("idempotent {i} is zero")));
        }
        for (j, f) in idem.iter().enumerate() {
            let p = a.mul(e, f);
            let ok = if i == j { p == *e } else { is_zero_vec(&p) };
            if !ok {
                return Err(Error::InvalidSetup(format!("idempotents {i} and {j} are not orthogonal idempotents")));
            }
        }
        crate::linalg::axpy(&mut sum, &a.field().one(), e);
    }
    if sum != a.unit() {
        return Err(Error::InvalidSetup("idempotents do not sum to the unit".into()));
    }
    Ok(())
}

/// The permutation `i ↦ ig` with `(e_i)^g = e_{ig}`, for each generator.
fn vertex_permutations(action: &AlgebraAction, idem: &[Vec<Scalar>]) -> Result<SetAction> {
    let group = action.group().clone();
    let mut perms = Vec::new();
    for g in group.generator_indices() {
        let mut perm = Vec::with_capacity(idem.len());
        for (i, e) in idem.iter().enumerate() {
            let image = action.apply(e, g);
            let j = idem.iter().position(|f| *f == image).ok_or_else(|| {
                Error::InvalidSetup(format!("{} does not permute the vertex idempotents (vertex {i})", group.label(g)))
            })?;
            perm.push(j);
        }
        perms.push(perm);
    }
    SetAction::new(group, idem.len(), perms)
}

/// Kahn's algorithm on orbits: `Y` precedes `X` whenever `e_x A e_y ≠ 0`, i.e. `Hom(P(y), P(x)) ≠ 0`.
fn default_order(a: &Algebra, idem: &[Vec<Scalar>], orbits: &[Vec<usize>]) -> Result<Vec<usize>> {
    let k = orbits.len();
    let mut before = vec![vec![false; k]; k];
    for (x, ox) in orbits.iter().enumerate() {
        for (y, oy) in orbits.iter().enumerate() {
            if x != y && ox.iter().any(|&u| oy.iter().any(|&v| !a.sandwich(&idem[u], &idem[v]).is_zero())) {
                before[y][x] = true;
            }
        }
    }
    let mut done = vec![false; k];
    let mut out = Vec::with_capacity(k);
    while out.len() < k {
        let next = (0..k)
            .find(|&x| !done[x] && (0..k).all(|y| done[y] || !before[y][x]))
            .ok_or_else(|| Error::InvalidSetup("orbits admit no semi-orthogonal order (oriented cycle between orbits)".into()))?;
        done[next] = true;
        out.push(next);
    }
    Ok(out)
}

#[derive(Clone, Debug, Serialize)]
pub struct SetupReport {
    pub checks: Vec<Check>,
}

impl SetupReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> Vec<&Check> {
        self.checks.iter().filter(|c| !c.passed).collect()
    }
}

/// Checks the hypotheses on the sequence of projectives `P(i)`: exceptional objects, semi-orthogonal
/// blocks, completely orthogonal members within a block, and a compatible linearisation.
/// Only `Hom` and `Ext¹` are computed; higher `Ext` from a projective vanish anyway.
pub fn validate_setup(setup: &ExceptionalSetup, opts: &Options) -> Result<SetupReport> {
    let a = setup.algebra();
    let g = setup.action.group();
    let mut checks = Vec::new();
    let n = setup.idempotents.len();
    let projectives: Vec<ModuleRep> = (0..n).map(|v| setup.projective(v)).collect::<Result<_>>()?;

    let covered: usize = setup.blocks.iter().map(|b| b.orbit.len()).sum();
    checks.push(Check::new("blocks are the vertex orbits", covered == n, format!("{covered} of {n} vertices covered")));

    let p = a.field().characteristic();
    checks.push(Check::new(
        "characteristic coprime to the group order",
        p == 0 || !(g.order() as u64).is_multiple_of(p),
        format!("char {p}, |G| = {}", g.order()),
    ));

    // exceptional objects
    let mut bad = Vec::new();
    for (v, pv) in projectives.iter().enumerate() {
        let corner = a.sandwich(&setup.idempotents[v], &setup.idempotents[v]).dim();
        if corner != 1 {
            let end = crate::modules::end_algebra(pv)?;
            if !matches!(end.algebra.is_division_algebra(opts)?, crate::algebra::DivisionVerdict::Certified) {
                bad.push(v);
            }
        }
        if ext1(pv, pv)?.dim != 0 {
            bad.push(v);
        }
    }
    checks.push(Check::new("each P(i) is (weakly) exceptional", bad.is_empty(), format!("offending vertices {bad:?}")));

    // semi-orthogonality between blocks
    let mut bad = Vec::new();
    for (bl, later) in setup.blocks.iter().enumerate() {
        for earlier in &setup.blocks[..bl] {
            for &x in &later.orbit {
                for &y in &earlier.orbit {
                    if !hom_space(&projectives[x], &projectives[y])?.is_zero() || ext1(&projectives[x], &projectives[y])?.dim != 0 {
                        bad.push((x, y));
                    }
                }
            }
        }
    }
    checks.push(Check::new(
        "semi-orthogonal block order",
        bad.is_empty(),
        format!("nonzero Hom*(P(later), P(earlier)) for pairs {bad:?}"),
    ));

    // complete orthogonality inside blocks
    let mut bad = Vec::new();
    for b in &setup.blocks {
        for &x in &b.orbit {
            for &y in &b.orbit {
                if x != y && (!hom_space(&projectives[x], &projectives[y])?.is_zero() || ext1(&projectives[x], &projectives[y])?.dim != 0) {
                    bad.push((x, y));
                }
            }
        }
    }
    checks.push(Check::new("orbit members completely orthogonal", bad.is_empty(), format!("pairs {bad:?}")));

    // linearisation is the restricted action
    let mut bad = Vec::new();
    for b in &setup.blocks {
        let rep = b.representative;
        let e = &setup.idempotents[rep];
        let space = a.sandwich(e, a.unit());
        let incl = space.basis_matrix();
        let lin = &b.linearisation;
        let ok = lin.module() == &projectives[rep]
            && b.stabilizer.members().iter().enumerate().all(|(k, &h)| {
                incl.mul(setup.action.map(h)) == lin.lambda(k).mul(&incl)
            });
        if !ok {
            bad.push(rep);
        }
    }
    checks.push(Check::new("linearisations restrict the action", bad.is_empty(), format!("representatives {bad:?}")));
    Ok(SetupReport { checks })
}
