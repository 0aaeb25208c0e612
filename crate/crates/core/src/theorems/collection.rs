use crate::algebra::{Certainty, DivisionVerdict};
use crate::equivariant::{induce, skew_algebra, to_skew_module, EquivariantModule, SkewAlgebra};
use crate::error::{Error, Result};
use crate::grouprep::{irreducibles, tensor_rep_module};
use crate::modules::{end_algebra, ext1, hom_space, EndAlgebra, ModuleRep};
use crate::options::Options;
use crate::par;

use super::setup::{validate_setup, ExceptionalSetup};
use super::Check;

/// `F_{i,ρ} = Ind_{H_i}^G(ρ ⊗ 𝓔_i)`, both as an equivariant module and as a skew-algebra module.
#[derive(Clone, Debug)]
pub struct InducedObject {
    pub block: usize,
    pub vertex: usize,
    /// Position of `ρ` in the irreducible table of the stabilizer.
    pub irrep: usize,
    pub label: String,
    pub rho_dim: usize,
    pub rho_endo_dim: usize,
    /// `n_{i,ρ} = [G:H_i]·dim ρ / dim End(ρ)`.
    pub multiplicity: usize,
    pub equivariant: EquivariantModule,
    pub module: ModuleRep,
}

#[derive(Clone, Debug)]
pub struct InducedCollection {
    pub skew: SkewAlgebra,
    pub objects: Vec<InducedObject>,
    /// `𝔽 = ⊕ F_{i,ρ}`, in object order.
    pub sum: ModuleRep,
    pub end: EndAlgebra,
    pub checks: Vec<Check>,
    pub certainty: Certainty,
}

impl InducedCollection {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    /// `dim Hom(F_a, F_b)` for all pairs.
    pub fn cartan(&self) -> Result<Vec<Vec<usize>>> {
        let n = self.objects.len();
        let rows = par::map_range(n, |a| {
            (0..n).map(|b| Ok(hom_space(&self.objects[a].module, &self.objects[b].module)?.dim())).collect::<Result<Vec<_>>>()
        });
        rows.into_iter().collect()
    }
}

pub fn induced_collection(setup: &ExceptionalSetup, opts: &Options) -> Result<InducedCollection> {
    let report = validate_setup(setup, opts)?;
    if let Some(c) = report.failures().first() {
        return Err(Error::InvalidSetup(format!("{}: {}", c.name, c.detail)));
    }
    let action = setup.action.clone();
    let field = action.algebra().field();
    let skew = skew_algebra(action.clone())?;
    let mut objects = Vec::new();
    let mut certainty = Certainty::Certified;
    for (bi, block) in setup.blocks.iter().enumerate() {
        let h = &block.stabilizer;
        let table = irreducibles(h.group().clone(), field, opts)?;
        certainty = certainty.and(table.certainty);
        for (ri, rho) in table.entries.iter().enumerate() {
            let twisted = tensor_rep_module(&rho.module, &block.linearisation)?;
            let equivariant = induce(h, &twisted, &action)?;
            let module = to_skew_module(&equivariant, &skew)?;
            objects.push(InducedObject {
                block: bi,
                vertex: block.representative,
                irrep: ri,
                label: format!("F[{},ρ{}]", block.representative, ri),
                rho_dim: rho.dim,
                rho_endo_dim: rho.endo_dim,
                multiplicity: h.index() * rho.multiplicity,
                equivariant,
                module,
            });
        }
    }
    let sum = ModuleRep::direct_sum(&objects.iter().map(|o| &o.module).collect::<Vec<_>>())?;
    let end = end_algebra(&sum)?;

    let mut checks = Vec::new();
    let total: usize = objects.iter().map(|o| o.multiplicity * o.module.dim()).sum();
    checks.push(Check::new(
        "Σ n·dim F equals dim of the skew algebra",
        total == skew.dim(),
        format!("{total} vs {}", skew.dim()),
    ));

    // each F is weakly exceptional with End(F) ≅ End(ρ)
    let mut bad = Vec::new();
    for (k, o) in objects.iter().enumerate() {
        let e = end_algebra(&o.module)?;
        let verdict = e.algebra.is_division_algebra(opts)?;
        if let DivisionVerdict::ProbablyYes { samples } = verdict {
            certainty = certainty.and(Certainty::Probable { samples });
        }
        if e.algebra.dim() != o.rho_endo_dim || verdict.is_no() || ext1(&o.module, &o.module)?.dim != 0 {
            bad.push(k);
        }
    }
    checks.push(Check::new(
        "each F is weakly exceptional with End(F) of dimension dim End(ρ)",
        bad.is_empty(),
        format!("objects {bad:?}"),
    ));

    // orthogonality: complete inside blocks, semi-orthogonal between blocks
    let n = objects.len();
    let pairs: Vec<(usize, usize)> =
        (0..n).flat_map(|a| (0..n).map(move |b| (a, b))).filter(|&(a, b)| a != b).collect();
    let results = par::map(&pairs, |&(a, b)| -> Result<Option<(usize, usize)>> {
        let (oa, ob) = (&objects[a], &objects[b]);
        // Hom*(F_a, F_b) must vanish if a is later than b, or in the same block
        if oa.block < ob.block {
            return Ok(None);
        }
        let zero = hom_space(&oa.module, &ob.module)?.is_zero() && ext1(&oa.module, &ob.module)?.dim == 0;
        Ok((!zero).then_some((a, b)))
    });
    let mut within = Vec::new();
    let mut between = Vec::new();
    for r in results {
        if let Some((a, b)) = r? {
            if objects[a].block == objects[b].block {
                within.push((a, b));
            } else {
                between.push((a, b));
            }
        }
    }
    checks.push(Check::new("block members completely orthogonal", within.is_empty(), format!("pairs {within:?}")));
    checks.push(Check::new("blocks semi-orthogonal in Hom and Ext¹", between.is_empty(), format!("pairs {between:?}")));
    Ok(InducedCollection { skew, objects, sum, end, checks, certainty })
}
