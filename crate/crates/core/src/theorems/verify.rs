use serde::Serialize;

use crate::algebra::Certainty;
use crate::error::{Error, Result};
use crate::grouprep::irreducibles;
use crate::linalg::Matrix;
use crate::modules::{is_homomorphism, iso_test, krs_decompose, ModuleRep};
use crate::options::Options;

use super::basic::{basic_reduction_from, match_cartan, quiver_with_idempotents, BasicQuiver, BasicReduction};
use super::collection::{induced_collection, InducedCollection};
use super::setup::ExceptionalSetup;
use super::Check;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Verdict {
    Verified,
    Failed,
}

/// Outcome of comparing `End(𝔽)` with the basic reduction of the skew algebra.
#[derive(Clone, Debug)]
pub struct MainTheoremReport {
    pub verdict: Verdict,
    pub checks: Vec<Check>,
    pub collection: InducedCollection,
    pub reduction: BasicReduction,
    /// KRS class of the regular skew module matched to each `F`.
    pub matching: Vec<usize>,
    /// Isomorphism `F_a → P_{matching[a]}` for each object.
    pub object_isos: Vec<Matrix>,
    /// Row `k`: image of the `k`-th basis element of `End(𝔽)` in coordinates of the basic reduction.
    pub isomorphism: Option<Matrix>,
    pub certainty: Certainty,
}

impl MainTheoremReport {
    pub fn skew_dim(&self) -> usize {
        self.collection.skew.dim()
    }

    pub fn end_dim(&self) -> usize {
        self.collection.end.algebra.dim()
    }

    pub fn basic_dim(&self) -> usize {
        self.reduction.algebra().dim()
    }

    pub fn multiplicities(&self) -> Vec<usize> {
        self.collection.objects.iter().map(|o| o.multiplicity).collect()
    }
}

pub fn verify_main_theorem(setup: &ExceptionalSetup, opts: &Options) -> Result<MainTheoremReport> {
    let collection = induced_collection(setup, opts)?;
    let skew = &collection.skew;
    let regular = ModuleRep::regular(skew.algebra.clone());
    let krs = krs_decompose(&regular, opts)?;
    let mut checks = collection.checks.clone();
    let mut certainty = collection.certainty.and(krs.certainty);

    // match each F to a class of indecomposable projectives
    let mut matching = Vec::new();
    let mut object_isos = Vec::new();
    let mut unmatched = Vec::new();
    for (a, o) in collection.objects.iter().enumerate() {
        let mut found = None;
        for (c, class) in krs.classes.iter().enumerate() {
            let v = iso_test(&o.module, &class.representative, opts)?;
            if let Some(x) = v.map() {
                found = Some((c, x.clone()));
                break;
            }
            if let crate::modules::IsoVerdict::ProbablyNot { samples } = v {
                certainty = certainty.and(Certainty::Probable { samples });
            }
        }
        match found {
            Some((c, x)) => {
                matching.push(c);
                object_isos.push(x);
            }
            None => {
                unmatched.push(a);
                matching.push(usize::MAX);
                object_isos.push(Matrix::zeros(o.module.field(), 0, 0));
            }
        }
    }
    checks.push(Check::new("every F is an indecomposable projective", unmatched.is_empty(), format!("objects {unmatched:?}")));
    let mut hit = vec![0usize; krs.classes.len()];
    for &c in matching.iter().filter(|&&c| c != usize::MAX) {
        hit[c] += 1;
    }
    checks.push(Check::new(
        "F's exhaust the projective classes, one each",
        hit.iter().all(|&h| h == 1) && unmatched.is_empty(),
        format!("class hits {hit:?}"),
    ));
    let mult_ok = unmatched.is_empty()
        && collection.objects.iter().zip(&matching).all(|(o, &c)| krs.classes[c].multiplicity == o.multiplicity);
    checks.push(Check::new(
        "class multiplicities equal n = [G:H]·dim ρ / dim End ρ",
        mult_ok,
        format!(
            "n = {:?}, KRS = {:?}",
            collection.objects.iter().map(|o| o.multiplicity).collect::<Vec<_>>(),
            matching.iter().map(|&c| krs.classes.get(c).map(|k| k.multiplicity)).collect::<Vec<_>>()
        ),
    ));

    let reduction = basic_reduction_from(skew.dim(), krs)?;
    let end_dim = collection.end.algebra.dim();
    checks.push(Check::new(
        "dim End(𝔽) = dim of the basic reduction",
        end_dim == reduction.algebra().dim(),
        format!("{end_dim} vs {}", reduction.algebra().dim()),
    ));
    let f_cartan = collection.cartan()?;
    let lf: Vec<usize> = collection.objects.iter().map(|o| o.module.dim()).collect();
    let rf = reduction.projective_dims();
    let perm = match_cartan(&f_cartan, &reduction.cartan, &lf, &rf);
    checks.push(Check::new(
        "Cartan matrices agree up to a permutation",
        perm.is_some(),
        format!("End(𝔽): {f_cartan:?}, basic: {:?}", reduction.cartan),
    ));

    let one_each = unmatched.is_empty() && hit.iter().all(|&h| h == 1);
    let split_ok = one_each && mult_ok && split_maps_ok(&collection, &reduction, &matching, &object_isos)?;
    checks.push(Check::new(
        "𝔽 and the regular module are summands of each other",
        split_ok,
        String::new(),
    ));

    let isomorphism = if one_each {
        let iso = assemble_isomorphism(&collection, &reduction, &matching, &object_isos)?;
        checks.push(Check::new("End(𝔽) ≅ basic reduction (explicit isomorphism)", iso.is_some(), String::new()));
        iso
    } else {
        checks.push(Check::new("End(𝔽) ≅ basic reduction (explicit isomorphism)", false, "no matching".into()));
        None
    };
    let verdict = if checks.iter().all(|c| c.passed) { Verdict::Verified } else { Verdict::Failed };
    Ok(MainTheoremReport { verdict, checks, collection, reduction, matching, object_isos, isomorphism, certainty })
}

/// `𝔽 → S → 𝔽` through one summand per class, and `S → 𝔽^{⊕N} → S` through all summands.
fn split_maps_ok(c: &InducedCollection, r: &BasicReduction, matching: &[usize], isos: &[Matrix]) -> Result<bool> {
    let k = &r.decomposition;
    let f = c.sum.field();
    let s_dim = c.skew.dim();
    let regular = ModuleRep::regular(c.skew.algebra.clone());
    let mut into = Vec::new();
    let mut back = Matrix::zeros(f, s_dim, 0);
    for (a, &cls) in matching.iter().enumerate() {
        let m = k.classes[cls].members[0];
        let s = &k.summands[m];
        let iso_inv = isos[a].inverse().ok_or_else(|| Error::Verification("singular object isomorphism".into()))?;
        into.push(isos[a].mul(&k.embedding_from_representative(m)));
        back = back.hstack(&s.projection.mul(&s.to_representative).mul(&iso_inv))?;
    }
    let into = Matrix::vstack(f, s_dim, &into.iter().collect::<Vec<_>>())?;
    if !is_homomorphism(&c.sum, &regular, &into) || !is_homomorphism(&regular, &c.sum, &back) {
        return Ok(false);
    }
    if !into.mul(&back).is_identity() {
        return Ok(false);
    }

    // the regular module inside 𝔽^{⊕N}
    let copies = c.objects.iter().map(|o| o.multiplicity).max().unwrap_or(0);
    let sum_dim = c.sum.dim();
    let big = ModuleRep::direct_sum(&vec![&c.sum; copies])?;
    let offsets: Vec<usize> = c.objects.iter().scan(0, |acc, o| {
        let start = *acc;
        *acc += o.module.dim();
        Some(start)
    }).collect();
    let object_of = |cls: usize| matching.iter().position(|&x| x == cls).expect("matched class");
    let mut to_big = Matrix::zeros(f, s_dim, big.dim());
    let mut from_big = Matrix::zeros(f, big.dim(), s_dim);
    let mut seen = vec![0usize; k.classes.len()];
    for s in &k.summands {
        let a = object_of(s.class);
        let copy = seen[s.class];
        seen[s.class] += 1;
        let iso_inv = isos[a].inverse().expect("checked above");
        let col = copy * sum_dim + offsets[a];
        // S ⊇ summand → representative → F_a in copy `copy`
        let p = s.projection.mul(&s.to_representative).mul(&iso_inv);
        let i = isos[a].mul(&s.to_representative.inverse().expect("summand iso")).mul(&s.inclusion);
        // column ranges of distinct summands are disjoint
        to_big.set_block(0, col, &p);
        from_big.set_block(col, 0, &i);
    }
    Ok(is_homomorphism(&regular, &big, &to_big)
        && is_homomorphism(&big, &regular, &from_big)
        && to_big.mul(&from_big).is_identity())
}

/// Conjugation by the module isomorphism `𝔽 → ⊕_c P_c` assembled from the per-object isomorphisms.
fn assemble_isomorphism(
    c: &InducedCollection,
    r: &BasicReduction,
    matching: &[usize],
    isos: &[Matrix],
) -> Result<Option<Matrix>> {
    let f = c.sum.field();
    let dims = r.projective_dims();
    let offs: Vec<usize> = dims.iter().scan(0, |acc, d| {
        let s = *acc;
        *acc += d;
        Some(s)
    }).collect();
    let n = c.sum.dim();
    if n != r.progenerator.dim() {
        return Ok(None);
    }
    let mut u = Matrix::zeros(f, n, n);
    let mut row = 0;
    for (a, o) in c.objects.iter().enumerate() {
        u.set_block(row, offs[matching[a]], &isos[a]);
        row += o.module.dim();
    }
    let u_inv = match u.inverse() {
        Some(x) => x,
        None => return Ok(None),
    };
    if !is_homomorphism(&c.sum, &r.progenerator, &u) {
        return Ok(None);
    }
    let source = &c.end;
    let target = &r.basic;
    let mut rows = Vec::new();
    for x in source.hom.basis() {
        match target.element(&u_inv.mul(&x).mul(&u)) {
            Some(v) => rows.push(v),
            None => return Ok(None),
        }
    }
    let phi = Matrix::from_rows(f, target.algebra.dim(), rows)?;
    if !phi.is_invertible() {
        return Ok(None);
    }
    let (sa, ta) = (&source.algebra, &target.algebra);
    if phi.vec_mul(sa.unit()) != ta.unit() {
        return Ok(None);
    }
    let d = sa.dim();
    let bad = crate::par::map_range(d, |i| {
        (0..d).any(|j| phi.vec_mul(&sa.mul(&sa.basis(i), &sa.basis(j))) != ta.mul(phi.row(i), phi.row(j)))
    });
    Ok((!bad.iter().any(|&b| b)).then_some(phi))
}

/// Vertex count of the quiver of the basic reduction against `Σ_i |irr(Stab_G(i))|`.
#[derive(Clone, Debug, Serialize)]
pub struct DemonetReport {
    pub quiver: BasicQuiver,
    /// `(orbit representative, number of irreducibles of its stabilizer)`.
    pub orbit_counts: Vec<(usize, usize)>,
    pub expected: usize,
    pub passed: bool,
}

pub fn demonet_check(setup: &ExceptionalSetup, report: &MainTheoremReport, opts: &Options) -> Result<DemonetReport> {
    let r = &report.reduction;
    let quiver = quiver_with_idempotents(r.algebra(), &r.vertex_idempotents)?;
    let field = setup.algebra().field();
    let orbit_counts = setup
        .blocks
        .iter()
        .map(|b| Ok((b.representative, irreducibles(b.stabilizer.group().clone(), field, opts)?.entries.len())))
        .collect::<Result<Vec<_>>>()?;
    let expected = orbit_counts.iter().map(|(_, n)| n).sum();
    let passed = quiver.vertices == expected;
    Ok(DemonetReport { quiver, orbit_counts, expected, passed })
}
