//! Structural invariants: tables, orbits, cosets, Krull–Schmidt, basic reduction, Ext¹.

mod common;

use std::sync::Arc;

use proptest::prelude::*;
use rand::Rng;

use skewalg::algebra::{quaternion_algebra, Algebra, SparseVec};
use skewalg::equivariant::skew_algebra;
use skewalg::groups::{FiniteGroup, SetAction, Subgroup};
use skewalg::modules::{end_algebra, ext1, hom_space, krs_decompose, ModuleRep};
use skewalg::scalars::{Field, Scalar};
use skewalg::theorems::basic_reduction;
use skewalg::Options;

use common::*;

/// Brute-force associativity and two-sided unit law on basis elements.
fn table_is_valid(f: Field, table: &[SparseVec], unit: &[Scalar]) -> bool {
    let d = unit.len();
    let mul = |x: &[Scalar], y: &[Scalar]| {
        let mut out = vec![f.zero(); d];
        for i in 0..d {
            for j in 0..d {
                if x[i].is_zero() || y[j].is_zero() {
                    continue;
                }
                for (k, c) in &table[i * d + j] {
                    out[*k] = &out[*k] + &(&(&x[i] * &y[j]) * c);
                }
            }
        }
        out
    };
    let e = |i: usize| (0..d).map(|k| if k == i { f.one() } else { f.zero() }).collect::<Vec<_>>();
    (0..d).all(|i| mul(unit, &e(i)) == e(i) && mul(&e(i), unit) == e(i))
        && (0..d).all(|i| (0..d).all(|j| (0..d).all(|k| mul(&mul(&e(i), &e(j)), &e(k)) == mul(&e(i), &mul(&e(j), &e(k))))))
}

#[test]
fn perturbed_tables_are_rejected() {
    let star = problem("star.json", None);
    let algebras: Vec<Algebra> = vec![
        (*star.base).clone(),
        quaternion_algebra(Field::Rationals, -1, -1).unwrap(),
        (*skew_algebra(star.action.clone()).unwrap().algebra).clone(),
    ];
    let mut rng = rng(99);
    let (mut rejected, mut accepted) = (0, 0);
    while rejected < 100 {
        let a = &algebras[rng.gen_range(0..algebras.len())];
        let (f, d) = (a.field(), a.dim());
        let mut table = a.table().to_vec();
        let slot = rng.gen_range(0..d * d);
        let k = rng.gen_range(0..d);
        let delta = f.from_i64(rng.gen_range(1..=3) * if rng.gen_bool(0.5) { 1 } else { -1 });
        let entry = &mut table[slot];
        match entry.iter_mut().find(|(i, _)| *i == k) {
            Some((_, c)) => *c = &*c + &delta,
            None => entry.push((k, delta)),
        }
        entry.retain(|(_, c)| !c.is_zero());
        entry.sort_by_key(|(i, _)| *i);
        let valid = table_is_valid(f, &table, a.unit());
        let built = Algebra::from_table(f, a.labels().to_vec(), table, a.unit().to_vec());
        assert_eq!(built.is_ok(), valid, "slot {slot}, index {k}");
        if valid {
            accepted += 1;
        } else {
            rejected += 1;
        }
    }
    assert!(accepted < rejected, "{accepted} perturbations stayed associative");
}

fn random_group(seed: u64) -> FiniteGroup {
    let mut r = rng(seed);
    let degree = r.gen_range(1..=5);
    let gens = (0..r.gen_range(1..=2))
        .map(|_| {
            let mut p: Vec<usize> = (0..degree).collect();
            for i in (1..degree).rev() {
                p.swap(i, r.gen_range(0..=i));
            }
            p
        })
        .collect();
    FiniteGroup::new(degree, gens).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn orbit_times_stabilizer_is_the_group_order(seed in any::<u64>()) {
        let g = Arc::new(random_group(seed));
        let action = SetAction::natural(g.clone());
        let mut covered = 0;
        for orbit in action.orbits() {
            covered += orbit.len();
            for &x in &orbit {
                prop_assert_eq!(orbit.len() * action.stabilizer(x).order(), g.order());
                for &y in &orbit {
                    let t = action.transporter(x, y).unwrap();
                    prop_assert_eq!(action.apply(x, t), y);
                }
            }
        }
        prop_assert_eq!(covered, action.size());
    }

    #[test]
    fn cosets_partition_the_group(seed in any::<u64>()) {
        let g = Arc::new(random_group(seed));
        let mut r = rng(seed ^ 1);
        let gen = r.gen_range(0..g.order());
        let h = Subgroup::generated(g.clone(), &[gen]).unwrap();
        prop_assert_eq!(h.coset_reps().len() * h.order(), g.order());
        let mut seen = vec![false; g.order()];
        for x in 0..g.order() {
            let (hh, k) = h.decompose(x);
            prop_assert_eq!(g.mul(h.to_parent(hh), h.coset_reps()[k]), x);
            let key = hh * h.index() + k;
            prop_assert!(!seen[key]);
            seen[key] = true;
        }
    }

    #[test]
    fn hom_is_additive(seed in any::<u64>(), which in 0usize..4) {
        let p = problem(["star.json", "kronecker.json", "wreath.json", "quaternion.json"][which], None);
        let a = p.action.algebra();
        let mut r = rng(seed);
        let (m, n, k) = (random_module(a, &mut r), random_module(a, &mut r), random_module(a, &mut r));
        let sum = ModuleRep::direct_sum(&[&m, &n]).unwrap();
        let dim = |x: &ModuleRep, y: &ModuleRep| hom_space(x, y).unwrap().dim();
        prop_assert_eq!(dim(&sum, &k), dim(&m, &k) + dim(&n, &k));
        prop_assert_eq!(dim(&k, &sum), dim(&k, &m) + dim(&k, &n));
    }

    #[test]
    fn ext1_vanishes_out_of_projectives(seed in any::<u64>(), which in 0usize..3) {
        let p = problem(SETUPS[which], None);
        let skew = skew_algebra(p.action.clone()).unwrap();
        let mut r = rng(seed);
        for a in [p.action.algebra().clone(), skew.algebra.clone()] {
            let target = random_module(&a, &mut r);
            // a vertex idempotent e of A, or (1, e) in the skew algebra
            let mut e = p.vertices[r.gen_range(0..p.vertices.len())].clone();
            e.resize(a.dim(), a.field().zero());
            let projective = ModuleRep::right_ideal(a.clone(), &e).unwrap();
            prop_assert_eq!(ext1(&projective, &target).unwrap().dim, 0);
            prop_assert_eq!(ext1(&ModuleRep::regular(a.clone()), &target).unwrap().dim, 0);
        }
    }
}

#[test]
fn end_of_the_regular_module_is_the_algebra() {
    for name in ["star.json", "kronecker.json", "wreath.json", "quaternion.json"] {
        let p = problem(name, None);
        for a in [p.action.algebra().clone(), skew_algebra(p.action.clone()).unwrap().algebra] {
            let regular = ModuleRep::regular(a.clone());
            let end = end_algebra(&regular).unwrap();
            assert_eq!(end.algebra.dim(), a.dim(), "{name}");
            // left multiplications are exactly the endomorphisms, and compose as in A
            for i in 0..a.dim() {
                let li = a.left_matrix(&a.basis(i));
                assert!(end.hom.contains(&li), "{name}");
                for j in 0..a.dim() {
                    let lj = a.left_matrix(&a.basis(j));
                    assert_eq!(a.left_matrix(&a.mul(&a.basis(i), &a.basis(j))), lj.mul(&li));
                }
            }
        }
    }
}

#[test]
fn krs_does_not_depend_on_the_seed() {
    for name in ["star.json", "kronecker.json", "wreath.json", "quaternion.json"] {
        let p = problem(name, None);
        let skew = skew_algebra(p.action.clone()).unwrap();
        let regular = ModuleRep::regular(skew.algebra.clone());
        let reference = krs_decompose(&regular, &Options::with_seed(0)).unwrap().signature();
        for seed in 1..6 {
            let k = krs_decompose(&regular, &Options::with_seed(seed)).unwrap();
            assert_eq!(k.signature(), reference, "{name}, seed {seed}");
        }
    }
}

#[test]
fn basic_reduction_is_idempotent() {
    let opts = Options::default();
    for name in ["star.json", "kronecker.json", "wreath.json", "quaternion.json"] {
        let p = problem(name, None);
        let once = basic_reduction(skew_algebra(p.action.clone()).unwrap().algebra, &opts).unwrap();
        let twice = basic_reduction(once.algebra().clone(), &opts).unwrap();
        assert_eq!(twice.algebra().dim(), once.algebra().dim(), "{name}");
        assert!(twice.multiplicities.iter().all(|&m| m == 1), "{name}");
        assert_eq!(twice.multiplicities.len(), once.multiplicities.len());
    }
}
