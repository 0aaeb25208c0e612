#![allow(dead_code)]

use std::path::PathBuf;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use skewalg::algebra::Algebra;
use skewalg::equivariant::{AlgebraAction, EquivariantModule};
use skewalg::groups::Subgroup;
use skewalg::io::Problem;
use skewalg::linalg::Matrix;
use skewalg::modules::ModuleRep;
use skewalg::scalars::{Field, Scalar};

/// Problems whose setups satisfy every hypothesis.
pub const SETUPS: [&str; 3] = ["star.json", "kronecker.json", "wreath.json"];

pub fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name)
}

pub fn problem(name: &str, field: Option<Field>) -> Problem {
    let text = std::fs::read_to_string(data(name)).unwrap();
    Problem::from_json(&text, field).unwrap()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_vector(f: Field, n: usize, rng: &mut ChaCha8Rng) -> Vec<Scalar> {
    (0..n).map(|_| f.random(rng, 2)).collect()
}

/// A submodule or quotient of `A_A^{⊕k}` cut out by one or two random vectors; never zero.
pub fn random_module(a: &Arc<Algebra>, rng: &mut ChaCha8Rng) -> ModuleRep {
    let f = a.field();
    let regular = ModuleRep::regular(a.clone());
    let copies = rng.gen_range(1..=2);
    let free = ModuleRep::direct_sum(&vec![&regular; copies]).unwrap();
    let gens: Vec<Vec<Scalar>> = (0..rng.gen_range(1..=2)).map(|_| random_vector(f, free.dim(), rng)).collect();
    let space = free.generated_submodule(&gens);
    let m = if rng.gen_bool(0.5) { free.submodule(&space).unwrap() } else { free.quotient_with_map(&space).unwrap().0 };
    if m.dim() == 0 {
        regular
    } else {
        m
    }
}

/// `M` as an equivariant module for the trivial subgroup.
pub fn over_trivial(action: &Arc<AlgebraAction>, m: ModuleRep) -> (Subgroup, EquivariantModule) {
    let sub = Subgroup::trivial(action.group().clone());
    let restricted = Arc::new(action.restrict(&sub).unwrap());
    let id = Matrix::identity(m.field(), m.dim());
    let t = EquivariantModule::from_element_maps(restricted, m, vec![id]).unwrap();
    (sub, t)
}
