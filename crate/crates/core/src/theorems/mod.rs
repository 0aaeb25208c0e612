//! Induced exceptional collections on skew group algebras and the comparison of their
//! endomorphism algebra with the basic reduction.

mod basic;
mod collection;
mod counterexample;
mod setup;
mod verify;
mod wreath;

use serde::Serialize;

pub use basic::{
    basic_reduction, basic_reduction_from, cartan_matrix, match_cartan, quiver_of_basic, quiver_with_idempotents,
    BasicQuiver, BasicReduction,
};
pub use collection::{induced_collection, InducedCollection, InducedObject};
pub use counterexample::{quaternion_action, quaternion_counterexample, QuaternionReport};
pub use setup::{validate_setup, Block, ExceptionalSetup, SetupReport};
pub use verify::{demonet_check, verify_main_theorem, DemonetReport, MainTheoremReport, Verdict};
pub use wreath::{tensor_power, wreath_build};

/// One named pass/fail condition of a report.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    pub fn new(name: &str, passed: bool, detail: String) -> Check {
        Check { name: name.to_string(), passed, detail }
    }
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::algebra::{Algebra, Quiver};
    use crate::equivariant::AlgebraAction;
    use crate::groups::FiniteGroup;
    use crate::options::Options;
    use crate::scalars::Field;

    fn star(field: Field) -> Arc<AlgebraAction> {
        let q = Quiver::from_edges(3, &[("a", 0, 1), ("b", 0, 2)]).unwrap();
        let a = Arc::new(Algebra::path_algebra(&q, field));
        let c2 = Arc::new(FiniteGroup::cyclic(2));
        Arc::new(AlgebraAction::permuting_paths(c2, a, &[(vec![0, 2, 1], vec![1, 0])]).unwrap())
    }

    #[test]
    fn star_setup_orders() {
        let opts = Options::default();
        let s = ExceptionalSetup::for_path_algebra(star(Field::Rationals), None).unwrap();
        let orbits: Vec<Vec<usize>> = s.blocks.iter().map(|b| b.orbit.clone()).collect();
        assert_eq!(orbits, vec![vec![1, 2], vec![0]]);
        assert!(validate_setup(&s, &opts).unwrap().passed());
        let bad = ExceptionalSetup::for_path_algebra(star(Field::Rationals), Some(vec![0, 1])).unwrap();
        let report = validate_setup(&bad, &opts).unwrap();
        let names: Vec<&str> = report.failures().iter().map(|c| c.name.as_str()).collect();
        assert_eq!(names, vec!["semi-orthogonal block order"]);
    }

    #[test]
    fn star_main_theorem() {
        for field in [Field::Rationals, Field::Prime(5)] {
            let s = ExceptionalSetup::for_path_algebra(star(field), None).unwrap();
            let opts = Options::default();
            let r = verify_main_theorem(&s, &opts).unwrap();
            assert_eq!(r.verdict, Verdict::Verified, "{:#?}", r.checks);
            assert_eq!((r.skew_dim(), r.end_dim(), r.basic_dim()), (10, 5, 5));
            let dims: Vec<usize> = r.collection.objects.iter().map(|o| o.module.dim()).collect();
            assert_eq!(dims, vec![2, 3, 3]);
            assert_eq!(r.multiplicities(), vec![2, 1, 1]);
            let d = demonet_check(&s, &r, &opts).unwrap();
            assert!(d.passed);
            assert_eq!((d.quiver.vertices, d.quiver.arrow_total()), (3, 2));
        }
    }
}
