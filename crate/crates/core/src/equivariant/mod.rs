//! Group actions on algebras, skew group algebras and equivariant modules.

mod action;
mod endind;
mod module;

pub use action::{skew_algebra, AlgebraAction, SkewAlgebra};
pub use endind::{conjugation_action, end_of_induced, EndOfInduced};
pub use module::{
    canonical_linearisation, equivariant_hom, from_skew_module, induce, restrict, to_skew_module, twist,
    EquivariantModule,
};
