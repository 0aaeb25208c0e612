//! Right modules over finite-dimensional algebras.

mod ext;
mod hom;
mod krs;
mod module;

pub use ext::{ext1, ext1_hereditary, Ext1, HereditaryExt};
pub use hom::{end_algebra, hom_space, intertwiners, is_homomorphism, EndAlgebra, HomSpace};
pub use krs::{
    complement_idempotent, is_indecomposable, iso_test, krs_decompose, summand_idempotent, Indecomposability,
    IsoVerdict, KrsClass, KrsDecomposition, NonIsoReason, Summand,
};
pub use module::ModuleRep;
