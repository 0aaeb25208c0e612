//! Finite-dimensional associative algebras.

mod division;
mod idempotents;
mod quiver;
mod radical;
mod structure;

pub use division::{diagonalize_symmetric, matrix_algebra, quaternion_algebra, DivisionVerdict, NonDivision};
pub use idempotents::{Certainty, PrimitiveDecomposition};
pub use quiver::{Arrow, Path, Quiver};
pub use structure::{Algebra, PathBasis, Quotient, SparseVec, SubAlgebra};
