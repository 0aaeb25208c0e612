//! Exact coefficient fields and univariate polynomials over them.

mod factor;
mod field;
mod poly;

pub use factor::{has_rational_root, squarefree_decomposition, FactorOptions, Factorization};
pub use field::{is_prime, Field, Scalar};
pub use poly::Poly;
