//! Exact dense linear algebra.

mod echelon;
mod matrix;
mod subspace;

pub use echelon::{Echelon, Insert};
pub use matrix::{Matrix, Rref, Solution};
pub use subspace::Subspace;

use crate::scalars::Scalar;

/// `y += c * x` on coordinate vectors.
pub fn axpy(y: &mut [Scalar], c: &Scalar, x: &[Scalar]) {
    if c.is_zero() {
        return;
    }
    for (a, b) in y.iter_mut().zip(x) {
        if !b.is_zero() {
            a.add_mul_assign(c, b);
        }
    }
}

pub fn is_zero_vec(v: &[Scalar]) -> bool {
    v.iter().all(Scalar::is_zero)
}
