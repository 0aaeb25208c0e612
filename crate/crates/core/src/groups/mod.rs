//! Finite permutation groups acting on the right.

mod action;
mod group;

pub use action::{SetAction, Subgroup};
pub use group::{compose, cycle_string, invert, validate_perm, FiniteGroup, Perm, DEFAULT_ORDER_BOUND};
