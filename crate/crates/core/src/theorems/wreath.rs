use std::collections::BTreeSet;
use std::sync::Arc;

use crate::algebra::Algebra;
use crate::equivariant::AlgebraAction;
use crate::error::{Error, Result};
use crate::groups::FiniteGroup;
use crate::linalg::Matrix;
use crate::scalars::Scalar;

use super::setup::ExceptionalSetup;

/// `A^{⊗n}` with basis `a_{t_1} ⊗ … ⊗ a_{t_n}` at index `Σ t_k d^{n-k}` (first factor most significant).
pub fn tensor_power(a: &Algebra, n: usize) -> Result<Algebra> {
    if n == 0 {
        return Err(Error::InvalidSetup("tensor power needs at least one factor".into()));
    }
    let mut t = a.clone().without_paths();
    for _ in 1..n {
        t = t.tensor(a)?;
    }
    Ok(t)
}

fn digits(mut x: usize, base: usize, n: usize) -> Vec<usize> {
    let mut out = vec![0; n];
    for k in (0..n).rev() {
        out[k] = x % base;
        x /= base;
    }
    out
}

fn number(t: &[usize], base: usize) -> usize {
    t.iter().fold(0, |acc, &d| acc * base + d)
}

/// Matrix moving the factor in position `p` to position `g[p]`.
fn factor_permutation(field: crate::scalars::Field, d: usize, n: usize, g: &[usize]) -> Matrix {
    let size = d.pow(n as u32);
    let perm: Vec<usize> = (0..size)
        .map(|x| {
            let t = digits(x, d, n);
            let mut u = vec![0; n];
            for p in 0..n {
                u[g[p]] = t[p];
            }
            number(&u, d)
        })
        .collect();
    Matrix::permutation(field, &perm)
}

/// `S_n` permuting the factors of `A^{⊗n}`, with vertices `e_{i_1} ⊗ … ⊗ e_{i_n}` from the given
/// idempotents and blocks in lexicographic order of their sorted label tuples.
/// `budget` bounds `n·(dim A)^n`.
pub fn wreath_build(a: &Algebra, idempotents: &[Vec<Scalar>], n: usize, budget: usize) -> Result<ExceptionalSetup> {
    let d = a.dim();
    let size = d.checked_pow(n as u32).and_then(|s| s.checked_mul(n));
    if n == 0 || size.is_none_or(|s| s > budget) {
        return Err(Error::SizeBudget(format!("n = {n}, dim A = {d}, budget {budget}")));
    }
    let f = a.field();
    let power = tensor_power(a, n)?;
    let group = Arc::new(FiniteGroup::symmetric(n)?);
    let maps = group.generators().iter().map(|g| factor_permutation(f, d, n, g)).collect();
    let action = Arc::new(AlgebraAction::new(group, Arc::new(power), maps)?);

    let l = idempotents.len();
    let tuples = l.pow(n as u32);
    let idem: Vec<Vec<Scalar>> = (0..tuples)
        .map(|v| {
            let labels = digits(v, l, n);
            (0..d.pow(n as u32))
                .map(|x| {
                    let t = digits(x, d, n);
                    let mut c = f.one();
                    for k in 0..n {
                        c = &c * &idempotents[labels[k]][t[k]];
                    }
                    c
                })
                .collect()
        })
        .collect();
    // the smallest tuple of an orbit is its sorted tuple
    let order: BTreeSet<usize> = (0..tuples)
        .map(|v| {
            let mut t = digits(v, l, n);
            t.sort_unstable();
            number(&t, l)
        })
        .collect();
    ExceptionalSetup::new(action, idem, Some(order.into_iter().collect()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Quiver;
    use crate::scalars::Field;

    #[test]
    fn pairs_of_two_points() {
        let q = Quiver::from_edges(2, &[]).unwrap();
        let a = Algebra::path_algebra(&q, Field::Rationals);
        let idem = vec![a.basis(0), a.basis(1)];
        let s = wreath_build(&a, &idem, 2, 4096).unwrap();
        assert_eq!(s.algebra().dim(), 4);
        let orbits: Vec<Vec<usize>> = s.blocks.iter().map(|b| b.orbit.clone()).collect();
        assert_eq!(orbits, vec![vec![0], vec![1, 2], vec![3]]);
        assert!(wreath_build(&a, &idem, 12, 4096).is_err());
        let one = wreath_build(&a, &idem, 1, 4096).unwrap();
        assert_eq!((one.algebra().dim(), one.blocks.len()), (2, 2));
    }
}
