use crate::scalars::{Field, Scalar};

use super::subspace::Subspace;

/// Incrementally built semi-echelon basis.
///
/// Each accepted vector is reduced against the rows already stored; the
/// builder remembers how every stored row is combined from the accepted
/// inputs, so a dependent vector comes back with explicit coefficients.
#[derive(Clone, Debug)]
pub struct Echelon {
    field: Field,
    ambient: usize,
    rows: Vec<Vec<Scalar>>,
    pivots: Vec<usize>,
    // rows[i] = sum_k combos[i][k] * accepted[k]
    combos: Vec<Vec<Scalar>>,
}

/// Result of [`Echelon::insert`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Insert {
    /// The vector was independent and is now accepted (its index among accepted vectors).
    New(usize),
    /// `v = sum_k coeffs[k] * accepted[k]`.
    Dependent(Vec<Scalar>),
}

impl Echelon {
    pub fn new(field: Field, ambient: usize) -> Echelon {
        Echelon { field, ambient, rows: Vec::new(), pivots: Vec::new(), combos: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    /// Reduces `v` and returns the residual and the combination of stored rows subtracted.
    fn reduce_tracked(&self, v: &[Scalar]) -> (Vec<Scalar>, Vec<Scalar>) {
        let n = self.rows.len();
        let mut residual = v.to_vec();
        let mut used = vec![self.field.zero(); n];
        for (i, (row, &p)) in self.rows.iter().zip(&self.pivots).enumerate() {
            if residual[p].is_zero() {
                continue;
            }
            let f = residual[p].clone();
            let neg = -&f;
            for (x, b) in residual.iter_mut().zip(row) {
                if !b.is_zero() {
                    x.add_mul_assign(&neg, b);
                }
            }
            used[i] = f;
        }
        (residual, used)
    }

    pub fn contains(&self, v: &[Scalar]) -> bool {
        self.reduce_tracked(v).0.iter().all(Scalar::is_zero)
    }

    pub fn insert(&mut self, v: &[Scalar]) -> Insert {
        assert_eq!(v.len(), self.ambient, "vector length");
        let (mut residual, used) = self.reduce_tracked(v);
        let n = self.rows.len();
        // v = residual + sum_i used[i] rows[i]; expand rows into accepted vectors
        let mut coeffs = vec![self.field.zero(); n];
        for (u, combo) in used.iter().zip(&self.combos) {
            if u.is_zero() {
                continue;
            }
            for (c, x) in coeffs.iter_mut().zip(combo) {
                if !x.is_zero() {
                    c.add_mul_assign(u, x);
                }
            }
        }
        let Some(p) = residual.iter().position(|x| !x.is_zero()) else {
            return Insert::Dependent(coeffs);
        };
        // new row = residual / residual[p] = (v - sum coeffs accepted) / residual[p]
        let inv = residual[p].inv().expect("nonzero");
        for x in residual.iter_mut() {
            if !x.is_zero() {
                *x = &*x * &inv;
            }
        }
        let mut combo: Vec<Scalar> = coeffs.iter().map(|c| -&(c * &inv)).collect();
        combo.push(inv);
        for c in self.combos.iter_mut() {
            c.push(self.field.zero());
        }
        self.rows.push(residual);
        self.pivots.push(p);
        self.combos.push(combo);
        Insert::New(n)
    }

    pub fn to_subspace(&self) -> Subspace {
        Subspace::span(self.field, self.ambient, self.rows.clone())
    }
}
