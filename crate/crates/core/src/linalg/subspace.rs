use crate::error::{Error, Result};
use crate::scalars::{Field, Scalar};

use super::matrix::{rref_rows, Matrix};

/// A linear subspace of `k^n`, stored by the nonzero rows of its RREF basis,
/// so two subspaces are equal exactly when their stored bases are.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subspace {
    field: Field,
    ambient: usize,
    basis: Vec<Vec<Scalar>>,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn span(field: Field, ambient: usize, vectors: Vec<Vec<Scalar>>) -> Subspace {
        debug_assert!(vectors.iter().all(|v| v.len() == ambient));
        let (basis, pivots) = rref_rows(field, ambient, vectors);
        Subspace { field, ambient, basis, pivots }
    }

    /// Wraps rows that are already a reduced echelon basis.
    pub(crate) fn from_rref_unchecked(field: Field, ambient: usize, basis: Vec<Vec<Scalar>>) -> Subspace {
        let pivots = basis
            .iter()
            .map(|r| r.iter().position(|x| !x.is_zero()).expect("no zero rows in an echelon basis"))
            .collect();
        Subspace { field, ambient, basis, pivots }
    }

    pub fn zero(field: Field, ambient: usize) -> Subspace {
        Subspace { field, ambient, basis: Vec::new(), pivots: Vec::new() }
    }

    pub fn full(field: Field, ambient: usize) -> Subspace {
        Subspace::from_rref_unchecked(field, ambient, Matrix::identity(field, ambient).row_vecs())
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn basis(&self) -> &[Vec<Scalar>] {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Basis as the rows of a `dim × ambient` matrix.
    pub fn basis_matrix(&self) -> Matrix {
        Matrix::from_rows(self.field, self.ambient, self.basis.clone()).expect("consistent rows")
    }

    /// `v` minus its projection along the pivot coordinates; zero iff `v` lies in the subspace.
    pub fn reduce(&self, v: &[Scalar]) -> Vec<Scalar> {
        let mut out = v.to_vec();
        for (row, &p) in self.basis.iter().zip(&self.pivots) {
            if out[p].is_zero() {
                continue;
            }
            let f = -&out[p];
            for (x, b) in out.iter_mut().zip(row) {
                if !b.is_zero() {
                    x.add_mul_assign(&f, b);
                }
            }
        }
        out
    }

    pub fn contains(&self, v: &[Scalar]) -> bool {
        self.reduce(v).iter().all(Scalar::is_zero)
    }

    /// Coordinates with respect to the stored basis, if `v` lies in the subspace.
    pub fn coordinates(&self, v: &[Scalar]) -> Option<Vec<Scalar>> {
        if !self.contains(v) {
            return None;
        }
        Some(self.pivots.iter().map(|&p| v[p].clone()).collect())
    }

    /// The vector with the given coordinates.
    pub fn vector(&self, coords: &[Scalar]) -> Vec<Scalar> {
        let mut out = vec![self.field.zero(); self.ambient];
        for (c, row) in coords.iter().zip(&self.basis) {
            if c.is_zero() {
                continue;
            }
            for (x, b) in out.iter_mut().zip(row) {
                if !b.is_zero() {
                    x.add_mul_assign(c, b);
                }
            }
        }
        out
    }

    fn check(&self, other: &Subspace) -> Result<()> {
        if self.field != other.field {
            return Err(Error::FieldMismatch(self.field.to_string(), other.field.to_string()));
        }
        if self.ambient != other.ambient {
            return Err(Error::DimensionMismatch { expected: self.ambient, got: other.ambient });
        }
        Ok(())
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace> {
        self.check(other)?;
        let mut vs = self.basis.clone();
        vs.extend(other.basis.iter().cloned());
        Ok(Subspace::span(self.field, self.ambient, vs))
    }

    pub fn intersect(&self, other: &Subspace) -> Result<Subspace> {
        self.check(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Subspace::zero(self.field, self.ambient));
        }
        // a·U = b·V  <=>  (a, b) in the left kernel of [U; -V]
        let neg: Vec<Vec<Scalar>> = other.basis.iter().map(|r| r.iter().map(|x| -x).collect()).collect();
        let mut rows = self.basis.clone();
        rows.extend(neg);
        let stacked = Matrix::from_rows(self.field, self.ambient, rows).expect("consistent rows");
        let kernel = stacked.left_kernel();
        let u = self.basis_matrix();
        let vectors = kernel.basis().iter().map(|k| u.vec_mul(&k[..self.dim()])).collect();
        Ok(Subspace::span(self.field, self.ambient, vectors))
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> bool {
        self.basis.iter().all(|v| other.contains(v))
    }

    /// Standard basis indices not used as pivots; their unit vectors span a complement.
    pub fn complement_indices(&self) -> Vec<usize> {
        let mut used = vec![false; self.ambient];
        for &p in &self.pivots {
            used[p] = true;
        }
        (0..self.ambient).filter(|&i| !used[i]).collect()
    }

    /// Image under the row-vector map `v ↦ v·m`.
    pub fn map(&self, m: &Matrix) -> Subspace {
        Subspace::span(self.field, m.cols(), self.basis.iter().map(|v| m.vec_mul(v)).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const Q: Field = Field::Rationals;

    fn e(i: usize, n: usize) -> Vec<Scalar> {
        (0..n).map(|j| Q.from_i64((i == j) as i64)).collect()
    }

    #[test]
    fn intersection_of_coordinate_planes() {
        let u = Subspace::span(Q, 3, vec![e(0, 3), e(1, 3)]);
        let v = Subspace::span(Q, 3, vec![e(1, 3), e(2, 3)]);
        assert_eq!(u.intersect(&v).unwrap(), Subspace::span(Q, 3, vec![e(1, 3)]));
        assert_eq!(u.sum(&v).unwrap(), Subspace::full(Q, 3));
    }

    #[test]
    fn coordinates_round_trip() {
        let v1 = vec![Q.from_i64(1), Q.from_i64(2), Q.from_i64(3)];
        let v2 = vec![Q.from_i64(0), Q.from_i64(1), Q.from_i64(1)];
        let s = Subspace::span(Q, 3, vec![v1.clone(), v2]);
        let c = s.coordinates(&v1).unwrap();
        assert_eq!(s.vector(&c), v1);
        assert!(s.coordinates(&e(2, 3)).is_none() || s.contains(&e(2, 3)));
        assert_eq!(s.complement_indices().len(), 1);
    }
}
