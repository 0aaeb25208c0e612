use std::fmt;

use crate::error::{Error, Result};
use crate::par;
use crate::scalars::{Field, Scalar};

use super::subspace::Subspace;

/// Dense row-major matrix over a [`Field`].
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Matrix {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

/// Reduced row echelon form together with its pivot columns.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rref {
    pub matrix: Matrix,
    pub pivots: Vec<usize>,
    pub rank: usize,
}

/// Outcome of solving `A X = B`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Solution {
    Inconsistent,
    /// Every solution is `particular + K` with the columns of `K` drawn from `kernel`.
    Solved { particular: Matrix, kernel: Subspace },
}

impl Matrix {
    pub fn new(field: Field, rows: usize, cols: usize, data: Vec<Scalar>) -> Result<Matrix> {
        if data.len() != rows * cols {
            return Err(Error::ShapeMismatch(format!("{} entries for a {rows}x{cols} matrix", data.len())));
        }
        if let Some(bad) = data.iter().find(|x| x.field() != field) {
            return Err(Error::FieldMismatch(field.to_string(), bad.field().to_string()));
        }
        Ok(Matrix { field, rows, cols, data })
    }

    pub fn zeros(field: Field, rows: usize, cols: usize) -> Matrix {
        Matrix { field, rows, cols, data: vec![field.zero(); rows * cols] }
    }

    pub fn identity(field: Field, n: usize) -> Matrix {
        let mut m = Matrix::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = field.one();
        }
        m
    }

    /// Builds from rows; all rows must have length `cols`.
    pub fn from_rows(field: Field, cols: usize, rows: Vec<Vec<Scalar>>) -> Result<Matrix> {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * cols);
        for r in rows {
            if r.len() != cols {
                return Err(Error::ShapeMismatch(format!("row of length {} where {cols} expected", r.len())));
            }
            data.extend(r);
        }
        Matrix::new(field, n, cols, data)
    }

    pub fn from_i64(field: Field, rows: &[&[i64]]) -> Matrix {
        let cols = rows.first().map_or(0, |r| r.len());
        let data = rows.iter().flat_map(|r| r.iter().map(|&x| field.from_i64(x))).collect();
        Matrix::new(field, rows.len(), cols, data).expect("rectangular literal")
    }

    pub fn diagonal(field: Field, entries: &[Scalar]) -> Matrix {
        let n = entries.len();
        let mut m = Matrix::zeros(field, n, n);
        for (i, e) in entries.iter().enumerate() {
            m.data[i * n + i] = e.clone();
        }
        m
    }

    /// Permutation matrix sending basis vector `i` to basis vector `perm[i]` (row convention).
    pub fn permutation(field: Field, perm: &[usize]) -> Matrix {
        let n = perm.len();
        let mut m = Matrix::zeros(field, n, n);
        for (i, &j) in perm.iter().enumerate() {
            m.data[i * n + j] = field.one();
        }
        m
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: Scalar) {
        debug_assert_eq!(value.field(), self.field);
        self.data[i * self.cols + j] = value;
    }

    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<Scalar>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn column(&self, j: usize) -> Vec<Scalar> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn entries(&self) -> &[Scalar] {
        &self.data
    }

    /// Row-major entries as one flat vector (used to treat matrices as vectors).
    pub fn flatten(&self) -> Vec<Scalar> {
        self.data.clone()
    }

    pub fn from_flat(field: Field, rows: usize, cols: usize, data: &[Scalar]) -> Matrix {
        Matrix::new(field, rows, cols, data.to_vec()).expect("flat data matches the shape")
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| (0..self.cols).all(|j| if i == j { self.get(i, j).is_one() } else { self.get(i, j).is_zero() }))
    }

    fn check_field(&self, other: &Matrix) -> Result<()> {
        if self.field == other.field {
            Ok(())
        } else {
            Err(Error::FieldMismatch(self.field.to_string(), other.field.to_string()))
        }
    }

    pub fn checked_mul(&self, other: &Matrix) -> Result<Matrix> {
        self.check_field(other)?;
        if self.cols != other.rows {
            return Err(Error::ShapeMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let (n, m) = (other.rows, other.cols);
        let field = self.field;
        let work = self.rows * n * m;
        let mut out = vec![Vec::new(); self.rows];
        par::for_each_mut(&mut out, work, |i, slot: &mut Vec<Scalar>| {
            let mut acc = vec![field.zero(); m];
            for k in 0..n {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for (j, b) in other.row(k).iter().enumerate() {
                    if !b.is_zero() {
                        acc[j].add_mul_assign(a, b);
                    }
                }
            }
            *slot = acc;
        });
        Ok(Matrix { field, rows: self.rows, cols: m, data: out.into_iter().flatten().collect() })
    }

    /// Matrix product; panics on shape or field mismatch.
    pub fn mul(&self, other: &Matrix) -> Matrix {
        self.checked_mul(other).expect("matrix product")
    }

    pub fn checked_add(&self, other: &Matrix) -> Result<Matrix> {
        self.check_field(other)?;
        if self.shape() != other.shape() {
            return Err(Error::ShapeMismatch("matrix sum".into()));
        }
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect();
        Ok(Matrix { field: self.field, rows: self.rows, cols: self.cols, data })
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        self.checked_add(other).expect("matrix sum")
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        self.add(&other.scale(&-self.field.one()))
    }

    pub fn scale(&self, c: &Scalar) -> Matrix {
        Matrix { field: self.field, rows: self.rows, cols: self.cols, data: self.data.iter().map(|a| a * c).collect() }
    }

    /// `self += c * other`.
    pub fn add_scaled_assign(&mut self, c: &Scalar, other: &Matrix) {
        assert_eq!(self.shape(), other.shape(), "matrix shapes differ");
        if c.is_zero() {
            return;
        }
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            if !b.is_zero() {
                a.add_mul_assign(c, b);
            }
        }
    }

    pub fn transpose(&self) -> Matrix {
        let mut data = Vec::with_capacity(self.data.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                data.push(self.get(i, j).clone());
            }
        }
        Matrix { field: self.field, rows: self.cols, cols: self.rows, data }
    }

    /// Row vector times matrix.
    pub fn vec_mul(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(v.len(), self.rows, "vector length");
        let mut out = vec![self.field.zero(); self.cols];
        for (i, a) in v.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in self.row(i).iter().enumerate() {
                if !b.is_zero() {
                    out[j].add_mul_assign(a, b);
                }
            }
        }
        out
    }

    pub fn trace(&self) -> Scalar {
        (0..self.rows.min(self.cols)).fold(self.field.zero(), |acc, i| &acc + self.get(i, i))
    }

    pub fn pow(&self, e: usize) -> Matrix {
        (0..e).fold(Matrix::identity(self.field, self.rows), |acc, _| acc.mul(self))
    }

    pub fn kronecker(&self, other: &Matrix) -> Result<Matrix> {
        self.check_field(other)?;
        let rows = self.rows * other.rows;
        let cols = self.cols * other.cols;
        let mut m = Matrix::zeros(self.field, rows, cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                if a.is_zero() {
                    continue;
                }
                for k in 0..other.rows {
                    for l in 0..other.cols {
                        let b = other.get(k, l);
                        if !b.is_zero() {
                            m.data[(i * other.rows + k) * cols + j * other.cols + l] = a * b;
                        }
                    }
                }
            }
        }
        Ok(m)
    }

    /// Block diagonal matrix.
    pub fn block_diagonal(field: Field, blocks: &[Matrix]) -> Matrix {
        let rows = blocks.iter().map(Matrix::rows).sum();
        let cols = blocks.iter().map(Matrix::cols).sum();
        let mut m = Matrix::zeros(field, rows, cols);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            m.set_block(r0, c0, b);
            r0 += b.rows;
            c0 += b.cols;
        }
        m
    }

    pub fn set_block(&mut self, r0: usize, c0: usize, block: &Matrix) {
        for i in 0..block.rows {
            for j in 0..block.cols {
                self.data[(r0 + i) * self.cols + c0 + j] = block.get(i, j).clone();
            }
        }
    }

    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Matrix {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            data.extend_from_slice(&self.data[(r0 + i) * self.cols + c0..(r0 + i) * self.cols + c0 + cols]);
        }
        Matrix { field: self.field, rows, cols, data }
    }

    pub fn select_columns(&self, cols: &[usize]) -> Matrix {
        let mut data = Vec::with_capacity(self.rows * cols.len());
        for i in 0..self.rows {
            for &j in cols {
                data.push(self.get(i, j).clone());
            }
        }
        Matrix { field: self.field, rows: self.rows, cols: cols.len(), data }
    }

    pub fn select_rows(&self, rows: &[usize]) -> Matrix {
        let mut data = Vec::with_capacity(rows.len() * self.cols);
        for &i in rows {
            data.extend_from_slice(self.row(i));
        }
        Matrix { field: self.field, rows: rows.len(), cols: self.cols, data }
    }

    pub fn vstack(field: Field, cols: usize, parts: &[&Matrix]) -> Result<Matrix> {
        let mut data = Vec::new();
        let mut rows = 0;
        for p in parts {
            if p.cols != cols || p.field != field {
                return Err(Error::ShapeMismatch("vertical stack".into()));
            }
            rows += p.rows;
            data.extend_from_slice(&p.data);
        }
        Ok(Matrix { field, rows, cols, data })
    }

    pub fn hstack(&self, other: &Matrix) -> Result<Matrix> {
        self.check_field(other)?;
        if self.rows != other.rows {
            return Err(Error::ShapeMismatch("horizontal stack".into()));
        }
        let mut data = Vec::with_capacity(self.data.len() + other.data.len());
        for i in 0..self.rows {
            data.extend_from_slice(self.row(i));
            data.extend_from_slice(other.row(i));
        }
        Ok(Matrix { field: self.field, rows: self.rows, cols: self.cols + other.cols, data })
    }

    pub fn rref(&self) -> Rref {
        let (rows, pivots) = rref_rows(self.field, self.cols, self.row_vecs());
        let rank = pivots.len();
        let mut data = Vec::with_capacity(self.rows * self.cols);
        for r in &rows {
            data.extend_from_slice(r);
        }
        data.resize(self.rows * self.cols, self.field.zero());
        Rref { matrix: Matrix { field: self.field, rows: self.rows, cols: self.cols, data }, pivots, rank }
    }

    pub fn rank(&self) -> usize {
        rref_rows(self.field, self.cols, self.row_vecs()).1.len()
    }

    /// `{x : self · x = 0}` as a subspace of `k^cols`.
    pub fn kernel(&self) -> Subspace {
        let (rows, pivots) = rref_rows(self.field, self.cols, self.row_vecs());
        Subspace::from_rref_unchecked(self.field, self.cols, nullspace_from_rref(self.field, self.cols, &rows, &pivots))
    }

    /// `{v : v · self = 0}` as a subspace of `k^rows`.
    pub fn left_kernel(&self) -> Subspace {
        self.transpose().kernel()
    }

    /// Column space, a subspace of `k^rows`.
    pub fn image(&self) -> Subspace {
        self.transpose().row_space()
    }

    pub fn row_space(&self) -> Subspace {
        Subspace::span(self.field, self.cols, self.row_vecs())
    }

    pub fn inverse(&self) -> Option<Matrix> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        let aug = self.hstack(&Matrix::identity(self.field, n)).expect("same shape");
        let r = aug.rref();
        if n == 0 {
            return Some(self.clone());
        }
        if r.pivots.len() < n || r.pivots[n - 1] != n - 1 {
            return None;
        }
        Some(r.matrix.block(0, n, n, n))
    }

    pub fn is_invertible(&self) -> bool {
        self.is_square() && self.rank() == self.rows
    }

    pub fn determinant(&self) -> Option<Scalar> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        let mut rows = self.row_vecs();
        let mut det = self.field.one();
        for c in 0..n {
            let p = (c..n).find(|&r| !rows[r][c].is_zero());
            let Some(p) = p else { return Some(self.field.zero()) };
            if p != c {
                rows.swap(p, c);
                det = -det;
            }
            let pivot = rows[c][c].clone();
            det = &det * &pivot;
            let inv = pivot.inv().expect("nonzero pivot");
            for r in c + 1..n {
                if rows[r][c].is_zero() {
                    continue;
                }
                let f = &rows[r][c] * &inv;
                for j in c..n {
                    let t = &f * &rows[c][j];
                    rows[r][j] = &rows[r][j] - &t;
                }
            }
        }
        Some(det)
    }

    /// All solutions of `self · X = rhs`.
    pub fn solve_all(&self, rhs: &Matrix) -> Result<Solution> {
        self.check_field(rhs)?;
        if self.rows != rhs.rows {
            return Err(Error::ShapeMismatch(format!("{} equations but right-hand side has {} rows", self.rows, rhs.rows)));
        }
        let n = self.cols;
        let aug = self.hstack(rhs)?;
        let (rows, pivots) = rref_rows(self.field, aug.cols, aug.row_vecs());
        if pivots.iter().any(|&p| p >= n) {
            return Ok(Solution::Inconsistent);
        }
        let mut particular = Matrix::zeros(self.field, n, rhs.cols);
        for (r, &p) in pivots.iter().enumerate() {
            for j in 0..rhs.cols {
                particular.set(p, j, rows[r][n + j].clone());
            }
        }
        let coeff_rows: Vec<Vec<Scalar>> = rows.iter().map(|r| r[..n].to_vec()).collect();
        let kernel = Subspace::from_rref_unchecked(self.field, n, nullspace_from_rref(self.field, n, &coeff_rows, &pivots));
        Ok(Solution::Solved { particular, kernel })
    }

    /// A single solution of `self · X = rhs`, if any.
    pub fn solve(&self, rhs: &Matrix) -> Result<Option<Matrix>> {
        Ok(match self.solve_all(rhs)? {
            Solution::Inconsistent => None,
            Solution::Solved { particular, .. } => Some(particular),
        })
    }
}

/// Reduces rows in place to RREF and returns the nonzero rows and pivot columns.
pub(crate) fn rref_rows(field: Field, cols: usize, mut rows: Vec<Vec<Scalar>>) -> (Vec<Vec<Scalar>>, Vec<usize>) {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else { continue };
        rows.swap(r, p);
        let inv = rows[r][c].inv().expect("nonzero pivot");
        if !inv.is_one() {
            for x in rows[r][c..].iter_mut() {
                if !x.is_zero() {
                    *x = &*x * &inv;
                }
            }
        }
        let pivot_row = std::mem::take(&mut rows[r]);
        let support: Vec<usize> = (c..cols).filter(|&j| !pivot_row[j].is_zero()).collect();
        let work = rows.len() * support.len();
        par::for_each_mut(&mut rows, work, |i, row: &mut Vec<Scalar>| {
            if i == r || row.is_empty() || row[c].is_zero() {
                return;
            }
            let f = -&row[c];
            for &j in &support {
                row[j].add_mul_assign(&f, &pivot_row[j]);
            }
        });
        rows[r] = pivot_row;
        pivots.push(c);
        r += 1;
    }
    rows.truncate(r);
    let _ = field;
    (rows, pivots)
}

/// Basis of the nullspace read off an RREF, already in RREF itself.
pub(crate) fn nullspace_from_rref(field: Field, cols: usize, rows: &[Vec<Scalar>], pivots: &[usize]) -> Vec<Vec<Scalar>> {
    let mut is_pivot = vec![None; cols];
    for (r, &p) in pivots.iter().enumerate() {
        is_pivot[p] = Some(r);
    }
    let free: Vec<usize> = (0..cols).filter(|&c| is_pivot[c].is_none()).collect();
    // vectors x_f with x_f[f] = 1 and x_f[p_r] = -rows[r][f]; stacking them in
    // reverse order of the free column and re-reducing yields RREF
    let basis: Vec<Vec<Scalar>> = free
        .iter()
        .map(|&f| {
            let mut v = vec![field.zero(); cols];
            v[f] = field.one();
            for (r, &p) in pivots.iter().enumerate() {
                if !rows[r][f].is_zero() {
                    v[p] = -&rows[r][f];
                }
            }
            v
        })
        .collect();
    rref_rows(field, cols, basis).0
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(ToString::to_string).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const Q: Field = Field::Rationals;

    #[test]
    fn rref_examples() {
        let i3 = Matrix::identity(Q, 3);
        let r = i3.rref();
        assert_eq!((r.matrix, r.rank), (i3, 3));
        let z = Matrix::zeros(Q, 2, 5);
        assert_eq!(z.rref().rank, 0);
        let m = Matrix::from_i64(Q, &[&[1, 2], &[2, 4]]);
        let r = m.rref();
        assert_eq!(r.matrix, Matrix::from_i64(Q, &[&[1, 2], &[0, 0]]));
        assert_eq!(r.rank, 1);
    }

    #[test]
    fn solve_examples() {
        let b = Matrix::from_i64(Q, &[&[3, 1], &[4, 1]]);
        match Matrix::identity(Q, 2).solve_all(&b).unwrap() {
            Solution::Solved { particular, kernel } => {
                assert_eq!(particular, b);
                assert_eq!(kernel.dim(), 0);
            }
            Solution::Inconsistent => panic!(),
        }
        let zero = Matrix::zeros(Q, 1, 1);
        assert_eq!(zero.solve_all(&Matrix::from_i64(Q, &[&[1]])).unwrap(), Solution::Inconsistent);
        match Matrix::from_i64(Q, &[&[1, 1]]).solve_all(&Matrix::from_i64(Q, &[&[1]])).unwrap() {
            Solution::Solved { particular, kernel } => {
                assert_eq!(particular, Matrix::from_i64(Q, &[&[1], &[0]]));
                assert_eq!(kernel, Subspace::span(Q, 2, vec![vec![Q.one(), Q.from_i64(-1)]]));
            }
            Solution::Inconsistent => panic!(),
        }
        assert!(Matrix::identity(Q, 2).solve_all(&Matrix::zeros(Q, 3, 1)).is_err());
    }

    #[test]
    fn kernel_and_kronecker() {
        assert_eq!(Matrix::identity(Q, 4).kernel().dim(), 0);
        let m = Matrix::from_i64(Q, &[&[1, 2], &[3, 4]]);
        let k = Matrix::identity(Q, 2).kronecker(&m).unwrap();
        assert_eq!(k, Matrix::block_diagonal(Q, &[m.clone(), m]));
    }

    #[test]
    fn inverse_and_determinant() {
        let f7 = Field::Prime(7);
        let m = Matrix::from_i64(f7, &[&[2, 1], &[1, 1]]);
        assert_eq!(m.mul(&m.inverse().unwrap()), Matrix::identity(f7, 2));
        assert_eq!(m.determinant().unwrap(), f7.one());
        assert!(Matrix::from_i64(Q, &[&[1, 2], &[2, 4]]).inverse().is_none());
        assert_eq!(Matrix::from_i64(Q, &[&[0, 1], &[1, 0]]).determinant().unwrap(), Q.from_i64(-1));
    }
}
