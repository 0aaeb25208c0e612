use std::sync::{Arc, OnceLock};

use crate::error::{Error, Result};
use crate::linalg::{axpy, is_zero_vec, Echelon, Insert, Matrix, Subspace};
use crate::par;
use crate::scalars::{Field, Poly, Scalar};

use super::quiver::{Path, Quiver};

/// Sparse product of two basis elements: `(k, c)` pairs, sorted by `k`.
pub type SparseVec = Vec<(usize, Scalar)>;

/// Path basis data attached to a path algebra.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PathBasis {
    pub quiver: Quiver,
    pub paths: Vec<Path>,
}

impl PathBasis {
    /// Basis index of the trivial path at `v` (trivial paths come first).
    pub fn vertex(&self, v: usize) -> usize {
        v
    }

    /// Basis index of arrow `a` (arrows follow the trivial paths).
    pub fn arrow(&self, a: usize) -> usize {
        self.quiver.vertex_count() + a
    }

    /// Basis indices of the paths starting at `v`.
    pub fn paths_from(&self, v: usize) -> Vec<usize> {
        (0..self.paths.len()).filter(|&i| self.paths[i].source == v).collect()
    }
}

/// A finite-dimensional associative unital algebra given by structure constants.
///
/// `b_i · b_j = Σ_k c[i][j][k] b_k`; elements are coordinate vectors.
#[derive(Clone, Debug)]
pub struct Algebra {
    field: Field,
    labels: Vec<String>,
    table: Vec<SparseVec>,
    unit: Vec<Scalar>,
    paths: Option<Arc<PathBasis>>,
    generators: OnceLock<Vec<Vec<Scalar>>>,
}

impl PartialEq for Algebra {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field
            && self.labels == other.labels
            && self.table == other.table
            && self.unit == other.unit
            && self.paths == other.paths
    }
}

impl Eq for Algebra {}

fn sparse(v: &[Scalar]) -> SparseVec {
    v.iter().enumerate().filter(|(_, x)| !x.is_zero()).map(|(i, x)| (i, x.clone())).collect()
}

impl Algebra {
    /// Validated constructor: checks shapes, the unit law and associativity.
    pub fn from_table(field: Field, labels: Vec<String>, table: Vec<SparseVec>, unit: Vec<Scalar>) -> Result<Algebra> {
        let a = Algebra::assemble(field, labels, table, unit)?;
        a.check_unit()?;
        a.check_associative()?;
        Ok(a)
    }

    /// Builds from a dense product function `(i, j) -> b_i b_j`.
    pub fn from_products<F>(field: Field, labels: Vec<String>, unit: Vec<Scalar>, product: F) -> Result<Algebra>
    where
        F: Fn(usize, usize) -> Vec<Scalar> + Sync + Send,
    {
        let d = labels.len();
        let table = par::map_range(d * d, |ij| sparse(&product(ij / d, ij % d)));
        Algebra::from_table(field, labels, table, unit)
    }

    fn assemble(field: Field, labels: Vec<String>, mut table: Vec<SparseVec>, unit: Vec<Scalar>) -> Result<Algebra> {
        let d = labels.len();
        if table.len() != d * d {
            return Err(Error::ShapeMismatch(format!("structure table has {} entries, expected {}", table.len(), d * d)));
        }
        if unit.len() != d {
            return Err(Error::DimensionMismatch { expected: d, got: unit.len() });
        }
        for entry in table.iter_mut() {
            entry.retain(|(_, c)| !c.is_zero());
            entry.sort_by_key(|(k, _)| *k);
            for (k, c) in entry.iter() {
                if *k >= d {
                    return Err(Error::ShapeMismatch(format!("structure constant refers to basis index {k} >= {d}")));
                }
                if c.field() != field {
                    return Err(Error::FieldMismatch(field.to_string(), c.field().to_string()));
                }
            }
            for w in entry.windows(2) {
                if w[0].0 == w[1].0 {
                    return Err(Error::Parse(format!("repeated basis index {} in one product", w[0].0)));
                }
            }
        }
        Ok(Algebra { field, labels, table, unit, paths: None, generators: OnceLock::new() })
    }

    fn check_unit(&self) -> Result<()> {
        for i in 0..self.dim() {
            let b = self.basis(i);
            if self.mul(&self.unit, &b) != b || self.mul(&b, &self.unit) != b {
                return Err(Error::UnitLaw(i));
            }
        }
        Ok(())
    }

    fn check_associative(&self) -> Result<()> {
        let d = self.dim();
        let failures = par::map_range(d, |i| {
            for j in 0..d {
                let ij = &self.table[i * d + j];
                for k in 0..d {
                    let mut lhs = vec![self.field.zero(); d];
                    for (m, c) in ij {
                        for (l, e) in &self.table[m * d + k] {
                            lhs[*l].add_mul_assign(c, e);
                        }
                    }
                    let mut rhs = vec![self.field.zero(); d];
                    for (m, c) in &self.table[j * d + k] {
                        for (l, e) in &self.table[i * d + m] {
                            rhs[*l].add_mul_assign(c, e);
                        }
                    }
                    if lhs != rhs {
                        return Some((i, j, k));
                    }
                }
            }
            None
        });
        match failures.into_iter().flatten().next() {
            Some((i, j, k)) => Err(Error::NotAssociative(i, j, k)),
            None => Ok(()),
        }
    }

    /// Path algebra of an acyclic quiver; `p·q` is "first `p`, then `q`".
    pub fn path_algebra(quiver: &Quiver, field: Field) -> Algebra {
        let paths = quiver.paths();
        let d = paths.len();
        let index: std::collections::HashMap<(usize, Vec<usize>), usize> =
            paths.iter().enumerate().map(|(i, p)| ((p.source, p.arrows.clone()), i)).collect();
        let mut table = vec![Vec::new(); d * d];
        for (i, p) in paths.iter().enumerate() {
            for (j, q) in paths.iter().enumerate() {
                if p.target != q.source {
                    continue;
                }
                let mut arrows = p.arrows.clone();
                arrows.extend_from_slice(&q.arrows);
                if let Some(&k) = index.get(&(p.source, arrows)) {
                    table[i * d + j] = vec![(k, field.one())];
                }
            }
        }
        let mut unit = vec![field.zero(); d];
        for v in 0..quiver.vertex_count() {
            unit[v] = field.one();
        }
        let labels = paths.iter().map(|p| p.label(quiver)).collect();
        let mut a = Algebra::assemble(field, labels, table, unit).expect("path algebra shape");
        debug_assert!(a.check_unit().is_ok() && a.check_associative().is_ok());
        let n = quiver.vertex_count();
        let gens = (0..n + quiver.arrows().len()).map(|i| a.basis(i)).collect();
        a.paths = Some(Arc::new(PathBasis { quiver: quiver.clone(), paths }));
        a.generators.set(gens).expect("fresh cell");
        a
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn table(&self) -> &[SparseVec] {
        &self.table
    }

    pub fn unit(&self) -> &[Scalar] {
        &self.unit
    }

    pub fn path_basis(&self) -> Option<&PathBasis> {
        self.paths.as_deref()
    }

    pub fn is_path_algebra(&self) -> bool {
        self.paths.is_some()
    }

    pub fn zero(&self) -> Vec<Scalar> {
        vec![self.field.zero(); self.dim()]
    }

    pub fn basis(&self, i: usize) -> Vec<Scalar> {
        let mut v = self.zero();
        v[i] = self.field.one();
        v
    }

    pub fn scalar(&self, c: &Scalar) -> Vec<Scalar> {
        self.unit.iter().map(|u| u * c).collect()
    }

    /// `b_i · b_j` in sparse form.
    pub fn product(&self, i: usize, j: usize) -> &[(usize, Scalar)] {
        &self.table[i * self.dim() + j]
    }

    pub fn structure_constant(&self, i: usize, j: usize, k: usize) -> Scalar {
        self.product(i, j).iter().find(|(m, _)| *m == k).map_or_else(|| self.field.zero(), |(_, c)| c.clone())
    }

    pub fn checked_mul(&self, x: &[Scalar], y: &[Scalar]) -> Result<Vec<Scalar>> {
        let d = self.dim();
        if x.len() != d || y.len() != d {
            return Err(Error::DimensionMismatch { expected: d, got: if x.len() != d { x.len() } else { y.len() } });
        }
        Ok(self.mul(x, y))
    }

    pub fn mul(&self, x: &[Scalar], y: &[Scalar]) -> Vec<Scalar> {
        let d = self.dim();
        let mut out = self.zero();
        for (i, a) in x.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in y.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let ab = a * b;
                for (k, c) in &self.table[i * d + j] {
                    out[*k].add_mul_assign(&ab, c);
                }
            }
        }
        out
    }

    pub fn pow(&self, x: &[Scalar], e: usize) -> Vec<Scalar> {
        (0..e).fold(self.unit.clone(), |acc, _| self.mul(&acc, x))
    }

    /// Matrix of `y ↦ x·y` in the row-vector convention.
    pub fn left_matrix(&self, x: &[Scalar]) -> Matrix {
        let rows = (0..self.dim()).map(|j| self.mul(x, &self.basis(j))).collect();
        Matrix::from_rows(self.field, self.dim(), rows).expect("square")
    }

    /// Matrix of `y ↦ y·x` in the row-vector convention; `R_{xy} = R_x R_y`.
    pub fn right_matrix(&self, x: &[Scalar]) -> Matrix {
        let rows = (0..self.dim()).map(|j| self.mul(&self.basis(j), x)).collect();
        Matrix::from_rows(self.field, self.dim(), rows).expect("square")
    }

    pub fn is_commutative(&self) -> bool {
        let d = self.dim();
        (0..d).all(|i| (i + 1..d).all(|j| self.product(i, j) == self.product(j, i)))
    }

    /// A small generating set (as elements), found greedily along the basis.
    pub fn generators(&self) -> &[Vec<Scalar>] {
        self.generators.get_or_init(|| {
            let mut gens: Vec<Vec<Scalar>> = Vec::new();
            let mut closure = self.closure(&gens, &self.unit);
            for i in 0..self.dim() {
                let b = self.basis(i);
                if !closure.contains(&b) {
                    gens.push(b);
                    closure = self.closure(&gens, &self.unit);
                }
            }
            gens
        })
    }

    /// Span of all words in `gens` (including the empty word `one`).
    pub fn closure(&self, gens: &[Vec<Scalar>], one: &[Scalar]) -> Subspace {
        let mut ech = Echelon::new(self.field, self.dim());
        let mut accepted = Vec::new();
        if !is_zero_vec(one) {
            ech.insert(one);
            accepted.push(one.to_vec());
        }
        for g in gens {
            if let Insert::New(_) = ech.insert(g) {
                accepted.push(g.clone());
            }
        }
        let mut i = 0;
        while i < accepted.len() {
            for g in gens {
                let w = self.mul(&accepted[i], g);
                if let Insert::New(_) = ech.insert(&w) {
                    accepted.push(w);
                }
            }
            i += 1;
        }
        ech.to_subspace()
    }

    /// Minimal polynomial of `x` over the base field, relative to the identity `one`
    /// (the algebra unit, or a corner idempotent with `x = one·x·one`).
    pub fn minimal_polynomial_in(&self, x: &[Scalar], one: &[Scalar]) -> Poly {
        let mut ech = Echelon::new(self.field, self.dim());
        let mut power = one.to_vec();
        loop {
            match ech.insert(&power) {
                Insert::New(_) => power = self.mul(&power, x),
                Insert::Dependent(c) => {
                    let mut coeffs: Vec<Scalar> = c.iter().map(|a| -a).collect();
                    coeffs.push(self.field.one());
                    return Poly::new(self.field, coeffs);
                }
            }
        }
    }

    pub fn minimal_polynomial(&self, x: &[Scalar]) -> Poly {
        self.minimal_polynomial_in(x, &self.unit)
    }

    /// `f(x)` with `one` playing the role of the identity.
    pub fn eval_poly_in(&self, f: &Poly, x: &[Scalar], one: &[Scalar]) -> Vec<Scalar> {
        let mut acc = self.zero();
        for c in f.coeffs().iter().rev() {
            acc = self.mul(&acc, x);
            axpy(&mut acc, c, one);
        }
        acc
    }

    pub fn eval_poly(&self, f: &Poly, x: &[Scalar]) -> Vec<Scalar> {
        self.eval_poly_in(f, x, &self.unit)
    }

    /// Trace of right multiplication by each basis element.
    pub fn basis_traces(&self) -> Vec<Scalar> {
        let d = self.dim();
        (0..d)
            .map(|k| (0..d).fold(self.field.zero(), |acc, j| &acc + &self.structure_constant(j, k, j)))
            .collect()
    }

    /// Whether `space` is a two-sided ideal.
    pub fn is_ideal(&self, space: &Subspace) -> bool {
        space.basis().iter().all(|v| {
            (0..self.dim()).all(|i| {
                let b = self.basis(i);
                space.contains(&self.mul(v, &b)) && space.contains(&self.mul(&b, v))
            })
        })
    }

    /// Product space `U·V = span{u v}`.
    pub fn product_space(&self, u: &Subspace, v: &Subspace) -> Subspace {
        let mut vs = Vec::new();
        for a in u.basis() {
            for b in v.basis() {
                vs.push(self.mul(a, b));
            }
        }
        Subspace::span(self.field, self.dim(), vs)
    }

    /// Subspace spanned by `e·b_i·f`.
    pub fn sandwich(&self, e: &[Scalar], f: &[Scalar]) -> Subspace {
        let vs = (0..self.dim()).map(|i| self.mul(&self.mul(e, &self.basis(i)), f)).collect();
        Subspace::span(self.field, self.dim(), vs)
    }

    /// Same table with the basis relabelled (used when an algebra is built by value).
    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Algebra> {
        if labels.len() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), got: labels.len() });
        }
        self.labels = labels;
        Ok(self)
    }

    /// Replaces the cached generating set; rejected unless it generates the algebra.
    pub fn with_generators(self, gens: Vec<Vec<Scalar>>) -> Result<Algebra> {
        if self.closure(&gens, &self.unit).dim() != self.dim() {
            return Err(Error::Verification("elements do not generate the algebra".into()));
        }
        let cell = OnceLock::new();
        cell.set(gens).expect("fresh cell");
        Ok(Algebra { generators: cell, ..self })
    }

    /// Tensor product `A ⊗ B` with basis `a_i ⊗ b_j` at index `i·dim B + j`.
    pub fn tensor(&self, other: &Algebra) -> Result<Algebra> {
        if self.field != other.field {
            return Err(Error::FieldMismatch(self.field.to_string(), other.field.to_string()));
        }
        let (m, n) = (self.dim(), other.dim());
        let f = self.field;
        let labels = (0..m * n).map(|k| format!("{}⊗{}", self.labels[k / n], other.labels[k % n])).collect();
        let unit = (0..m * n).map(|k| &self.unit[k / n] * &other.unit[k % n]).collect();
        Algebra::from_products(f, labels, unit, |x, y| {
            let mut out = vec![f.zero(); m * n];
            for (k, c) in self.product(x / n, y / n) {
                for (l, e) in other.product(x % n, y % n) {
                    out[k * n + l] = c * e;
                }
            }
            out
        })
    }

    /// Forgets path data (for algebras that merely share a table with a path algebra).
    pub fn without_paths(mut self) -> Algebra {
        self.paths = None;
        self.generators = OnceLock::new();
        self
    }

    /// Algebra isomorphic to `self` under the change of basis whose rows are the new basis vectors.
    pub fn change_basis(&self, rows: &Matrix) -> Result<Algebra> {
        let inv = rows.inverse().ok_or_else(|| Error::Verification("change of basis is singular".into()))?;
        let d = self.dim();
        let new: Vec<Vec<Scalar>> = rows.row_vecs();
        let labels = (0..d).map(|i| format!("v{i}")).collect();
        let unit = inv.vec_mul(&self.unit);
        Algebra::from_products(self.field, labels, unit, |i, j| inv.vec_mul(&self.mul(&new[i], &new[j])))
    }
}

/// A subalgebra (possibly with a different identity element) together with its embedding.
#[derive(Clone, Debug)]
pub struct SubAlgebra {
    pub algebra: Algebra,
    pub space: Subspace,
}

impl SubAlgebra {
    pub fn to_parent(&self, x: &[Scalar]) -> Vec<Scalar> {
        self.space.vector(x)
    }

    pub fn from_parent(&self, x: &[Scalar]) -> Option<Vec<Scalar>> {
        self.space.coordinates(x)
    }
}

/// A quotient algebra `A/I` with its basis indexed by non-pivot coordinates of `I`.
#[derive(Clone, Debug)]
pub struct Quotient {
    pub algebra: Algebra,
    pub ideal: Subspace,
    pub complement: Vec<usize>,
}

impl Quotient {
    pub fn project(&self, x: &[Scalar]) -> Vec<Scalar> {
        let r = self.ideal.reduce(x);
        self.complement.iter().map(|&c| r[c].clone()).collect()
    }

    /// A preimage of a quotient element (supported on the complement coordinates).
    pub fn lift(&self, y: &[Scalar]) -> Vec<Scalar> {
        let mut v = vec![self.ideal.field().zero(); self.ideal.ambient_dim()];
        for (&c, x) in self.complement.iter().zip(y) {
            v[c] = x.clone();
        }
        v
    }

    /// The projection as a `dim A × dim A/I` matrix.
    pub fn projection_matrix(&self) -> Matrix {
        let d = self.ideal.ambient_dim();
        let f = self.ideal.field();
        let rows = (0..d)
            .map(|i| {
                let mut e = vec![f.zero(); d];
                e[i] = f.one();
                self.project(&e)
            })
            .collect();
        Matrix::from_rows(f, self.complement.len(), rows).expect("consistent rows")
    }
}

impl Algebra {
    /// `A/I` for a two-sided ideal `I`.
    pub fn quotient(&self, ideal: &Subspace) -> Result<Quotient> {
        if ideal.ambient_dim() != self.dim() || !self.is_ideal(ideal) {
            return Err(Error::NotAnIdeal);
        }
        let complement = ideal.complement_indices();
        let q = Quotient { algebra: self.clone(), ideal: ideal.clone(), complement: complement.clone() };
        let labels = complement.iter().map(|&c| format!("[{}]", self.labels[c])).collect();
        let unit = q.project(&self.unit);
        let algebra = Algebra::from_products(self.field, labels, unit, |i, j| {
            q.project(&self.mul(&self.basis(complement[i]), &self.basis(complement[j])))
        })?;
        Ok(Quotient { algebra, ideal: ideal.clone(), complement })
    }

    /// The subalgebra on `space` with identity `one` (which must lie in `space`).
    pub fn subalgebra_with_unit(&self, space: &Subspace, one: &[Scalar]) -> Result<SubAlgebra> {
        let basis = space.basis().to_vec();
        for a in &basis {
            for b in &basis {
                if !space.contains(&self.mul(a, b)) {
                    return Err(Error::NotASubalgebra);
                }
            }
        }
        let unit = space.coordinates(one).ok_or(Error::NotASubalgebra)?;
        let labels = (0..basis.len()).map(|i| format!("s{i}")).collect();
        let algebra = Algebra::from_products(self.field, labels, unit, |i, j| {
            space.coordinates(&self.mul(&basis[i], &basis[j])).expect("closed under products")
        })
        .map_err(|_| Error::NotASubalgebra)?;
        Ok(SubAlgebra { algebra, space: space.clone() })
    }

    pub fn subalgebra(&self, space: &Subspace) -> Result<SubAlgebra> {
        self.subalgebra_with_unit(space, &self.unit.clone())
    }

    /// The corner algebra `eAe` with identity `e`.
    pub fn corner(&self, e: &[Scalar]) -> Result<SubAlgebra> {
        if self.mul(e, e) != e {
            return Err(Error::NotIdempotent);
        }
        self.subalgebra_with_unit(&self.sandwich(e, e), e)
    }

    /// The center as a subspace.
    pub fn center_space(&self) -> Subspace {
        let d = self.dim();
        // z = Σ z_i b_i is central iff Σ_i z_i (c[i][j] - c[j][i]) = 0 for all j
        let rows = (0..d)
            .map(|i| {
                let mut row = vec![self.field.zero(); d * d];
                for j in 0..d {
                    for (k, c) in self.product(i, j) {
                        row[j * d + k] = &row[j * d + k] + c;
                    }
                    for (k, c) in self.product(j, i) {
                        row[j * d + k] = &row[j * d + k] - c;
                    }
                }
                row
            })
            .collect();
        Matrix::from_rows(self.field, d * d, rows).expect("rectangular").left_kernel()
    }

    pub fn center(&self) -> SubAlgebra {
        self.subalgebra(&self.center_space()).expect("the center is a subalgebra")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const Q: Field = Field::Rationals;

    fn a2() -> Algebra {
        Algebra::path_algebra(&Quiver::from_edges(2, &[("a", 0, 1)]).unwrap(), Q)
    }

    #[test]
    fn path_algebra_products() {
        let a = a2();
        assert_eq!(a.dim(), 3);
        assert_eq!(a.labels(), &["e_0", "e_1", "a"]);
        assert_eq!(a.mul(&a.basis(0), &a.basis(2)), a.basis(2));
        assert!(is_zero_vec(&a.mul(&a.basis(2), &a.basis(0))));
        assert_eq!(a.mul(a.unit(), &a.basis(2)), a.basis(2));
    }

    #[test]
    fn broken_table_is_rejected() {
        let a = a2();
        let mut table = a.table().to_vec();
        // claim a·e_0 = a, which breaks associativity against e_0·e_1 = 0
        table[2 * 3] = vec![(2, Q.one())];
        let r = Algebra::from_table(Q, a.labels().to_vec(), table, a.unit().to_vec());
        assert!(matches!(r, Err(Error::NotAssociative(..)) | Err(Error::UnitLaw(_))));
    }

    #[test]
    fn quotient_and_corner() {
        let a = a2();
        let rad = Subspace::span(Q, 3, vec![a.basis(2)]);
        let q = a.quotient(&rad).unwrap();
        assert_eq!(q.algebra.dim(), 2);
        assert!(a.quotient(&Subspace::span(Q, 3, vec![a.basis(0)])).is_err());
        let c = a.corner(&a.basis(0)).unwrap();
        assert_eq!(c.algebra.dim(), 1);
        assert_eq!(a.quotient(&Subspace::zero(Q, 3)).unwrap().algebra.dim(), 3);
        assert_eq!(a.quotient(&Subspace::full(Q, 3)).unwrap().algebra.dim(), 0);
    }

    #[test]
    fn center_of_path_algebra_is_scalars() {
        assert_eq!(a2().center_space().dim(), 1);
    }

    #[test]
    fn minimal_polynomial_of_idempotent() {
        let a = a2();
        assert_eq!(a.minimal_polynomial(&a.basis(0)), Poly::from_i64s(Q, &[0, -1, 1]));
        assert_eq!(a.minimal_polynomial(&a.basis(2)), Poly::from_i64s(Q, &[0, 0, 1]));
    }
}
