use num_bigint::BigInt;
use num_traits::Signed;

use crate::error::{Error, Result};
use crate::linalg::{axpy, is_zero_vec, Matrix};
use crate::options::Options;
use crate::scalars::{Field, Scalar};

use super::idempotents::{zero_divisor_from_minpoly, Candidates};
use super::structure::Algebra;

/// Why an algebra is not a division algebra.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NonDivision {
    /// Nonzero `a`, `b` with `a·b = 0`.
    ZeroDivisor { a: Vec<Scalar>, b: Vec<Scalar> },
    ZeroAlgebra,
}

impl NonDivision {
    pub fn left(&self) -> Option<&[Scalar]> {
        match self {
            NonDivision::ZeroDivisor { a, .. } => Some(a),
            NonDivision::ZeroAlgebra => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DivisionVerdict {
    Certified,
    No(NonDivision),
    /// No zero divisor turned up among `samples` candidates, but nothing certifies the answer.
    ProbablyYes { samples: usize },
}

impl DivisionVerdict {
    pub fn is_no(&self) -> bool {
        matches!(self, DivisionVerdict::No(_))
    }
}

/// Extra candidates tried over finite fields, where the answer must be decided.
const FINITE_FIELD_ROUNDS: usize = 64;

impl Algebra {
    pub fn is_division_algebra(&self, opts: &Options) -> Result<DivisionVerdict> {
        let f = self.field();
        if self.dim() == 0 {
            return Ok(DivisionVerdict::No(NonDivision::ZeroAlgebra));
        }
        let rad = self.radical()?;
        if let Some(r) = rad.basis().first() {
            let mut prev = r.clone();
            loop {
                let next = self.mul(&prev, r);
                if is_zero_vec(&next) {
                    return Ok(no(r.clone(), prev));
                }
                prev = next;
            }
        }
        let center = self.center();
        let zdim = center.algebra.dim();
        if zdim > 1 {
            match center.algebra.split_commutative_unchecked(opts) {
                Ok(es) if es.len() > 1 => {
                    let c = center.to_parent(&es[0]);
                    let mut rest = self.unit().to_vec();
                    axpy(&mut rest, &-f.one(), &c);
                    return Ok(no(c, rest));
                }
                Ok(_) => {}
                Err(Error::Undecided(_)) => return self.search_zero_divisor(opts, opts.max_samples),
                Err(e) => return Err(e),
            }
        }
        let degree = self.dim() / zdim;
        if degree == 1 {
            return Ok(DivisionVerdict::Certified);
        }
        if f.is_finite() {
            // finite division algebras are commutative, so a zero divisor exists
            return match self.search_zero_divisor(opts, opts.max_samples * FINITE_FIELD_ROUNDS)? {
                DivisionVerdict::ProbablyYes { samples } => Err(Error::Undecided(format!(
                    "no zero divisor found among {samples} samples of a non-commutative simple algebra over {f}"
                ))),
                v => Ok(v),
            };
        }
        if zdim == 1 && degree == 4 {
            if let Some(v) = self.quaternion_norm_verdict()? {
                return Ok(v);
            }
        }
        self.search_zero_divisor(opts, opts.max_samples)
    }

    fn search_zero_divisor(&self, opts: &Options, samples: usize) -> Result<DivisionVerdict> {
        let mut tried = 0;
        for x in Candidates::new(self, samples, opts.rng(0xd1f)) {
            tried += 1;
            if let Some((a, b)) = zero_divisor_from_minpoly(self, &x, opts)? {
                return Ok(no(a, b));
            }
        }
        Ok(DivisionVerdict::ProbablyYes { samples: tried })
    }

    /// Uses the norm form `N(x) = x·x̄` of a central 4-dimensional algebra over the rationals:
    /// a definite form certifies a division algebra, an isotropic vector gives a zero divisor.
    fn quaternion_norm_verdict(&self) -> Result<Option<DivisionVerdict>> {
        let f = self.field();
        let d = self.dim();
        let half = f.from_i64(2).inv()?;
        let u = self.unit().iter().position(|x| !x.is_zero()).expect("nonzero unit");
        let conj = |x: &[Scalar]| {
            let t = &self.left_matrix(x).trace() * &half;
            let mut c = self.scalar(&t);
            axpy(&mut c, &-f.one(), x);
            c
        };
        let norm = |x: &[Scalar]| -> Option<Scalar> {
            let n = self.mul(x, &conj(x));
            let s = n[u].checked_div(&self.unit()[u]).ok()?;
            (n == self.scalar(&s)).then_some(s)
        };
        let mut gram = Matrix::zeros(f, d, d);
        let norms: Option<Vec<Scalar>> = (0..d).map(|i| norm(&self.basis(i))).collect();
        let Some(norms) = norms else { return Ok(None) };
        for i in 0..d {
            gram.set(i, i, norms[i].clone());
            for j in i + 1..d {
                let mut s = self.basis(i);
                s[j] = f.one();
                let Some(nij) = norm(&s) else { return Ok(None) };
                let b = &(&(&nij - &norms[i]) - &norms[j]) * &half;
                gram.set(i, j, b.clone());
                gram.set(j, i, b);
            }
        }
        let (diag, basis) = diagonalize_symmetric(&gram);
        let vector = |coeffs: &[Scalar]| {
            let mut v = self.zero();
            for (c, row) in coeffs.iter().zip(basis.row_vecs()) {
                axpy(&mut v, c, &row);
            }
            v
        };
        let isotropic = |coeffs: Vec<Scalar>| {
            let v = vector(&coeffs);
            let w = conj(&v);
            DivisionVerdict::No(NonDivision::ZeroDivisor { a: v, b: w })
        };
        let unit_at = |i: usize, c: Scalar| {
            let mut v = vec![f.zero(); d];
            v[i] = c;
            v
        };
        if let Some(i) = diag.iter().position(Scalar::is_zero) {
            return Ok(Some(isotropic(unit_at(i, f.one()))));
        }
        let signs: Vec<i32> = diag.iter().map(|x| x.signum().unwrap_or(0)).collect();
        if signs.iter().all(|&s| s > 0) || signs.iter().all(|&s| s < 0) {
            return Ok(Some(DivisionVerdict::Certified));
        }
        for i in 0..d {
            for j in i + 1..d {
                let ratio = (-&diag[i]).checked_div(&diag[j])?;
                if let Some(t) = rational_sqrt(&ratio) {
                    let mut c = unit_at(i, f.one());
                    c[j] = t;
                    return Ok(Some(isotropic(c)));
                }
            }
        }
        // small integer points of the diagonal form
        let range: Vec<i64> = (-3..=3).collect();
        let mut c = vec![0i64; d];
        fn walk(k: usize, c: &mut Vec<i64>, range: &[i64], diag: &[Scalar], f: Field) -> Option<Vec<i64>> {
            if k == c.len() {
                if c.iter().all(|&x| x == 0) {
                    return None;
                }
                let q = c.iter().zip(diag).fold(f.zero(), |acc, (&x, dd)| &acc + &(&f.from_i64(x * x) * dd));
                return q.is_zero().then(|| c.clone());
            }
            for &x in range {
                c[k] = x;
                if let Some(hit) = walk(k + 1, c, range, diag, f) {
                    return Some(hit);
                }
            }
            None
        }
        if let Some(hit) = walk(0, &mut c, &range, &diag, f) {
            return Ok(Some(isotropic(hit.iter().map(|&x| f.from_i64(x)).collect())));
        }
        Ok(None)
    }
}

fn no(a: Vec<Scalar>, b: Vec<Scalar>) -> DivisionVerdict {
    DivisionVerdict::No(NonDivision::ZeroDivisor { a, b })
}

fn rational_sqrt(x: &Scalar) -> Option<Scalar> {
    let r = x.as_rational()?;
    if r.is_negative() {
        return None;
    }
    let root = |n: &BigInt| {
        let s = n.sqrt();
        (&s * &s == *n).then_some(s)
    };
    let (n, d) = (root(r.numer())?, root(r.denom())?);
    Field::Rationals.from_ratio(&n, &d).ok()
}

/// Congruence diagonalization `P G Pᵀ = diag` of a symmetric matrix (characteristic ≠ 2).
/// Returns the diagonal and `P`, whose rows are the new basis vectors.
pub fn diagonalize_symmetric(g: &Matrix) -> (Vec<Scalar>, Matrix) {
    let n = g.rows();
    let f = g.field();
    let mut a = g.clone();
    let mut p = Matrix::identity(f, n);
    let add_row_col = |a: &mut Matrix, p: &mut Matrix, dst: usize, src: usize, c: &Scalar| {
        for k in 0..n {
            let v = a.get(dst, k) + &(c * a.get(src, k));
            a.set(dst, k, v);
        }
        for k in 0..n {
            let v = a.get(k, dst) + &(c * a.get(k, src));
            a.set(k, dst, v);
        }
        for k in 0..n {
            let v = p.get(dst, k) + &(c * p.get(src, k));
            p.set(dst, k, v);
        }
    };
    for i in 0..n {
        if a.get(i, i).is_zero() {
            if let Some(j) = (i + 1..n).find(|&j| !a.get(j, j).is_zero()) {
                add_row_col(&mut a, &mut p, i, j, &f.one());
            } else if let Some(j) = (i + 1..n).find(|&j| !a.get(i, j).is_zero()) {
                add_row_col(&mut a, &mut p, i, j, &f.one());
            } else {
                continue;
            }
        }
        let pivot = a.get(i, i).clone();
        for j in i + 1..n {
            if a.get(j, i).is_zero() {
                continue;
            }
            let c = -&a.get(j, i).checked_div(&pivot).expect("nonzero pivot");
            add_row_col(&mut a, &mut p, j, i, &c);
        }
    }
    ((0..n).map(|i| a.get(i, i).clone()).collect(), p)
}

/// Rational quaternion algebra `(α, β)` with basis `1, i, j, k`, `i² = α`, `j² = β`, `ij = -ji = k`.
pub fn quaternion_algebra(field: Field, alpha: i64, beta: i64) -> Result<Algebra> {
    let s = |x: i64| field.from_i64(x);
    // products of basis elements as (index, coefficient)
    let table = |i: usize, j: usize| -> (usize, Scalar) {
        match (i, j) {
            (0, j) => (j, s(1)),
            (i, 0) => (i, s(1)),
            (1, 1) => (0, s(alpha)),
            (2, 2) => (0, s(beta)),
            (3, 3) => (0, s(-alpha * beta)),
            (1, 2) => (3, s(1)),
            (2, 1) => (3, s(-1)),
            (1, 3) => (2, s(alpha)),
            (3, 1) => (2, s(-alpha)),
            (2, 3) => (1, s(-beta)),
            (3, 2) => (1, s(beta)),
            _ => unreachable!(),
        }
    };
    let labels = ["1", "i", "j", "k"].iter().map(|x| x.to_string()).collect();
    let unit = vec![s(1), s(0), s(0), s(0)];
    Algebra::from_products(field, labels, unit, |i, j| {
        let (k, c) = table(i, j);
        let mut v = vec![field.zero(); 4];
        v[k] = c;
        v
    })
}

/// The full matrix algebra `M_n(k)` with matrix-unit basis `E_{ij}` (index `i*n + j`).
pub fn matrix_algebra(field: Field, n: usize) -> Algebra {
    let labels = (0..n * n).map(|ij| format!("E{}{}", ij / n, ij % n)).collect();
    let mut unit = vec![field.zero(); n * n];
    for i in 0..n {
        unit[i * n + i] = field.one();
    }
    Algebra::from_products(field, labels, unit, |a, b| {
        let mut v = vec![field.zero(); n * n];
        let (i, j) = (a / n, a % n);
        let (k, l) = (b / n, b % n);
        if j == k {
            v[i * n + l] = field.one();
        }
        v
    })
    .expect("matrix algebra is associative")
}
