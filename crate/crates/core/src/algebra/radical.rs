//! Jacobson radical.
//!
//! In characteristic zero (and for `p > dim`) the radical is the kernel of the
//! trace form `(x, y) ↦ tr(R_{xy})`. For small primes the trace form is too
//! coarse, so the kernel is refined through the chain of ideals cut out by
//! `a ↦ Tr(ã^{p^i}) / p^i mod p`, where `ã` is an integer lift of the regular
//! representation matrix; after `⌊log_p dim⌋` steps the chain reaches the
//! radical. Either way the result is checked to be a nilpotent ideal.

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::linalg::{Matrix, Subspace};
use crate::par;
use crate::scalars::{Field, Scalar};

use super::structure::Algebra;

impl Algebra {
    pub fn radical(&self) -> Result<Subspace> {
        let d = self.dim();
        if d == 0 {
            return Ok(Subspace::zero(self.field(), 0));
        }
        let rad = match self.field() {
            Field::Rationals => self.trace_form_radical(),
            Field::Prime(p) => self.modular_radical(p)?,
        };
        if !self.is_ideal(&rad) {
            return Err(Error::Radical("computed radical is not an ideal".into()));
        }
        if self.nilpotency_index(&rad).is_none() {
            return Err(Error::Radical("computed radical is not nilpotent".into()));
        }
        Ok(rad)
    }

    fn trace_form_radical(&self) -> Subspace {
        let d = self.dim();
        let tau = self.basis_traces();
        let rows = par::map_range(d, |i| {
            (0..d)
                .map(|j| self.product(i, j).iter().fold(self.field().zero(), |acc, (k, c)| &acc + &(c * &tau[*k])))
                .collect::<Vec<Scalar>>()
        });
        Matrix::from_rows(self.field(), d, rows).expect("square").left_kernel()
    }

    fn modular_radical(&self, p: u64) -> Result<Subspace> {
        let d = self.dim();
        let f = self.field();
        let mut levels = 0u32;
        while (p as u128).pow(levels + 1) <= d as u128 {
            levels += 1;
        }
        let mut ideal = Subspace::full(f, d);
        for i in 0..=levels {
            if ideal.is_zero() {
                break;
            }
            let basis = ideal.basis().to_vec();
            let modulus = (p as u128).pow(i + 1);
            let exponent = (p as u128).pow(i);
            let rows = par::map(&basis, |a| {
                (0..d)
                    .map(|j| {
                        let x = self.mul(a, &self.basis(j));
                        let t = lifted_trace_power(&self.right_matrix(&x), modulus, exponent);
                        if !t.is_multiple_of(exponent) {
                            return Err(Error::Radical(format!("trace of a {exponent}-th power is not divisible by {exponent}")));
                        }
                        Ok(f.from_bigint(&BigInt::from(t / exponent)))
                    })
                    .collect::<Result<Vec<Scalar>>>()
            });
            let rows = rows.into_iter().collect::<Result<Vec<_>>>()?;
            let g = Matrix::from_rows(f, d, rows).expect("rectangular");
            let kernel = g.left_kernel();
            let vectors = kernel.basis().iter().map(|c| ideal.vector(c)).collect();
            ideal = Subspace::span(f, d, vectors);
        }
        Ok(ideal)
    }

    /// Smallest `m` with `I^m = 0`, if `I` is nilpotent.
    pub fn nilpotency_index(&self, ideal: &Subspace) -> Option<usize> {
        let mut power = ideal.clone();
        let mut m = 1;
        while !power.is_zero() {
            if m > self.dim() {
                return None;
            }
            power = self.product_space(&power, ideal);
            m += 1;
        }
        Some(m)
    }

    pub fn is_semisimple(&self) -> Result<bool> {
        Ok(self.radical()?.is_zero())
    }
}

/// `Tr(X̃^e) mod m` for the integer lift `X̃` of a matrix over `F_p` (entries in `[0, p)`).
fn lifted_trace_power(x: &Matrix, m: u128, e: u128) -> u128 {
    let n = x.rows();
    let lift: Vec<u128> = x.entries().iter().map(|s| s.as_residue().expect("prime field") as u128 % m).collect();
    let mul = |a: &[u128], b: &[u128]| {
        let mut c = vec![0u128; n * n];
        for i in 0..n {
            for k in 0..n {
                let aik = a[i * n + k];
                if aik == 0 {
                    continue;
                }
                for j in 0..n {
                    c[i * n + j] = (c[i * n + j] + aik * b[k * n + j]) % m;
                }
            }
        }
        c
    };
    let mut acc: Vec<u128> = (0..n * n).map(|ij| u128::from(ij / n == ij % n) % m).collect();
    let mut base = lift;
    let mut e = e;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul(&acc, &base);
        }
        base = mul(&base, &base);
        e >>= 1;
    }
    (0..n).fold(0, |t, i| (t + acc[i * n + i]) % m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Quiver;

    #[test]
    fn radical_of_a2_is_the_arrow() {
        for field in [Field::Rationals, Field::Prime(2), Field::Prime(3)] {
            let a = Algebra::path_algebra(&Quiver::from_edges(2, &[("a", 0, 1)]).unwrap(), field);
            let r = a.radical().unwrap();
            assert_eq!(r, Subspace::span(field, 3, vec![a.basis(2)]));
            let q = a.quotient(&r).unwrap();
            assert!(q.algebra.radical().unwrap().is_zero());
        }
    }

    #[test]
    fn longer_paths_in_small_characteristic() {
        let q = Quiver::from_edges(4, &[("a", 0, 1), ("b", 1, 2), ("c", 2, 3), ("d", 0, 2)]).unwrap();
        for field in [Field::Rationals, Field::Prime(2), Field::Prime(5)] {
            let a = Algebra::path_algebra(&q, field);
            let r = a.radical().unwrap();
            assert_eq!(r.dim(), a.dim() - 4);
        }
    }

    fn group_algebra(field: Field, gens: &[Vec<usize>]) -> Algebra {
        let n = gens[0].len();
        let mut elems: Vec<Vec<usize>> = vec![(0..n).collect()];
        let mut i = 0;
        while i < elems.len() {
            for g in gens {
                let h: Vec<usize> = (0..n).map(|x| g[elems[i][x]]).collect();
                if !elems.contains(&h) {
                    elems.push(h);
                }
            }
            i += 1;
        }
        let d = elems.len();
        let labels = (0..d).map(|i| format!("g{i}")).collect();
        let mut unit = vec![field.zero(); d];
        unit[0] = field.one();
        Algebra::from_products(field, labels, unit, |i, j| {
            let h: Vec<usize> = (0..n).map(|x| elems[j][elems[i][x]]).collect();
            let k = elems.iter().position(|e| *e == h).unwrap();
            let mut v = vec![field.zero(); d];
            v[k] = field.one();
            v
        })
        .unwrap()
    }

    #[test]
    fn modular_group_algebras() {
        let c2 = vec![vec![1, 0]];
        let c3 = vec![vec![1, 2, 0]];
        let s3 = vec![vec![1, 2, 0], vec![1, 0, 2]];
        let c4 = vec![vec![1, 2, 3, 0]];
        let cases = [
            (&c2, 2, 1),
            (&c3, 2, 0),
            (&c3, 3, 2),
            (&s3, 2, 1),
            (&s3, 3, 4),
            (&s3, 5, 0),
            (&c4, 2, 3),
            (&c4, 3, 0),
        ];
        for (gens, p, rad) in cases {
            let a = group_algebra(Field::Prime(p), gens);
            assert_eq!(a.radical().unwrap().dim(), rad, "p = {p}, |G| = {}", a.dim());
        }
        assert_eq!(group_algebra(Field::Rationals, &s3).radical().unwrap().dim(), 0);
    }
}
