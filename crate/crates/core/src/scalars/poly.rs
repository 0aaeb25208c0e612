use std::fmt;

use num_bigint::BigInt;

use super::field::{Field, Scalar};
use crate::error::{Error, Result};

/// Univariate polynomial, coefficients lowest degree first, trailing zeros stripped.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Poly {
    field: Field,
    coeffs: Vec<Scalar>,
}

impl Poly {
    pub fn new(field: Field, mut coeffs: Vec<Scalar>) -> Poly {
        while coeffs.last().is_some_and(Scalar::is_zero) {
            coeffs.pop();
        }
        debug_assert!(coeffs.iter().all(|c| c.field() == field));
        Poly { field, coeffs }
    }

    pub fn from_i64s(field: Field, coeffs: &[i64]) -> Poly {
        Poly::new(field, coeffs.iter().map(|&c| field.from_i64(c)).collect())
    }

    pub fn from_bigints(field: Field, coeffs: &[BigInt]) -> Poly {
        Poly::new(field, coeffs.iter().map(|c| field.from_bigint(c)).collect())
    }

    pub fn zero(field: Field) -> Poly {
        Poly { field, coeffs: Vec::new() }
    }

    pub fn one(field: Field) -> Poly {
        Poly::constant(field.one())
    }

    pub fn constant(c: Scalar) -> Poly {
        Poly::new(c.field(), vec![c])
    }

    /// The polynomial `x`.
    pub fn x(field: Field) -> Poly {
        Poly::new(field, vec![field.zero(), field.one()])
    }

    pub fn monomial(c: Scalar, degree: usize) -> Poly {
        let field = c.field();
        let mut coeffs = vec![field.zero(); degree];
        coeffs.push(c);
        Poly::new(field, coeffs)
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Scalar {
        self.coeffs.get(i).cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Scalar {
        self.coeffs.last().cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last().is_some_and(Scalar::is_one)
    }

    fn check(&self, other: &Poly) -> Result<()> {
        if self.field == other.field {
            Ok(())
        } else {
            Err(Error::FieldMismatch(self.field.to_string(), other.field.to_string()))
        }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        self.check(other).expect("polynomial field mismatch");
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|i| &self.coeff(i) + &other.coeff(i)).collect();
        Poly::new(self.field, coeffs)
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Poly {
        Poly::new(self.field, self.coeffs.iter().map(|c| -c).collect())
    }

    pub fn scale(&self, c: &Scalar) -> Poly {
        Poly::new(self.field, self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        self.check(other).expect("polynomial field mismatch");
        if self.is_zero() || other.is_zero() {
            return Poly::zero(self.field);
        }
        let mut out = vec![self.field.zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j].add_mul_assign(a, b);
            }
        }
        Poly::new(self.field, out)
    }

    pub fn pow(&self, e: usize) -> Poly {
        (0..e).fold(Poly::one(self.field), |acc, _| acc.mul(self))
    }

    /// Euclidean division: `self = q * divisor + r` with `deg r < deg divisor`.
    pub fn div_rem(&self, divisor: &Poly) -> Result<(Poly, Poly)> {
        self.check(divisor)?;
        let d = divisor.degree().ok_or(Error::DivisionByZero)?;
        let lead_inv = divisor.leading().inv()?;
        let mut rem = self.coeffs.clone();
        if rem.len() <= d {
            return Ok((Poly::zero(self.field), self.clone()));
        }
        let mut quot = vec![self.field.zero(); rem.len() - d];
        for k in (0..quot.len()).rev() {
            let c = &rem[k + d] * &lead_inv;
            if c.is_zero() {
                continue;
            }
            for (j, b) in divisor.coeffs.iter().enumerate() {
                rem[k + j] = &rem[k + j] - &(&c * b);
            }
            quot[k] = c;
        }
        rem.truncate(d);
        Ok((Poly::new(self.field, quot), Poly::new(self.field, rem)))
    }

    pub fn rem(&self, divisor: &Poly) -> Result<Poly> {
        Ok(self.div_rem(divisor)?.1)
    }

    /// Exact quotient; errors if the division leaves a remainder.
    pub fn exact_div(&self, divisor: &Poly) -> Result<Poly> {
        let (q, r) = self.div_rem(divisor)?;
        if r.is_zero() {
            Ok(q)
        } else {
            Err(Error::Verification("polynomial division is not exact".into()))
        }
    }

    pub fn monic(&self) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        let inv = self.leading().inv().expect("nonzero leading coefficient");
        self.scale(&inv)
    }

    pub fn derivative(&self) -> Poly {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| &self.field.from_i64(i as i64) * c)
            .collect();
        Poly::new(self.field, coeffs)
    }

    pub fn eval(&self, x: &Scalar) -> Scalar {
        self.coeffs.iter().rev().fold(self.field.zero(), |acc, c| &(&acc * x) + c)
    }

    /// Monic greatest common divisor; `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &Poly) -> Poly {
        self.check(other).expect("polynomial field mismatch");
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b).expect("nonzero divisor");
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Extended gcd: `(g, s, t)` with `s*self + t*other = g`, `g` monic.
    pub fn ext_gcd(&self, other: &Poly) -> (Poly, Poly, Poly) {
        let f = self.field;
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (Poly::one(f), Poly::zero(f));
        let (mut t0, mut t1) = (Poly::zero(f), Poly::one(f));
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(&r1).expect("nonzero divisor");
            r0 = std::mem::replace(&mut r1, r);
            let s = s0.sub(&q.mul(&s1));
            s0 = std::mem::replace(&mut s1, s);
            let t = t0.sub(&q.mul(&t1));
            t0 = std::mem::replace(&mut t1, t);
        }
        if r0.is_zero() {
            return (r0, s0, t0);
        }
        let inv = r0.leading().inv().expect("nonzero");
        (r0.scale(&inv), s0.scale(&inv), t0.scale(&inv))
    }

    /// `self^e mod modulus`.
    pub fn pow_mod(&self, mut e: u128, modulus: &Poly) -> Poly {
        let mut base = self.rem(modulus).expect("nonzero modulus");
        let mut acc = Poly::one(self.field).rem(modulus).expect("nonzero modulus");
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).rem(modulus).expect("nonzero modulus");
            }
            base = base.mul(&base).rem(modulus).expect("nonzero modulus");
            e >>= 1;
        }
        acc
    }

    /// Inverse of `self` modulo `modulus`, when coprime.
    pub fn inv_mod(&self, modulus: &Poly) -> Option<Poly> {
        let (g, s, _) = self.ext_gcd(modulus);
        if g.degree() == Some(0) {
            Some(s.rem(modulus).expect("nonzero modulus"))
        } else {
            None
        }
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let text = c.to_string();
            let (neg, body) = match text.strip_prefix('-') {
                Some(rest) if c.field() == Field::Rationals => (true, rest.to_string()),
                _ => (false, text),
            };
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            let show_coeff = i == 0 || body != "1";
            if show_coeff {
                write!(f, "{body}")?;
            }
            match i {
                0 => {}
                1 => write!(f, "x")?,
                _ => write!(f, "x^{i}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(c: &[i64]) -> Poly {
        Poly::from_i64s(Field::Rationals, c)
    }

    #[test]
    fn gcd_examples() {
        assert_eq!(q(&[-1, 0, 1]).gcd(&q(&[-1, 1])), q(&[-1, 1]));
        assert_eq!(q(&[1, 0, 1]).gcd(&q(&[-1, 0, 1])), q(&[1]));
        assert_eq!(q(&[2, 4]).gcd(&Poly::zero(Field::Rationals)), Poly::new(Field::Rationals, vec![
            Field::Rationals.parse("1/2").unwrap(),
            Field::Rationals.one()
        ]));
        assert!(Poly::zero(Field::Rationals).gcd(&Poly::zero(Field::Rationals)).is_zero());
    }

    #[test]
    fn division_identity() {
        let f = q(&[3, 0, -2, 5, 1]);
        let g = q(&[1, 2, 3]);
        let (qu, r) = f.div_rem(&g).unwrap();
        assert_eq!(qu.mul(&g).add(&r), f);
        assert!(r.degree() < g.degree());
        assert_eq!(f.div_rem(&Poly::zero(Field::Rationals)), Err(Error::DivisionByZero));
    }

    #[test]
    fn ext_gcd_bezout() {
        let f7 = Field::Prime(7);
        let a = Poly::from_i64s(f7, &[1, 2, 0, 1]);
        let b = Poly::from_i64s(f7, &[3, 1, 1]);
        let (g, s, t) = a.ext_gcd(&b);
        assert_eq!(s.mul(&a).add(&t.mul(&b)), g);
    }

    #[test]
    fn display() {
        assert_eq!(q(&[-1, 0, 1]).to_string(), "x^2 - 1");
        assert_eq!(q(&[1, 1, 1]).to_string(), "x^2 + x + 1");
        assert_eq!(q(&[0, -3]).to_string(), "-3x");
    }
}
