use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An exact coefficient field: the rationals or a prime field.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Field {
    Rationals,
    Prime(u64),
}

impl Field {
    /// Checked constructor for `F_p`.
    pub fn prime(p: u64) -> Result<Field> {
        if is_prime(p) {
            Ok(Field::Prime(p))
        } else {
            Err(Error::NotPrime(p))
        }
    }

    pub fn characteristic(&self) -> u64 {
        match self {
            Field::Rationals => 0,
            Field::Prime(p) => *p,
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, Field::Prime(_))
    }

    /// Number of elements for a finite field.
    pub fn order(&self) -> Option<u64> {
        match self {
            Field::Rationals => None,
            Field::Prime(p) => Some(*p),
        }
    }

    pub fn zero(&self) -> Scalar {
        match self {
            Field::Rationals => Scalar(Repr::Rational(BigRational::zero())),
            Field::Prime(p) => Scalar(Repr::Modular { value: 0, modulus: *p }),
        }
    }

    pub fn one(&self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(&self, n: i64) -> Scalar {
        match self {
            Field::Rationals => Scalar(Repr::Rational(BigRational::from_integer(n.into()))),
            Field::Prime(p) => Scalar(Repr::Modular { value: reduce_i128(n as i128, *p), modulus: *p }),
        }
    }

    pub fn from_bigint(&self, n: &BigInt) -> Scalar {
        match self {
            Field::Rationals => Scalar(Repr::Rational(BigRational::from_integer(n.clone()))),
            Field::Prime(p) => {
                let r = n.mod_floor(&BigInt::from(*p)).to_u64().expect("residue fits in u64");
                Scalar(Repr::Modular { value: r, modulus: *p })
            }
        }
    }

    /// Rational number `num/den` mapped into this field.
    pub fn from_ratio(&self, num: &BigInt, den: &BigInt) -> Result<Scalar> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        match self {
            Field::Rationals => Ok(Scalar(Repr::Rational(BigRational::new(num.clone(), den.clone())))),
            Field::Prime(_) => self.from_bigint(num).checked_div(&self.from_bigint(den)),
        }
    }

    /// Parses `"a"` or `"a/b"` (decimal integers, optional sign).
    pub fn parse(&self, text: &str) -> Result<Scalar> {
        let text = text.trim();
        let bad = || Error::Parse(format!("invalid field literal {text:?}"));
        let (num, den) = match text.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (text, "1"),
        };
        let num: BigInt = num.parse().map_err(|_| bad())?;
        let den: BigInt = den.parse().map_err(|_| bad())?;
        self.from_ratio(&num, &den)
    }

    /// The element `i` of an enumeration of a finite field (`0..p`).
    pub fn element(&self, i: u64) -> Scalar {
        match self {
            Field::Rationals => self.from_i64(i as i64),
            Field::Prime(p) => Scalar(Repr::Modular { value: i % p, modulus: *p }),
        }
    }

    /// A random element; over the rationals a small integer in `[-range, range]`.
    pub fn random<R: Rng + ?Sized>(&self, rng: &mut R, range: i64) -> Scalar {
        match self {
            Field::Rationals => self.from_i64(rng.gen_range(-range..=range)),
            Field::Prime(p) => Scalar(Repr::Modular { value: rng.gen_range(0..*p), modulus: *p }),
        }
    }

    /// Parses `"Q"`, `"F7"`, `"Fp7"`, `"GF(7)"` or a bare prime.
    pub fn from_descriptor(text: &str) -> Result<Field> {
        let t = text.trim();
        if t.eq_ignore_ascii_case("q") || t.eq_ignore_ascii_case("rationals") {
            return Ok(Field::Rationals);
        }
        let digits = t
            .trim_start_matches("GF(")
            .trim_end_matches(')')
            .trim_start_matches("Fp")
            .trim_start_matches('F');
        let p: u64 = digits.parse().map_err(|_| Error::Parse(format!("unknown field {t:?}")))?;
        Field::prime(p)
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Rationals => write!(f, "Q"),
            Field::Prime(p) => write!(f, "F{p}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum Repr {
    Rational(BigRational),
    Modular { value: u64, modulus: u64 },
}

/// An element of a [`Field`]. Values carry their field so that mixing
/// fields is detected.
///
/// The arithmetic operators panic on mixed-field operands; the `checked_*`
/// methods return an error instead.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Scalar(Repr);

impl Scalar {
    pub fn field(&self) -> Field {
        match &self.0 {
            Repr::Rational(_) => Field::Rationals,
            Repr::Modular { modulus, .. } => Field::Prime(*modulus),
        }
    }

    pub fn is_zero(&self) -> bool {
        match &self.0 {
            Repr::Rational(r) => r.is_zero(),
            Repr::Modular { value, .. } => *value == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match &self.0 {
            Repr::Rational(r) => r.is_one(),
            Repr::Modular { value, .. } => *value == 1,
        }
    }

    fn same_field(&self, other: &Scalar) -> Result<()> {
        if self.field() == other.field() {
            Ok(())
        } else {
            Err(Error::FieldMismatch(self.field().to_string(), other.field().to_string()))
        }
    }

    pub fn checked_add(&self, other: &Scalar) -> Result<Scalar> {
        self.same_field(other)?;
        Ok(self.add_unchecked(other))
    }

    pub fn checked_sub(&self, other: &Scalar) -> Result<Scalar> {
        self.same_field(other)?;
        Ok(self.add_unchecked(&other.neg_ref()))
    }

    pub fn checked_mul(&self, other: &Scalar) -> Result<Scalar> {
        self.same_field(other)?;
        Ok(self.mul_unchecked(other))
    }

    pub fn checked_div(&self, other: &Scalar) -> Result<Scalar> {
        self.same_field(other)?;
        let inv = other.inv()?;
        Ok(self.mul_unchecked(&inv))
    }

    pub fn inv(&self) -> Result<Scalar> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(match &self.0 {
            Repr::Rational(r) => Scalar(Repr::Rational(r.recip())),
            Repr::Modular { value, modulus } => {
                Scalar(Repr::Modular { value: pow_mod(*value, modulus - 2, *modulus), modulus: *modulus })
            }
        })
    }

    pub fn pow(&self, mut e: u64) -> Scalar {
        let mut base = self.clone();
        let mut acc = self.field().one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    fn add_unchecked(&self, other: &Scalar) -> Scalar {
        match (&self.0, &other.0) {
            (Repr::Rational(a), Repr::Rational(b)) => Scalar(Repr::Rational(a + b)),
            (Repr::Modular { value: a, modulus }, Repr::Modular { value: b, .. }) => {
                let s = a + b;
                Scalar(Repr::Modular { value: if s >= *modulus { s - modulus } else { s }, modulus: *modulus })
            }
            _ => unreachable!("field mismatch"),
        }
    }

    fn mul_unchecked(&self, other: &Scalar) -> Scalar {
        match (&self.0, &other.0) {
            (Repr::Rational(a), Repr::Rational(b)) => Scalar(Repr::Rational(a * b)),
            (Repr::Modular { value: a, modulus }, Repr::Modular { value: b, .. }) => Scalar(Repr::Modular {
                value: ((*a as u128 * *b as u128) % *modulus as u128) as u64,
                modulus: *modulus,
            }),
            _ => unreachable!("field mismatch"),
        }
    }

    fn neg_ref(&self) -> Scalar {
        match &self.0 {
            Repr::Rational(a) => Scalar(Repr::Rational(-a)),
            Repr::Modular { value, modulus } => {
                Scalar(Repr::Modular { value: if *value == 0 { 0 } else { modulus - value }, modulus: *modulus })
            }
        }
    }

    /// `self += a * b`, the inner-loop primitive of elimination.
    pub fn add_mul_assign(&mut self, a: &Scalar, b: &Scalar) {
        if a.is_zero() || b.is_zero() {
            return;
        }
        *self = self.add_unchecked(&a.mul_unchecked(b));
    }

    /// The value as a rational number, for `Q`.
    pub fn as_rational(&self) -> Option<&BigRational> {
        match &self.0 {
            Repr::Rational(r) => Some(r),
            Repr::Modular { .. } => None,
        }
    }

    /// The canonical residue in `[0, p)`, for `F_p`.
    pub fn as_residue(&self) -> Option<u64> {
        match &self.0 {
            Repr::Rational(_) => None,
            Repr::Modular { value, .. } => Some(*value),
        }
    }

    /// Total order used only to make tie-breaking deterministic.
    pub fn canonical_cmp(&self, other: &Scalar) -> Ordering {
        match (&self.0, &other.0) {
            (Repr::Rational(a), Repr::Rational(b)) => a.cmp(b),
            (Repr::Modular { value: a, .. }, Repr::Modular { value: b, .. }) => a.cmp(b),
            (Repr::Rational(_), _) => Ordering::Less,
            _ => Ordering::Greater,
        }
    }

    /// Sign for rationals (`-1`, `0`, `1`); `None` over finite fields.
    pub fn signum(&self) -> Option<i32> {
        self.as_rational().map(|r| {
            if r.is_zero() {
                0
            } else if r.is_positive() {
                1
            } else {
                -1
            }
        })
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0 {
            Repr::Rational(r) => {
                if r.denom().is_one() {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
            Repr::Modular { value, .. } => write!(f, "{value}"),
        }
    }
}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn add(self, rhs: &'a Scalar) -> Scalar {
        self.checked_add(rhs).expect("scalar field mismatch")
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &'a Scalar) -> Scalar {
        self.checked_sub(rhs).expect("scalar field mismatch")
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &'a Scalar) -> Scalar {
        self.checked_mul(rhs).expect("scalar field mismatch")
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        self.neg_ref()
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        self.neg_ref()
    }
}

fn reduce_i128(n: i128, p: u64) -> u64 {
    n.rem_euclid(p as i128) as u64
}

pub(crate) fn pow_mod(base: u64, mut e: u64, m: u64) -> u64 {
    let mut acc: u128 = 1 % m as u128;
    let mut b = (base % m) as u128;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % m as u128;
        }
        b = b * b % m as u128;
        e >>= 1;
    }
    acc as u64
}

/// Deterministic Miller–Rabin for 64-bit integers.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let (mut d, mut s) = (n - 1, 0);
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = ((x as u128 * x as u128) % n as u128) as u64;
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}
