//! Factorization of univariate polynomials over `F_p` and `Q`.
//!
//! Over `F_p` the pipeline is squarefree decomposition, distinct-degree
//! splitting and Cantor–Zassenhaus equal-degree splitting driven by a seeded
//! ChaCha generator. Over `Q` the squarefree parts are made primitive in
//! `Z[x]`, factored modulo a good prime, Hensel-lifted past a Mignotte bound
//! and recombined by subset search.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::field::{is_prime, Field, Scalar};
use super::poly::Poly;
use crate::error::{Error, Result};

/// Knobs for factorization. The seed fixes the equal-degree splitting.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FactorOptions {
    pub seed: u64,
    pub degree_ceiling: usize,
}

impl Default for FactorOptions {
    fn default() -> Self {
        FactorOptions { seed: 0, degree_ceiling: 64 }
    }
}

/// `f = leading * prod(factor^exponent)` with monic irreducible factors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization {
    pub leading: Scalar,
    pub factors: Vec<(Poly, usize)>,
}

impl Factorization {
    /// Multiplies the factorization back out.
    pub fn expand(&self) -> Poly {
        self.factors
            .iter()
            .fold(Poly::constant(self.leading.clone()), |acc, (f, e)| acc.mul(&f.pow(*e)))
    }

    /// Distinct irreducible factors.
    pub fn distinct(&self) -> impl Iterator<Item = &Poly> {
        self.factors.iter().map(|(f, _)| f)
    }
}

impl Poly {
    pub fn factor(&self) -> Result<Factorization> {
        self.factor_with(&FactorOptions::default())
    }

    pub fn factor_with(&self, opts: &FactorOptions) -> Result<Factorization> {
        let degree = self.degree().ok_or_else(|| Error::Parse("cannot factor the zero polynomial".into()))?;
        if degree > opts.degree_ceiling {
            return Err(Error::DegreeCeiling { degree, ceiling: opts.degree_ceiling });
        }
        let leading = self.leading();
        let monic = self.monic();
        let mut factors = Vec::new();
        for (part, mult) in squarefree_decomposition(&monic) {
            let irreducibles = match self.field() {
                Field::Prime(p) => factor_squarefree_fp(&part, p, opts.seed)?,
                Field::Rationals => factor_squarefree_q(&part)?,
            };
            factors.extend(irreducibles.into_iter().map(|f| (f, mult)));
        }
        factors.sort_by(|a, b| poly_cmp(&a.0, &b.0).then(a.1.cmp(&b.1)));
        Ok(Factorization { leading, factors })
    }

    /// True when `self` is irreducible (degree ≥ 1 and a single simple factor).
    pub fn is_irreducible(&self) -> Result<bool> {
        if self.degree().unwrap_or(0) == 0 {
            return Ok(false);
        }
        let f = self.factor()?;
        Ok(f.factors.len() == 1 && f.factors[0].1 == 1)
    }
}

fn poly_cmp(a: &Poly, b: &Poly) -> std::cmp::Ordering {
    a.degree().cmp(&b.degree()).then_with(|| {
        for (x, y) in a.coeffs().iter().zip(b.coeffs()).rev() {
            let o = x.canonical_cmp(y);
            if o.is_ne() {
                return o;
            }
        }
        std::cmp::Ordering::Equal
    })
}

/// Squarefree decomposition of a monic polynomial: pairs `(g_i, i)` with
/// `f = prod g_i^i`, each `g_i` squarefree and monic.
pub fn squarefree_decomposition(f: &Poly) -> Vec<(Poly, usize)> {
    let field = f.field();
    let one = Poly::one(field);
    if f.degree().unwrap_or(0) == 0 {
        return Vec::new();
    }
    let df = f.derivative();
    if df.is_zero() {
        // characteristic p and f = g(x^p) = (g^(1/p))(x)^p over F_p
        let p = field.characteristic() as usize;
        return squarefree_decomposition(&pth_root(f, p))
            .into_iter()
            .map(|(g, m)| (g, m * p))
            .collect();
    }
    let mut out = Vec::new();
    let mut c = f.gcd(&df);
    let mut w = f.exact_div(&c).expect("gcd divides");
    let mut i = 1;
    while w != one {
        let y = w.gcd(&c);
        let z = w.exact_div(&y).expect("gcd divides");
        if z != one {
            out.push((z, i));
        }
        i += 1;
        w = y;
        c = c.exact_div(&w).expect("gcd divides");
    }
    if c != one {
        let p = field.characteristic() as usize;
        debug_assert!(p > 0, "leftover cofactor only in positive characteristic");
        for (g, m) in squarefree_decomposition(&pth_root(&c, p)) {
            out.push((g, m * p));
        }
    }
    out
}

fn pth_root(f: &Poly, p: usize) -> Poly {
    let coeffs = f.coeffs().iter().step_by(p).cloned().collect();
    Poly::new(f.field(), coeffs)
}

// ---------------------------------------------------------------- F_p

/// Irreducible monic factors of a squarefree monic polynomial over `F_p`.
pub(crate) fn factor_squarefree_fp(f: &Poly, p: u64, seed: u64) -> Result<Vec<Poly>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    for (g, d) in distinct_degree(f, p) {
        equal_degree(&g, d, p, &mut rng, &mut out)?;
    }
    Ok(out)
}

fn distinct_degree(f: &Poly, p: u64) -> Vec<(Poly, usize)> {
    let field = f.field();
    let x = Poly::x(field);
    let mut out = Vec::new();
    let mut g = f.clone();
    let mut h = x.clone();
    let mut i = 1;
    while g.degree().unwrap_or(0) >= 2 * i {
        h = h.pow_mod(p as u128, &g);
        let d = h.sub(&x).gcd(&g);
        if d.degree().unwrap_or(0) > 0 {
            g = g.exact_div(&d).expect("gcd divides");
            h = h.rem(&g).expect("nonzero");
            out.push((d, i));
        }
        i += 1;
    }
    if let Some(dg) = g.degree() {
        if dg > 0 {
            out.push((g, dg));
        }
    }
    out
}

const EDF_ATTEMPTS: usize = 4096;

fn equal_degree(f: &Poly, d: usize, p: u64, rng: &mut ChaCha8Rng, out: &mut Vec<Poly>) -> Result<()> {
    let n = f.degree().unwrap_or(0);
    if n == 0 {
        return Ok(());
    }
    if n == d {
        out.push(f.monic());
        return Ok(());
    }
    let field = f.field();
    for _ in 0..EDF_ATTEMPTS {
        let a = Poly::new(field, (0..n).map(|_| field.random(rng, 0)).collect());
        if a.degree().unwrap_or(0) == 0 {
            continue;
        }
        let b = if p == 2 {
            // trace map a + a^2 + ... + a^(2^(d-1))
            let mut t = a.rem(f)?;
            let mut acc = t.clone();
            for _ in 1..d {
                t = t.mul(&t).rem(f)?;
                acc = acc.add(&t);
            }
            acc
        } else {
            // a^((p^d - 1)/2) = (a * a^p * ... * a^(p^(d-1)))^((p-1)/2)
            let mut frob = a.rem(f)?;
            let mut norm = frob.clone();
            for _ in 1..d {
                frob = frob.pow_mod(p as u128, f);
                norm = norm.mul(&frob).rem(f)?;
            }
            norm.pow_mod(((p - 1) / 2) as u128, f).sub(&Poly::one(field))
        };
        let t = b.gcd(f);
        let dt = t.degree().unwrap_or(0);
        if dt > 0 && dt < n {
            let u = f.exact_div(&t)?;
            equal_degree(&t, d, p, rng, out)?;
            equal_degree(&u, d, p, rng, out)?;
            return Ok(());
        }
    }
    Err(Error::Undecided(format!("equal-degree splitting of a degree-{n} polynomial over F{p} exhausted its retries")))
}

// ---------------------------------------------------------------- Q

type ZPoly = Vec<BigInt>;

fn z_trim(mut a: ZPoly) -> ZPoly {
    while a.last().is_some_and(Zero::is_zero) {
        a.pop();
    }
    a
}

fn z_mul(a: &[BigInt], b: &[BigInt]) -> ZPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    z_trim(out)
}

fn z_mod(a: &[BigInt], m: &BigInt) -> ZPoly {
    z_trim(a.iter().map(|c| c.mod_floor(m)).collect())
}

fn z_symmetric(a: &[BigInt], m: &BigInt) -> ZPoly {
    let half = m / 2;
    z_trim(
        a.iter()
            .map(|c| {
                let r = c.mod_floor(m);
                if r > half {
                    r - m
                } else {
                    r
                }
            })
            .collect(),
    )
}

fn z_content(a: &[BigInt]) -> BigInt {
    a.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
}

fn z_primitive(a: &[BigInt]) -> ZPoly {
    let c = z_content(a);
    if c.is_zero() {
        return Vec::new();
    }
    let sign = if a.last().is_some_and(|l| l.is_negative()) { -BigInt::one() } else { BigInt::one() };
    a.iter().map(|x| x / &c * &sign).collect()
}

/// Exact division in `Z[x]`, `None` when `b` does not divide `a`.
fn z_exact_div(a: &[BigInt], b: &[BigInt]) -> Option<ZPoly> {
    let db = b.len().checked_sub(1)?;
    if a.len() < b.len() {
        return if a.is_empty() { Some(Vec::new()) } else { None };
    }
    let lead = &b[db];
    let mut rem = a.to_vec();
    let mut quot = vec![BigInt::zero(); a.len() - db];
    for k in (0..quot.len()).rev() {
        let (q, r) = rem[k + db].div_rem(lead);
        if !r.is_zero() {
            return None;
        }
        if q.is_zero() {
            continue;
        }
        for (j, c) in b.iter().enumerate() {
            rem[k + j] -= &q * c;
        }
        quot[k] = q;
    }
    if rem.iter().all(Zero::is_zero) {
        Some(z_trim(quot))
    } else {
        None
    }
}

fn to_fp(a: &[BigInt], p: u64) -> Poly {
    Poly::from_bigints(Field::Prime(p), a)
}

fn from_fp(a: &Poly) -> ZPoly {
    a.coeffs().iter().map(|c| BigInt::from(c.as_residue().expect("prime field"))).collect()
}

/// Irreducible monic factors over `Q` of a squarefree monic rational polynomial.
fn factor_squarefree_q(f: &Poly) -> Result<Vec<Poly>> {
    if f.degree().unwrap_or(0) <= 1 {
        return Ok(vec![f.clone()]);
    }
    // clear denominators
    let mut lcm = BigInt::one();
    for c in f.coeffs() {
        lcm = lcm.lcm(c.as_rational().expect("rational").denom());
    }
    let ints: ZPoly = f
        .coeffs()
        .iter()
        .map(|c| {
            let r = c.as_rational().expect("rational");
            r.numer() * (&lcm / r.denom())
        })
        .collect();
    let prim = z_primitive(&ints);
    let mut out = Vec::new();
    for g in zassenhaus(&prim)? {
        let lead = g.last().expect("nonzero").clone();
        let coeffs = g
            .iter()
            .map(|c| Field::Rationals.from_ratio(c, &lead))
            .collect::<Result<Vec<_>>>()?;
        out.push(Poly::new(Field::Rationals, coeffs));
    }
    Ok(out)
}

fn choose_prime(f: &[BigInt]) -> Result<(u64, Vec<Poly>)> {
    let lead = f.last().expect("nonzero");
    let mut best: Option<(u64, Vec<Poly>)> = None;
    let mut good = 0;
    let mut p = 2u64;
    while good < 3 && p < 10_000 {
        p += 1;
        if !is_prime(p) || (lead % BigInt::from(p)).is_zero() {
            continue;
        }
        let fp = to_fp(f, p).monic();
        if fp.gcd(&fp.derivative()).degree() != Some(0) {
            continue;
        }
        good += 1;
        let factors = factor_squarefree_fp(&fp, p, p)?;
        if best.as_ref().is_none_or(|(_, b)| factors.len() < b.len()) {
            best = Some((p, factors));
        }
    }
    best.ok_or_else(|| Error::Undecided("no prime keeps the polynomial squarefree".into()))
}

fn isqrt_ceil(n: &BigInt) -> BigInt {
    let r = n.sqrt();
    if &(&r * &r) == n {
        r
    } else {
        r + 1
    }
}

/// Factors a primitive squarefree integer polynomial of degree ≥ 2.
fn zassenhaus(f: &[BigInt]) -> Result<Vec<ZPoly>> {
    let n = f.len() - 1;
    let (p, modular) = choose_prime(f)?;
    if modular.len() == 1 {
        return Ok(vec![f.to_vec()]);
    }
    let lead = f[n].abs();
    let norm2: BigInt = f.iter().map(|c| c * c).sum();
    let bound = isqrt_ceil(&norm2) * (BigInt::one() << n) * &lead * 2;
    let pb = BigInt::from(p);
    let mut k = 1u32;
    let mut pk = pb.clone();
    while pk <= bound {
        pk *= &pb;
        k += 1;
    }
    let lifted = hensel_lift_all(f, &modular, p, k);

    let mut remaining: Vec<ZPoly> = lifted;
    let mut current = f.to_vec();
    let mut found = Vec::new();
    let mut s = 1;
    while 2 * s <= remaining.len() {
        let mut hit = None;
        for subset in combinations(remaining.len(), s) {
            let lc = current.last().expect("nonzero").clone();
            let mut cand: ZPoly = vec![lc];
            for &i in &subset {
                cand = z_mod(&z_mul(&cand, &remaining[i]), &pk);
            }
            let cand = z_primitive(&z_symmetric(&cand, &pk));
            if cand.len() < 2 {
                continue;
            }
            if let Some(q) = z_exact_div(&current, &cand) {
                hit = Some((subset, cand, q));
                break;
            }
        }
        match hit {
            Some((subset, cand, q)) => {
                found.push(cand);
                current = z_primitive(&q);
                remaining = remaining
                    .into_iter()
                    .enumerate()
                    .filter(|(i, _)| !subset.contains(i))
                    .map(|(_, u)| u)
                    .collect();
            }
            None => s += 1,
        }
    }
    if current.len() > 1 {
        found.push(current);
    }
    Ok(found)
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut idx: Vec<usize> = (0..k).collect();
    if k > n {
        return out;
    }
    loop {
        out.push(idx.clone());
        let mut i = k;
        while i > 0 && idx[i - 1] == n - k + i - 1 {
            i -= 1;
        }
        if i == 0 {
            return out;
        }
        idx[i - 1] += 1;
        for j in i..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Lifts `f ≡ lc(f) * prod(u_i) (mod p)` to monic factors modulo `p^k`.
fn hensel_lift_all(f: &[BigInt], factors: &[Poly], p: u64, k: u32) -> Vec<ZPoly> {
    let pk = BigInt::from(p).pow(k);
    let lead = f.last().expect("nonzero").clone();
    if factors.len() == 1 {
        let inv = lead.modinv(&pk).expect("p does not divide the leading coefficient");
        return vec![z_mod(&f.iter().map(|c| c * &inv).collect::<Vec<_>>(), &pk)];
    }
    let field = Field::Prime(p);
    let g = factors[0].clone();
    let h = factors[1..]
        .iter()
        .fold(Poly::constant(field.from_bigint(&lead)), |acc, u| acc.mul(u));
    let (gh_gcd, s, t) = g.ext_gcd(&h);
    debug_assert_eq!(gh_gcd, Poly::one(field));
    let (big_g, big_h) = hensel_lift_pair(f, &g, &h, &s, &t, p, k);
    let mut out = vec![big_g];
    out.extend(hensel_lift_all(&big_h, &factors[1..], p, k));
    out
}

/// Linear Hensel lifting of `f ≡ g*h (mod p)` with `s*g + t*h = 1`, `g` monic.
fn hensel_lift_pair(f: &[BigInt], g: &Poly, h: &Poly, s: &Poly, t: &Poly, p: u64, k: u32) -> (ZPoly, ZPoly) {
    let pb = BigInt::from(p);
    let lead = f.last().expect("nonzero").clone();
    let mut big_g = from_fp(g);
    let mut big_h = from_fp(h);
    *big_h.last_mut().expect("nonzero") = lead;
    let mut pj = pb.clone();
    for _ in 1..k {
        let next = &pj * &pb;
        let prod = z_mul(&big_g, &big_h);
        let n = f.len().max(prod.len());
        let diff: ZPoly = (0..n)
            .map(|i| {
                let a = f.get(i).cloned().unwrap_or_default();
                let b = prod.get(i).cloned().unwrap_or_default();
                (a - b).mod_floor(&next) / &pj
            })
            .collect();
        let e = to_fp(&diff, p);
        let (q, r) = e.mul(s).div_rem(h).expect("nonzero");
        let delta_h = r;
        let delta_g = e.mul(t).add(&q.mul(g));
        big_g = add_scaled(&big_g, &from_fp(&delta_g), &pj, &next);
        big_h = add_scaled(&big_h, &from_fp(&delta_h), &pj, &next);
        pj = next;
    }
    (big_g, big_h)
}

fn add_scaled(a: &[BigInt], b: &[BigInt], scale: &BigInt, m: &BigInt) -> ZPoly {
    let n = a.len().max(b.len());
    let sum: ZPoly = (0..n)
        .map(|i| a.get(i).cloned().unwrap_or_default() + b.get(i).cloned().unwrap_or_default() * scale)
        .collect();
    z_mod(&sum, m)
}

/// Rational roots of an integer polynomial by the rational-root test (used in tests).
pub fn has_rational_root(f: &Poly) -> bool {
    let Field::Rationals = f.field() else { return false };
    let Some(d) = f.degree() else { return true };
    if d == 0 {
        return false;
    }
    let mut lcm = BigInt::one();
    for c in f.coeffs() {
        lcm = lcm.lcm(c.as_rational().expect("rational").denom());
    }
    let ints: Vec<BigInt> = f
        .coeffs()
        .iter()
        .map(|c| {
            let r = c.as_rational().expect("rational");
            r.numer() * (&lcm / r.denom())
        })
        .collect();
    if ints[0].is_zero() {
        return true;
    }
    let divisors = |n: &BigInt| -> Vec<BigInt> {
        let n = n.abs().to_u64().expect("small constant for root test");
        (1..=n).filter(|d| n.is_multiple_of(*d)).map(BigInt::from).collect()
    };
    for num in divisors(&ints[0]) {
        for den in divisors(&ints[d]) {
            for sign in [1, -1] {
                let x = Field::Rationals.from_ratio(&(&num * sign), &den).expect("nonzero");
                if f.eval(&x).is_zero() {
                    return true;
                }
            }
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(c: &[i64]) -> Poly {
        Poly::from_i64s(Field::Rationals, c)
    }

    #[test]
    fn difference_of_squares_over_q() {
        let f = q(&[-1, 0, 1]).factor().unwrap();
        assert_eq!(f.factors, vec![(q(&[-1, 1]), 1), (q(&[1, 1]), 1)]);
    }

    #[test]
    fn x2_plus_1_splits_mod_5() {
        let f5 = Field::Prime(5);
        let f = Poly::from_i64s(f5, &[1, 0, 1]).factor().unwrap();
        let mut got: Vec<Poly> = f.distinct().cloned().collect();
        got.sort_by_key(|p| p.coeff(0).as_residue());
        assert_eq!(got, vec![Poly::from_i64s(f5, &[-3, 1]), Poly::from_i64s(f5, &[-2, 1])]);
    }

    #[test]
    fn cyclotomic_is_irreducible_over_q() {
        let f = q(&[1, 1, 1]);
        assert!(!has_rational_root(&f));
        assert!(f.is_irreducible().unwrap());
        let f = q(&[-1, 0, 0, 1]).factor().unwrap();
        assert_eq!(f.factors, vec![(q(&[-1, 1]), 1), (q(&[1, 1, 1]), 1)]);
    }

    #[test]
    fn x3_minus_1_splits_mod_7() {
        let f = Poly::from_i64s(Field::Prime(7), &[-1, 0, 0, 1]).factor().unwrap();
        assert_eq!(f.factors.len(), 3);
        assert!(f.factors.iter().all(|(g, e)| g.degree() == Some(1) && *e == 1));
    }

    #[test]
    fn swinnerton_dyer_needs_recombination() {
        // x^4 - 10x^2 + 1 is irreducible over Q but splits modulo every prime
        let f = q(&[1, 0, -10, 0, 1]);
        assert!(f.is_irreducible().unwrap());
        let g = q(&[1, 0, -10, 0, 1]).mul(&q(&[-2, 0, 1])).mul(&q(&[3, 1]).pow(2));
        let fac = g.factor().unwrap();
        assert_eq!(fac.expand(), g);
        assert_eq!(fac.factors.len(), 3);
    }

    #[test]
    fn repeated_factors_and_leading_coefficient() {
        let g = q(&[1, 2]).pow(3).mul(&q(&[5, 0, 3]));
        let fac = g.factor().unwrap();
        assert_eq!(fac.expand(), g);
        assert_eq!(fac.factors.iter().map(|(_, e)| *e).collect::<Vec<_>>(), vec![3, 1]);
    }

    #[test]
    fn characteristic_p_powers() {
        let f3 = Field::Prime(3);
        // (x^3 + 2)^2 * (x + 1)  with x^3 + 2 = (x + 2)^3 over F_3
        let g = Poly::from_i64s(f3, &[2, 0, 0, 1]).pow(2).mul(&Poly::from_i64s(f3, &[1, 1]));
        let fac = g.factor().unwrap();
        assert_eq!(fac.expand(), g);
        assert!(fac.factors.contains(&(Poly::from_i64s(f3, &[2, 1]), 6)));
    }

    #[test]
    fn degree_ceiling_is_enforced() {
        let f = q(&[1, 0, 0, 0, 1]);
        let opts = FactorOptions { seed: 0, degree_ceiling: 3 };
        assert_eq!(f.factor_with(&opts), Err(Error::DegreeCeiling { degree: 4, ceiling: 3 }));
    }

    #[test]
    fn combinations_enumerate() {
        assert_eq!(combinations(4, 2).len(), 6);
        assert_eq!(combinations(3, 3), vec![vec![0, 1, 2]]);
    }
}
