use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::linalg::{axpy, is_zero_vec, Matrix, Solution, Subspace};
use crate::options::Options;
use crate::scalars::{Poly, Scalar};

use super::division::DivisionVerdict;
use super::structure::Algebra;

/// How firmly a decomposition into primitive pieces is established.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum Certainty {
    Certified,
    /// Some corner was only found to be a division algebra by exhausting a search budget.
    Probable { samples: usize },
}

impl Certainty {
    pub fn and(self, other: Certainty) -> Certainty {
        match (self, other) {
            (Certainty::Certified, c) | (c, Certainty::Certified) => c,
            (Certainty::Probable { samples: a }, Certainty::Probable { samples: b }) => {
                Certainty::Probable { samples: a.max(b) }
            }
        }
    }

    pub fn is_certified(self) -> bool {
        self == Certainty::Certified
    }
}

/// Complete set of orthogonal primitive idempotents.
#[derive(Clone, Debug)]
pub struct PrimitiveDecomposition {
    pub idempotents: Vec<Vec<Scalar>>,
    pub certainty: Certainty,
}

struct Component {
    e: Vec<Scalar>,
    dim: usize,
    done: bool,
}

/// Candidate elements for splitting searches: basis elements, pairwise sums,
/// then seeded random combinations.
pub(crate) struct Candidates<'a> {
    algebra: &'a Algebra,
    stage: usize,
    i: usize,
    j: usize,
    random_left: usize,
    rng: ChaCha8Rng,
}

impl<'a> Candidates<'a> {
    pub(crate) fn new(algebra: &'a Algebra, samples: usize, rng: ChaCha8Rng) -> Self {
        Candidates { algebra, stage: 0, i: 0, j: 1, random_left: samples, rng }
    }
}

impl Iterator for Candidates<'_> {
    type Item = Vec<Scalar>;
    fn next(&mut self) -> Option<Vec<Scalar>> {
        let d = self.algebra.dim();
        loop {
            match self.stage {
                0 => {
                    if self.i < d {
                        self.i += 1;
                        return Some(self.algebra.basis(self.i - 1));
                    }
                    self.stage = 1;
                    self.i = 0;
                    self.j = 1;
                }
                1 => {
                    if self.j >= d {
                        self.i += 1;
                        self.j = self.i + 1;
                    }
                    if self.i + 1 >= d {
                        self.stage = 2;
                        continue;
                    }
                    let mut v = self.algebra.basis(self.i);
                    v[self.j] = self.algebra.field().one();
                    self.j += 1;
                    return Some(v);
                }
                _ => {
                    if self.random_left == 0 {
                        return None;
                    }
                    self.random_left -= 1;
                    let f = self.algebra.field();
                    return Some((0..d).map(|_| f.random(&mut self.rng, 3)).collect());
                }
            }
        }
    }
}

impl Algebra {
    /// Splits a commutative semisimple algebra into primitive idempotents, each
    /// cutting out a component certified to be a field.
    pub fn split_commutative(&self, opts: &Options) -> Result<Vec<Vec<Scalar>>> {
        if !self.is_commutative() {
            return Err(Error::NotCommutative);
        }
        if !self.radical()?.is_zero() {
            return Err(Error::NotSemisimple);
        }
        self.split_commutative_unchecked(opts)
    }

    pub(crate) fn split_commutative_unchecked(&self, opts: &Options) -> Result<Vec<Vec<Scalar>>> {
        if self.dim() == 0 {
            return Ok(Vec::new());
        }
        let mut comps = vec![Component { e: self.unit().to_vec(), dim: self.dim(), done: self.dim() == 1 }];
        let candidates = Candidates::new(self, opts.max_samples, opts.rng(0x5b1));
        for x in candidates {
            if comps.iter().all(|c| c.done) {
                break;
            }
            let mut next = Vec::with_capacity(comps.len());
            for comp in comps {
                if comp.done {
                    next.push(comp);
                    continue;
                }
                let y = self.mul(&x, &comp.e);
                next.extend(self.split_component(comp, &y, opts)?);
            }
            comps = next;
        }
        if let Some(c) = comps.iter().find(|c| !c.done) {
            return Err(Error::Undecided(format!(
                "could not certify a {}-dimensional commutative component as a field within the sample budget",
                c.dim
            )));
        }
        Ok(comps.into_iter().map(|c| c.e).collect())
    }

    fn component_dim(&self, e: &[Scalar]) -> usize {
        self.sandwich(e, self.unit()).dim()
    }

    fn split_component(&self, comp: Component, y: &[Scalar], opts: &Options) -> Result<Vec<Component>> {
        let f = self.minimal_polynomial_in(y, &comp.e);
        let fac = f.factor_with(&opts.factor())?;
        if fac.factors.iter().any(|(_, m)| *m > 1) {
            return Err(Error::NotSemisimple);
        }
        if fac.factors.len() == 1 {
            let done = f.degree() == Some(comp.dim);
            return Ok(vec![Component { done, ..comp }]);
        }
        let mut out = Vec::new();
        for (fi, _) in &fac.factors {
            let g = f.exact_div(fi)?;
            let u = g.inv_mod(fi).ok_or_else(|| Error::Verification("factors are not coprime".into()))?;
            let h = u.mul(&g).rem(&f)?;
            let e = self.eval_poly_in(&h, y, &comp.e);
            let dim = self.component_dim(&e);
            let done = dim == 1 || fi.degree() == Some(dim);
            out.push(Component { e, dim, done });
        }
        debug_assert!({
            let mut s = self.zero();
            for c in &out {
                axpy(&mut s, &self.field().one(), &c.e);
            }
            s == comp.e
        });
        Ok(out)
    }

    /// Lifts an idempotent modulo the radical to a true idempotent.
    pub fn lift_idempotent(&self, e_bar: &[Scalar]) -> Result<Vec<Scalar>> {
        let limit = (usize::BITS - self.dim().leading_zeros()) as usize + 2;
        let f = self.field();
        let (three, two) = (f.from_i64(3), f.from_i64(-2));
        let mut e = e_bar.to_vec();
        for _ in 0..=limit {
            let e2 = self.mul(&e, &e);
            if e2 == e {
                return Ok(e);
            }
            let e3 = self.mul(&e2, &e);
            let mut next = self.zero();
            axpy(&mut next, &three, &e2);
            axpy(&mut next, &two, &e3);
            e = next;
        }
        Err(Error::LiftingDiverged)
    }

    /// Lifts idempotents that are orthogonal modulo the radical to orthogonal idempotents,
    /// each lifted inside the corner left over by the previous ones.
    pub fn lift_orthogonal(&self, reps: &[Vec<Scalar>]) -> Result<Vec<Vec<Scalar>>> {
        let f = self.field();
        let mut rest = self.unit().to_vec();
        let mut out = Vec::with_capacity(reps.len());
        for r in reps {
            let x = self.mul(&self.mul(&rest, r), &rest);
            let e = self.lift_idempotent(&x)?;
            axpy(&mut rest, &-f.one(), &e);
            out.push(e);
        }
        Ok(out)
    }

    /// A complete set of orthogonal primitive idempotents.
    pub fn primitive_idempotents(&self, opts: &Options) -> Result<PrimitiveDecomposition> {
        if self.dim() == 0 {
            return Ok(PrimitiveDecomposition { idempotents: Vec::new(), certainty: Certainty::Certified });
        }
        let rad = self.radical()?;
        let q = self.quotient(&rad)?;
        let s = &q.algebra;
        let center = s.center();
        let central = center.algebra.split_commutative_unchecked(opts)?;
        let mut certainty = Certainty::Certified;
        let mut reps = Vec::new();
        for c in central {
            let c = center.to_parent(&c);
            let block = s.corner(&c)?;
            let (prims, cert) = block.algebra.simple_primitives(opts)?;
            certainty = certainty.and(cert);
            reps.extend(prims.iter().map(|p| q.lift(&block.to_parent(p))));
        }
        let idempotents = self.lift_orthogonal(&reps)?;
        Ok(PrimitiveDecomposition { idempotents, certainty })
    }

    /// Primitive idempotents of a simple algebra, found by splitting off zero divisors.
    fn simple_primitives(&self, opts: &Options) -> Result<(Vec<Vec<Scalar>>, Certainty)> {
        match self.is_division_algebra(opts)? {
            DivisionVerdict::Certified => Ok((vec![self.unit().to_vec()], Certainty::Certified)),
            DivisionVerdict::ProbablyYes { samples } => Ok((vec![self.unit().to_vec()], Certainty::Probable { samples })),
            DivisionVerdict::No(w) => {
                let a = w.left().ok_or(Error::NotSemisimple)?;
                let e = self.idempotent_from_zero_divisor(a)?;
                let mut one_minus = self.unit().to_vec();
                axpy(&mut one_minus, &-self.field().one(), &e);
                let mut out = Vec::new();
                let mut certainty = Certainty::Certified;
                for part in [e, one_minus] {
                    let corner = self.corner(&part)?;
                    let (prims, cert) = corner.algebra.simple_primitives(opts)?;
                    certainty = certainty.and(cert);
                    out.extend(prims.iter().map(|p| corner.to_parent(p)));
                }
                Ok((out, certainty))
            }
        }
    }

    /// In a semisimple algebra, the idempotent generating the right ideal `aA`
    /// of a zero divisor `a` (the left identity of that ideal).
    pub fn idempotent_from_zero_divisor(&self, a: &[Scalar]) -> Result<Vec<Scalar>> {
        let d = self.dim();
        let ideal = Subspace::span(self.field(), d, (0..d).map(|i| self.mul(a, &self.basis(i))).collect());
        let r = ideal.basis().to_vec();
        let m = r.len();
        if m == 0 || m == d {
            return Err(Error::Verification("element is not a proper zero divisor".into()));
        }
        // unknowns t_k with (Σ t_k r_k) r_j = r_j for every j
        let rows = r.iter().map(|rk| r.iter().flat_map(|rj| self.mul(rk, rj)).collect()).collect();
        let system = Matrix::from_rows(self.field(), m * d, rows)?.transpose();
        let rhs = Matrix::from_rows(self.field(), 1, r.iter().flatten().map(|x| vec![x.clone()]).collect())?;
        let Solution::Solved { particular, .. } = system.solve_all(&rhs)? else {
            return Err(Error::NotSemisimple);
        };
        let t = particular.column(0);
        let e = ideal.vector(&t);
        if self.mul(&e, &e) != e || is_zero_vec(&e) || e == self.unit() {
            return Err(Error::Verification("zero divisor did not yield a proper idempotent".into()));
        }
        Ok(e)
    }
}

/// Monic `f` with `f(x) = 0` split as `g·h` with `g(x), h(x)` both nonzero, if reducible.
pub(crate) fn zero_divisor_from_minpoly(a: &Algebra, x: &[Scalar], opts: &Options) -> Result<Option<(Vec<Scalar>, Vec<Scalar>)>> {
    let f = a.minimal_polynomial(x);
    if f.degree().unwrap_or(0) <= 1 {
        return Ok(None);
    }
    let fac = f.factor_with(&opts.factor())?;
    let (g, m) = &fac.factors[0];
    let (left, right): (Poly, Poly) = if fac.factors.len() >= 2 {
        let gm = g.pow(*m);
        let rest = f.exact_div(&gm)?;
        (gm, rest)
    } else if *m >= 2 {
        (g.clone(), g.pow(m - 1))
    } else {
        return Ok(None);
    };
    Ok(Some((a.eval_poly(&left, x), a.eval_poly(&right, x))))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Quiver;
    use crate::scalars::Field;

    const Q: Field = Field::Rationals;

    fn diagonal(field: Field, n: usize) -> Algebra {
        let labels = (0..n).map(|i| format!("d{i}")).collect();
        Algebra::from_products(field, labels, vec![field.one(); n], |i, j| {
            let mut v = vec![field.zero(); n];
            if i == j {
                v[i] = field.one();
            }
            v
        })
        .unwrap()
    }

    fn cyclic(field: Field, n: usize) -> Algebra {
        let labels = (0..n).map(|i| format!("g{i}")).collect();
        let mut unit = vec![field.zero(); n];
        unit[0] = field.one();
        Algebra::from_products(field, labels, unit, |i, j| {
            let mut v = vec![field.zero(); n];
            v[(i + j) % n] = field.one();
            v
        })
        .unwrap()
    }

    #[test]
    fn split_examples() {
        let opts = Options::default();
        let kk = diagonal(Q, 2);
        let es = kk.split_commutative(&opts).unwrap();
        assert_eq!(es.len(), 2);
        assert!(es.contains(&kk.basis(0)) && es.contains(&kk.basis(1)));
        assert_eq!(cyclic(Q, 3).split_commutative(&opts).unwrap().len(), 2);
        assert_eq!(cyclic(Field::Prime(7), 3).split_commutative(&opts).unwrap().len(), 3);
        assert_eq!(cyclic(Field::Prime(5), 3).split_commutative(&opts).unwrap().len(), 2);
    }

    #[test]
    fn lifting() {
        let a = Algebra::path_algebra(&Quiver::from_edges(2, &[("a", 0, 1)]).unwrap(), Q);
        let e0 = a.basis(0);
        assert_eq!(a.lift_idempotent(&e0).unwrap(), e0);
        let mut ebar = a.basis(0);
        ebar[2] = Q.one();
        let e = a.lift_idempotent(&ebar).unwrap();
        assert_eq!(a.mul(&e, &e), e);
        assert_eq!(e[0], Q.one());
        assert_eq!(a.lift_idempotent(&a.zero()).unwrap(), a.zero());
    }

    #[test]
    fn primitive_idempotents_of_path_algebra() {
        let a = Algebra::path_algebra(&Quiver::from_edges(3, &[("a", 0, 1), ("b", 0, 2)]).unwrap(), Q);
        let p = a.primitive_idempotents(&Options::default()).unwrap();
        assert_eq!(p.idempotents.len(), 3);
        assert!(p.certainty.is_certified());
    }
}
