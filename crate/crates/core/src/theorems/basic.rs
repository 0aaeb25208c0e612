use std::sync::Arc;

use serde::Serialize;

use crate::algebra::{Algebra, Certainty, Quiver};
use crate::error::{Error, Result};
use crate::linalg::{Matrix, Subspace};
use crate::modules::{end_algebra, hom_space, krs_decompose, EndAlgebra, KrsDecomposition, ModuleRep};
use crate::options::Options;
use crate::par;
use crate::scalars::Scalar;

/// `A^b = End_A(P_1 ⊕ … ⊕ P_ℓ)` for one representative `P_c` per class of indecomposable projectives.
#[derive(Clone, Debug)]
pub struct BasicReduction {
    pub input_dim: usize,
    pub decomposition: KrsDecomposition,
    /// Copies of `P_c` in the regular module.
    pub multiplicities: Vec<usize>,
    /// `⊕ P_c` in class order.
    pub progenerator: ModuleRep,
    pub basic: EndAlgebra,
    /// Projection onto `P_c`, in coordinates of `basic`.
    pub vertex_idempotents: Vec<Vec<Scalar>>,
    /// `cartan[c][d] = dim Hom(P_c, P_d)`.
    pub cartan: Vec<Vec<usize>>,
    pub certainty: Certainty,
}

impl BasicReduction {
    pub fn algebra(&self) -> &Arc<Algebra> {
        &self.basic.algebra
    }

    pub fn projective_dims(&self) -> Vec<usize> {
        self.decomposition.classes.iter().map(|c| c.representative.dim()).collect()
    }
}

pub fn basic_reduction(a: Arc<Algebra>, opts: &Options) -> Result<BasicReduction> {
    let k = krs_decompose(&ModuleRep::regular(a.clone()), opts)?;
    basic_reduction_from(a.dim(), k)
}

/// Basic reduction from an already computed decomposition of the regular module.
pub fn basic_reduction_from(input_dim: usize, decomposition: KrsDecomposition) -> Result<BasicReduction> {
    let reps: Vec<&ModuleRep> = decomposition.representatives();
    let multiplicities = decomposition.classes.iter().map(|c| c.multiplicity).collect();
    let progenerator = ModuleRep::direct_sum(&reps)?;
    let basic = end_algebra(&progenerator)?;
    let f = progenerator.field();
    let dims: Vec<usize> = reps.iter().map(|r| r.dim()).collect();
    let mut offset = 0;
    let mut vertex_idempotents = Vec::new();
    for &d in &dims {
        let mut e = Matrix::zeros(f, progenerator.dim(), progenerator.dim());
        e.set_block(offset, offset, &Matrix::identity(f, d));
        offset += d;
        vertex_idempotents.push(basic.element(&e).ok_or_else(|| Error::Verification("block projection".into()))?);
    }
    let cartan = cartan_matrix(&reps)?;
    let certainty = decomposition.certainty;
    Ok(BasicReduction {
        input_dim,
        decomposition,
        multiplicities,
        progenerator,
        basic,
        vertex_idempotents,
        cartan,
        certainty,
    })
}

/// `dim Hom(M_a, M_b)` for all pairs.
pub fn cartan_matrix(modules: &[&ModuleRep]) -> Result<Vec<Vec<usize>>> {
    let n = modules.len();
    par::map_range(n, |a| (0..n).map(|b| Ok(hom_space(modules[a], modules[b])?.dim())).collect::<Result<Vec<_>>>())
        .into_iter()
        .collect()
}

/// Vertices, arrow counts and division data of a basic algebra.
#[derive(Clone, Debug, Serialize)]
pub struct BasicQuiver {
    pub vertices: usize,
    /// `arrows[u][v] = dim_k e_u (rad/rad²) e_v`.
    pub arrows: Vec<Vec<usize>>,
    /// `dim_k` of the division algebra `e_u (B/rad) e_u` at each vertex.
    pub division_dims: Vec<usize>,
}

impl BasicQuiver {
    pub fn arrow_total(&self) -> usize {
        self.arrows.iter().flatten().sum()
    }

    pub fn is_split(&self) -> bool {
        self.division_dims.iter().all(|&d| d == 1)
    }

    /// The quiver with `arrows[u][v]` arrows `u → v` (meaningful over split algebras).
    pub fn quiver(&self) -> Result<Quiver> {
        let mut edges = Vec::new();
        let names: Vec<String> = (0..self.vertices)
            .flat_map(|u| (0..self.vertices).map(move |v| (u, v)))
            .flat_map(|(u, v)| (0..self.arrows[u][v]).map(move |k| format!("a{u}_{v}_{k}")))
            .collect();
        let mut i = 0;
        for u in 0..self.vertices {
            for v in 0..self.vertices {
                for _ in 0..self.arrows[u][v] {
                    edges.push((names[i].as_str(), u, v));
                    i += 1;
                }
            }
        }
        Quiver::from_edges(self.vertices, &edges)
    }
}

fn sandwich_dim(b: &Algebra, e: &[Scalar], space: &Subspace, f: &[Scalar]) -> usize {
    let vs = space.basis().iter().map(|x| b.mul(&b.mul(e, x), f)).collect();
    Subspace::span(b.field(), b.dim(), vs).dim()
}

/// Quiver of a basic algebra given a complete set of primitive orthogonal idempotents.
pub fn quiver_with_idempotents(b: &Algebra, idempotents: &[Vec<Scalar>]) -> Result<BasicQuiver> {
    let rad = b.radical()?;
    let rad2 = b.product_space(&rad, &rad);
    let n = idempotents.len();
    let mut arrows = vec![vec![0; n]; n];
    for u in 0..n {
        for v in 0..n {
            let (eu, ev) = (&idempotents[u], &idempotents[v]);
            arrows[u][v] = sandwich_dim(b, eu, &rad, ev) - sandwich_dim(b, eu, &rad2, ev);
        }
    }
    let full = Subspace::full(b.field(), b.dim());
    let division_dims = idempotents.iter().map(|e| sandwich_dim(b, e, &full, e) - sandwich_dim(b, e, &rad, e)).collect();
    Ok(BasicQuiver { vertices: n, arrows, division_dims })
}

/// Quiver of a basic algebra; fails on algebras that are not basic.
pub fn quiver_of_basic(b: Arc<Algebra>, opts: &Options) -> Result<BasicQuiver> {
    let k = krs_decompose(&ModuleRep::regular(b.clone()), opts)?;
    if k.classes.iter().any(|c| c.multiplicity != 1) {
        return Err(Error::Verification(format!("algebra is not basic: projective multiplicities {:?}", k.signature())));
    }
    let prims = b.primitive_idempotents(opts)?;
    quiver_with_idempotents(&b, &prims.idempotents)
}

/// A permutation `π` with `left[i][j] = right[π i][π j]`, respecting the given fingerprints.
pub fn match_cartan<T: PartialEq>(left: &[Vec<usize>], right: &[Vec<usize>], lf: &[T], rf: &[T]) -> Option<Vec<usize>> {
    let n = left.len();
    if right.len() != n || lf.len() != n || rf.len() != n {
        return None;
    }
    fn extend<T: PartialEq>(
        i: usize,
        perm: &mut Vec<usize>,
        used: &mut [bool],
        l: &[Vec<usize>],
        r: &[Vec<usize>],
        lf: &[T],
        rf: &[T],
    ) -> bool {
        if i == l.len() {
            return true;
        }
        for c in 0..l.len() {
            if used[c] || lf[i] != rf[c] || l[i][i] != r[c][c] {
                continue;
            }
            if (0..i).any(|j| l[i][j] != r[c][perm[j]] || l[j][i] != r[perm[j]][c]) {
                continue;
            }
            used[c] = true;
            perm.push(c);
            if extend(i + 1, perm, used, l, r, lf, rf) {
                return true;
            }
            perm.pop();
            used[c] = false;
        }
        false
    }
    let mut perm = Vec::with_capacity(n);
    let mut used = vec![false; n];
    extend(0, &mut perm, &mut used, left, right, lf, rf).then_some(perm)
}
