use crate::error::{Error, Result};
use crate::linalg::{Matrix, Subspace};
use crate::par;
use crate::scalars::Scalar;

use super::hom::hom_space;
use super::module::ModuleRep;

/// `Ext¹(M, N)` over a path algebra, as the cokernel of
/// `⊕_v Hom(M e_v, N e_v) → ⊕_α Hom(M e_{s(α)}, N e_{t(α)})`, `φ ↦ M_α φ_t − φ_s N_α`.
#[derive(Clone, Debug)]
pub struct HereditaryExt {
    pub dim: usize,
    /// `(source, target)` vertex of each arrow, in arrow order.
    pub arrows: Vec<(usize, usize)>,
    /// Cocycles spanning a complement of the coboundaries, one matrix per arrow.
    pub cocycles: Vec<Vec<Matrix>>,
}

struct VertexSpaces {
    basis: Vec<Matrix>,
    retraction: Vec<Matrix>,
}

fn vertex_spaces(m: &ModuleRep, idempotents: &[Vec<Scalar>]) -> VertexSpaces {
    let f = m.field();
    let mut basis = Vec::new();
    let mut retraction = Vec::new();
    for e in idempotents {
        let space = m.act_matrix(e).row_space();
        basis.push(space.basis_matrix());
        retraction.push(Matrix::identity(f, m.dim()).select_columns(space.pivots()));
    }
    VertexSpaces { basis, retraction }
}

pub fn ext1_hereditary(source: &ModuleRep, target: &ModuleRep) -> Result<HereditaryExt> {
    source.check_same_algebra(target)?;
    let a = source.algebra();
    let pb = a.path_basis().ok_or(Error::NotPathAlgebra)?;
    let f = a.field();
    let quiver = &pb.quiver;
    let n = quiver.vertex_count();
    let idem: Vec<Vec<Scalar>> = (0..n).map(|v| a.basis(pb.vertex(v))).collect();
    let (vm, vn) = (vertex_spaces(source, &idem), vertex_spaces(target, &idem));
    let dm: Vec<usize> = vm.basis.iter().map(Matrix::rows).collect();
    let dn: Vec<usize> = vn.basis.iter().map(Matrix::rows).collect();
    let arrows: Vec<(usize, usize)> = quiver.arrows().iter().map(|ar| (ar.source, ar.target)).collect();
    let restricted = |spaces: &VertexSpaces, module: &ModuleRep, k: usize, (s, t): (usize, usize)| {
        spaces.basis[s].mul(&module.action()[pb.arrow(k)]).mul(&spaces.retraction[t])
    };
    let m_arrows: Vec<Matrix> = arrows.iter().enumerate().map(|(k, &st)| restricted(&vm, source, k, st)).collect();
    let n_arrows: Vec<Matrix> = arrows.iter().enumerate().map(|(k, &st)| restricted(&vn, target, k, st)).collect();

    let offsets: Vec<usize> = arrows.iter().scan(0, |acc, &(s, t)| {
        let o = *acc;
        *acc += dm[s] * dn[t];
        Some(o)
    }).collect();
    let total: usize = arrows.iter().map(|&(s, t)| dm[s] * dn[t]).sum();
    let mut unknowns = Vec::new();
    for v in 0..n {
        for i in 0..dm[v] {
            unknowns.extend((0..dn[v]).map(|j| (v, i, j)));
        }
    }
    // image of each elementary φ (a single 1 at vertex v, position (i, j))
    let rows = par::map(&unknowns, |&(v, i, j)| {
        let mut row = vec![f.zero(); total];
        for (k, &(s, t)) in arrows.iter().enumerate() {
            let width = dn[t];
            if t == v {
                // M_α φ_t: column j of the result gets column i of M_α
                for r in 0..dm[s] {
                    let c = m_arrows[k].get(r, i);
                    if !c.is_zero() {
                        let idx = offsets[k] + r * width + j;
                        row[idx] = &row[idx] + c;
                    }
                }
            }
            if s == v {
                // − φ_s N_α: row i of the result gets −(row j of N_α)
                for c in 0..dn[t] {
                    let x = n_arrows[k].get(j, c);
                    if !x.is_zero() {
                        let idx = offsets[k] + i * width + c;
                        row[idx] = &row[idx] - x;
                    }
                }
            }
        }
        row
    });
    let image = Subspace::span(f, total, rows);
    let cocycles = image
        .complement_indices()
        .into_iter()
        .map(|idx| {
            arrows
                .iter()
                .enumerate()
                .map(|(k, &(s, t))| {
                    let mut m = Matrix::zeros(f, dm[s], dn[t]);
                    if idx >= offsets[k] && idx < offsets[k] + dm[s] * dn[t] {
                        let local = idx - offsets[k];
                        m.set(local / dn[t], local % dn[t], f.one());
                    }
                    m
                })
                .collect()
        })
        .collect::<Vec<_>>();
    Ok(HereditaryExt { dim: cocycles.len(), arrows, cocycles })
}

/// `Ext¹(M, N)` over any algebra from a free presentation `0 → K → A^m → M → 0`,
/// as the cokernel of restriction `Hom(A^m, N) → Hom(K, N)`.
#[derive(Clone, Debug)]
pub struct Ext1 {
    pub dim: usize,
    pub syzygy: ModuleRep,
    /// Homomorphisms `K → N` spanning a complement of the restricted ones.
    pub cocycles: Vec<Matrix>,
}

pub fn ext1(source: &ModuleRep, target: &ModuleRep) -> Result<Ext1> {
    source.check_same_algebra(target)?;
    let a = source.algebra();
    let f = a.field();
    let d = a.dim();
    let gens = source.generators();
    let m = gens.len();
    if m == 0 {
        return Ok(Ext1 { dim: 0, syzygy: ModuleRep::zero(a.clone()), cocycles: Vec::new() });
    }
    // cover A^m → M, row (k, b) ↦ g_k · b
    let cover_rows: Vec<Vec<Scalar>> =
        gens.iter().flat_map(|g| source.action().iter().map(move |mb| mb.vec_mul(g))).collect();
    let cover = Matrix::from_rows(f, source.dim(), cover_rows)?;
    let kernel = cover.left_kernel();
    let regular = ModuleRep::regular(a.clone());
    let free = ModuleRep::direct_sum(&vec![&regular; m])?;
    let (syzygy, inclusion, _) = free.submodule_with_maps(&kernel)?;
    let hom_k = hom_space(&syzygy, target)?;
    // Hom(A^m, N): the map determined by sending the k-th generator to a basis vector of N
    let nd = target.dim();
    let restricted: Vec<Vec<Scalar>> = (0..m)
        .flat_map(|k| (0..nd).map(move |l| (k, l)))
        .map(|(k, l)| {
            let mut x = Matrix::zeros(f, m * d, nd);
            for b in 0..d {
                for c in 0..nd {
                    x.set(k * d + b, c, target.action()[b].get(l, c).clone());
                }
            }
            let r = inclusion.mul(&x);
            hom_k.coordinates(&r).expect("restriction of a homomorphism")
        })
        .collect();
    let image = Subspace::span(f, hom_k.dim(), restricted);
    let cocycles: Vec<Matrix> = image
        .complement_indices()
        .into_iter()
        .map(|i| {
            let mut c = vec![f.zero(); hom_k.dim()];
            c[i] = f.one();
            hom_k.element(&c)
        })
        .collect();
    Ok(Ext1 { dim: cocycles.len(), syzygy, cocycles })
}
