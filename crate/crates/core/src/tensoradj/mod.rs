//! Adjoint algebras of bimaps, tensor products over them, and the genus-two
//! membership test for Heisenberg quotients.
//!
//! A pencil `(L_1, ..., L_g)` of `r x s` matrices is read as the bimap
//! `u ∘ v = (u L_k v^t)_k`. Its adjoints are the pairs `(F, F*)` with
//! `(u F) ∘ v = u ∘ (v F*)`, that is `F L_k = L_k F*^t`.
//!
//! The group-theoretic object is the commutation bimap of `B(L)`, which is the
//! pencil of alternating matrices `Ω_k` on `Z_p^{r+s}`; see [`commutation_pencil`].

mod genus2;
mod tensor;

pub use genus2::{is_heisenberg_quotient, QuotientVerdict};
pub use tensor::{factors_through, tensor_space, FactorMap, TensorSpace};

use serde::{Deserialize, Serialize};

use crate::brahana::Pencil;
use crate::ff::{FqElem, FqField};
use crate::linal::{kernel, MatFp};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AdjPair {
    pub f: MatFp,
    pub fstar: MatFp,
}

impl AdjPair {
    pub fn identity(p: u32, r: usize, s: usize) -> Self {
        AdjPair {
            f: MatFp::identity(p, r),
            fstar: MatFp::identity(p, s),
        }
    }

    /// `(F, F*)(G, G*) = (F G, G* F*)`.
    pub fn compose(&self, other: &AdjPair) -> AdjPair {
        AdjPair {
            f: self.f.mul(&other.f),
            fstar: other.fstar.mul(&self.fstar),
        }
    }

    pub fn add(&self, other: &AdjPair) -> AdjPair {
        AdjPair {
            f: self.f.add(&other.f),
            fstar: self.fstar.add(&other.fstar),
        }
    }

    pub fn scale(&self, c: u32) -> AdjPair {
        AdjPair {
            f: self.f.scale(c),
            fstar: self.fstar.scale(c),
        }
    }

    /// Conjugate by a change of basis `t` on both sides: `(t^{-1} F t, t^{-1} F* t)`.
    pub fn conjugate(&self, t: &MatFp, t_inv: &MatFp) -> AdjPair {
        AdjPair {
            f: t_inv.mul(&self.f).mul(t),
            fstar: t_inv.mul(&self.fstar).mul(t),
        }
    }

    /// Whether `F L_k = L_k F*^t` for every matrix of the bimap.
    pub fn is_adjoint_of(&self, bimap: &Pencil) -> bool {
        let fst = self.fstar.transpose();
        bimap.mats().iter().all(|l| self.f.mul(l) == l.mul(&fst))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AdjAlgebra {
    pub r: usize,
    pub s: usize,
    pub basis: Vec<AdjPair>,
}

impl AdjAlgebra {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    fn flatten(pair: &AdjPair) -> Vec<u32> {
        let mut v = pair.f.as_slice().to_vec();
        v.extend_from_slice(pair.fstar.as_slice());
        v
    }

    fn unflatten(&self, p: u32, v: &[u32]) -> AdjPair {
        let (r, s) = (self.r, self.s);
        AdjPair {
            f: MatFp::from_fn(p, r, r, |i, j| v[i * r + j]),
            fstar: MatFp::from_fn(p, s, s, |i, j| v[r * r + i * s + j]),
        }
    }

    /// Membership in the span of the basis.
    pub fn contains(&self, pair: &AdjPair) -> bool {
        let Some(first) = self.basis.first() else {
            return false;
        };
        let p = first.f.p();
        let rows: Vec<Vec<u32>> = self.basis.iter().map(AdjAlgebra::flatten).collect();
        let n = rows[0].len();
        crate::linal::Subspace::from_rows(p, n, rows).contains(&AdjAlgebra::flatten(pair))
    }

    /// Elements of the algebra commuting with every basis element.
    pub fn center(&self) -> Vec<AdjPair> {
        let Some(first) = self.basis.first() else {
            return Vec::new();
        };
        let p = first.f.p();
        let zp = first.f.zp();
        let d = self.dim();
        // Column i holds the flattened commutators of basis[i] with every basis[j].
        let mut eqs: Vec<Vec<u32>> = Vec::new();
        for bj in &self.basis {
            let cols: Vec<Vec<u32>> = self
                .basis
                .iter()
                .map(|bi| {
                    let c1 = bi.compose(bj);
                    let c2 = bj.compose(bi);
                    zp.sub_vec(&AdjAlgebra::flatten(&c1), &AdjAlgebra::flatten(&c2))
                })
                .collect();
            for row in 0..cols[0].len() {
                eqs.push(cols.iter().map(|c| c[row]).collect());
            }
        }
        let k = kernel(&MatFp::from_rows(p, d, &eqs));
        let rows: Vec<Vec<u32>> = self.basis.iter().map(AdjAlgebra::flatten).collect();
        let basis_mat = MatFp::from_rows(p, rows[0].len(), &rows);
        k.basis_vectors()
            .iter()
            .map(|x| self.unflatten(p, &basis_mat.vec_mul(x)))
            .collect()
    }
}

/// Solve `F L_k = L_k F*^t` for all `k` with `F` of size `r x r` and `F*` of size `s x s`.
pub fn pencil_adjoints(bimap: &Pencil) -> AdjAlgebra {
    let (r, s) = (bimap.r(), bimap.s());
    let p = bimap.p();
    let zp = bimap.zp();
    let unknowns = r * r + s * s;
    let mut eqs: Vec<Vec<u32>> = Vec::new();
    for l in bimap.mats() {
        for i in 0..r {
            for j in 0..s {
                let mut row = vec![0u32; unknowns];
                for m in 0..r {
                    row[i * r + m] = l[(m, j)];
                }
                for m in 0..s {
                    let idx = r * r + j * s + m;
                    row[idx] = zp.sub(row[idx], l[(i, m)]);
                }
                eqs.push(row);
            }
        }
    }
    let k = kernel(&MatFp::from_rows(p, unknowns, &eqs));
    let alg = AdjAlgebra { r, s, basis: Vec::new() };
    let basis = k.basis_vectors().iter().map(|v| alg.unflatten(p, v)).collect();
    AdjAlgebra { r, s, basis }
}

/// Pencil `(Ω_1, ..., Ω_g)` of the commutation bimap of `B(L)`.
pub fn commutation_pencil(pen: &Pencil) -> Pencil {
    let n = pen.r() + pen.s();
    Pencil::new(pen.zp(), n, n, pen.omegas()).expect("square alternating matrices")
}

/// Adjoint algebra of the commutation bimap `[ , ] : G/G' x G/G' -> G'` of `B(L)`.
pub fn adjoint_algebra(pen: &Pencil) -> AdjAlgebra {
    pencil_adjoints(&commutation_pencil(pen))
}

/// Commutant `{F : F L = L F}`.
pub fn centralizer(l: &MatFp) -> Vec<MatFp> {
    assert!(l.is_square());
    let n = l.rows();
    let p = l.p();
    let zp = l.zp();
    let mut eqs: Vec<Vec<u32>> = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let mut row = vec![0u32; n * n];
            for m in 0..n {
                row[i * n + m] = zp.add(row[i * n + m], l[(m, j)]);
                row[m * n + j] = zp.sub(row[m * n + j], l[(i, m)]);
            }
            eqs.push(row);
        }
    }
    kernel(&MatFp::from_rows(p, n * n, &eqs))
        .basis_vectors()
        .iter()
        .map(|v| MatFp::from_fn(p, n, n, |i, j| v[i * n + j]))
        .collect()
}

/// The pair `([[α, β], [γ, δ]], [[δ, -β], [-γ, α]])` over `F_q`, written in
/// `Z_p`-coordinates on `F_q^2 = Z_p^{2e}`.
pub fn m2_pair(field: &FqField, alpha: &FqElem, beta: &FqElem, gamma: &FqElem, delta: &FqElem) -> AdjPair {
    let m = |x: &FqElem| field.right_mul_matrix(x);
    let f = MatFp::block2(&m(alpha), &m(beta), &m(gamma), &m(delta));
    let fstar = MatFp::block2(&m(delta), &m(&field.neg(beta)), &m(&field.neg(gamma)), &m(alpha));
    AdjPair { f, fstar }
}

/// `4e` pairs spanning the image of `M_2(F_q)`.
pub fn m2_pairs(field: &FqField) -> Vec<AdjPair> {
    let z = field.zero();
    let mut out = Vec::new();
    for slot in 0..4 {
        for k in 0..field.degree() {
            let w = field.basis(k);
            let mut v = [z.clone(), z.clone(), z.clone(), z.clone()];
            v[slot] = w;
            out.push(m2_pair(field, &v[0], &v[1], &v[2], &v[3]));
        }
    }
    out
}

/// Closure spot-check: products of basis pairs solve the adjoint equations.
pub fn closed_under_products(alg: &AdjAlgebra, bimap: &Pencil) -> bool {
    alg.basis
        .iter()
        .all(|x| alg.basis.iter().all(|y| x.compose(y).is_adjoint_of(bimap)))
}
