use serde::{Deserialize, Serialize};

use super::AdjPair;
use crate::brahana::Pencil;
use crate::linal::{left_kernel, MatFp, Subspace};
use crate::{Error, Result};

/// `Z_p^r ⊗_A Z_p^s`, realized inside the `r x s` matrices (flattened row-major)
/// as the fixed space `{X : F^t X = X F* for all (F, F*) in A}`, complementary
/// to the relations `span{F^t X - X F*}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TensorSpace {
    pub r: usize,
    pub s: usize,
    pub relations: Subspace,
    pub fixed: Subspace,
    /// `rs x rs`; projection onto `fixed` along `relations`.
    pub projector: MatFp,
}

impl TensorSpace {
    pub fn project(&self, x: &[u32]) -> Vec<u32> {
        self.projector.vec_mul(x)
    }

    /// `u ⊗ v = π(u^t v)`.
    pub fn tensor(&self, u: &[u32], v: &[u32]) -> Vec<u32> {
        let zp = self.projector.zp();
        let mut outer = Vec::with_capacity(self.r * self.s);
        for a in u {
            outer.extend(v.iter().map(|b| zp.mul(*a, *b)));
        }
        self.project(&outer)
    }

    /// Coordinates of `u ⊗ v` in the echelon basis of the fixed space.
    pub fn tensor_coords(&self, u: &[u32], v: &[u32]) -> Vec<u32> {
        self.fixed
            .coords(&self.tensor(u, v))
            .expect("projection lands in the fixed space")
    }
}

fn relation_image(pair: &AdjPair, x: &MatFp) -> MatFp {
    pair.f.transpose().mul(x).sub(&x.mul(&pair.fstar))
}

pub fn tensor_space(pairs: &[AdjPair], r: usize, s: usize, p: u32) -> Result<TensorSpace> {
    for (i, pr) in pairs.iter().enumerate() {
        if pr.f.rows() != r || !pr.f.is_square() || pr.fstar.rows() != s || !pr.fstar.is_square() {
            return Err(Error::DimensionMismatch(format!("pair {i} does not act on {r}x{s} matrices")));
        }
    }
    let n = r * s;
    // Row e_ij of `images` lists F^t E_ij - E_ij F* for every pair.
    let mut rel_rows = Vec::new();
    let mut images: Vec<Vec<u32>> = Vec::with_capacity(n);
    for idx in 0..n {
        let e = MatFp::from_fn(p, r, s, |i, j| (i * s + j == idx) as u32);
        let mut row = Vec::with_capacity(n * pairs.len());
        for pr in pairs {
            let img = relation_image(pr, &e);
            row.extend_from_slice(img.as_slice());
            rel_rows.push(img.as_slice().to_vec());
        }
        images.push(row);
    }
    let relations = Subspace::from_rows(p, n, rel_rows);
    let fixed = if pairs.is_empty() {
        Subspace::full(p, n)
    } else {
        left_kernel(&MatFp::from_rows(p, n * pairs.len(), &images))
    };
    let intersection = relations.intersection(&fixed).dim();
    let sum = relations.sum(&fixed).dim();
    if intersection > 0 || sum < n {
        return Err(Error::NotDirectSum {
            intersection,
            missing: n - sum,
        });
    }
    let stacked = relations.basis().vstack(fixed.basis());
    let inv = stacked
        .inverse()
        .ok_or_else(|| Error::Internal("stacked basis not invertible".into()))?;
    let target = MatFp::zeros(p, relations.dim(), n).vstack(fixed.basis());
    let projector = inv.mul(&target);
    Ok(TensorSpace {
        r,
        s,
        relations,
        fixed,
        projector,
    })
}

/// Linear map `ĉ` on the fixed space with `u ∘ v = ĉ(u ⊗ v)`, stored as a
/// `dim(fixed) x g` matrix acting on fixed-space coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorMap {
    pub space: TensorSpace,
    pub matrix: MatFp,
}

impl FactorMap {
    pub fn apply(&self, u: &[u32], v: &[u32]) -> Vec<u32> {
        self.matrix.vec_mul(&self.space.tensor_coords(u, v))
    }

    pub fn is_bijective(&self) -> bool {
        self.matrix.is_invertible()
    }
}

/// The bimap `u ∘ v = (u L_k v^t)_k` factors through `⊗_A` iff each functional
/// `X -> <X, L_k>` kills the relations. Returns `None` when it does not.
pub fn factors_through(bimap: &Pencil, pairs: &[AdjPair]) -> Result<Option<FactorMap>> {
    let space = tensor_space(pairs, bimap.r(), bimap.s(), bimap.p())?;
    let zp = bimap.zp();
    let flat: Vec<&[u32]> = bimap.mats().iter().map(|l| l.as_slice()).collect();
    for rel in space.relations.basis_vectors() {
        if flat.iter().any(|l| zp.dot(&rel, l) != 0) {
            return Ok(None);
        }
    }
    let rows: Vec<Vec<u32>> = space
        .fixed
        .basis_vectors()
        .iter()
        .map(|y| flat.iter().map(|l| zp.dot(y, l)).collect())
        .collect();
    let matrix = MatFp::from_rows(bimap.p(), bimap.g(), &rows);
    Ok(Some(FactorMap { space, matrix }))
}
