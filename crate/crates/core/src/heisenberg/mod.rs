//! The Heisenberg group `H(F_q)` of upper unitriangular `3 x 3` matrices and
//! its quotients by subgroups `N` of `H'` with `|H' : N| = p^2`.
//!
//! Field elements are identified with coordinate vectors on `1, w, ..., w^{e-1}`,
//! so `H(F_q)` is the Brahana group of the multiplication structure matrices.

mod aut;

pub use aut::{descend, gamma_group, hyperplane_orbit, sl2_lifts, AutElem, GammaElem};

use serde::{Deserialize, Serialize};

use crate::brahana::{combine, GroupElem, GroupHom, Pencil};
use crate::ff::{FqElem, FqField, Poly};
use crate::linal::{MatFp, Subspace};
use crate::tensoradj::{is_heisenberg_quotient, QuotientVerdict};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HeisenbergCtx {
    pub field: FqField,
    pub pencil: Pencil,
}

impl HeisenbergCtx {
    pub fn build(field: FqField) -> Self {
        let pencil = Pencil::from_mats(field.zp(), field.structure_matrices().to_vec()).expect("square structure matrices");
        HeisenbergCtx { field, pencil }
    }

    pub fn p(&self) -> u32 {
        self.field.p()
    }

    pub fn e(&self) -> usize {
        self.field.degree()
    }

    /// The matrix `[[1, α, γ], [0, 1, β], [0, 0, 1]]`.
    pub fn elem(&self, alpha: &FqElem, beta: &FqElem, gamma: &FqElem) -> GroupElem {
        GroupElem {
            a: alpha.coords().to_vec(),
            b: beta.coords().to_vec(),
            c: gamma.coords().to_vec(),
        }
    }

    pub fn to_field(&self, x: &GroupElem) -> (FqElem, FqElem, FqElem) {
        let f = &self.field;
        (
            f.elem(x.a.clone()).unwrap(),
            f.elem(x.b.clone()).unwrap(),
            f.elem(x.c.clone()).unwrap(),
        )
    }

    /// Multiply as literal `3 x 3` matrices over `F_q`.
    pub fn multiply_literal(&self, x: &GroupElem, y: &GroupElem) -> GroupElem {
        let f = &self.field;
        let (a1, b1, c1) = self.to_field(x);
        let (a2, b2, c2) = self.to_field(y);
        let c = f.add(&f.add(&c1, &c2), &f.mul(&a1, &b2));
        self.elem(&f.add(&a1, &a2), &f.add(&b1, &b2), &c)
    }
}

/// All subgroups `N` of `H' = Z_p^e` of index `p^2`, in canonical order.
pub fn enum_codim2(field: &FqField) -> Result<Vec<Subspace>> {
    let e = field.degree();
    if e < 2 {
        return Err(Error::InvalidDegree(format!(
            "codimension-two subspaces need e >= 2, got {e}"
        )));
    }
    Ok(Subspace::enumerate(field.p(), e, e - 2))
}

/// Number of codimension-two subspaces of `Z_p^e`.
pub fn codim2_count(p: u32, e: usize) -> u128 {
    let q = (p as u128).pow(e as u32);
    let p = p as u128;
    (q - 1) * (q - p) / ((p * p - 1) * (p * p - p))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyMember {
    pub n: Subspace,
    /// Coordinates `(i, j)` whose basis vectors complete `N`.
    pub complement: (usize, usize),
    /// `2 x e` matrix of the projection `H' -> H'/N = Z_p^2`.
    pub projection: MatFp,
    /// `2 x e` lift with rows `e_i`, `e_j`; `lift * projection^t = I`.
    pub lift: MatFp,
    /// Commutation of `H/N` before normalization.
    pub raw: Pencil,
    /// `(I_e, C(a))`.
    pub pencil: Pencil,
    pub min_poly: Poly,
    /// Surjection `H -> B(I_e, C(a))` with kernel `N`.
    pub quotient_map: GroupHom,
    /// Isomorphism from the raw presentation to the normalized one.
    pub normalize: GroupHom,
}

/// Least coordinate pair `(i, j)` with `N + <e_i, e_j>` everything.
pub fn complement_pair(n: &Subspace) -> Option<(usize, usize)> {
    let e = n.ambient_dim();
    let p = n.p();
    let unit = |i: usize| {
        let mut v = vec![0; e];
        v[i] = 1;
        v
    };
    for i in 0..e {
        for j in i + 1..e {
            let s = n.sum(&Subspace::from_rows(p, e, vec![unit(i), unit(j)]));
            if s.dim() == e {
                return Some((i, j));
            }
        }
    }
    None
}

/// Projection `Z_p^e -> Z_p^2` with kernel `N`, as a `2 x e` matrix `A` so that
/// `π(γ) = γ A^t`, together with the lift `S` (`2 x e`, rows `e_i`, `e_j`) satisfying `S A^t = I`.
pub fn projection(n: &Subspace) -> Result<((usize, usize), MatFp, MatFp)> {
    let e = n.ambient_dim();
    if n.dim() + 2 != e {
        return Err(Error::DimensionMismatch(format!(
            "N must have dimension {} in Z_p^{e}, got {}",
            e.saturating_sub(2),
            n.dim()
        )));
    }
    let p = n.p();
    let (i, j) = complement_pair(n).ok_or_else(|| Error::Internal("no coordinate complement".into()))?;
    let lift = MatFp::from_fn(p, 2, e, |k, m| (m == if k == 0 { i } else { j }) as u32);
    let b = n.basis().vstack(&lift);
    let binv = b
        .inverse()
        .ok_or_else(|| Error::Internal("completed basis is singular".into()))?;
    let a = MatFp::from_fn(p, 2, e, |k, m| binv[(m, e - 2 + k)]);
    Ok(((i, j), a, lift))
}

pub fn quotient_pencil(ctx: &HeisenbergCtx, n: &Subspace) -> Result<FamilyMember> {
    let e = ctx.e();
    if n.ambient_dim() != e {
        return Err(Error::DimensionMismatch(format!(
            "N lives in Z_p^{}, expected Z_p^{e}",
            n.ambient_dim()
        )));
    }
    let (complement, a, lift) = projection(n)?;
    let (raw, onto) = combine(&ctx.pencil, &a)?;
    match is_heisenberg_quotient(&raw, e)? {
        QuotientVerdict::Member {
            normalized,
            min_poly,
            iso,
        } => {
            let quotient_map = onto.then(&iso)?;
            Ok(FamilyMember {
                n: n.clone(),
                complement,
                projection: a,
                lift,
                raw,
                pencil: normalized,
                min_poly,
                quotient_map,
                normalize: iso,
            })
        }
        QuotientVerdict::NotMember { reason } => Err(Error::Internal(format!(
            "quotient by {:?} fails the genus-two test: {reason}",
            n
        ))),
    }
}
