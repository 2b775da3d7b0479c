use std::collections::{BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

use super::{FamilyMember, HeisenbergCtx};
use crate::brahana::{GroupElem, GroupHom};
use crate::ff::{FqElem, FqField};
use crate::linal::{MatFp, Subspace};
use crate::{Error, Result};

/// Automorphism of `H(F_q)` built from an additive `τ : F_q^2 -> F_q`, an
/// invertible `[[α, β], [γ, δ]]` over `F_q`, and the field automorphism `σ = Frob^k`:
///
/// ```text
/// (α', β', z) -> (σ(α'α + β'γ), σ(α'β + β'δ), σ((αδ - βγ) z + τ(α', β')))
/// ```
///
/// where `z = γ' - α'β'/2` is the symmetric central coordinate. For diagonal
/// matrices and `τ = 0` this agrees with the same formula on `γ'` itself.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AutElem {
    /// `2e x e` over `Z_p`.
    pub tau: MatFp,
    /// `[α, β, γ, δ]`.
    pub mat2: [FqElem; 4],
    pub frob_k: usize,
}

impl AutElem {
    pub fn new(field: &FqField, tau: MatFp, mat2: [FqElem; 4], frob_k: usize) -> Result<Self> {
        let e = field.degree();
        if tau.rows() != 2 * e || tau.cols() != e {
            return Err(Error::DimensionMismatch(format!("tau must be {}x{e}", 2 * e)));
        }
        let aut = AutElem {
            tau,
            mat2,
            frob_k: frob_k % e,
        };
        if aut.det(field).is_zero() {
            return Err(Error::Singular);
        }
        Ok(aut)
    }

    pub fn identity(field: &FqField) -> Self {
        let e = field.degree();
        let (z, o) = (field.zero(), field.one());
        AutElem {
            tau: MatFp::zeros(field.p(), 2 * e, e),
            mat2: [o.clone(), z.clone(), z, o],
            frob_k: 0,
        }
    }

    /// `[[λ, 0], [0, 1]]` followed by `Frob^k`; acts on `H'` as `γ -> σ^k(λ γ)`.
    pub fn from_gamma(field: &FqField, g: &GammaElem) -> Self {
        let e = field.degree();
        let (z, o) = (field.zero(), field.one());
        AutElem {
            tau: MatFp::zeros(field.p(), 2 * e, e),
            mat2: [g.lambda.clone(), z.clone(), z, o],
            frob_k: g.frob_k,
        }
    }

    pub fn det(&self, field: &FqField) -> FqElem {
        let [a, b, c, d] = &self.mat2;
        field.sub(&field.mul(a, d), &field.mul(b, c))
    }

    /// The induced map on `H'`.
    pub fn gamma(&self, field: &FqField) -> GammaElem {
        GammaElem {
            lambda: self.det(field),
            frob_k: self.frob_k,
        }
    }

    /// Linear part on `H/H' = Z_p^{2e}`.
    pub fn t_matrix(&self, field: &FqField) -> MatFp {
        let m = |x: &FqElem| field.right_mul_matrix(x);
        let [a, b, c, d] = &self.mat2;
        let fr = field.frobenius_matrix(self.frob_k);
        MatFp::block2(&m(a), &m(b), &m(c), &m(d)).mul(&MatFp::block_diag(&[fr.clone(), fr], field.p()))
    }

    pub fn hom(&self, ctx: &HeisenbergCtx) -> GroupHom {
        let f = &ctx.field;
        let fr = f.frobenius_matrix(self.frob_k);
        let t = self.t_matrix(f);
        let d = f.right_mul_matrix(&self.det(f)).mul(&fr);
        let tau = self.tau.mul(&fr);
        GroupHom::new(ctx.pencil.clone(), ctx.pencil.clone(), t, d, tau).expect("shapes fixed by the field degree")
    }

    pub fn apply(&self, ctx: &HeisenbergCtx, x: &GroupElem) -> GroupElem {
        self.hom(ctx).apply(x)
    }

    /// Exhaustive multiplicativity over all pairs (only for tiny groups) or the
    /// structural identity otherwise.
    pub fn verify(&self, ctx: &HeisenbergCtx, exhaustive: bool) -> bool {
        let h = self.hom(ctx);
        if !(h.is_homomorphism() && h.is_isomorphism()) {
            return false;
        }
        if exhaustive {
            let pen = &ctx.pencil;
            let n = pen.order();
            for i in 0..n {
                let x = pen.elem_from_index(i);
                let hx = h.apply(&x);
                for j in 0..n {
                    let y = pen.elem_from_index(j);
                    if h.apply(&pen.multiply(&x, &y)) != pen.multiply(&hx, &h.apply(&y)) {
                        return false;
                    }
                }
            }
        }
        true
    }
}

/// The semilinear map `x -> σ^k(λ x)` of `F_q`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GammaElem {
    pub lambda: FqElem,
    pub frob_k: usize,
}

impl GammaElem {
    pub fn identity(field: &FqField) -> Self {
        GammaElem {
            lambda: field.one(),
            frob_k: 0,
        }
    }

    /// `e x e` matrix acting on row vectors.
    pub fn matrix(&self, field: &FqField) -> MatFp {
        field.right_mul_matrix(&self.lambda).mul(&field.frobenius_matrix(self.frob_k))
    }

    pub fn apply(&self, field: &FqField, x: &FqElem) -> FqElem {
        field.frobenius(&field.mul(x, &self.lambda), self.frob_k)
    }

    /// First `self`, then `other`.
    pub fn then(&self, field: &FqField, other: &GammaElem) -> GammaElem {
        let e = field.degree();
        let back = field.frobenius(&other.lambda, (e - self.frob_k % e) % e);
        GammaElem {
            lambda: field.mul(&self.lambda, &back),
            frob_k: (self.frob_k + other.frob_k) % e,
        }
    }

    pub fn act(&self, field: &FqField, n: &Subspace) -> Subspace {
        n.image(&self.matrix(field))
    }
}

/// All `e (p^e - 1)` semilinear maps `x -> σ^k(λ x)`, `λ` nonzero, `k < e`.
pub fn gamma_group(field: &FqField) -> Vec<GammaElem> {
    let mut out = Vec::new();
    for k in 0..field.degree() {
        for lambda in field.elements().filter(|x| !x.is_zero()) {
            out.push(GammaElem { lambda, frob_k: k });
        }
    }
    out
}

/// Lifts of the elementary matrices `[[1, w^i], [0, 1]]` and `[[1, 0], [w^i, 1]]`,
/// which generate `SL(2, F_q)` and act trivially on `H'`.
pub fn sl2_lifts(field: &FqField) -> Vec<AutElem> {
    let e = field.degree();
    let (z, o) = (field.zero(), field.one());
    let tau = MatFp::zeros(field.p(), 2 * e, e);
    let mut out = Vec::new();
    for i in 0..e {
        let w = field.basis(i);
        out.push(AutElem {
            tau: tau.clone(),
            mat2: [o.clone(), w.clone(), z.clone(), o.clone()],
            frob_k: 0,
        });
        out.push(AutElem {
            tau: tau.clone(),
            mat2: [o.clone(), z.clone(), w, o.clone()],
            frob_k: 0,
        });
    }
    out
}

/// Orbit of a subspace of `Z_p^{2e}` under the group generated by `gens` (acting on row vectors).
pub fn hyperplane_orbit(gens: &[MatFp], start: &Subspace) -> BTreeSet<Subspace> {
    let mut seen = BTreeSet::from([start.clone()]);
    let mut queue = VecDeque::from([start.clone()]);
    while let Some(w) = queue.pop_front() {
        for g in gens {
            let img = w.image(g);
            if seen.insert(img.clone()) {
                queue.push_back(img);
            }
        }
    }
    seen
}

/// The map `src.raw -> dst.raw` induced by `aut`, which must carry `src.n` onto `dst.n`.
pub fn descend(ctx: &HeisenbergCtx, aut: &AutElem, src: &FamilyMember, dst: &FamilyMember) -> Result<GroupHom> {
    let h = aut.hom(ctx);
    if src.n.image(&h.d) != dst.n {
        return Err(Error::DimensionMismatch(
            "automorphism does not carry N onto the target".into(),
        ));
    }
    let at = dst.projection.transpose();
    let d = src.lift.mul(&h.d).mul(&at);
    let tau = h.tau.mul(&at);
    GroupHom::new(src.raw.clone(), dst.raw.clone(), h.t, d, tau)
}
