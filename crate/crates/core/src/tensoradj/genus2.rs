use serde::{Deserialize, Serialize};

use crate::brahana::{combine, transform, GroupHom, Pencil};
use crate::ff::Poly;
use crate::linal::{frobenius_normal_form, min_poly, MatFp};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[allow(clippy::large_enum_variant)]
pub enum QuotientVerdict {
    /// `iso` maps the input group onto `B(I_e, C(a))`.
    Member {
        normalized: Pencil,
        min_poly: Poly,
        iso: GroupHom,
    },
    NotMember {
        reason: String,
    },
}

impl QuotientVerdict {
    pub fn is_member(&self) -> bool {
        matches!(self, QuotientVerdict::Member { .. })
    }
}

/// Decide whether `B(L_1, L_2)` with `e x e` matrices is a codimension-two
/// quotient of `H(F_{p^e})`: some invertible member `L` of the span must
/// exist, and `L^{-1} L'` must have an irreducible minimal polynomial of
/// degree `e` for a complementary member `L'`.
pub fn is_heisenberg_quotient(pen: &Pencil, e: usize) -> Result<QuotientVerdict> {
    if pen.g() != 2 || pen.r() != e || pen.s() != e {
        return Err(Error::NotGenusTwo {
            e,
            got: format!("g = {}, {}x{}", pen.g(), pen.r(), pen.s()),
        });
    }
    if !pen.is_reduced() {
        return Ok(QuotientVerdict::NotMember {
            reason: "the two matrices are linearly dependent".into(),
        });
    }
    let p = pen.p();
    // Lines [1:0], then [c:1] for c in Z_p; rows of `a` are (line, complement).
    let mut lines = vec![MatFp::identity(p, 2)];
    for c in 0..p {
        lines.push(MatFp::from_rows(p, 2, &[vec![c, 1], vec![1, 0]]));
    }
    for a in lines {
        let (basis_pen, to_basis) = combine(pen, &a)?;
        let l = &basis_pen.mats()[0];
        let Some(l_inv) = l.inverse() else {
            continue;
        };
        let m = l_inv.mul(&basis_pen.mats()[1]);
        let mp = min_poly(&m);
        if mp.degree() != Some(e) || !mp.is_irreducible() {
            return Ok(QuotientVerdict::NotMember {
                reason: format!("minimal polynomial of L^-1 L' is {mp} ({})", mp.to_coeff_string()),
            });
        }
        let (unit_pen, to_unit) = transform(&basis_pen, &l_inv, &MatFp::identity(p, e))?;
        let fnf = frobenius_normal_form(&m);
        let x_inv = fnf.x.inverse().ok_or(Error::Singular)?;
        let (normalized, to_normal) = transform(&unit_pen, &x_inv, &fnf.x.transpose())?;
        debug_assert_eq!(normalized.mats()[0], MatFp::identity(p, e));
        let iso = to_basis.then(&to_unit)?.then(&to_normal)?;
        return Ok(QuotientVerdict::Member {
            normalized,
            min_poly: mp,
            iso,
        });
    }
    Ok(QuotientVerdict::NotMember {
        reason: "no invertible matrix in the pencil span".into(),
    })
}
