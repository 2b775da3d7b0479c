use serde::{Deserialize, Serialize};

use super::{GroupElem, Pencil};
use crate::linal::MatFp;
use crate::{Error, Result};

/// Homomorphism `B(L) -> B(L')` written in symmetric coordinates.
///
/// With `u = (a, b)` and `z = c - Λ(a, b)/2`, the product becomes
/// `(u, z)(u', z') = (u + u', z + z' + ω(u, u')/2)` where `ω_k(u, u') = u Ω_k u'^t`.
/// The map is `u -> u t`, `z -> z d + u tau`. It respects products exactly when
/// `t Ω'_j t^t = sum_k d[k][j] Ω_k` for every `j`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupHom {
    pub source: Pencil,
    pub target: Pencil,
    /// `(r + s) x (r' + s')`
    pub t: MatFp,
    /// `g x g'`
    pub d: MatFp,
    /// `(r + s) x g'`
    pub tau: MatFp,
}

impl GroupHom {
    pub fn new(source: Pencil, target: Pencil, t: MatFp, d: MatFp, tau: MatFp) -> Result<Self> {
        let (n, n2) = (source.r() + source.s(), target.r() + target.s());
        let shapes = [
            (t.rows(), t.cols(), n, n2, "t"),
            (d.rows(), d.cols(), source.g(), target.g(), "d"),
            (tau.rows(), tau.cols(), n, target.g(), "tau"),
        ];
        for (r, c, er, ec, name) in shapes {
            if (r, c) != (er, ec) {
                return Err(Error::DimensionMismatch(format!("{name} is {r}x{c}, expected {er}x{ec}")));
            }
        }
        Ok(GroupHom {
            source,
            target,
            t,
            d,
            tau,
        })
    }

    pub fn identity(p: &Pencil) -> Self {
        let n = p.r() + p.s();
        let z = p.p();
        GroupHom {
            source: p.clone(),
            target: p.clone(),
            t: MatFp::identity(z, n),
            d: MatFp::identity(z, p.g()),
            tau: MatFp::zeros(z, n, p.g()),
        }
    }

    fn to_symmetric(p: &Pencil, x: &GroupElem) -> (Vec<u32>, Vec<u32>) {
        let zp = p.zp();
        let half = zp.half();
        let lam = zp.scale_vec(half, &p.lambda(&x.a, &x.b));
        (x.u(), zp.sub_vec(&x.c, &lam))
    }

    fn from_symmetric(p: &Pencil, u: &[u32], z: &[u32]) -> GroupElem {
        let zp = p.zp();
        let (a, b) = u.split_at(p.r());
        let lam = zp.scale_vec(zp.half(), &p.lambda(a, b));
        GroupElem {
            a: a.to_vec(),
            b: b.to_vec(),
            c: zp.add_vec(z, &lam),
        }
    }

    pub fn apply(&self, x: &GroupElem) -> GroupElem {
        let zp = self.source.zp();
        let (u, z) = GroupHom::to_symmetric(&self.source, x);
        let u2 = self.t.vec_mul(&u);
        let z2 = zp.add_vec(&self.d.vec_mul(&z), &self.tau.vec_mul(&u));
        GroupHom::from_symmetric(&self.target, &u2, &z2)
    }

    /// `other ∘ self`: first `self`, then `other`.
    pub fn then(&self, other: &GroupHom) -> Result<GroupHom> {
        if self.target != other.source {
            return Err(Error::DimensionMismatch("composed maps do not share a middle group".into()));
        }
        Ok(GroupHom {
            source: self.source.clone(),
            target: other.target.clone(),
            t: self.t.mul(&other.t),
            d: self.d.mul(&other.d),
            tau: self.tau.mul(&other.d).add(&self.t.mul(&other.tau)),
        })
    }

    /// The structural condition on `t` and `d`.
    pub fn is_homomorphism(&self) -> bool {
        let src = self.source.omegas();
        let p = self.source.p();
        let n = self.source.r() + self.source.s();
        (0..self.target.g()).all(|j| {
            let lhs = self.t.mul(&self.target.omega(j)).mul(&self.t.transpose());
            let mut rhs = MatFp::zeros(p, n, n);
            for (k, om) in src.iter().enumerate() {
                rhs = rhs.add(&om.scale(self.d[(k, j)]));
            }
            lhs == rhs
        })
    }

    /// Linear part `[[t, tau], [0, d]]` on `(u, z)`.
    pub fn linear_part(&self) -> MatFp {
        let p = self.source.p();
        let z = MatFp::zeros(p, self.source.g(), self.t.cols());
        MatFp::block2(&self.t, &self.tau, &z, &self.d)
    }

    pub fn is_injective(&self) -> bool {
        let m = self.linear_part();
        m.rank() == m.rows()
    }

    pub fn is_surjective(&self) -> bool {
        let m = self.linear_part();
        m.rank() == m.cols()
    }

    pub fn is_isomorphism(&self) -> bool {
        self.is_injective() && self.is_surjective()
    }

    /// Inverse of a bijective homomorphism.
    pub fn inverse(&self) -> Result<GroupHom> {
        if !self.is_isomorphism() {
            return Err(Error::Singular);
        }
        let ti = self.t.inverse().ok_or(Error::Singular)?;
        let di = self.d.inverse().ok_or(Error::Singular)?;
        // z' = z d + u tau  =>  z = (z' - u' t^{-1} tau) d^{-1}.
        let tau = ti.mul(&self.tau).mul(&di).neg();
        Ok(GroupHom {
            source: self.target.clone(),
            target: self.source.clone(),
            t: ti,
            d: di,
            tau,
        })
    }
}
