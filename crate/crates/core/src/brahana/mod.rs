//! Groups `B(L_1, ..., L_g)` of class two and exponent `p` presented by pencils.
//!
//! An element is a triple `(a, b, c)` with `a` in `Z_p^r`, `b` in `Z_p^s`, `c` in
//! `Z_p^g`, and
//!
//! ```text
//! (a, b, c)(a', b', c') = (a + a', b + b', c + c' + Λ(a, b')),   Λ_k(a, b') = a L_k b'^t.
//! ```

mod descriptor;
mod hom;
mod ops;

pub use descriptor::{descriptor, radical_dim, GroupDescriptor, CLASS_ENUM_BOUND};
pub use hom::GroupHom;
pub use ops::{combine, companion_pencil, eliminate, embed_lower, reduce, transform};

use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::ff::Zp;
use crate::linal::MatFp;
use crate::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Pencil {
    zp: Zp,
    r: usize,
    s: usize,
    mats: Vec<MatFp>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GroupElem {
    pub a: Vec<u32>,
    pub b: Vec<u32>,
    pub c: Vec<u32>,
}

impl GroupElem {
    /// `(a, b)` concatenated.
    pub fn u(&self) -> Vec<u32> {
        let mut u = self.a.clone();
        u.extend_from_slice(&self.b);
        u
    }

    pub fn is_identity(&self) -> bool {
        self.a.iter().chain(&self.b).chain(&self.c).all(|x| *x == 0)
    }

    pub fn is_central_coords(&self) -> bool {
        self.a.iter().chain(&self.b).all(|x| *x == 0)
    }
}

impl fmt::Display for GroupElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let j = |v: &[u32]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
        write!(f, "({} | {} | {})", j(&self.a), j(&self.b), j(&self.c))
    }
}

impl Pencil {
    pub fn new(zp: Zp, r: usize, s: usize, mats: Vec<MatFp>) -> Result<Self> {
        for (k, m) in mats.iter().enumerate() {
            if m.rows() != r || m.cols() != s {
                return Err(Error::DimensionMismatch(format!(
                    "matrix {k} is {}x{}, pencil is {r}x{s}",
                    m.rows(),
                    m.cols()
                )));
            }
            if m.p() != zp.p() {
                return Err(Error::DimensionMismatch(format!(
                    "matrix {k} is over Z_{}, pencil over Z_{}",
                    m.p(),
                    zp.p()
                )));
            }
        }
        Ok(Pencil { zp, r, s, mats })
    }

    /// Pencil from square or rectangular matrices; dimensions come from the first one.
    pub fn from_mats(zp: Zp, mats: Vec<MatFp>) -> Result<Self> {
        let (r, s) = mats.first().map_or((0, 0), |m| (m.rows(), m.cols()));
        Pencil::new(zp, r, s, mats)
    }

    pub fn zp(&self) -> Zp {
        self.zp
    }

    pub fn p(&self) -> u32 {
        self.zp.p()
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn s(&self) -> usize {
        self.s
    }

    pub fn g(&self) -> usize {
        self.mats.len()
    }

    pub fn mats(&self) -> &[MatFp] {
        &self.mats
    }

    /// `log_p` of the group order.
    pub fn log_order(&self) -> usize {
        self.r + self.s + self.g()
    }

    pub fn order(&self) -> u128 {
        (self.p() as u128).pow(self.log_order() as u32)
    }

    /// Dimension of the span of the matrices.
    pub fn rank(&self) -> usize {
        self.flattened().rank()
    }

    /// `g x (r s)` matrix whose rows are the flattened `L_k`.
    pub fn flattened(&self) -> MatFp {
        let rows: Vec<Vec<u32>> = self.mats.iter().map(|m| m.as_slice().to_vec()).collect();
        MatFp::from_rows(self.p(), self.r * self.s, &rows)
    }

    pub fn is_reduced(&self) -> bool {
        self.rank() == self.g()
    }

    /// Alternating Gram matrix `[[0, L_k], [-L_k^t, 0]]` of the k-th commutator coordinate.
    pub fn omega(&self, k: usize) -> MatFp {
        let l = &self.mats[k];
        let p = self.p();
        MatFp::block2(
            &MatFp::zeros(p, self.r, self.r),
            l,
            &l.transpose().neg(),
            &MatFp::zeros(p, self.s, self.s),
        )
    }

    pub fn omegas(&self) -> Vec<MatFp> {
        (0..self.g()).map(|k| self.omega(k)).collect()
    }

    /// `Λ(a, b)_k = a L_k b^t`.
    pub fn lambda(&self, a: &[u32], b: &[u32]) -> Vec<u32> {
        self.mats.iter().map(|m| m.bilinear(a, b)).collect()
    }

    pub fn check(&self, x: &GroupElem) -> Result<()> {
        if x.a.len() != self.r || x.b.len() != self.s || x.c.len() != self.g() {
            return Err(Error::DimensionMismatch(format!(
                "element has shape ({}, {}, {}), pencil expects ({}, {}, {})",
                x.a.len(),
                x.b.len(),
                x.c.len(),
                self.r,
                self.s,
                self.g()
            )));
        }
        Ok(())
    }

    pub fn elem(&self, a: Vec<u32>, b: Vec<u32>, c: Vec<u32>) -> Result<GroupElem> {
        let p = self.p();
        let x = GroupElem {
            a: a.into_iter().map(|v| v % p).collect(),
            b: b.into_iter().map(|v| v % p).collect(),
            c: c.into_iter().map(|v| v % p).collect(),
        };
        self.check(&x)?;
        Ok(x)
    }

    /// Split a flat coordinate vector `(a, b, c)`.
    pub fn elem_from_coords(&self, v: &[u32]) -> GroupElem {
        assert_eq!(v.len(), self.log_order());
        GroupElem {
            a: v[..self.r].to_vec(),
            b: v[self.r..self.r + self.s].to_vec(),
            c: v[self.r + self.s..].to_vec(),
        }
    }

    pub fn coords(&self, x: &GroupElem) -> Vec<u32> {
        let mut v = x.u();
        v.extend_from_slice(&x.c);
        v
    }

    pub fn identity(&self) -> GroupElem {
        GroupElem {
            a: vec![0; self.r],
            b: vec![0; self.s],
            c: vec![0; self.g()],
        }
    }

    pub fn multiply(&self, x: &GroupElem, y: &GroupElem) -> GroupElem {
        let zp = self.zp;
        let twist = self.lambda(&x.a, &y.b);
        GroupElem {
            a: zp.add_vec(&x.a, &y.a),
            b: zp.add_vec(&x.b, &y.b),
            c: zp.add_vec(&zp.add_vec(&x.c, &y.c), &twist),
        }
    }

    pub fn try_multiply(&self, x: &GroupElem, y: &GroupElem) -> Result<GroupElem> {
        self.check(x)?;
        self.check(y)?;
        Ok(self.multiply(x, y))
    }

    pub fn inverse(&self, x: &GroupElem) -> GroupElem {
        let zp = self.zp;
        let ab = self.lambda(&x.a, &x.b);
        GroupElem {
            a: zp.neg_vec(&x.a),
            b: zp.neg_vec(&x.b),
            c: zp.add_vec(&zp.neg_vec(&x.c), &ab),
        }
    }

    pub fn power(&self, x: &GroupElem, n: u64) -> GroupElem {
        let mut acc = self.identity();
        let mut base = x.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                acc = self.multiply(&acc, &base);
            }
            base = self.multiply(&base, &base);
            n >>= 1;
        }
        acc
    }

    /// `[x, y] = x^{-1} y^{-1} x y = (0, 0, Λ(a, b') - Λ(a', b))`.
    pub fn commutator(&self, x: &GroupElem, y: &GroupElem) -> GroupElem {
        let zp = self.zp;
        let c = zp.sub_vec(&self.lambda(&x.a, &y.b), &self.lambda(&y.a, &x.b));
        GroupElem {
            a: vec![0; self.r],
            b: vec![0; self.s],
            c,
        }
    }

    /// `y^{-1} x y`.
    pub fn conjugate(&self, x: &GroupElem, y: &GroupElem) -> GroupElem {
        self.multiply(&self.multiply(&self.inverse(y), x), y)
    }

    pub fn random_elem<R: Rng + ?Sized>(&self, rng: &mut R) -> GroupElem {
        let p = self.p();
        let mut v = |n: usize| (0..n).map(|_| rng.gen_range(0..p)).collect::<Vec<u32>>();
        GroupElem {
            a: v(self.r),
            b: v(self.s),
            c: v(self.g()),
        }
    }

    /// Element with flat coordinates the base-`p` digits of `index`, most significant first.
    pub fn elem_from_index(&self, mut index: u128) -> GroupElem {
        let p = self.p() as u128;
        let n = self.log_order();
        let mut v = vec![0u32; n];
        for x in v.iter_mut().rev() {
            *x = (index % p) as u32;
            index /= p;
        }
        self.elem_from_coords(&v)
    }

    pub fn index_of(&self, x: &GroupElem) -> u128 {
        let p = self.p() as u128;
        self.coords(x).iter().fold(0u128, |acc, d| acc * p + *d as u128)
    }

    /// Literal unitriangular matrix of size `1 + r + g`: first row `(1, a, c)`,
    /// block `[I_r | L_1 b^t ... L_g b^t]`, then `I_g`.
    pub fn block_matrix(&self, x: &GroupElem) -> MatFp {
        let p = self.p();
        let (r, g) = (self.r, self.g());
        let mut m = MatFp::identity(p, 1 + r + g);
        for i in 0..r {
            m[(0, 1 + i)] = x.a[i];
        }
        for k in 0..g {
            m[(0, 1 + r + k)] = x.c[k];
            let col = self.mats[k].mul(&MatFp::from_rows(p, 1, &x.b.iter().map(|v| vec![*v]).collect::<Vec<_>>()));
            for i in 0..r {
                m[(1 + i, 1 + r + k)] = col[(i, 0)];
            }
        }
        m
    }

    /// Text form: header `p r s g`, then the matrices separated by blank lines.
    pub fn to_text(&self) -> String {
        let mut out = format!("{} {} {} {}\n", self.p(), self.r, self.s, self.g());
        for m in &self.mats {
            out.push('\n');
            out.push_str(&m.to_text());
            out.push('\n');
        }
        out
    }

    /// Parse the text form. A matrix may be written on one line with `;` between
    /// rows or with one row per line.
    pub fn parse(text: &str) -> Result<Pencil> {
        let mut lines = text.lines().map(str::trim).skip_while(|l| l.is_empty());
        let header = lines.next().ok_or_else(|| Error::Parse("empty pencil file".into()))?;
        let nums: Vec<usize> = header
            .split_whitespace()
            .map(|t| {
                t.parse::<usize>()
                    .map_err(|_| Error::Parse(format!("bad header token {t:?}")))
            })
            .collect::<Result<_>>()?;
        let [p, r, s, g] = nums[..] else {
            return Err(Error::Parse(format!("header must be `p r s g`, got {header:?}")));
        };
        let zp = Zp::new(p as u32)?;
        let mut chunks: Vec<Vec<&str>> = Vec::new();
        let mut cur = Vec::new();
        for l in lines {
            if l.is_empty() {
                if !cur.is_empty() {
                    chunks.push(std::mem::take(&mut cur));
                }
            } else if !l.starts_with('#') {
                cur.push(l);
            }
        }
        if !cur.is_empty() {
            chunks.push(cur);
        }
        if chunks.len() != g {
            return Err(Error::Parse(format!("header announces {g} matrices, found {}", chunks.len())));
        }
        let mats = chunks
            .iter()
            .map(|c| MatFp::parse(p as u32, &c.join(";")))
            .collect::<Result<Vec<_>>>()?;
        Pencil::new(zp, r, s, mats)
    }
}

impl fmt::Debug for Pencil {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ms: Vec<String> = self.mats.iter().map(|m| m.to_text()).collect();
        write!(
            f,
            "Pencil[p={}, {}x{}, g={}]({})",
            self.p(),
            self.r,
            self.s,
            self.g(),
            ms.join(" | ")
        )
    }
}
