use std::fmt;

use serde::{Deserialize, Serialize};

use super::{find_irreducible, Poly, Zp};
use crate::linal::MatFp;
use crate::{Error, Result};

/// An element of `F_{p^e}` as coordinates on the basis `1, w, ..., w^{e-1}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FqElem {
    coords: Vec<u32>,
}

impl FqElem {
    pub fn coords(&self) -> &[u32] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<u32> {
        self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| *c == 0)
    }
}

impl fmt::Display for FqElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.coords.iter().map(|c| c.to_string()).collect();
        write!(f, "[{}]", s.join(","))
    }
}

/// The field `F_{p^e} = Z_p[t]/(m(t))` with its multiplication structure
/// matrices.
///
/// `struct_mats[k][i][j]` is the coefficient of `w^k` in `w^i * w^j`, so that
/// for coordinate row vectors `(x*y)_k = x * struct_mats[k] * y^t`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FqField {
    zp: Zp,
    e: usize,
    modulus: Poly,
    struct_mats: Vec<MatFp>,
}

impl FqField {
    pub fn new(modulus: Poly) -> Result<Self> {
        let e = modulus
            .degree()
            .filter(|d| *d >= 1)
            .ok_or_else(|| Error::InvalidDegree("modulus must have degree >= 1".into()))?;
        if !modulus.is_monic() {
            return Err(Error::NotMonic(modulus.to_coeff_string()));
        }
        if !modulus.is_irreducible() {
            return Err(Error::NotIrreducible {
                poly: modulus.to_coeff_string(),
                expected: e,
            });
        }
        let zp = modulus.zp();
        let mut field = FqField {
            zp,
            e,
            modulus,
            struct_mats: Vec::new(),
        };
        field.struct_mats = field.compute_structure_matrices();
        Ok(field)
    }

    /// The field with modulus `find_irreducible(p, e, seed)`.
    pub fn search(p: u32, e: usize, seed: u64) -> Result<Self> {
        let zp = Zp::new(p)?;
        FqField::new(find_irreducible(zp, e, seed)?)
    }

    pub fn zp(&self) -> Zp {
        self.zp
    }

    pub fn p(&self) -> u32 {
        self.zp.p()
    }

    pub fn degree(&self) -> usize {
        self.e
    }

    pub fn modulus(&self) -> &Poly {
        &self.modulus
    }

    /// `q = p^e`.
    pub fn order(&self) -> u128 {
        (self.p() as u128).pow(self.e as u32)
    }

    pub fn structure_matrices(&self) -> &[MatFp] {
        &self.struct_mats
    }

    fn compute_structure_matrices(&self) -> Vec<MatFp> {
        let e = self.e;
        let mut mats = vec![MatFp::zeros(self.p(), e, e); e];
        for i in 0..e {
            for j in 0..e {
                let prod = self.mul(&self.basis(i), &self.basis(j));
                for (k, m) in mats.iter_mut().enumerate() {
                    m[(i, j)] = prod.coords[k];
                }
            }
        }
        mats
    }

    pub fn elem(&self, coords: Vec<u32>) -> Result<FqElem> {
        if coords.len() != self.e {
            return Err(Error::DimensionMismatch(format!(
                "field element needs {} coordinates, got {}",
                self.e,
                coords.len()
            )));
        }
        Ok(FqElem {
            coords: coords.into_iter().map(|c| c % self.p()).collect(),
        })
    }

    pub fn zero(&self) -> FqElem {
        FqElem { coords: vec![0; self.e] }
    }

    pub fn one(&self) -> FqElem {
        self.scalar(1)
    }

    pub fn scalar(&self, c: u32) -> FqElem {
        let mut coords = vec![0; self.e];
        coords[0] = c % self.p();
        FqElem { coords }
    }

    /// The basis element `w^i`, `0 <= i < e`.
    pub fn basis(&self, i: usize) -> FqElem {
        let mut coords = vec![0; self.e];
        coords[i] = 1;
        FqElem { coords }
    }

    /// The class of `t`. For `e = 1` this is the root of the linear modulus.
    pub fn generator(&self) -> FqElem {
        self.from_poly(&Poly::monomial(self.zp, 1, 1))
    }

    pub fn from_poly(&self, f: &Poly) -> FqElem {
        let r = f.rem(&self.modulus).expect("modulus is nonzero");
        let coords = (0..self.e).map(|i| r.coeff(i)).collect();
        FqElem { coords }
    }

    pub fn to_poly(&self, x: &FqElem) -> Poly {
        Poly::new(self.zp, x.coords.clone())
    }

    /// Element with index `sum c_i p^i`; indices run over `0..q`.
    pub fn from_index(&self, mut idx: u128) -> FqElem {
        let p = self.p() as u128;
        let coords = (0..self.e)
            .map(|_| {
                let c = (idx % p) as u32;
                idx /= p;
                c
            })
            .collect();
        FqElem { coords }
    }

    pub fn index_of(&self, x: &FqElem) -> u128 {
        x.coords
            .iter()
            .rev()
            .fold(0u128, |acc, c| acc * self.p() as u128 + *c as u128)
    }

    pub fn elements(&self) -> impl Iterator<Item = FqElem> + '_ {
        (0..self.order()).map(move |i| self.from_index(i))
    }

    pub fn add(&self, x: &FqElem, y: &FqElem) -> FqElem {
        FqElem {
            coords: self.zp.add_vec(&x.coords, &y.coords),
        }
    }

    pub fn sub(&self, x: &FqElem, y: &FqElem) -> FqElem {
        FqElem {
            coords: self.zp.sub_vec(&x.coords, &y.coords),
        }
    }

    pub fn neg(&self, x: &FqElem) -> FqElem {
        FqElem {
            coords: self.zp.neg_vec(&x.coords),
        }
    }

    /// Product by schoolbook multiplication and reduction modulo `m(t)`.
    pub fn mul(&self, x: &FqElem, y: &FqElem) -> FqElem {
        let e = self.e;
        let p = self.p() as u64;
        let mut prod = vec![0u64; 2 * e - 1];
        for (i, a) in x.coords.iter().enumerate() {
            if *a == 0 {
                continue;
            }
            for (j, b) in y.coords.iter().enumerate() {
                prod[i + j] = (prod[i + j] + *a as u64 * *b as u64) % p;
            }
        }
        // t^e = -(m_0 + ... + m_{e-1} t^{e-1})
        let m = self.modulus.coeffs();
        for k in (e..2 * e - 1).rev() {
            let c = prod[k];
            if c == 0 {
                continue;
            }
            prod[k] = 0;
            for (j, mj) in m.iter().take(e).enumerate() {
                let sub = c * *mj as u64 % p;
                prod[k - e + j] = (prod[k - e + j] + p - sub) % p;
            }
        }
        FqElem {
            coords: prod[..e].iter().map(|c| *c as u32).collect(),
        }
    }

    pub fn pow(&self, x: &FqElem, mut n: u128) -> FqElem {
        let mut base = x.clone();
        let mut acc = self.one();
        while n > 0 {
            if n & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            n >>= 1;
        }
        acc
    }

    /// Inverse by the extended Euclidean algorithm in `Z_p[t]`.
    pub fn inv(&self, x: &FqElem) -> Result<FqElem> {
        if x.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let (mut r0, mut r1) = (self.modulus.clone(), self.to_poly(x));
        let (mut s0, mut s1) = (Poly::zero(self.zp), Poly::one(self.zp));
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(&r1)?;
            r0 = r1;
            r1 = r;
            let s = s0.sub(&q.mul(&s1));
            s0 = s1;
            s1 = s;
        }
        // r0 is a nonzero constant
        let c = self.zp.inv(r0.leading()).ok_or(Error::DivisionByZero)?;
        Ok(self.from_poly(&s0.scale(c)))
    }

    /// `x^{p^k}`.
    pub fn frobenius(&self, x: &FqElem, k: usize) -> FqElem {
        let mut y = x.clone();
        for _ in 0..k % self.e {
            y = self.pow(&y, self.p() as u128);
        }
        y
    }

    /// Matrix of `x -> x * lambda` acting on coordinate row vectors.
    pub fn right_mul_matrix(&self, lambda: &FqElem) -> MatFp {
        let rows: Vec<Vec<u32>> = (0..self.e).map(|i| self.mul(&self.basis(i), lambda).coords).collect();
        MatFp::from_rows(self.p(), self.e, &rows)
    }

    /// Matrix of `x -> x^{p^k}` acting on coordinate row vectors.
    pub fn frobenius_matrix(&self, k: usize) -> MatFp {
        let rows: Vec<Vec<u32>> = (0..self.e).map(|i| self.frobenius(&self.basis(i), k).coords).collect();
        MatFp::from_rows(self.p(), self.e, &rows)
    }

    /// Apply a `Z_p`-linear map given as an `e x e` matrix to a field element.
    pub fn apply_matrix(&self, x: &FqElem, m: &MatFp) -> FqElem {
        FqElem {
            coords: m.vec_mul(&x.coords),
        }
    }
}
