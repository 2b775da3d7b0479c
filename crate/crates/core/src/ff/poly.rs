use std::fmt;

use serde::{Deserialize, Serialize};

use super::Zp;
use crate::{Error, Result};

/// A polynomial over `Z_p`, coefficients lowest degree first.
///
/// Trailing zero coefficients are always stripped, so the zero polynomial has
/// an empty coefficient list and `degree() == None`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Poly {
    zp: Zp,
    coeffs: Vec<u32>,
}

impl Poly {
    pub fn new(zp: Zp, coeffs: Vec<u32>) -> Self {
        let mut coeffs: Vec<u32> = coeffs.into_iter().map(|c| c % zp.p()).collect();
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        Poly { zp, coeffs }
    }

    pub fn from_signed(zp: Zp, coeffs: &[i64]) -> Self {
        Poly::new(zp, coeffs.iter().map(|c| zp.reduce(*c)).collect())
    }

    pub fn zero(zp: Zp) -> Self {
        Poly { zp, coeffs: vec![] }
    }

    pub fn one(zp: Zp) -> Self {
        Poly { zp, coeffs: vec![1] }
    }

    /// The monomial `c t^k`.
    pub fn monomial(zp: Zp, c: u32, k: usize) -> Self {
        let mut coeffs = vec![0; k + 1];
        coeffs[k] = c;
        Poly::new(zp, coeffs)
    }

    pub fn zp(&self) -> Zp {
        self.zp
    }

    pub fn coeffs(&self) -> &[u32] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> u32 {
        self.coeffs.get(i).copied().unwrap_or(0)
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs == [1]
    }

    pub fn leading(&self) -> u32 {
        self.coeffs.last().copied().unwrap_or(0)
    }

    pub fn is_monic(&self) -> bool {
        self.leading() == 1
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let inv = self.zp.inv(self.leading()).expect("nonzero leading coefficient");
        self.scale(inv)
    }

    pub fn scale(&self, s: u32) -> Self {
        Poly::new(self.zp, self.zp.scale_vec(s, &self.coeffs))
    }

    pub fn add(&self, other: &Poly) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let c = (0..n).map(|i| self.zp.add(self.coeff(i), other.coeff(i))).collect();
        Poly::new(self.zp, c)
    }

    pub fn sub(&self, other: &Poly) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let c = (0..n).map(|i| self.zp.sub(self.coeff(i), other.coeff(i))).collect();
        Poly::new(self.zp, c)
    }

    pub fn mul(&self, other: &Poly) -> Self {
        if self.is_zero() || other.is_zero() {
            return Poly::zero(self.zp);
        }
        let mut c = vec![0u64; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                c[i + j] = (c[i + j] + *a as u64 * *b as u64) % self.zp.p() as u64;
            }
        }
        Poly::new(self.zp, c.into_iter().map(|x| x as u32).collect())
    }

    /// Quotient and remainder; errors when dividing by the zero polynomial.
    pub fn div_rem(&self, divisor: &Poly) -> Result<(Poly, Poly)> {
        let dd = divisor.degree().ok_or(Error::DivisionByZero)?;
        let zp = self.zp;
        let lead_inv = zp.inv(divisor.leading()).ok_or(Error::DivisionByZero)?;
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return Ok((Poly::zero(zp), self.clone()));
        }
        let mut quot = vec![0u32; rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = zp.mul(rem[k + dd], lead_inv);
            quot[k] = c;
            if c != 0 {
                for (j, d) in divisor.coeffs.iter().enumerate() {
                    rem[k + j] = zp.sub(rem[k + j], zp.mul(c, *d));
                }
            }
        }
        rem.truncate(dd);
        Ok((Poly::new(zp, quot), Poly::new(zp, rem)))
    }

    pub fn rem(&self, divisor: &Poly) -> Result<Poly> {
        Ok(self.div_rem(divisor)?.1)
    }

    pub fn divides(&self, other: &Poly) -> bool {
        match other.rem(self) {
            Ok(r) => r.is_zero(),
            Err(_) => other.is_zero(),
        }
    }

    /// Monic greatest common divisor (zero only when both inputs are zero).
    pub fn gcd(&self, other: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b).expect("nonzero divisor");
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn lcm(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero(self.zp);
        }
        let g = self.gcd(other);
        self.mul(other).div_rem(&g).expect("nonzero gcd").0.monic()
    }

    /// `self^n mod modulus`.
    pub fn pow_mod(&self, mut n: u128, modulus: &Poly) -> Result<Poly> {
        let mut base = self.rem(modulus)?;
        let mut acc = Poly::one(self.zp).rem(modulus)?;
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(&base).rem(modulus)?;
            }
            base = base.mul(&base).rem(modulus)?;
            n >>= 1;
        }
        Ok(acc)
    }

    pub fn eval(&self, x: u32) -> u32 {
        self.coeffs
            .iter()
            .rev()
            .fold(0, |acc, c| self.zp.add(self.zp.mul(acc, x), *c))
    }

    /// Ben-Or irreducibility test: `a` of degree `n` is irreducible iff
    /// `gcd(t^{p^i} - t, a) = 1` for every `1 <= i <= n/2`.
    pub fn is_irreducible(&self) -> bool {
        let n = match self.degree() {
            None | Some(0) => return false,
            Some(1) => return true,
            Some(n) => n,
        };
        let a = self.monic();
        let t = Poly::monomial(self.zp, 1, 1);
        let mut h = t.clone();
        for _ in 1..=n / 2 {
            h = h.pow_mod(self.zp.p() as u128, &a).expect("nonzero modulus");
            if !h.sub(&t).gcd(&a).is_one() {
                return false;
            }
        }
        true
    }

    /// Comma-separated coefficient list, lowest degree first (`"1,0,1"` is `t^2+1`).
    pub fn to_coeff_string(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        self.coeffs.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(",")
    }

    pub fn parse(zp: Zp, s: &str) -> Result<Poly> {
        let coeffs = s
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<i64>()
                    .map_err(|_| Error::Parse(format!("bad coefficient {t:?} in {s:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Poly::from_signed(zp, &coeffs))
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if *c == 0 {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match (i, *c) {
                (0, c) => write!(f, "{c}")?,
                (1, 1) => write!(f, "t")?,
                (1, c) => write!(f, "{c}t")?,
                (i, 1) => write!(f, "t^{i}")?,
                (i, c) => write!(f, "{c}t^{i}")?,
            }
        }
        Ok(())
    }
}

/// Least monic irreducible polynomial of degree `e` over `Z_p` in base-`p`
/// index order, starting the scan at index `seed` and wrapping around.
///
/// The index of `t^e + a_{e-1} t^{e-1} + ... + a_0` is `sum a_i p^i`, so for
/// `seed = 0` the constant term varies fastest.
pub fn find_irreducible(zp: Zp, e: usize, seed: u64) -> Result<Poly> {
    if e == 0 {
        return Err(Error::InvalidDegree("extension degree must be at least 1".into()));
    }
    let p = zp.p() as u64;
    let mut digits = vec![0u32; e];
    let mut s = seed;
    for d in digits.iter_mut() {
        *d = (s % p) as u32;
        s /= p;
    }
    loop {
        let mut coeffs = digits.clone();
        coeffs.push(1);
        let cand = Poly::new(zp, coeffs);
        if cand.is_irreducible() {
            return Ok(cand);
        }
        // base-p increment with wraparound
        for d in digits.iter_mut() {
            *d += 1;
            if *d < zp.p() {
                break;
            }
            *d = 0;
        }
    }
}
