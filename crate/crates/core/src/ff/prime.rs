use serde::{Deserialize, Serialize};

use crate::{Error, Result};

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Arithmetic context for the prime field `Z_p`, `p` an odd prime.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Zp {
    p: u32,
}

impl Zp {
    pub fn new(p: u32) -> Result<Self> {
        if p < 3 || !is_prime(p as u64) {
            return Err(if p == 2 {
                Error::EvenCharacteristic
            } else {
                Error::InvalidModulus(p as u64)
            });
        }
        Ok(Zp { p })
    }

    /// For moduli already validated elsewhere (matrix and polynomial internals).
    pub(crate) fn new_unchecked(p: u32) -> Self {
        debug_assert!(p >= 3 && p % 2 == 1);
        Zp { p }
    }

    #[inline]
    pub fn p(&self) -> u32 {
        self.p
    }

    #[inline]
    pub fn reduce(&self, x: i64) -> u32 {
        x.rem_euclid(self.p as i64) as u32
    }

    #[inline]
    pub fn add(&self, x: u32, y: u32) -> u32 {
        let s = x + y;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(&self, x: u32, y: u32) -> u32 {
        if x >= y {
            x - y
        } else {
            x + self.p - y
        }
    }

    #[inline]
    pub fn neg(&self, x: u32) -> u32 {
        if x == 0 {
            0
        } else {
            self.p - x
        }
    }

    #[inline]
    pub fn mul(&self, x: u32, y: u32) -> u32 {
        ((x as u64 * y as u64) % self.p as u64) as u32
    }

    pub fn pow(&self, x: u32, mut n: u64) -> u32 {
        let mut base = x % self.p;
        let mut acc = 1 % self.p;
        while n > 0 {
            if n & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            n >>= 1;
        }
        acc
    }

    pub fn inv(&self, x: u32) -> Option<u32> {
        if x.is_multiple_of(self.p) {
            return None;
        }
        // extended Euclid on (x, p)
        let (mut r0, mut r1) = (self.p as i64, x as i64);
        let (mut t0, mut t1) = (0i64, 1i64);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (t0, t1) = (t1, t0 - q * t1);
        }
        Some(self.reduce(t0))
    }

    /// The inverse of 2, used for symmetric group coordinates.
    pub fn half(&self) -> u32 {
        self.p.div_ceil(2)
    }

    /// Dot product of two equal-length vectors.
    pub fn dot(&self, x: &[u32], y: &[u32]) -> u32 {
        debug_assert_eq!(x.len(), y.len());
        let mut acc = 0u64;
        for (a, b) in x.iter().zip(y) {
            acc += *a as u64 * *b as u64;
            if acc >= 1 << 62 {
                acc %= self.p as u64;
            }
        }
        (acc % self.p as u64) as u32
    }

    pub fn add_vec(&self, x: &[u32], y: &[u32]) -> Vec<u32> {
        x.iter().zip(y).map(|(a, b)| self.add(*a, *b)).collect()
    }

    pub fn sub_vec(&self, x: &[u32], y: &[u32]) -> Vec<u32> {
        x.iter().zip(y).map(|(a, b)| self.sub(*a, *b)).collect()
    }

    pub fn scale_vec(&self, s: u32, x: &[u32]) -> Vec<u32> {
        x.iter().map(|a| self.mul(s, *a)).collect()
    }

    pub fn neg_vec(&self, x: &[u32]) -> Vec<u32> {
        x.iter().map(|a| self.neg(*a)).collect()
    }
}
