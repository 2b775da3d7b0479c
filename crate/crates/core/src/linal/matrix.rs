use std::fmt;
use std::ops::{Index, IndexMut};

use serde::{Deserialize, Serialize};

use crate::ff::Zp;
use crate::{Error, Result};

/// Dense row-major matrix over `Z_p`.
///
/// Vectors are row vectors throughout: a linear map `Z_p^m -> Z_p^n` is an
/// `m x n` matrix acting by `v -> v * M`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct MatFp {
    p: u32,
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

impl MatFp {
    pub fn zeros(p: u32, rows: usize, cols: usize) -> Self {
        MatFp {
            p,
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(p: u32, n: usize) -> Self {
        let mut m = MatFp::zeros(p, n, n);
        for i in 0..n {
            m[(i, i)] = 1 % p;
        }
        m
    }

    pub fn scalar(p: u32, n: usize, c: u32) -> Self {
        let mut m = MatFp::zeros(p, n, n);
        for i in 0..n {
            m[(i, i)] = c % p;
        }
        m
    }

    pub fn diag(p: u32, entries: &[u32]) -> Self {
        let mut m = MatFp::zeros(p, entries.len(), entries.len());
        for (i, c) in entries.iter().enumerate() {
            m[(i, i)] = c % p;
        }
        m
    }

    /// Build from explicit rows; `cols` fixes the width when `rows` is empty.
    pub fn from_rows(p: u32, cols: usize, rows: &[Vec<u32>]) -> Self {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged matrix rows");
            data.extend(r.iter().map(|x| x % p));
        }
        MatFp {
            p,
            rows: rows.len(),
            cols,
            data,
        }
    }

    pub fn from_signed(p: u32, rows: &[&[i64]]) -> Self {
        let zp = Zp::new_unchecked(p);
        let cols = rows.first().map_or(0, |r| r.len());
        let rows: Vec<Vec<u32>> = rows.iter().map(|r| r.iter().map(|x| zp.reduce(*x)).collect()).collect();
        MatFp::from_rows(p, cols, &rows)
    }

    pub fn from_fn(p: u32, rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> u32) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j) % p);
            }
        }
        MatFp { p, rows, cols, data }
    }

    /// A `1 x n` matrix.
    pub fn row_vector(p: u32, v: &[u32]) -> Self {
        MatFp::from_rows(p, v.len(), &[v.to_vec()])
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn zp(&self) -> Zp {
        Zp::new_unchecked(self.p)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> &[u32] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_mut(&mut self, i: usize) -> &mut [u32] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<u32>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn col(&self, j: usize) -> Vec<u32> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    /// Row-major entries.
    pub fn as_slice(&self) -> &[u32] {
        &self.data
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| *x == 0)
    }

    pub fn transpose(&self) -> Self {
        MatFp::from_fn(self.p, self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn add(&self, other: &MatFp) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "shape mismatch in add");
        let zp = self.zp();
        MatFp {
            data: zp.add_vec(&self.data, &other.data),
            ..self.clone()
        }
    }

    pub fn sub(&self, other: &MatFp) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "shape mismatch in sub");
        let zp = self.zp();
        MatFp {
            data: zp.sub_vec(&self.data, &other.data),
            ..self.clone()
        }
    }

    pub fn neg(&self) -> Self {
        MatFp {
            data: self.zp().neg_vec(&self.data),
            ..self.clone()
        }
    }

    pub fn scale(&self, c: u32) -> Self {
        MatFp {
            data: self.zp().scale_vec(c % self.p, &self.data),
            ..self.clone()
        }
    }

    pub fn mul(&self, other: &MatFp) -> Self {
        assert_eq!(self.cols, other.rows, "shape mismatch in mul");
        let p = self.p as u64;
        let mut out = vec![0u64; self.rows * other.cols];
        for i in 0..self.rows {
            let orow = &mut out[i * other.cols..(i + 1) * other.cols];
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k] as u64;
                if a == 0 {
                    continue;
                }
                for (o, b) in orow.iter_mut().zip(other.row(k)) {
                    *o += a * *b as u64;
                }
            }
            for o in orow.iter_mut() {
                *o %= p;
            }
        }
        MatFp {
            p: self.p,
            rows: self.rows,
            cols: other.cols,
            data: out.into_iter().map(|x| x as u32).collect(),
        }
    }

    /// `v * self` for a row vector `v`.
    pub fn vec_mul(&self, v: &[u32]) -> Vec<u32> {
        assert_eq!(v.len(), self.rows, "shape mismatch in vec_mul");
        let p = self.p as u64;
        let mut out = vec![0u64; self.cols];
        for (k, a) in v.iter().enumerate() {
            if *a == 0 {
                continue;
            }
            for (o, b) in out.iter_mut().zip(self.row(k)) {
                *o += *a as u64 * *b as u64;
            }
        }
        out.into_iter().map(|x| (x % p) as u32).collect()
    }

    /// `x * self * y^t`.
    pub fn bilinear(&self, x: &[u32], y: &[u32]) -> u32 {
        self.zp().dot(&self.vec_mul(x), y)
    }

    pub fn pow(&self, mut n: u64) -> Self {
        assert!(self.is_square());
        let mut base = self.clone();
        let mut acc = MatFp::identity(self.p, self.rows);
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            n >>= 1;
        }
        acc
    }

    pub fn hstack(&self, other: &MatFp) -> Self {
        assert_eq!(self.rows, other.rows, "row mismatch in hstack");
        MatFp::from_fn(self.p, self.rows, self.cols + other.cols, |i, j| {
            if j < self.cols {
                self[(i, j)]
            } else {
                other[(i, j - self.cols)]
            }
        })
    }

    pub fn vstack(&self, other: &MatFp) -> Self {
        assert_eq!(self.cols, other.cols, "column mismatch in vstack");
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        MatFp {
            p: self.p,
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn block_diag(blocks: &[MatFp], p: u32) -> Self {
        let rows: usize = blocks.iter().map(|b| b.rows).sum();
        let cols: usize = blocks.iter().map(|b| b.cols).sum();
        let mut m = MatFp::zeros(p, rows, cols);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            for i in 0..b.rows {
                for j in 0..b.cols {
                    m[(r0 + i, c0 + j)] = b[(i, j)];
                }
            }
            r0 += b.rows;
            c0 += b.cols;
        }
        m
    }

    /// `[[a, b], [c, d]]` from four blocks.
    pub fn block2(a: &MatFp, b: &MatFp, c: &MatFp, d: &MatFp) -> Self {
        a.hstack(b).vstack(&c.hstack(d))
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Self {
        MatFp::from_fn(self.p, rows.len(), cols.len(), |i, j| self[(rows[i], cols[j])])
    }

    pub fn select_rows(&self, rows: &[usize]) -> Self {
        let cols: Vec<usize> = (0..self.cols).collect();
        self.submatrix(rows, &cols)
    }

    /// Rank via row reduction.
    pub fn rank(&self) -> usize {
        super::rref(self).rank
    }

    pub fn inverse(&self) -> Option<MatFp> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        let aug = self.hstack(&MatFp::identity(self.p, n));
        let r = super::rref(&aug);
        if r.pivots.len() < n || r.pivots[n - 1] != n - 1 {
            return None;
        }
        let left: Vec<usize> = (0..n).collect();
        let right: Vec<usize> = (n..2 * n).collect();
        Some(r.mat.submatrix(&left, &right))
    }

    pub fn is_invertible(&self) -> bool {
        self.is_square() && self.rank() == self.rows
    }

    /// Determinant by elimination.
    pub fn det(&self) -> u32 {
        assert!(self.is_square());
        let zp = self.zp();
        let n = self.rows;
        let mut m = self.clone();
        let mut det = 1u32;
        for c in 0..n {
            let Some(piv) = (c..n).find(|&r| m[(r, c)] != 0) else {
                return 0;
            };
            if piv != c {
                for j in 0..n {
                    m.data.swap(piv * n + j, c * n + j);
                }
                det = zp.neg(det);
            }
            let pv = m[(c, c)];
            det = zp.mul(det, pv);
            let inv = zp.inv(pv).expect("nonzero pivot");
            for r in c + 1..n {
                let f = zp.mul(m[(r, c)], inv);
                if f == 0 {
                    continue;
                }
                for j in c..n {
                    let v = zp.sub(m[(r, j)], zp.mul(f, m[(c, j)]));
                    m[(r, j)] = v;
                }
            }
        }
        det
    }

    /// Text form: rows separated by `;`, entries by `,` (e.g. `"1,0;0,2"`).
    pub fn to_text(&self) -> String {
        if self.rows == 0 {
            return String::new();
        }
        (0..self.rows)
            .map(|i| self.row(i).iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","))
            .collect::<Vec<_>>()
            .join(";")
    }

    /// Parse the text form; negative entries are reduced mod `p`.
    pub fn parse(p: u32, s: &str) -> Result<MatFp> {
        let s = s.trim();
        if s.is_empty() {
            return Ok(MatFp::zeros(p, 0, 0));
        }
        let zp = Zp::new_unchecked(p);
        let mut rows = Vec::new();
        for r in s.split(';') {
            let row = r
                .split(',')
                .map(|t| {
                    t.trim()
                        .parse::<i64>()
                        .map(|x| zp.reduce(x))
                        .map_err(|_| Error::Parse(format!("bad matrix entry {t:?}")))
                })
                .collect::<Result<Vec<u32>>>()?;
            rows.push(row);
        }
        let cols = rows[0].len();
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::Parse(format!("ragged rows in {s:?}")));
        }
        Ok(MatFp::from_rows(p, cols, &rows))
    }
}

impl Index<(usize, usize)> for MatFp {
    type Output = u32;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &u32 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for MatFp {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut u32 {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for MatFp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MatFp[p={}, {}x{}]({})", self.p, self.rows, self.cols, self.to_text())
    }
}

impl fmt::Display for MatFp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_text())
    }
}
