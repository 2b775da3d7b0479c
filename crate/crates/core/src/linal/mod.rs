//! Exact dense linear algebra over `Z_p`.

mod canonical;
mod matrix;
mod subspace;

pub use canonical::{
    companion_std, frobenius_normal_form, local_min_poly, min_poly, poly_eval_mat, poly_irreducible, vec_poly_mul, FrobeniusForm,
};
pub use matrix::MatFp;
pub use subspace::Subspace;

use crate::{Error, Result};

/// Reduced row echelon form together with rank and pivot columns.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rref {
    /// Same shape as the input; zero rows sit at the bottom.
    pub mat: MatFp,
    pub rank: usize,
    pub pivots: Vec<usize>,
}

pub fn rref(m: &MatFp) -> Rref {
    let zp = m.zp();
    let mut a = m.clone();
    let (rows, cols) = (a.rows(), a.cols());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(piv) = (r..rows).find(|&i| a[(i, c)] != 0) else {
            continue;
        };
        if piv != r {
            for j in 0..cols {
                let t = a[(piv, j)];
                a[(piv, j)] = a[(r, j)];
                a[(r, j)] = t;
            }
        }
        let inv = zp.inv(a[(r, c)]).expect("nonzero pivot");
        for j in c..cols {
            a[(r, j)] = zp.mul(a[(r, j)], inv);
        }
        let prow = a.row(r).to_vec();
        for i in 0..rows {
            let f = a[(i, c)];
            if i == r || f == 0 {
                continue;
            }
            let row = a.row_mut(i);
            for j in c..cols {
                row[j] = zp.sub(row[j], zp.mul(f, prow[j]));
            }
        }
        pivots.push(c);
        r += 1;
    }
    Rref { mat: a, rank: r, pivots }
}

/// Solutions of `coeff * x = rhs` with `x` a column vector.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Solution {
    pub particular: Option<Vec<u32>>,
    pub kernel: Subspace,
}

impl Solution {
    pub fn is_consistent(&self) -> bool {
        self.particular.is_some()
    }
}

pub fn solve_linear(coeff: &MatFp, rhs: &[u32]) -> Result<Solution> {
    if rhs.len() != coeff.rows() {
        return Err(Error::DimensionMismatch(format!(
            "coefficient matrix has {} rows, right-hand side has {} entries",
            coeff.rows(),
            rhs.len()
        )));
    }
    let p = coeff.p();
    let n = coeff.cols();
    let aug = coeff.hstack(&MatFp::from_fn(p, rhs.len(), 1, |i, _| rhs[i]));
    let r = rref(&aug);
    let kernel = Subspace::from_rows(p, n, null_basis(&r.mat, &r.pivots, n));
    let particular = if r.pivots.last() == Some(&n) {
        None
    } else {
        let mut x = vec![0; n];
        for (i, &c) in r.pivots.iter().enumerate() {
            x[c] = r.mat[(i, n)];
        }
        Some(x)
    };
    Ok(Solution { particular, kernel })
}

/// Right null space `{x : m x = 0}`.
pub fn kernel(m: &MatFp) -> Subspace {
    let r = rref(m);
    Subspace::from_rows(m.p(), m.cols(), null_basis(&r.mat, &r.pivots, m.cols()))
}

/// Left null space `{u : u m = 0}`.
pub fn left_kernel(m: &MatFp) -> Subspace {
    kernel(&m.transpose())
}

fn null_basis(reduced: &MatFp, pivots: &[usize], n: usize) -> Vec<Vec<u32>> {
    let zp = reduced.zp();
    let pivots: Vec<usize> = pivots.iter().copied().filter(|&c| c < n).collect();
    let mut out = Vec::new();
    for free in (0..n).filter(|c| !pivots.contains(c)) {
        let mut x = vec![0; n];
        x[free] = 1;
        for (i, &c) in pivots.iter().enumerate() {
            x[c] = zp.neg(reduced[(i, free)]);
        }
        out.push(x);
    }
    out
}
