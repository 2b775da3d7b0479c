use std::fmt;

use serde::{Deserialize, Serialize};

use super::{left_kernel, rref, MatFp};

/// Subspace of `Z_p^n`, stored by its reduced row echelon basis.
///
/// Equality and ordering compare the echelon basis, so subspaces can be used
/// directly as map keys.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Subspace {
    ambient: usize,
    basis: MatFp,
}

impl Subspace {
    pub fn zero(p: u32, ambient: usize) -> Self {
        Subspace {
            ambient,
            basis: MatFp::zeros(p, 0, ambient),
        }
    }

    pub fn full(p: u32, ambient: usize) -> Self {
        Subspace {
            ambient,
            basis: MatFp::identity(p, ambient),
        }
    }

    /// Span of the given vectors.
    pub fn from_rows(p: u32, ambient: usize, rows: Vec<Vec<u32>>) -> Self {
        Subspace::row_space(&MatFp::from_rows(p, ambient, &rows))
    }

    pub fn row_space(m: &MatFp) -> Self {
        let r = rref(m);
        let keep: Vec<usize> = (0..r.rank).collect();
        Subspace {
            ambient: m.cols(),
            basis: r.mat.select_rows(&keep),
        }
    }

    pub fn p(&self) -> u32 {
        self.basis.p()
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.rows()
    }

    pub fn codim(&self) -> usize {
        self.ambient - self.dim()
    }

    /// Echelon basis, one vector per row.
    pub fn basis(&self) -> &MatFp {
        &self.basis
    }

    pub fn basis_vectors(&self) -> Vec<Vec<u32>> {
        self.basis.row_vecs()
    }

    pub fn pivots(&self) -> Vec<usize> {
        (0..self.dim())
            .map(|i| self.basis.row(i).iter().position(|x| *x != 0).unwrap())
            .collect()
    }

    /// Coordinates of `x` in the echelon basis, if `x` lies in the subspace.
    pub fn coords(&self, x: &[u32]) -> Option<Vec<u32>> {
        let c: Vec<u32> = self.pivots().iter().map(|&j| x[j]).collect();
        if self.basis.vec_mul(&c) == x {
            Some(c)
        } else {
            None
        }
    }

    pub fn contains(&self, x: &[u32]) -> bool {
        self.coords(x).is_some()
    }

    pub fn contains_subspace(&self, other: &Subspace) -> bool {
        other.basis_vectors().iter().all(|v| self.contains(v))
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        Subspace::row_space(&self.basis.vstack(&other.basis))
    }

    pub fn intersection(&self, other: &Subspace) -> Subspace {
        let stacked = self.basis.vstack(&other.basis);
        let k = left_kernel(&stacked);
        let d = self.dim();
        let rows: Vec<Vec<u32>> = k.basis_vectors().iter().map(|u| self.basis.vec_mul(&u[..d])).collect();
        Subspace::from_rows(self.p(), self.ambient, rows)
    }

    /// Image under `v -> v * m`.
    pub fn image(&self, m: &MatFp) -> Subspace {
        Subspace::row_space(&self.basis.mul(m))
    }

    /// Standard basis vectors at the non-pivot columns; they span a complement.
    pub fn complement(&self) -> Subspace {
        let piv = self.pivots();
        let rows: Vec<Vec<u32>> = (0..self.ambient)
            .filter(|j| !piv.contains(j))
            .map(|j| {
                let mut e = vec![0; self.ambient];
                e[j] = 1;
                e
            })
            .collect();
        Subspace::from_rows(self.p(), self.ambient, rows)
    }

    /// All `p^dim` vectors, in lexicographic order of their coordinates.
    pub fn elements(&self) -> Vec<Vec<u32>> {
        let p = self.p();
        let d = self.dim();
        let count = (p as usize).pow(d as u32);
        let mut out = Vec::with_capacity(count);
        let mut c = vec![0u32; d];
        for _ in 0..count {
            out.push(self.basis.vec_mul(&c));
            for x in c.iter_mut().rev() {
                *x += 1;
                if *x < p {
                    break;
                }
                *x = 0;
            }
        }
        out
    }

    /// All `k`-dimensional subspaces of `Z_p^n`, ordered by pivot columns and
    /// then lexicographically by the free entries.
    pub fn enumerate(p: u32, n: usize, k: usize) -> Vec<Subspace> {
        let mut out = Vec::new();
        if k > n {
            return out;
        }
        let mut pivots: Vec<usize> = (0..k).collect();
        loop {
            let free: Vec<(usize, usize)> = (0..k)
                .flat_map(|i| {
                    let piv = &pivots;
                    (piv[i] + 1..n).filter(move |j| !piv.contains(j)).map(move |j| (i, j))
                })
                .collect();
            let mut vals = vec![0u32; free.len()];
            loop {
                let mut m = MatFp::zeros(p, k, n);
                for (i, &c) in pivots.iter().enumerate() {
                    m[(i, c)] = 1;
                }
                for (&(i, j), v) in free.iter().zip(&vals) {
                    m[(i, j)] = *v;
                }
                out.push(Subspace { ambient: n, basis: m });
                let mut pos = vals.len();
                loop {
                    if pos == 0 {
                        break;
                    }
                    pos -= 1;
                    vals[pos] += 1;
                    if vals[pos] < p {
                        break;
                    }
                    vals[pos] = 0;
                }
                if vals.iter().all(|v| *v == 0) {
                    break;
                }
            }
            // Next k-combination of 0..n.
            let Some(i) = (0..k).rev().find(|&i| pivots[i] < n - k + i) else {
                break;
            };
            pivots[i] += 1;
            for j in i + 1..k {
                pivots[j] = pivots[j - 1] + 1;
            }
        }
        out
    }

    /// Flattened echelon basis; equal keys iff equal subspaces.
    pub fn key(&self) -> Vec<u32> {
        self.basis.as_slice().to_vec()
    }
}

impl fmt::Debug for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Subspace[p={}, {}/{}]({})",
            self.p(),
            self.dim(),
            self.ambient,
            self.basis.to_text()
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sum_intersection_dims() {
        let u = Subspace::from_rows(3, 3, vec![vec![1, 0, 0], vec![0, 1, 0]]);
        let v = Subspace::from_rows(3, 3, vec![vec![0, 1, 0], vec![0, 0, 1]]);
        assert_eq!(u.sum(&v).dim(), 3);
        let w = u.intersection(&v);
        assert_eq!(w, Subspace::from_rows(3, 3, vec![vec![0, 2, 0]]));
        assert_eq!(u.dim() + v.dim(), u.sum(&v).dim() + w.dim());
    }

    #[test]
    fn complement_and_coords() {
        let u = Subspace::from_rows(5, 3, vec![vec![1, 2, 3]]);
        let c = u.complement();
        assert_eq!(c.dim(), 2);
        assert_eq!(u.sum(&c).dim(), 3);
        assert_eq!(u.coords(&[2, 4, 1]), Some(vec![2]));
        assert_eq!(u.coords(&[2, 4, 0]), None);
        assert_eq!(u.elements().len(), 5);
    }

    #[test]
    fn enumeration_counts_are_gaussian_binomials() {
        // [4 choose 2]_3 = 130, [3 choose 1]_5 = 31, [5 choose 3]_3 = 1210.
        assert_eq!(Subspace::enumerate(3, 4, 2).len(), 130);
        assert_eq!(Subspace::enumerate(5, 3, 1).len(), 31);
        assert_eq!(Subspace::enumerate(3, 5, 3).len(), 1210);
        assert_eq!(Subspace::enumerate(3, 2, 0).len(), 1);
        let all = Subspace::enumerate(3, 4, 2);
        let distinct: std::collections::BTreeSet<_> = all.iter().collect();
        assert_eq!(distinct.len(), all.len());
        assert!(all.iter().all(|s| *s == Subspace::row_space(s.basis())));
    }
}
