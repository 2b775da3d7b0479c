use super::{GroupHom, Pencil};
use crate::ff::Poly;
use crate::linal::{companion_std, rref, MatFp};
use crate::{Error, Result};

/// Subgroup with the listed `a`/`b` coordinates forced to zero and the listed
/// (by then zero) matrices removed. The map is the inclusion into `pen`.
pub fn eliminate(pen: &Pencil, drop_rows: &[usize], drop_cols: &[usize], drop_mats: &[usize]) -> Result<(Pencil, GroupHom)> {
    let (r, s, g) = (pen.r(), pen.s(), pen.g());
    let bad = |idx: &[usize], n: usize, what: &str| {
        idx.iter()
            .find(|&&i| i >= n)
            .map(|i| Error::DimensionMismatch(format!("{what} index {i} out of range 0..{n}")))
    };
    if let Some(e) = bad(drop_rows, r, "row")
        .or(bad(drop_cols, s, "column"))
        .or(bad(drop_mats, g, "matrix"))
    {
        return Err(e);
    }
    let rows: Vec<usize> = (0..r).filter(|i| !drop_rows.contains(i)).collect();
    let cols: Vec<usize> = (0..s).filter(|j| !drop_cols.contains(j)).collect();
    let keep: Vec<usize> = (0..g).filter(|k| !drop_mats.contains(k)).collect();
    let shrunk: Vec<MatFp> = pen.mats().iter().map(|m| m.submatrix(&rows, &cols)).collect();
    if let Some(&k) = drop_mats.iter().find(|&&k| !shrunk[k].is_zero()) {
        return Err(Error::NonzeroMatrixDropped(k));
    }
    let sub = Pencil::new(
        pen.zp(),
        rows.len(),
        cols.len(),
        keep.iter().map(|&k| shrunk[k].clone()).collect(),
    )?;
    let p = pen.p();
    let n = rows.len() + cols.len();
    let mut t = MatFp::zeros(p, n, r + s);
    for (i, &ri) in rows.iter().enumerate() {
        t[(i, ri)] = 1;
    }
    for (j, &cj) in cols.iter().enumerate() {
        t[(rows.len() + j, r + cj)] = 1;
    }
    let mut d = MatFp::zeros(p, keep.len(), g);
    for (i, &k) in keep.iter().enumerate() {
        d[(i, k)] = 1;
    }
    let tau = MatFp::zeros(p, n, g);
    let hom = GroupHom::new(sub.clone(), pen.clone(), t, d, tau)?;
    Ok((sub, hom))
}

/// Quotient `B(sum_j A_1j L_j, ..., sum_j A_g'j L_j)`; the map sends `c` to `c A^t`.
pub fn combine(pen: &Pencil, a: &MatFp) -> Result<(Pencil, GroupHom)> {
    if a.cols() != pen.g() {
        return Err(Error::DimensionMismatch(format!(
            "combination matrix has {} columns, pencil has {} matrices",
            a.cols(),
            pen.g()
        )));
    }
    let p = pen.p();
    let mats: Vec<MatFp> = (0..a.rows())
        .map(|i| {
            pen.mats()
                .iter()
                .enumerate()
                .fold(MatFp::zeros(p, pen.r(), pen.s()), |acc, (j, l)| acc.add(&l.scale(a[(i, j)])))
        })
        .collect();
    let q = Pencil::new(pen.zp(), pen.r(), pen.s(), mats)?;
    let n = pen.r() + pen.s();
    let hom = GroupHom::new(
        pen.clone(),
        q.clone(),
        MatFp::identity(p, n),
        a.transpose(),
        MatFp::zeros(p, n, a.rows()),
    )?;
    Ok((q, hom))
}

/// Isomorphic pencil `(x L_k y^t)`; the map is `(a, b, c) -> (a x^{-1}, b y^{-1}, c)`.
pub fn transform(pen: &Pencil, x: &MatFp, y: &MatFp) -> Result<(Pencil, GroupHom)> {
    if x.rows() != pen.r() || y.rows() != pen.s() {
        return Err(Error::DimensionMismatch(format!(
            "transform needs {}x{} and {}x{} matrices",
            pen.r(),
            pen.r(),
            pen.s(),
            pen.s()
        )));
    }
    let xi = x.inverse().ok_or(Error::Singular)?;
    let yi = y.inverse().ok_or(Error::Singular)?;
    let yt = y.transpose();
    let mats = pen.mats().iter().map(|l| x.mul(l).mul(&yt)).collect();
    let q = Pencil::new(pen.zp(), pen.r(), pen.s(), mats)?;
    let p = pen.p();
    let hom = GroupHom::new(
        pen.clone(),
        q.clone(),
        MatFp::block_diag(&[xi, yi], p),
        MatFp::identity(p, pen.g()),
        MatFp::zeros(p, pen.r() + pen.s(), pen.g()),
    )?;
    Ok((q, hom))
}

/// Keep a maximal independent subset of the matrices (the first of each
/// dependency chain). The map is the natural surjection.
pub fn reduce(pen: &Pencil) -> Result<(Pencil, GroupHom)> {
    let piv = rref(&pen.flattened().transpose()).pivots;
    let mut a = MatFp::zeros(pen.p(), piv.len(), pen.g());
    for (i, &k) in piv.iter().enumerate() {
        a[(i, k)] = 1;
    }
    combine(pen, &a)
}

/// `B(I_n, C(a))` with the standard companion matrix.
pub fn companion_pencil(a: &Poly) -> Result<Pencil> {
    let c = companion_std(a)?;
    let n = c.rows();
    Pencil::new(a.zp(), n, n, vec![MatFp::identity(a.zp().p(), n), c])
}

// Strips `[I_{n-1} | 0]` and `[0 | I_{n-1}]` of shape `(n-1) x n`.
fn strip_pencil(a: &Poly, n: usize) -> Result<Pencil> {
    let p = a.zp().p();
    let e1 = MatFp::from_fn(p, n - 1, n, |i, j| (i == j) as u32);
    let e2 = MatFp::from_fn(p, n - 1, n, |i, j| (j == i + 1) as u32);
    Pencil::new(a.zp(), n - 1, n, vec![e1, e2])
}

/// Embedding `B(I_f, C(b)) -> B(I_e, C(a))` for `deg b = f < e = deg a`.
///
/// Insert a column to reach `([I_f | 0], [C(b) | e_f])`, which equals the pair of
/// strips times `y = [[I_f, 0], [-b_0 .. -b_{f-1}, 1]]`; undo `y`, pad the strips
/// with zero rows and columns up to size `e - 1`, and finally add the last row of
/// `(I_e, C(a))`.
pub fn embed_lower(b: &Poly, a: &Poly) -> Result<GroupHom> {
    let f = b.degree().unwrap_or(0);
    let e = a.degree().unwrap_or(0);
    if f == 0 || f >= e {
        return Err(Error::InvalidDegree(format!(
            "need 1 <= deg b < deg a, got deg b = {f}, deg a = {e}"
        )));
    }
    let zp = a.zp();
    let p = zp.p();
    let small = companion_pencil(b)?;
    let big = companion_pencil(a)?;

    let cb = companion_std(b)?;
    let l1 = MatFp::identity(p, f).hstack(&MatFp::zeros(p, f, 1));
    let last = MatFp::from_fn(p, f, 1, |i, _| (i == f - 1) as u32);
    let l2 = cb.hstack(&last);
    let padded = Pencil::new(zp, f, f + 1, vec![l1, l2])?;
    let (q, incl1) = eliminate(&padded, &[], &[f], &[])?;
    if q != small {
        return Err(Error::Internal("column insertion does not restore the small pencil".into()));
    }

    let y = MatFp::from_fn(p, f + 1, f + 1, |i, j| {
        if i < f {
            (i == j) as u32
        } else if j < f {
            zp.neg(b.coeff(j))
        } else {
            1
        }
    });
    let yit = y.inverse().ok_or(Error::Singular)?.transpose();
    let (strips_small, iso) = transform(&padded, &MatFp::identity(p, f), &yit)?;
    if strips_small != strip_pencil(a, f + 1)? {
        return Err(Error::Internal("basis change does not produce the strips".into()));
    }

    let strips_big = strip_pencil(a, e)?;
    let rows: Vec<usize> = (f..e - 1).collect();
    let cols: Vec<usize> = (f + 1..e).collect();
    let (q, incl3) = eliminate(&strips_big, &rows, &cols, &[])?;
    if q != strips_small {
        return Err(Error::Internal("strip padding mismatch".into()));
    }
    let (q, incl4) = eliminate(&big, &[e - 1], &[], &[])?;
    if q != strips_big {
        return Err(Error::Internal("last-row deletion does not give the strips".into()));
    }
    incl1.then(&iso)?.then(&incl3)?.then(&incl4)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::brahana::descriptor;
    use crate::ff::Zp;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn z3() -> Zp {
        Zp::new(3).unwrap()
    }

    fn poly(s: &str) -> Poly {
        Poly::parse(z3(), s).unwrap()
    }

    fn assert_hom_on_random(h: &GroupHom, rng: &mut ChaCha8Rng, n: usize) {
        assert!(h.is_homomorphism());
        for _ in 0..n {
            let x = h.source.random_elem(rng);
            let y = h.source.random_elem(rng);
            assert_eq!(
                h.apply(&h.source.multiply(&x, &y)),
                h.target.multiply(&h.apply(&x), &h.apply(&y))
            );
        }
    }

    #[test]
    fn eliminate_examples() {
        let pen = Pencil::from_mats(z3(), vec![MatFp::parse(3, "1,0").unwrap(), MatFp::parse(3, "0,1").unwrap()]).unwrap();
        let (same, h) = eliminate(&pen, &[], &[], &[]).unwrap();
        assert_eq!(same, pen);
        assert!(h.is_isomorphism());
        assert!(matches!(eliminate(&pen, &[], &[], &[1]), Err(Error::NonzeroMatrixDropped(1))));
        let (q, h1) = eliminate(&pen, &[], &[1], &[]).unwrap();
        assert_eq!(q.mats()[1].to_text(), "0");
        let (q2, h2) = eliminate(&q, &[], &[], &[1]).unwrap();
        assert_eq!(q2, Pencil::from_mats(z3(), vec![MatFp::identity(3, 1)]).unwrap());
        let chain = h2.then(&h1).unwrap();
        assert!(chain.is_injective());
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        assert_hom_on_random(&chain, &mut rng, 30);
    }

    #[test]
    fn maximal_subgroup_of_companion_pencil() {
        let g = companion_pencil(&poly("1,2,0,1")).unwrap();
        let (m, h) = eliminate(&g, &[2], &[], &[]).unwrap();
        assert!(h.is_injective());
        let dm = descriptor(&m).unwrap();
        assert_eq!(dm.min_generators, 5);
        assert_eq!(descriptor(&g).unwrap().min_generators, 1 + dm.min_generators);
    }

    #[test]
    fn combine_and_transform_witnesses() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let pen = Pencil::from_mats(
            z3(),
            vec![MatFp::parse(3, "1,0;0,2").unwrap(), MatFp::parse(3, "0,1;1,0").unwrap()],
        )
        .unwrap();
        let (q, h) = combine(&pen, &MatFp::identity(3, 2)).unwrap();
        assert_eq!(q, pen);
        assert!(h.is_isomorphism());
        let (q, h) = combine(&pen, &MatFp::parse(3, "1,0").unwrap()).unwrap();
        assert_eq!(q.mats(), &pen.mats()[..1]);
        assert!(h.is_surjective() && !h.is_injective());
        assert_hom_on_random(&h, &mut rng, 30);
        let x = MatFp::parse(3, "1,1;0,1").unwrap();
        let y = MatFp::parse(3, "2,0;1,1").unwrap();
        let (q, h) = transform(&pen, &x, &y).unwrap();
        assert!(h.is_isomorphism());
        assert_hom_on_random(&h, &mut rng, 30);
        assert_eq!(descriptor(&q).unwrap(), descriptor(&pen).unwrap());
        assert!(matches!(transform(&pen, &MatFp::zeros(3, 2, 2), &y), Err(Error::Singular)));
        let (same, _) = transform(&pen, &MatFp::identity(3, 2), &MatFp::identity(3, 2)).unwrap();
        assert_eq!(same, pen);
    }

    #[test]
    fn reduce_drops_dependent_matrices() {
        let a = MatFp::parse(3, "1,0;0,1").unwrap();
        let b = MatFp::parse(3, "0,1;0,0").unwrap();
        let pen = Pencil::from_mats(z3(), vec![a.clone(), b.clone(), a.add(&b)]).unwrap();
        assert!(!pen.is_reduced());
        let (q, h) = reduce(&pen).unwrap();
        assert_eq!(q.mats(), &[a, b]);
        assert!(q.is_reduced());
        assert!(h.is_surjective());
    }

    #[test]
    fn strip_times_y_matches_displays() {
        // [I | 0] y = [I | 0] and [0 | I] y = [C'(b) with last row (b, 1)].
        let e = 4;
        let bcoef = [2u32, 0, 1];
        let y = MatFp::from_fn(3, e, e, |i, j| {
            if i < e - 1 {
                (i == j) as u32
            } else if j < e - 1 {
                bcoef[j]
            } else {
                1
            }
        });
        let s = strip_pencil(&poly("1,0,0,0,1"), e).unwrap();
        assert_eq!(s.mats()[0].mul(&y), s.mats()[0]);
        assert_eq!(s.mats()[1].mul(&y).to_text(), "0,1,0,0;0,0,1,0;2,0,1,1");
    }

    #[test]
    fn embeddings_are_injective_homomorphisms() {
        let h = embed_lower(&poly("0,1"), &poly("1,0,1")).unwrap();
        assert!(h.is_homomorphism() && h.is_injective());
        for i in 0..27 {
            for j in 0..27 {
                let x = h.source.elem_from_index(i);
                let y = h.source.elem_from_index(j);
                assert_eq!(
                    h.apply(&h.source.multiply(&x, &y)),
                    h.target.multiply(&h.apply(&x), &h.apply(&y))
                );
            }
        }
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let cubic = poly("1,2,0,1");
        let h2 = embed_lower(&poly("1,0,1"), &cubic).unwrap();
        let both = h.then(&h2).unwrap();
        assert!(both.is_injective());
        assert_hom_on_random(&both, &mut rng, 50);
        for _ in 0..20 {
            let f = rng.gen_range(1..4);
            let mut bc: Vec<u32> = (0..f).map(|_| rng.gen_range(0..3)).collect();
            bc.push(1);
            let h = embed_lower(&Poly::new(z3(), bc), &poly("1,0,0,2,0,1")).unwrap();
            assert!(h.is_injective());
            assert_hom_on_random(&h, &mut rng, 10);
        }
        assert!(embed_lower(&cubic, &poly("1,0,1")).is_err());
    }
}
