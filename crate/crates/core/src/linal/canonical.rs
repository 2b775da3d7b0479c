use serde::{Deserialize, Serialize};

use super::{left_kernel, solve_linear, MatFp, Subspace};
use crate::ff::Poly;
use crate::{Error, Result};

/// `a(m)` by Horner's rule.
pub fn poly_eval_mat(a: &Poly, m: &MatFp) -> MatFp {
    assert!(m.is_square());
    let n = m.rows();
    let mut acc = MatFp::zeros(m.p(), n, n);
    for c in a.coeffs().iter().rev() {
        acc = acc.mul(m).add(&MatFp::scalar(m.p(), n, *c));
    }
    acc
}

/// `v * a(m)` without forming `a(m)`.
pub fn vec_poly_mul(v: &[u32], a: &Poly, m: &MatFp) -> Vec<u32> {
    let zp = m.zp();
    let mut acc = vec![0; v.len()];
    let mut w = v.to_vec();
    for c in a.coeffs() {
        acc = zp.add_vec(&acc, &zp.scale_vec(*c, &w));
        w = m.vec_mul(&w);
    }
    acc
}

/// Monic generator of `{a : v * a(m) = 0}`.
pub fn local_min_poly(v: &[u32], m: &MatFp) -> Poly {
    let zp = m.zp();
    let n = m.rows();
    let mut krylov: Vec<Vec<u32>> = Vec::new();
    let mut w = v.to_vec();
    loop {
        if krylov.is_empty() {
            if w.iter().all(|x| *x == 0) {
                return Poly::one(zp);
            }
        } else {
            // Solve c * K = w, i.e. K^t c^t = w^t.
            let k = MatFp::from_rows(m.p(), n, &krylov).transpose();
            let sol = solve_linear(&k, &w).expect("shapes agree");
            if let Some(c) = sol.particular {
                let mut coeffs: Vec<u32> = c.iter().map(|x| zp.neg(*x)).collect();
                coeffs.push(1);
                return Poly::new(zp, coeffs);
            }
        }
        krylov.push(w.clone());
        w = m.vec_mul(&w);
    }
}

/// Minimal polynomial: lcm of the local minimal polynomials of a basis.
pub fn min_poly(m: &MatFp) -> Poly {
    assert!(m.is_square(), "min_poly needs a square matrix");
    let zp = m.zp();
    let n = m.rows();
    let mut acc = Poly::one(zp);
    for i in 0..n {
        let mut e = vec![0; n];
        e[i] = 1;
        acc = acc.lcm(&local_min_poly(&e, m));
    }
    acc
}

/// Companion matrix with ones on the superdiagonal and last row `-a_0, ..., -a_{e-1}`,
/// so that its minimal polynomial is `a`.
pub fn companion_std(a: &Poly) -> Result<MatFp> {
    let zp = a.zp();
    let e = match a.degree() {
        Some(d) if d >= 1 => d,
        _ => return Err(Error::InvalidDegree(format!("companion matrix of {a} needs degree >= 1"))),
    };
    if !a.is_monic() {
        return Err(Error::NotMonic(a.to_string()));
    }
    let mut c = MatFp::zeros(zp.p(), e, e);
    for i in 0..e - 1 {
        c[(i, i + 1)] = 1;
    }
    for j in 0..e {
        c[(e - 1, j)] = zp.neg(a.coeff(j));
    }
    Ok(c)
}

pub fn poly_irreducible(a: &Poly) -> bool {
    a.is_irreducible()
}

/// Rational canonical form `x^{-1} m x = C(a_1) + ... + C(a_k)` with `a_1 | a_2 | ... | a_k`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FrobeniusForm {
    pub x: MatFp,
    pub factors: Vec<Poly>,
}

impl FrobeniusForm {
    pub fn block_sum(&self) -> MatFp {
        let p = self.x.p();
        let blocks: Vec<MatFp> = self.factors.iter().map(|a| companion_std(a).expect("monic factor")).collect();
        MatFp::block_diag(&blocks, p)
    }
}

pub fn frobenius_normal_form(m: &MatFp) -> FrobeniusForm {
    assert!(m.is_square(), "frobenius_normal_form needs a square matrix");
    let (y, mut factors) = cyclic_decomposition(m);
    // Blocks come out largest first; reverse into a divisor chain.
    factors.reverse();
    let mut order = Vec::new();
    let mut start = m.rows();
    for f in &factors {
        let d = f.degree().unwrap();
        start -= d;
        order.extend(start..start + d);
    }
    let y = y.select_rows(&order);
    let x = y.inverse().expect("cyclic basis is invertible");
    FrobeniusForm { x, factors }
}

// Returns `y` and factors `f_1, f_2, ...` (each dividing the previous) with
// `y m y^{-1}` the block sum of their companions.
fn cyclic_decomposition(m: &MatFp) -> (MatFp, Vec<Poly>) {
    let p = m.p();
    let n = m.rows();
    if n == 0 {
        return (MatFp::zeros(p, 0, 0), Vec::new());
    }
    let (v, f) = maximal_vector(m);
    let d = f.degree().unwrap();
    let mut w = Vec::with_capacity(d);
    let mut cur = v;
    for _ in 0..d {
        w.push(cur.clone());
        cur = m.vec_mul(&cur);
    }
    let wm = MatFp::from_rows(p, n, &w);
    if d == n {
        return (wm, vec![f]);
    }
    // Functional phi with phi(w_i) = 0 for i < d - 1 and phi(w_{d-1}) = 1.
    let mut target = vec![0; d];
    target[d - 1] = 1;
    let phi = solve_linear(&wm, &target)
        .expect("shapes agree")
        .particular
        .expect("krylov rows independent");
    // Complement U = {u : u m^i phi = 0 for i < d}.
    let mut cols = Vec::with_capacity(d);
    let mut c = phi;
    let mt = m.transpose();
    for _ in 0..d {
        cols.push(c.clone());
        c = mt.vec_mul(&c);
    }
    let kmat = MatFp::from_rows(p, n, &cols).transpose();
    let u: Subspace = left_kernel(&kmat);
    debug_assert_eq!(u.dim(), n - d);
    let b = u.basis().clone();
    let piv = u.pivots();
    let bm = b.mul(m);
    let mu = bm.submatrix(&(0..b.rows()).collect::<Vec<_>>(), &piv);
    let (yu, mut rest) = cyclic_decomposition(&mu);
    let lifted = yu.mul(&b);
    let mut factors = vec![f];
    factors.append(&mut rest);
    (wm.vstack(&lifted), factors)
}

// A vector whose local minimal polynomial equals the minimal polynomial of `m`.
fn maximal_vector(m: &MatFp) -> (Vec<u32>, Poly) {
    let n = m.rows();
    let zp = m.zp();
    let mut v = vec![0; n];
    let mut g = Poly::one(zp);
    for i in 0..n {
        let mut e = vec![0; n];
        e[i] = 1;
        let h = local_min_poly(&e, m);
        if h.divides(&g) {
            continue;
        }
        // Split lcm(g, h) = g1 * h1 with g1 | g, h1 | h, gcd(g1, h1) = 1.
        let dd = g.gcd(&h);
        let mut g1 = g.clone();
        let mut h1 = h.div_rem(&dd).unwrap().0;
        loop {
            let c = g1.gcd(&h1);
            if c.is_one() {
                break;
            }
            g1 = g1.div_rem(&c).unwrap().0;
            h1 = h1.mul(&c);
        }
        let gq = g.div_rem(&g1).unwrap().0;
        let hq = h.div_rem(&h1).unwrap().0;
        let a = vec_poly_mul(&v, &gq, m);
        let b = vec_poly_mul(&e, &hq, m);
        v = zp.add_vec(&a, &b);
        g = g1.mul(&h1);
        debug_assert_eq!(local_min_poly(&v, m), g);
    }
    (v, g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ff::Zp;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn z3() -> Zp {
        Zp::new(3).unwrap()
    }

    fn random_mat(rng: &mut ChaCha8Rng, p: u32, n: usize) -> MatFp {
        MatFp::from_fn(p, n, n, |_, _| rng.gen_range(0..p))
    }

    fn random_invertible(rng: &mut ChaCha8Rng, p: u32, n: usize) -> MatFp {
        loop {
            let m = random_mat(rng, p, n);
            if m.is_invertible() {
                return m;
            }
        }
    }

    #[test]
    fn min_poly_examples() {
        let s = MatFp::scalar(5, 3, 2);
        assert_eq!(min_poly(&s), Poly::from_signed(Zp::new(5).unwrap(), &[-2, 1]));
        let m = MatFp::parse(3, "0,1;1,0").unwrap();
        assert_eq!(min_poly(&m), Poly::from_signed(z3(), &[-1, 0, 1]));
        assert!(poly_eval_mat(&min_poly(&m), &m).is_zero());
    }

    #[test]
    fn companion_examples() {
        let a = Poly::parse(z3(), "1,0,1").unwrap();
        assert_eq!(companion_std(&a).unwrap().to_text(), "0,1;2,0");
        let b = Poly::parse(z3(), "1,2,0,1").unwrap();
        let c = companion_std(&b).unwrap();
        assert_eq!(c.row(2), &[2, 1, 0]);
        assert_eq!(min_poly(&c), b);
        let lin = Poly::from_signed(z3(), &[-2, 1]);
        assert_eq!(companion_std(&lin).unwrap().to_text(), "2");
        assert!(matches!(
            companion_std(&Poly::parse(z3(), "1,2").unwrap()),
            Err(Error::NotMonic(_))
        ));
        assert!(companion_std(&Poly::one(z3())).is_err());
    }

    #[test]
    fn companion_min_poly_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let deg = rng.gen_range(1..=5);
            let mut coeffs: Vec<u32> = (0..deg).map(|_| rng.gen_range(0..3)).collect();
            coeffs.push(1);
            let a = Poly::new(z3(), coeffs);
            let c = companion_std(&a).unwrap();
            assert_eq!(min_poly(&c), a);
            assert!(poly_eval_mat(&a, &c).is_zero());
        }
    }

    #[test]
    fn irreducible_examples() {
        assert!(poly_irreducible(&Poly::parse(z3(), "1,0,1").unwrap()));
        assert!(!poly_irreducible(&Poly::from_signed(z3(), &[-1, 0, 1])));
    }

    #[test]
    fn fnf_examples() {
        let a = Poly::parse(z3(), "1,0,1").unwrap();
        let c = companion_std(&a).unwrap();
        let f = frobenius_normal_form(&c);
        assert_eq!(f.factors, vec![a]);
        let d = MatFp::diag(3, &[0, 1, 2]);
        let f = frobenius_normal_form(&d);
        assert_eq!(f.factors, vec![Poly::parse(z3(), "0,2,0,1").unwrap()]);
        let s = MatFp::scalar(3, 3, 2);
        let f = frobenius_normal_form(&s);
        assert_eq!(f.factors.len(), 3);
        assert_eq!(f.x.inverse().unwrap().mul(&s).mul(&f.x), f.block_sum());
    }

    #[test]
    fn fnf_multiply_back_and_invariance() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for round in 0..200 {
            let n = 1 + round % 6;
            let p = [3, 5, 7][round % 3];
            // Mix in low-rank and repeated-eigenvalue matrices.
            let m = match round % 4 {
                0 => random_mat(&mut rng, p, n),
                1 => {
                    let a = random_mat(&mut rng, p, n);
                    a.mul(&MatFp::diag(p, &vec![0; n])).add(&MatFp::scalar(p, n, 1))
                }
                2 => {
                    let q = random_invertible(&mut rng, p, n);
                    let entries: Vec<u32> = (0..n).map(|i| (i % 2) as u32).collect();
                    q.inverse().unwrap().mul(&MatFp::diag(p, &entries)).mul(&q)
                }
                _ => {
                    let a = random_mat(&mut rng, p, n);
                    a.mul(&a)
                }
            };
            let f = frobenius_normal_form(&m);
            assert_eq!(f.x.inverse().unwrap().mul(&m).mul(&f.x), f.block_sum());
            for w in f.factors.windows(2) {
                assert!(w[0].divides(&w[1]));
            }
            assert_eq!(f.factors.last().unwrap(), &min_poly(&m));
            let q = random_invertible(&mut rng, p, n);
            let conj = q.inverse().unwrap().mul(&m).mul(&q);
            assert_eq!(frobenius_normal_form(&conj).factors, f.factors);
        }
    }
}
