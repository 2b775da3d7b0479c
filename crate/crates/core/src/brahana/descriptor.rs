use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::Pencil;
use crate::linal::{left_kernel, MatFp};
use crate::{Error, Result};

/// Largest `p^{r+s}` for which conjugacy class sizes are enumerated.
pub const CLASS_ENUM_BOUND: u128 = 20_000_000;

/// Isomorphism invariants of `B(L)`, all read off the commutation bimap.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupDescriptor {
    pub p: u32,
    pub log_order: usize,
    /// `d(G) = log_p |G : Φ(G)|`.
    pub min_generators: usize,
    pub log_frattini_index: usize,
    pub log_center: usize,
    pub log_derived: usize,
    pub exponent: u64,
    /// Noncentral class size mapped to the number of classes of that size.
    pub noncentral_classes: BTreeMap<u128, u128>,
}

impl GroupDescriptor {
    pub fn order(&self) -> u128 {
        (self.p as u128).pow(self.log_order as u32)
    }

    pub fn center_order(&self) -> u128 {
        (self.p as u128).pow(self.log_center as u32)
    }

    pub fn derived_order(&self) -> u128 {
        (self.p as u128).pow(self.log_derived as u32)
    }
}

/// Radical `{u : u Ω_k = 0 for all k}` of the commutation bimap, as a dimension.
pub fn radical_dim(pen: &Pencil) -> usize {
    let n = pen.r() + pen.s();
    if pen.g() == 0 {
        return n;
    }
    let stacked = pen.omegas().iter().skip(1).fold(pen.omega(0), |acc, m| acc.hstack(m));
    left_kernel(&stacked).dim()
}

pub fn descriptor(pen: &Pencil) -> Result<GroupDescriptor> {
    let p = pen.p();
    let n = pen.r() + pen.s();
    let g = pen.g();
    let rank = pen.rank();
    let log_order = n + g;
    // Exponent p gives Φ(G) = G' G^p = G'.
    let min_generators = log_order - rank;
    let log_center = radical_dim(pen) + g;
    let total = (p as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
    if total > CLASS_ENUM_BOUND {
        return Err(Error::ScaleGuard {
            what: "p^(r+s) for class sizes".into(),
            value: total,
            bound: CLASS_ENUM_BOUND,
        });
    }
    let omegas = pen.omegas();
    let pg = (p as u128).pow(g as u32);
    // Elements per class size; each u accounts for p^g elements.
    let mut by_size: BTreeMap<u128, u128> = BTreeMap::new();
    let mut u = vec![0u32; n];
    for _ in 0..total {
        let cols: Vec<Vec<u32>> = omegas.iter().map(|om| om.vec_mul(&u)).collect();
        let rk = if g == 0 { 0 } else { MatFp::from_rows(p, n, &cols).rank() };
        if rk > 0 {
            *by_size.entry((p as u128).pow(rk as u32)).or_default() += pg;
        }
        for x in u.iter_mut().rev() {
            *x += 1;
            if *x < p {
                break;
            }
            *x = 0;
        }
    }
    let noncentral_classes = by_size.into_iter().map(|(size, elems)| (size, elems / size)).collect();
    Ok(GroupDescriptor {
        p,
        log_order,
        min_generators,
        log_frattini_index: min_generators,
        log_center,
        log_derived: rank,
        exponent: if log_order == 0 { 1 } else { p as u64 },
        noncentral_classes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ff::Zp;
    use std::collections::BTreeSet;

    #[test]
    fn heisenberg_z3_by_enumeration() {
        let zp = Zp::new(3).unwrap();
        let pen = Pencil::from_mats(zp, vec![MatFp::identity(3, 1)]).unwrap();
        let d = descriptor(&pen).unwrap();
        assert_eq!(d.order(), 27);
        assert_eq!(d.min_generators, 2);
        assert_eq!(d.derived_order(), 3);
        assert_eq!(d.center_order(), 3);
        assert_eq!(d.exponent, 3);
        assert_eq!(d.noncentral_classes, BTreeMap::from([(3, 8)]));
        // Brute force over all 27 elements.
        let elems: Vec<_> = (0..27).map(|i| pen.elem_from_index(i)).collect();
        let center = elems
            .iter()
            .filter(|x| elems.iter().all(|y| pen.commutator(x, y).is_identity()))
            .count();
        assert_eq!(center, 3);
        let mut classes = BTreeSet::new();
        for x in &elems {
            let cls: BTreeSet<_> = elems.iter().map(|y| pen.conjugate(x, y)).collect();
            classes.insert(cls);
        }
        let sizes: Vec<usize> = classes.iter().map(|c| c.len()).filter(|s| *s > 1).collect();
        assert_eq!(sizes, vec![3; 8]);
    }

    #[test]
    fn center_of_genus_two_heisenberg_quotient() {
        // B(I_2, C(t^2 + 1)) over Z_3 is H(F_9): |Z| = |G'| = 9.
        let zp = Zp::new(3).unwrap();
        let c = MatFp::parse(3, "0,1;2,0").unwrap();
        let pen = Pencil::from_mats(zp, vec![MatFp::identity(3, 2), c]).unwrap();
        assert_eq!(radical_dim(&pen), 0);
        let d = descriptor(&pen).unwrap();
        assert_eq!((d.log_center, d.log_derived, d.min_generators), (2, 2, 4));
        assert_eq!(d.noncentral_classes, BTreeMap::from([(9, 80)]));
        // One matrix of rank 1 on 2x3: radical has dimension 5 - 2.
        let l = MatFp::parse(3, "1,0,0;0,0,0").unwrap();
        assert_eq!(radical_dim(&Pencil::from_mats(zp, vec![l]).unwrap()), 3);
    }

    #[test]
    fn genus_zero_is_elementary_abelian() {
        let zp = Zp::new(5).unwrap();
        let pen = Pencil::new(zp, 2, 1, vec![]).unwrap();
        let d = descriptor(&pen).unwrap();
        assert_eq!(d.log_order, 3);
        assert_eq!(d.min_generators, 3);
        assert_eq!(d.log_center, 3);
        assert!(d.noncentral_classes.is_empty());
    }
}
