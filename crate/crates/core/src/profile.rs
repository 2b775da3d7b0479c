//! Subgroup and quotient profiles.
//!
//! Small Brahana groups are tabulated and all their subgroups enumerated by
//! extending each subgroup `S` by elements `g` that normalize it with
//! `g^p ∈ S`; in a `p`-group every subgroup arises this way from one of its
//! maximal subgroups. Subgroups are classified by [`Fingerprint`], a tuple of
//! isomorphism invariants standing in for isomorphism type.

use std::collections::{BTreeMap, HashMap};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::brahana::{combine, descriptor, eliminate, GroupDescriptor, GroupElem, GroupHom, Pencil};
use crate::heisenberg::FamilyMember;
use crate::linal::{MatFp, Subspace};
use crate::tensoradj::is_heisenberg_quotient;
use crate::{Error, Result};

/// Default bound on tabulated group orders (`3^6`).
pub const DEFAULT_ORDER_BOUND: usize = 729;
/// Default bound on candidate extensions examined while enumerating subgroups.
pub const DEFAULT_BUDGET: u64 = 1_000_000;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
struct Bits(Vec<u64>);

impl Bits {
    fn new(n: usize) -> Self {
        Bits(vec![0; n.div_ceil(64)])
    }

    fn get(&self, i: usize) -> bool {
        self.0[i / 64] >> (i % 64) & 1 == 1
    }

    fn set(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }

    fn count(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }

    fn and_count(&self, other: &Bits) -> usize {
        self.0.iter().zip(&other.0).map(|(a, b)| (a & b).count_ones() as usize).sum()
    }

    fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.0
            .iter()
            .enumerate()
            .flat_map(|(w, &bits)| (0..64).filter(move |b| bits >> b & 1 == 1).map(move |b| w * 64 + b))
    }
}

/// A Brahana group with its multiplication table; element `i` is `pencil.elem_from_index(i)`.
pub struct SmallGroup {
    pencil: Pencil,
    n: usize,
    table: Vec<u32>,
    inv: Vec<u32>,
}

impl SmallGroup {
    pub fn new(pencil: &Pencil, order_bound: usize) -> Result<Self> {
        let order = pencil.order();
        if order > order_bound as u128 {
            return Err(Error::ScaleGuard {
                what: "group order".into(),
                value: order,
                bound: order_bound as u128,
            });
        }
        let n = order as usize;
        let elems: Vec<GroupElem> = (0..n).map(|i| pencil.elem_from_index(i as u128)).collect();
        let table: Vec<u32> = (0..n * n)
            .into_par_iter()
            .map(|k| pencil.index_of(&pencil.multiply(&elems[k / n], &elems[k % n])) as u32)
            .collect();
        let inv = elems.iter().map(|x| pencil.index_of(&pencil.inverse(x)) as u32).collect();
        Ok(SmallGroup {
            pencil: pencil.clone(),
            n,
            table,
            inv,
        })
    }

    pub fn pencil(&self) -> &Pencil {
        &self.pencil
    }

    pub fn p(&self) -> u32 {
        self.pencil.p()
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn elem(&self, i: usize) -> GroupElem {
        self.pencil.elem_from_index(i as u128)
    }

    pub fn index_of(&self, x: &GroupElem) -> usize {
        self.pencil.index_of(x) as usize
    }

    pub fn mul(&self, x: usize, y: usize) -> usize {
        self.table[x * self.n + y] as usize
    }

    pub fn inv(&self, x: usize) -> usize {
        self.inv[x] as usize
    }

    fn pow(&self, x: usize, k: u64) -> usize {
        (0..k).fold(0, |acc, _| self.mul(acc, x))
    }

    /// `x^{-1} y^{-1} x y`.
    fn comm(&self, x: usize, y: usize) -> usize {
        self.mul(self.mul(self.inv(x), self.inv(y)), self.mul(x, y))
    }

    fn closure(&self, gens: &[usize]) -> Bits {
        let mut bits = Bits::new(self.n);
        bits.set(0);
        let mut stack = vec![0];
        while let Some(x) = stack.pop() {
            for &g in gens {
                let y = self.mul(x, g);
                if !bits.get(y) {
                    bits.set(y);
                    stack.push(y);
                }
            }
        }
        bits
    }

    /// Subgroup generated by `candidates`, growing a generator list greedily.
    fn generate(&self, candidates: impl IntoIterator<Item = usize>) -> (Bits, Vec<usize>) {
        let mut gens = Vec::new();
        let mut bits = self.closure(&gens);
        for c in candidates {
            if !bits.get(c) {
                gens.push(c);
                bits = self.closure(&gens);
            }
        }
        (bits, gens)
    }

    pub fn whole(&self) -> SubgroupSet {
        let (bits, gens) = self.generate(0..self.n);
        SubgroupSet::from_bits(bits, gens)
    }

    pub fn trivial(&self) -> SubgroupSet {
        SubgroupSet::from_bits(self.closure(&[]), Vec::new())
    }

    pub fn subgroup(&self, gens: &[usize]) -> SubgroupSet {
        let (bits, gens) = self.generate(gens.iter().copied());
        SubgroupSet::from_bits(bits, gens)
    }

    /// `[K, K]`, generated by `[x, g]` for `x ∈ K` and generators `g` of `K`.
    pub fn derived(&self, k: &SubgroupSet) -> SubgroupSet {
        let cands: Vec<usize> = k
            .bits
            .ones()
            .flat_map(|x| k.gens.iter().map(move |&g| (x, g)))
            .map(|(x, g)| self.comm(x, g))
            .collect();
        let (bits, gens) = self.generate(cands);
        SubgroupSet::from_bits(bits, gens)
    }

    /// `Φ(K) = K' K^p`.
    pub fn frattini(&self, k: &SubgroupSet) -> SubgroupSet {
        let p = self.p() as u64;
        let d = self.derived(k);
        let cands: Vec<usize> = d.gens.iter().copied().chain(k.bits.ones().map(|x| self.pow(x, p))).collect();
        let (bits, gens) = self.generate(cands);
        SubgroupSet::from_bits(bits, gens)
    }

    pub fn center(&self, k: &SubgroupSet) -> SubgroupSet {
        let cands: Vec<usize> = k
            .bits
            .ones()
            .filter(|&x| k.gens.iter().all(|&g| self.mul(x, g) == self.mul(g, x)))
            .collect();
        let (bits, gens) = self.generate(cands);
        SubgroupSet::from_bits(bits, gens)
    }

    fn elem_order(&self, x: usize) -> u64 {
        let mut y = x;
        let mut k = 1;
        while y != 0 {
            y = self.mul(y, x);
            k += 1;
        }
        k
    }

    pub fn fingerprint(&self, k: &SubgroupSet) -> Fingerprint {
        let p = self.p() as u64;
        let order = k.order as u64;
        let phi = self.frattini(k);
        let index = order / phi.order as u64;
        let d = (0..).find(|&i| p.pow(i) == index).expect("Frattini index is a power of p");
        let exponent = k.bits.ones().map(|x| self.elem_order(x)).max().unwrap_or(1);
        let mut classes: BTreeMap<u64, u64> = BTreeMap::new();
        let mut seen = Bits::new(self.n);
        for x in k.bits.ones() {
            if seen.get(x) {
                continue;
            }
            seen.set(x);
            let mut cls = vec![x];
            let mut i = 0;
            while i < cls.len() {
                for &g in &k.gens {
                    let y = self.mul(self.mul(self.inv(g), cls[i]), g);
                    if !seen.get(y) {
                        seen.set(y);
                        cls.push(y);
                    }
                }
                i += 1;
            }
            if cls.len() > 1 {
                *classes.entry(cls.len() as u64).or_default() += 1;
            }
        }
        Fingerprint {
            order,
            d,
            derived: self.derived(k).order as u64,
            center: self.center(k).order as u64,
            exponent,
            classes,
        }
    }

    /// All subgroups (with `gen_bound = None`) or those with `d(K) <= k`, ordered by
    /// order and then by element set. Fails once more than `budget` candidate
    /// extensions have been examined.
    pub fn enum_subgroups(&self, gen_bound: Option<u32>, budget: u64) -> Result<Vec<SubgroupSet>> {
        let p = self.p() as u64;
        let mut layer: Vec<SubgroupSet> = vec![self.trivial()];
        let mut all = Vec::new();
        let mut steps = 0u64;
        while !layer.is_empty() {
            steps += layer.iter().map(|s| (self.n / s.order) as u64 - 1).sum::<u64>();
            if steps > budget {
                return Err(Error::BudgetExceeded(budget));
            }
            let found: Vec<Vec<(Bits, Vec<usize>)>> = layer.par_iter().map(|s| self.extensions(s, p)).collect();
            let mut next: HashMap<Bits, Vec<usize>> = HashMap::new();
            for (bits, gens) in found.into_iter().flatten() {
                next.entry(bits).or_insert(gens);
            }
            all.append(&mut layer);
            let mut v: Vec<SubgroupSet> = next.into_iter().map(|(b, g)| SubgroupSet::from_bits(b, g)).collect();
            v.sort();
            layer = v;
        }
        if let Some(k) = gen_bound {
            all.retain(|s| self.fingerprint(s).d <= k);
        }
        Ok(all)
    }

    /// Subgroups `<S, g>` with `|<S, g> : S| = p`, one per coset of `S`.
    fn extensions(&self, s: &SubgroupSet, p: u64) -> Vec<(Bits, Vec<usize>)> {
        let mut covered = s.bits.clone();
        let mut out = Vec::new();
        let members: Vec<usize> = s.bits.ones().collect();
        for g in 0..self.n {
            if covered.get(g) {
                continue;
            }
            for &x in &members {
                covered.set(self.mul(g, x));
            }
            let gi = self.inv(g);
            let normalizes = s.gens.iter().all(|&h| s.bits.get(self.mul(self.mul(gi, h), g)));
            if !normalizes || !s.bits.get(self.pow(g, p)) {
                continue;
            }
            let mut bits = s.bits.clone();
            let mut gk = g;
            for _ in 1..p {
                for &x in &members {
                    bits.set(self.mul(gk, x));
                }
                gk = self.mul(gk, g);
            }
            let mut gens = s.gens.clone();
            gens.push(g);
            out.push((bits, gens));
        }
        out
    }

    /// Whether `h(xy) = h(x) h(y)` for every pair of elements of `self`, with `h` landing in `target`.
    pub fn is_hom_exhaustive(&self, target: &SmallGroup, h: &GroupHom) -> bool {
        if h.source != self.pencil || h.target != target.pencil {
            return false;
        }
        let img: Vec<usize> = (0..self.n).map(|i| target.index_of(&h.apply(&self.elem(i)))).collect();
        (0..self.n)
            .into_par_iter()
            .all(|x| (0..self.n).all(|y| img[self.mul(x, y)] == target.mul(img[x], img[y])))
    }

    /// `log_p |self : K Φ|` for a normal subgroup `phi`.
    fn log_index_mod(&self, k: &SubgroupSet, phi: &SubgroupSet) -> u32 {
        let p = self.p() as usize;
        let prod = k.order * phi.order / k.bits.and_count(&phi.bits);
        let index = self.n / prod;
        (0..).find(|&i| p.pow(i) == index).expect("index is a power of p")
    }
}

/// A subgroup as a set of element indices, with a generating set.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct SubgroupSet {
    order: usize,
    bits: Bits,
    gens: Vec<usize>,
}

impl SubgroupSet {
    fn from_bits(bits: Bits, gens: Vec<usize>) -> Self {
        SubgroupSet {
            order: bits.count(),
            bits,
            gens,
        }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn contains(&self, x: usize) -> bool {
        self.bits.get(x)
    }

    /// Sorted element indices; equal lists iff equal subgroups.
    pub fn elements(&self) -> Vec<usize> {
        self.bits.ones().collect()
    }

    pub fn generators(&self) -> &[usize] {
        &self.gens
    }
}

/// `(order, d(K), |K'|, |Z(K)|, exponent, noncentral class sizes with multiplicities)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Fingerprint {
    pub order: u64,
    pub d: u32,
    pub derived: u64,
    pub center: u64,
    pub exponent: u64,
    pub classes: BTreeMap<u64, u64>,
}

impl Fingerprint {
    pub fn from_descriptor(desc: &GroupDescriptor) -> Self {
        Fingerprint {
            order: desc.order() as u64,
            d: desc.min_generators as u32,
            derived: desc.derived_order() as u64,
            center: desc.center_order() as u64,
            exponent: desc.exponent,
            classes: desc.noncentral_classes.iter().map(|(s, c)| (*s as u64, *c as u64)).collect(),
        }
    }

    /// `Z_p^f`.
    pub fn elementary_abelian(p: u32, f: u32) -> Self {
        let order = (p as u64).pow(f);
        Fingerprint {
            order,
            d: f,
            derived: 1,
            center: order,
            exponent: if f == 0 { 1 } else { p as u64 },
            classes: BTreeMap::new(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ProfileBasis {
    /// Proper subgroups counted by enumeration.
    Brute,
    /// Predicted from a maximal subgroup.
    Formula,
    /// Proper quotients derived from the normal-subgroup structure.
    Structural,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProfileReport {
    pub basis: ProfileBasis,
    /// Serialized as a list of `[fingerprint, count]` pairs, since the keys are not strings.
    #[serde(with = "entries")]
    pub classes: BTreeMap<Fingerprint, u64>,
}

mod entries {
    use std::collections::BTreeMap;

    use serde::{Deserialize, Deserializer, Serializer};

    use super::Fingerprint;

    pub fn serialize<S: Serializer>(map: &BTreeMap<Fingerprint, u64>, ser: S) -> Result<S::Ok, S::Error> {
        ser.collect_seq(map.iter())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(de: D) -> Result<BTreeMap<Fingerprint, u64>, D::Error> {
        Ok(Vec::<(Fingerprint, u64)>::deserialize(de)?.into_iter().collect())
    }
}

/// One line of a serialized profile.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProfileRecord {
    pub order: u64,
    pub d: u32,
    pub derived: u64,
    pub center: u64,
    pub exponent: u64,
    /// `size^count` pairs separated by spaces.
    pub classes: String,
    pub count: u64,
}

impl ProfileReport {
    pub fn total(&self) -> u64 {
        self.classes.values().sum()
    }

    pub fn records(&self) -> Vec<ProfileRecord> {
        self.classes
            .iter()
            .map(|(f, &count)| ProfileRecord {
                order: f.order,
                d: f.d,
                derived: f.derived,
                center: f.center,
                exponent: f.exponent,
                classes: f
                    .classes
                    .iter()
                    .map(|(s, c)| format!("{s}^{c}"))
                    .collect::<Vec<_>>()
                    .join(" "),
                count,
            })
            .collect()
    }
}

/// Fingerprint counts over the proper subgroups of `g`.
pub fn brute_profile(g: &SmallGroup, subgroups: &[SubgroupSet]) -> ProfileReport {
    let fps: Vec<Fingerprint> = subgroups
        .par_iter()
        .filter(|k| k.order < g.order())
        .map(|k| g.fingerprint(k))
        .collect();
    let mut classes = BTreeMap::new();
    for f in fps {
        *classes.entry(f).or_default() += 1;
    }
    ProfileReport {
        basis: ProfileBasis::Brute,
        classes,
    }
}

/// Counts of all subgroups `K <= M` per fingerprint, split by `log_p |M : K Φ(M)|`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Stratification {
    pub p: u32,
    /// `d(M)`.
    pub d: u32,
    pub strata: BTreeMap<Fingerprint, BTreeMap<u32, u64>>,
}

pub fn stratify(m: &SmallGroup, subgroups: &[SubgroupSet]) -> Stratification {
    let phi = m.frattini(&m.whole());
    let rows: Vec<(Fingerprint, u32)> = subgroups
        .par_iter()
        .map(|k| (m.fingerprint(k), m.log_index_mod(k, &phi)))
        .collect();
    let mut strata: BTreeMap<Fingerprint, BTreeMap<u32, u64>> = BTreeMap::new();
    for (f, i) in rows {
        *strata.entry(f).or_default().entry(i).or_default() += 1;
    }
    let d = m.log_index_mod(&m.trivial(), &phi);
    Stratification { p: m.p(), d, strata }
}

/// Predicted subgroup profile of a group `G` with `d(G) = d_g` whose automorphisms are
/// transitive on maximal subgroups isomorphic to `M`:
///
/// `|{K < G : K ≅ J}| = Σ_{f=1}^{d(G)} (p^{d(G)} - 1)/(p^f - 1) · #{K <= M : K ≅ J, |M : KΦ(M)| = p^{f-1}}`.
pub fn formula_profile(m: Option<&Stratification>, d_g: u32) -> Result<ProfileReport> {
    let m = m.ok_or_else(|| Error::MissingStratification("maximal subgroup".into()))?;
    if m.d + 1 != d_g {
        return Err(Error::MissingStratification(format!(
            "need d(M) = d(G) - 1, got d(M) = {} and d(G) = {d_g}",
            m.d
        )));
    }
    let p = m.p as u64;
    let num = p.pow(d_g) - 1;
    let mut classes = BTreeMap::new();
    for (fp, strata) in &m.strata {
        let mut total = 0u64;
        for f in 1..=d_g {
            let deg = strata.get(&(f - 1)).copied().unwrap_or(0);
            total += exact_div(num * deg, p.pow(f) - 1)?;
        }
        if total > 0 {
            classes.insert(fp.clone(), total);
        }
    }
    Ok(ProfileReport {
        basis: ProfileBasis::Formula,
        classes,
    })
}

/// How [`formula_profile_literal`] treats its `f = 0` term.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ZeroTerm {
    Fail,
    Skip,
}

/// The sum read literally with `f = log_p |M : KΦ(M)|` from `0` to `d(M)` and
/// coefficient `(p^{1+d(M)} - 1)/(p^f - 1)`. Its `f = 0` coefficient has a zero denominator.
pub fn formula_profile_literal(m: &Stratification, zero: ZeroTerm) -> Result<ProfileReport> {
    let p = m.p as u64;
    let num = p.pow(1 + m.d) - 1;
    let mut classes = BTreeMap::new();
    for (fp, strata) in &m.strata {
        let mut total = 0u64;
        for f in 0..=m.d {
            let count = strata.get(&f).copied().unwrap_or(0);
            let den = p.pow(f) - 1;
            if den == 0 {
                match zero {
                    ZeroTerm::Fail => return Err(Error::ZeroDenominator { f }),
                    ZeroTerm::Skip => continue,
                }
            }
            total += num * count / den;
        }
        if total > 0 {
            classes.insert(fp.clone(), total);
        }
    }
    Ok(ProfileReport {
        basis: ProfileBasis::Formula,
        classes,
    })
}

fn exact_div(a: u64, b: u64) -> Result<u64> {
    if !a.is_multiple_of(b) {
        return Err(Error::Internal(format!("profile term {a}/{b} is not an integer")));
    }
    Ok(a / b)
}

/// The maximal subgroup of `B(L)` obtained by deleting the last row, with its inclusion.
pub fn last_row_maximal(pen: &Pencil) -> Result<(Pencil, GroupHom)> {
    if pen.r() == 0 {
        return Err(Error::DimensionMismatch("no row to delete".into()));
    }
    eliminate(pen, &[pen.r() - 1], &[], &[])
}

/// `B(I_2, C(t^2 + 1))` over `Z_3`, of order `3^6`.
pub fn flagship_pencil() -> Pencil {
    let zp = crate::ff::Zp::new(3).expect("3 is prime");
    let a = crate::ff::Poly::new(zp, vec![1, 0, 1]);
    let c = crate::linal::companion_std(&a).expect("monic of degree 2");
    Pencil::from_mats(zp, vec![MatFp::identity(3, 2), c]).expect("2x2 matrices")
}

/// Elementary abelian `Z_p^n`, as a pencil with no matrices.
pub fn elementary_abelian_pencil(p: u32, n: usize) -> Result<Pencil> {
    Pencil::new(crate::ff::Zp::new(p)?, n, 0, Vec::new())
}

/// Number of `k`-dimensional subspaces of `Z_p^n`.
pub fn gaussian_binomial(p: u32, n: u32, k: u32) -> u64 {
    if k > n {
        return 0;
    }
    let p = p as u128;
    let (mut num, mut den) = (1u128, 1u128);
    for i in 0..k {
        num *= p.pow(n - i) - 1;
        den *= p.pow(i + 1) - 1;
    }
    (num / den) as u64
}

/// Profile of the proper quotients `G/K`, `K != 1`, of a member `G = H/N` of order
/// `p^{2e+2}`. With `Z(G) = G' = Z_p^2` and every nonzero combination of the two
/// pencil matrices invertible, a nontrivial normal subgroup either contains `G'`
/// (quotient `Z_p^f`) or is one of the `p + 1` subgroups of order `p` in `G'`.
pub fn quotient_profile(member: &FamilyMember) -> Result<ProfileReport> {
    let pen = &member.pencil;
    let e = pen.r();
    let p = pen.p();
    if !is_heisenberg_quotient(pen, e)?.is_member() {
        return Err(Error::Internal("pencil is not a codimension-two Heisenberg quotient".into()));
    }
    let mut classes = BTreeMap::new();
    let n = 2 * e as u32;
    for f in 0..=n {
        classes.insert(Fingerprint::elementary_abelian(p, f), gaussian_binomial(p, n, f));
    }
    let mut genus_one = None;
    for line in Subspace::enumerate(p, 2, 1) {
        // Quotient by the order-p subgroup of G' complementary to `line`: keep the combination `line`.
        let (q, _) = combine(pen, line.basis())?;
        let l = &q.mats()[0];
        if !l.is_invertible() {
            return Err(Error::Internal(format!(
                "genus-one quotient matrix {} is singular",
                l.to_text()
            )));
        }
        let fp = Fingerprint::from_descriptor(&descriptor(&q)?);
        match &genus_one {
            None => genus_one = Some(fp.clone()),
            Some(prev) if *prev != fp => return Err(Error::Internal("genus-one quotients differ".into())),
            _ => {}
        }
        *classes.entry(fp).or_default() += 1;
    }
    Ok(ProfileReport {
        basis: ProfileBasis::Structural,
        classes,
    })
}

/// Whether every nonzero `λ_1 L_1 + λ_2 L_2` is invertible.
pub fn all_combinations_invertible(pen: &Pencil) -> bool {
    let p = pen.p();
    let mats = pen.mats();
    (0..p)
        .flat_map(|a| (0..p).map(move |b| (a, b)))
        .filter(|&(a, b)| (a, b) != (0, 0))
        .all(|(a, b)| {
            let m = mats
                .iter()
                .zip([a, b])
                .fold(MatFp::zeros(p, pen.r(), pen.s()), |acc, (l, c)| acc.add(&l.scale(c)));
            m.is_invertible()
        })
}
