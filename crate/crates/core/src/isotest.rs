//! Isomorphism testing and classification of the codimension-two quotients.
//!
//! Every isomorphism `H/N_1 -> H/N_2` between quotients of genus at least two
//! lifts to an automorphism of `H`, and `Aut(H)` acts on `H'` through the
//! semilinear group `Γ = {x -> σ(λx)}`. So `H/N_1 ≅ H/N_2` exactly when some
//! element of `Γ` carries `N_1` onto `N_2`.

use std::collections::BTreeMap;

use rand::rngs::StdRng;
use rand::SeedableRng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::brahana::{GroupElem, GroupHom};
use crate::ff::is_prime;
use crate::heisenberg::{descend, enum_codim2, gamma_group, quotient_pencil, AutElem, FamilyMember, GammaElem, HeisenbergCtx};
use crate::linal::{MatFp, Subspace};
use crate::tensoradj::adjoint_algebra;
use crate::{Error, Result};

/// Default guard on `p^e` for exhaustive classification.
pub const DEFAULT_SCALE_BOUND: u128 = 1 << 20;

/// Random pairs checked by [`verify_certificate`] on top of the generators.
const CERT_RANDOM_PAIRS: usize = 200;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IsoCertificate {
    pub gamma: GammaElem,
    pub n1: Subspace,
    pub n2: Subspace,
    /// Automorphism of `H` acting on `H'` as `gamma`.
    pub lift: AutElem,
    /// Isomorphism between the normalized presentations `B(I_e, C(a_1)) -> B(I_e, C(a_2))`.
    pub map: GroupHom,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum IsoVerdict {
    Iso(Box<IsoCertificate>),
    NonIso,
}

impl IsoVerdict {
    pub fn is_iso(&self) -> bool {
        matches!(self, IsoVerdict::Iso(_))
    }
}

/// Least echelon basis (flattened, lexicographic) in the `Γ`-orbit of `N`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ClassLabel {
    pub canonical: Subspace,
}

/// `Γ` together with its matrices, computed once per field.
pub struct GammaTable {
    pub elems: Vec<GammaElem>,
    pub mats: Vec<MatFp>,
}

impl GammaTable {
    pub fn new(ctx: &HeisenbergCtx) -> Self {
        let elems = gamma_group(&ctx.field);
        let mats = elems.iter().map(|g| g.matrix(&ctx.field)).collect();
        GammaTable { elems, mats }
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }
}

/// The family is only known to consist of genus-two Heisenberg quotients for prime `e`.
fn check_prime_degree(e: usize) -> Result<()> {
    if !is_prime(e as u64) {
        return Err(Error::InvalidDegree(format!(
            "classification needs a prime degree e, got {e}"
        )));
    }
    Ok(())
}

fn check_codim2(ctx: &HeisenbergCtx, n: &Subspace) -> Result<()> {
    let e = ctx.e();
    check_prime_degree(e)?;
    if n.ambient_dim() != e || n.dim() + 2 != e {
        return Err(Error::DimensionMismatch(format!(
            "expected a subspace of dimension {} in Z_p^{e}, got {}/{}",
            e.saturating_sub(2),
            n.dim(),
            n.ambient_dim()
        )));
    }
    Ok(())
}

/// Certificate for `gamma` carrying `m1.n` onto `m2.n`.
pub fn certificate(ctx: &HeisenbergCtx, gamma: &GammaElem, m1: &FamilyMember, m2: &FamilyMember) -> Result<IsoCertificate> {
    let lift = AutElem::from_gamma(&ctx.field, gamma);
    let raw = descend(ctx, &lift, m1, m2)?;
    let map = m1.normalize.inverse()?.then(&raw)?.then(&m2.normalize)?;
    Ok(IsoCertificate {
        gamma: gamma.clone(),
        n1: m1.n.clone(),
        n2: m2.n.clone(),
        lift,
        map,
    })
}

pub fn iso_test(ctx: &HeisenbergCtx, n1: &Subspace, n2: &Subspace) -> Result<IsoVerdict> {
    check_codim2(ctx, n1)?;
    check_codim2(ctx, n2)?;
    let f = &ctx.field;
    let Some(gamma) = gamma_group(f).into_iter().find(|g| g.act(f, n1) == *n2) else {
        return Ok(IsoVerdict::NonIso);
    };
    let m1 = quotient_pencil(ctx, n1)?;
    let m2 = quotient_pencil(ctx, n2)?;
    Ok(IsoVerdict::Iso(Box::new(certificate(ctx, &gamma, &m1, &m2)?)))
}

pub fn canonical_label(ctx: &HeisenbergCtx, n: &Subspace) -> Result<ClassLabel> {
    check_codim2(ctx, n)?;
    Ok(label_with(&GammaTable::new(ctx), n))
}

pub fn label_with(table: &GammaTable, n: &Subspace) -> ClassLabel {
    let canonical = table
        .mats
        .iter()
        .map(|m| n.image(m))
        .min_by(|a, b| a.key().cmp(&b.key()))
        .expect("Γ is nonempty");
    ClassLabel { canonical }
}

/// Whether `cert` is an isomorphism `H/N_1 -> H/N_2` that transports adjoint algebras.
pub fn verify_certificate(ctx: &HeisenbergCtx, cert: &IsoCertificate) -> bool {
    let f = &ctx.field;
    if cert.gamma.act(f, &cert.n1) != cert.n2 || cert.lift.gamma(f) != cert.gamma || !cert.lift.verify(ctx, false) {
        return false;
    }
    let (Ok(m1), Ok(m2)) = (quotient_pencil(ctx, &cert.n1), quotient_pencil(ctx, &cert.n2)) else {
        return false;
    };
    let h = &cert.map;
    if h.source != m1.pencil || h.target != m2.pencil || !h.is_homomorphism() || !h.is_isomorphism() {
        return false;
    }
    let (src, dst) = (&m1.pencil, &m2.pencil);
    let hom_ok = |x: &GroupElem, y: &GroupElem| h.apply(&src.multiply(x, y)) == dst.multiply(&h.apply(x), &h.apply(y));
    // Generators: unit vectors in the `u` coordinates.
    let n = src.r() + src.s();
    let gens: Vec<GroupElem> = (0..n)
        .map(|i| {
            let mut v = vec![0; n + src.g()];
            v[i] = 1;
            src.elem_from_coords(&v)
        })
        .collect();
    if !gens.iter().all(|x| gens.iter().all(|y| hom_ok(x, y))) {
        return false;
    }
    let mut rng = StdRng::seed_from_u64(0x5eed);
    for _ in 0..CERT_RANDOM_PAIRS {
        let (x, y) = (src.random_elem(&mut rng), src.random_elem(&mut rng));
        if !hom_ok(&x, &y) {
            return false;
        }
    }
    let Some(t_inv) = h.t.inverse() else {
        return false;
    };
    let (a1, a2) = (adjoint_algebra(src), adjoint_algebra(dst));
    a1.dim() == a2.dim() && a1.basis.iter().all(|b| a2.contains(&b.conjugate(&h.t, &t_inv)))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Orbit {
    pub label: ClassLabel,
    /// Indices into `Classification::members`.
    pub members: Vec<usize>,
    /// Coefficients of the normalized minimal polynomial of the label's quotient.
    pub a_coeffs: Vec<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Classification {
    pub p: u32,
    pub e: usize,
    pub modulus: Vec<u32>,
    pub members: Vec<FamilyMember>,
    pub orbits: Vec<Orbit>,
    pub class_count: usize,
    pub burnside_count: usize,
    pub gamma_order: usize,
    pub lower_bound: u128,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitRecord {
    pub label: String,
    pub size: usize,
    pub a_coeffs: Vec<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassificationReport {
    pub p: u32,
    pub e: usize,
    pub member_count: usize,
    pub class_count: usize,
    pub burnside_count: usize,
    pub lower_bound: u128,
    pub orbits: Vec<OrbitRecord>,
}

impl Classification {
    pub fn report(&self) -> ClassificationReport {
        ClassificationReport {
            p: self.p,
            e: self.e,
            member_count: self.members.len(),
            class_count: self.class_count,
            burnside_count: self.burnside_count,
            lower_bound: self.lower_bound,
            orbits: self
                .orbits
                .iter()
                .map(|o| OrbitRecord {
                    label: o.label.canonical.basis().to_text(),
                    size: o.members.len(),
                    a_coeffs: o.a_coeffs.clone(),
                })
                .collect(),
        }
    }
}

/// `ceil(p^{e-3} / e)`, which is `1` for `e < 3`.
pub fn class_lower_bound(p: u32, e: usize) -> u128 {
    if e < 3 {
        return 1;
    }
    let num = (p as u128).pow((e - 3) as u32);
    num.div_ceil(e as u128)
}

/// Number of orbits of `Γ` on the subspaces `subs`, by Burnside's lemma.
pub fn burnside_count(table: &GammaTable, subs: &[Subspace]) -> Result<usize> {
    let total: usize = table
        .mats
        .par_iter()
        .map(|m| subs.iter().filter(|n| n.image(m) == **n).count())
        .sum();
    if !total.is_multiple_of(table.len()) {
        return Err(Error::Internal(format!(
            "Burnside sum {total} is not divisible by |Γ| = {}",
            table.len()
        )));
    }
    Ok(total / table.len())
}

pub fn classify_family(ctx: &HeisenbergCtx, scale_bound: u128) -> Result<Classification> {
    let (p, e) = (ctx.p(), ctx.e());
    let q = ctx.field.order();
    if q > scale_bound {
        return Err(Error::ScaleGuard {
            what: "p^e".into(),
            value: q,
            bound: scale_bound,
        });
    }
    check_prime_degree(e)?;
    let subs = enum_codim2(&ctx.field)?;
    let table = GammaTable::new(ctx);
    let members: Vec<FamilyMember> = subs.par_iter().map(|n| quotient_pencil(ctx, n)).collect::<Result<_>>()?;
    let labels: Vec<ClassLabel> = subs.par_iter().map(|n| label_with(&table, n)).collect();
    let mut groups: BTreeMap<Vec<u32>, (ClassLabel, Vec<usize>)> = BTreeMap::new();
    for (i, l) in labels.into_iter().enumerate() {
        groups.entry(l.canonical.key()).or_insert_with(|| (l, Vec::new())).1.push(i);
    }
    let orbits: Vec<Orbit> = groups
        .into_values()
        .map(|(label, idx)| {
            let a_coeffs = match subs.iter().position(|n| *n == label.canonical) {
                Some(i) => members[i].min_poly.coeffs().to_vec(),
                None => quotient_pencil(ctx, &label.canonical)?.min_poly.coeffs().to_vec(),
            };
            Ok(Orbit {
                label,
                members: idx,
                a_coeffs,
            })
        })
        .collect::<Result<_>>()?;
    let burnside = burnside_count(&table, &subs)?;
    let class_count = orbits.len();
    if class_count != burnside {
        return Err(Error::Internal(format!(
            "label partition has {class_count} classes, Burnside gives {burnside}"
        )));
    }
    Ok(Classification {
        p,
        e,
        modulus: ctx.field.modulus().coeffs().to_vec(),
        members,
        orbits,
        class_count,
        burnside_count: burnside,
        gamma_order: table.len(),
        lower_bound: class_lower_bound(p, e),
    })
}
