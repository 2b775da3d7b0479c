use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use heisquot::brahana::{descriptor, embed_lower, GroupElem, GroupHom};
use heisquot::ff::{find_irreducible, FqElem};
use heisquot::heisenberg::{codim2_count, enum_codim2, quotient_pencil, AutElem, FamilyMember, HeisenbergCtx};
use heisquot::isotest::{certificate, classify_family, iso_test, verify_certificate, GammaTable};
use heisquot::linal::MatFp;
use heisquot::profile::{all_combinations_invertible, quotient_profile, SmallGroup, DEFAULT_ORDER_BOUND};
use heisquot::tensoradj::{adjoint_algebra, AdjAlgebra};

use crate::commands::{family_ctx, provenance, scale_bound, CmdResult};
use crate::report::Record;
use crate::{Common, Failure, Outcome};

const RANDOM_PAIRS: usize = 10_000;
const RANDOM_AUTS: usize = 20;
/// Cap on members examined by the per-member suites.
const MEMBER_SAMPLE: usize = 60;

struct Suite {
    name: &'static str,
    pass: bool,
    detail: String,
}

fn suite(name: &'static str, pass: bool, detail: impl Into<String>) -> Suite {
    Suite {
        name,
        pass,
        detail: detail.into(),
    }
}

fn random_field_elem(ctx: &HeisenbergCtx, rng: &mut ChaCha8Rng) -> FqElem {
    ctx.field.from_index(rng.gen_range(0..ctx.field.order()))
}

fn field_suite(ctx: &HeisenbergCtx, rng: &mut ChaCha8Rng) -> Suite {
    let f = &ctx.field;
    let e = f.degree();
    for _ in 0..300 {
        let (x, y, z) = (
            random_field_elem(ctx, rng),
            random_field_elem(ctx, rng),
            random_field_elem(ctx, rng),
        );
        let assoc = f.mul(&f.mul(&x, &y), &z) == f.mul(&x, &f.mul(&y, &z));
        let dist = f.mul(&x, &f.add(&y, &z)) == f.add(&f.mul(&x, &y), &f.mul(&x, &z));
        let inv = x.is_zero() || f.inv(&x).map(|i| f.mul(&x, &i) == f.one()).unwrap_or(false);
        let frob = f.frobenius(&f.mul(&x, &y), 1) == f.mul(&f.frobenius(&x, 1), &f.frobenius(&y, 1));
        let full = f.frobenius(&x, e) == x;
        if !(assoc && dist && inv && frob && full) {
            return suite("field", false, format!("axiom failure at x = {x}, y = {y}, z = {z}"));
        }
    }
    suite("field", true, "300 random triples")
}

fn correspondence_suite(ctx: &HeisenbergCtx, rng: &mut ChaCha8Rng) -> Suite {
    let pen = &ctx.pencil;
    let check = |x: &GroupElem, y: &GroupElem| pen.multiply(x, y) == ctx.multiply_literal(x, y);
    if pen.order() <= DEFAULT_ORDER_BOUND as u128 {
        let n = pen.order();
        let elems: Vec<GroupElem> = (0..n).map(|i| pen.elem_from_index(i)).collect();
        let ok = elems.iter().all(|x| elems.iter().all(|y| check(x, y)));
        return suite("brahana_correspondence", ok, format!("{} products", n * n));
    }
    let ok = (0..RANDOM_PAIRS).all(|_| check(&pen.random_elem(rng), &pen.random_elem(rng)));
    suite("brahana_correspondence", ok, format!("{RANDOM_PAIRS} random products"))
}

fn random_aut(ctx: &HeisenbergCtx, rng: &mut ChaCha8Rng) -> AutElem {
    let f = &ctx.field;
    let e = f.degree();
    loop {
        let m = [(); 4].map(|_| random_field_elem(ctx, rng));
        let tau = MatFp::from_fn(f.p(), 2 * e, e, |_, _| rng.gen_range(0..f.p()));
        if let Ok(a) = AutElem::new(f, tau, m, rng.gen_range(0..e)) {
            return a;
        }
    }
}

fn hom_on_random_pairs(h: &GroupHom, rng: &mut ChaCha8Rng, pairs: usize) -> bool {
    let (s, t) = (&h.source, &h.target);
    (0..pairs).all(|_| {
        let (x, y) = (s.random_elem(rng), s.random_elem(rng));
        h.apply(&s.multiply(&x, &y)) == t.multiply(&h.apply(&x), &h.apply(&y))
    })
}

fn automorphism_suite(ctx: &HeisenbergCtx, rng: &mut ChaCha8Rng) -> Suite {
    let table = SmallGroup::new(&ctx.pencil, DEFAULT_ORDER_BOUND).ok();
    let f = &ctx.field;
    for i in 0..RANDOM_AUTS {
        let a = random_aut(ctx, rng);
        let h = a.hom(ctx);
        let mult = match &table {
            Some(g) => g.is_hom_exhaustive(g, &h),
            None => hom_on_random_pairs(&h, rng, 500),
        };
        let g = a.gamma(f);
        let z = random_field_elem(ctx, rng);
        let central = ctx.elem(&f.zero(), &f.zero(), &z);
        let induced = h.apply(&central).c == g.apply(f, &z).coords();
        if !(a.verify(ctx, false) && mult && induced) {
            return suite("automorphisms", false, format!("automorphism {i} fails"));
        }
    }
    let how = if table.is_some() { "exhaustively" } else { "on random pairs" };
    suite(
        "automorphisms",
        true,
        format!("{RANDOM_AUTS} random automorphisms checked {how}"),
    )
}

fn sample<'a>(members: &'a [FamilyMember], rng: &mut ChaCha8Rng) -> Vec<&'a FamilyMember> {
    if members.len() <= MEMBER_SAMPLE {
        return members.iter().collect();
    }
    (0..MEMBER_SAMPLE)
        .map(|_| &members[rng.gen_range(0..members.len())])
        .collect()
}

fn family_suite(ctx: &HeisenbergCtx, members: &[FamilyMember]) -> Suite {
    let (p, e) = (ctx.p(), ctx.e());
    if members.len() as u128 != codim2_count(p, e) {
        return suite(
            "family",
            false,
            format!("{} members, expected {}", members.len(), codim2_count(p, e)),
        );
    }
    for m in members {
        let kernel_ok = m.n.elements().into_iter().all(|v| {
            let x = GroupElem {
                a: vec![0; e],
                b: vec![0; e],
                c: v,
            };
            m.quotient_map.apply(&x).is_identity()
        });
        if !(kernel_ok
            && m.quotient_map.is_surjective()
            && m.quotient_map.is_homomorphism()
            && m.pencil.mats()[0] == MatFp::identity(p, e))
        {
            return suite("family", false, format!("member {:?} fails", m.n));
        }
    }
    suite(
        "family",
        true,
        format!("{} members, all normalized with kernel N", members.len()),
    )
}

fn classification_suite(ctx: &HeisenbergCtx, bound: u128, rng: &mut ChaCha8Rng) -> Result<Suite, Failure> {
    let cls = classify_family(ctx, bound)?;
    let mut label_of = vec![0; cls.members.len()];
    for (k, o) in cls.orbits.iter().enumerate() {
        for &i in &o.members {
            label_of[i] = k;
        }
    }
    let n = cls.members.len();
    let pairs: Vec<(usize, usize)> = if n <= MEMBER_SAMPLE {
        (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).collect()
    } else {
        (0..200).map(|_| (rng.gen_range(0..n), rng.gen_range(0..n))).collect()
    };
    for &(i, j) in &pairs {
        let iso = iso_test(ctx, &cls.members[i].n, &cls.members[j].n)?.is_iso();
        if iso != (label_of[i] == label_of[j]) {
            return Ok(suite(
                "classification",
                false,
                format!("iso test and labels disagree on members {i}, {j}"),
            ));
        }
    }
    let ok = cls.class_count == cls.burnside_count && cls.class_count as u128 >= cls.lower_bound;
    Ok(suite(
        "classification",
        ok,
        format!(
            "{} classes, Burnside {}, bound {}, {} pairs compared",
            cls.class_count,
            cls.burnside_count,
            cls.lower_bound,
            pairs.len()
        ),
    ))
}

fn certificate_suite(ctx: &HeisenbergCtx, members: &[&FamilyMember]) -> Result<Suite, Failure> {
    let table = GammaTable::new(ctx);
    for m in members {
        for g in table.elems.iter().step_by(table.len().div_ceil(4)) {
            let target = quotient_pencil(ctx, &g.act(&ctx.field, &m.n))?;
            let cert = certificate(ctx, g, m, &target)?;
            if !verify_certificate(ctx, &cert) {
                return Ok(suite("certificates", false, format!("certificate for {:?} fails", m.n)));
            }
        }
    }
    Ok(suite(
        "certificates",
        true,
        format!("certificates from {} members", members.len()),
    ))
}

fn same_algebra(a: &AdjAlgebra, b: &AdjAlgebra) -> bool {
    a.dim() == b.dim() && a.basis.iter().all(|x| b.contains(x))
}

fn adjoint_suite(ctx: &HeisenbergCtx, members: &[&FamilyMember]) -> Suite {
    let e = ctx.e();
    let h = adjoint_algebra(&ctx.pencil);
    if h.dim() != 4 * e {
        return suite(
            "adjoint",
            false,
            format!("Adj(H) has dimension {}, expected {}", h.dim(), 4 * e),
        );
    }
    for m in members {
        let q = adjoint_algebra(&m.raw);
        if !same_algebra(&h, &q) || adjoint_algebra(&m.pencil).center().len() != e {
            return suite("adjoint", false, format!("member {:?} has a different adjoint algebra", m.n));
        }
    }
    suite("adjoint", true, format!("dimension {} with {e}-dimensional centers", 4 * e))
}

fn descriptor_suite(ctx: &HeisenbergCtx, members: &[&FamilyMember]) -> Result<Suite, Failure> {
    let (p, e) = (ctx.p(), ctx.e());
    let p2 = (p as u128).pow(2);
    for m in members {
        let d = descriptor(&m.pencil)?;
        let ok = d.log_order == 2 * e + 2
            && d.min_generators == 2 * e
            && d.exponent == p as u64
            && d.center_order() == p2
            && d.derived_order() == p2
            && d.noncentral_classes.keys().all(|s| *s == p2);
        if !ok {
            return Ok(suite("descriptors", false, format!("member {:?}: {d:?}", m.n)));
        }
    }
    Ok(suite(
        "descriptors",
        true,
        format!("order p^{}, d = {}, |Z| = |G'| = p^2", 2 * e + 2, 2 * e),
    ))
}

fn quotient_suite(members: &[&FamilyMember]) -> Result<Suite, Failure> {
    let mut first = None;
    for m in members {
        let rep = quotient_profile(m)?;
        if !all_combinations_invertible(&m.pencil) {
            return Ok(suite(
                "quotient_profiles",
                false,
                format!("member {:?} has a singular combination", m.n),
            ));
        }
        match &first {
            None => first = Some(rep),
            Some(f) if *f != rep => return Ok(suite("quotient_profiles", false, format!("member {:?} differs", m.n))),
            _ => {}
        }
    }
    Ok(suite(
        "quotient_profiles",
        true,
        format!("{} identical reports", members.len()),
    ))
}

fn embedding_suite(ctx: &HeisenbergCtx, rng: &mut ChaCha8Rng) -> Result<Suite, Failure> {
    let e = ctx.e();
    let a = ctx.field.modulus();
    let mut checked = 0;
    for f in 1..e {
        let b = find_irreducible(ctx.field.zp(), f, rng.gen())?;
        let h = embed_lower(&b, a)?;
        let small = SmallGroup::new(&h.source, DEFAULT_ORDER_BOUND).ok();
        let big = SmallGroup::new(&h.target, DEFAULT_ORDER_BOUND).ok();
        let mult = match (&small, &big) {
            (Some(s), Some(t)) => s.is_hom_exhaustive(t, &h),
            _ => hom_on_random_pairs(&h, rng, 1000),
        };
        if !(mult && h.is_injective() && h.is_homomorphism()) {
            return Ok(suite(
                "embedding",
                false,
                format!("embedding of degree {f} into degree {e} fails"),
            ));
        }
        checked += 1;
    }
    Ok(suite(
        "embedding",
        true,
        format!("{checked} embeddings B(I_f, C(b)) -> B(I_e, C(a))"),
    ))
}

pub fn run(c: &Common) -> CmdResult {
    let ctx = family_ctx(c)?;
    let mut rng = ChaCha8Rng::seed_from_u64(c.seed);
    let members: Vec<FamilyMember> = enum_codim2(&ctx.field)?
        .iter()
        .map(|n| quotient_pencil(&ctx, n))
        .collect::<Result<_, _>>()?;
    let picked = sample(&members, &mut rng);
    let suites = vec![
        field_suite(&ctx, &mut rng),
        correspondence_suite(&ctx, &mut rng),
        automorphism_suite(&ctx, &mut rng),
        family_suite(&ctx, &members),
        classification_suite(&ctx, scale_bound(c), &mut rng)?,
        certificate_suite(&ctx, &picked)?,
        adjoint_suite(&ctx, &picked),
        descriptor_suite(&ctx, &picked)?,
        quotient_suite(&picked)?,
        embedding_suite(&ctx, &mut rng)?,
    ];
    let ok = suites.iter().all(|s| s.pass);
    let mut records = vec![provenance("verify", c, &ctx.field)];
    records.extend(
        suites
            .iter()
            .map(|s| Record::new("suite", json!({"name": s.name, "pass": s.pass, "detail": s.detail}))),
    );
    records.push(Record::new(
        "summary",
        json!({"suites": suites.len(), "passed": suites.iter().filter(|s| s.pass).count(), "ok": ok}),
    ));
    Ok(Outcome { records, ok })
}
