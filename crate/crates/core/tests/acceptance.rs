//! Ten end-to-end acceptance checks. Each test writes one `criterion N: PASS|FAIL`
//! line straight to stderr (so it shows up even under captured output) and then
//! asserts the outcome.

use std::collections::{BTreeMap, BTreeSet};
use std::io::Write;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use heisquot::brahana::{combine, descriptor, eliminate, embed_lower, transform, GroupElem, GroupHom, Pencil};
use heisquot::ff::{FqElem, FqField, Poly, Zp};
use heisquot::heisenberg::{
    codim2_count, enum_codim2, gamma_group, hyperplane_orbit, quotient_pencil, sl2_lifts, AutElem, FamilyMember, HeisenbergCtx,
};
use heisquot::isotest::{class_lower_bound, classify_family, iso_test, verify_certificate, IsoVerdict, DEFAULT_SCALE_BOUND};
use heisquot::linal::{min_poly, poly_irreducible, MatFp, Subspace};
use heisquot::profile::{
    all_combinations_invertible, brute_profile, elementary_abelian_pencil, flagship_pencil, formula_profile,
    formula_profile_literal, last_row_maximal, quotient_profile, stratify, Fingerprint, SmallGroup, ZeroTerm, DEFAULT_BUDGET,
    DEFAULT_ORDER_BOUND,
};
use heisquot::tensoradj::{adjoint_algebra, is_heisenberg_quotient, m2_pair, m2_pairs, AdjAlgebra, AdjPair};
use heisquot::Error;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn report(n: u32, name: &str, run: impl FnOnce() -> Outcome) {
    let start = Instant::now();
    let outcome = run();
    let secs = start.elapsed().as_secs_f64();
    let line = match &outcome {
        Ok(detail) => format!("criterion {n}: PASS [{name}] {detail} ({secs:.2} s)\n"),
        Err(why) => format!("criterion {n}: FAIL [{name}] {why} ({secs:.2} s)\n"),
    };
    let _ = std::io::stderr().write_all(line.as_bytes());
    if let Err(why) = outcome {
        panic!("criterion {n} failed: {why}");
    }
}

fn err(e: Error) -> String {
    e.to_string()
}

fn field(p: u32, modulus: &str) -> FqField {
    let zp = Zp::new(p).unwrap();
    FqField::new(Poly::parse(zp, modulus).unwrap()).unwrap()
}

fn members(ctx: &HeisenbergCtx) -> Result<Vec<FamilyMember>, String> {
    enum_codim2(&ctx.field)
        .map_err(err)?
        .iter()
        .map(|n| quotient_pencil(ctx, n).map_err(err))
        .collect()
}

/// Independent count of codimension-two subspaces of `Z_p^e`: by duality it equals the
/// number of distinct row spaces spanned by pairs of independent vectors.
fn codim2_oracle(p: u32, e: usize) -> usize {
    let q = (p as usize).pow(e as u32);
    let vec_of = |mut i: usize| -> Vec<u32> {
        (0..e)
            .map(|_| {
                let d = (i % p as usize) as u32;
                i /= p as usize;
                d
            })
            .collect()
    };
    let vecs: Vec<Vec<u32>> = (0..q).map(vec_of).collect();
    let planes: BTreeSet<Subspace> = (1..q)
        .into_par_iter()
        .flat_map_iter(|i| {
            let vecs = &vecs;
            (i + 1..q).filter_map(move |j| {
                let s = Subspace::from_rows(p, e, vec![vecs[i].clone(), vecs[j].clone()]);
                (s.dim() == 2).then_some(s)
            })
        })
        .collect();
    planes.len()
}

/// Group the indices `0..n` into classes of the equivalence `same`.
fn partition(n: usize, mut same: impl FnMut(usize, usize) -> Result<bool, String>) -> Result<BTreeSet<BTreeSet<usize>>, String> {
    let mut reps: Vec<(usize, BTreeSet<usize>)> = Vec::new();
    'outer: for i in 0..n {
        for (r, class) in reps.iter_mut() {
            if same(*r, i)? {
                class.insert(i);
                continue 'outer;
            }
        }
        reps.push((i, BTreeSet::from([i])));
    }
    Ok(reps.into_iter().map(|(_, c)| c).collect())
}

#[test]
fn criterion_01_family_and_classification_at_3_3() {
    report(1, "family size and classification at (3,3)", || {
        let ctx = HeisenbergCtx::build(field(3, "1,2,0,1"));
        let subs = enum_codim2(&ctx.field).map_err(err)?;
        let oracle = codim2_oracle(3, 3);
        ensure(subs.len() == 13 && oracle == 13 && codim2_count(3, 3) == 13, || {
            format!("{} subspaces, oracle {oracle}, formula {}", subs.len(), codim2_count(3, 3))
        })?;
        ensure(
            subs.iter().collect::<BTreeSet<_>>().len() == 13 && subs.iter().all(|n| n.dim() == 1),
            || "duplicate or wrong dimension".into(),
        )?;
        let gamma = gamma_group(&ctx.field);
        ensure(gamma.len() == 78, || format!("|Γ| = {}", gamma.len()))?;

        let cls = classify_family(&ctx, DEFAULT_SCALE_BOUND).map_err(err)?;
        let labels: BTreeSet<BTreeSet<usize>> = cls.orbits.iter().map(|o| o.members.iter().copied().collect()).collect();
        let iso = partition(subs.len(), |i, j| {
            Ok(iso_test(&ctx, &cls.members[i].n, &cls.members[j].n).map_err(err)?.is_iso())
        })?;
        ensure(iso == labels, || {
            format!("iso partition {iso:?} differs from label partition {labels:?}")
        })?;
        // The relation must be an equivalence on all ordered pairs, not only against representatives.
        for i in 0..subs.len() {
            for j in 0..subs.len() {
                let same = labels.iter().any(|c| c.contains(&i) && c.contains(&j));
                ensure(
                    iso_test(&ctx, &cls.members[i].n, &cls.members[j].n).map_err(err)?.is_iso() == same,
                    || format!("pair ({i}, {j})"),
                )?;
            }
        }
        ensure(
            cls.burnside_count == cls.class_count && cls.class_count == labels.len(),
            || format!("Burnside {} vs classes {}", cls.burnside_count, cls.class_count),
        )?;
        let total: usize = cls.orbits.iter().map(|o| o.members.len()).sum();
        ensure(total == 13, || format!("orbit sizes sum to {total}"))?;
        Ok(format!(
            "13 members (oracle 13), |Γ| = 78, {} class(es), Burnside {}",
            cls.class_count, cls.burnside_count
        ))
    });
}

#[test]
fn criterion_02_lower_bound_at_3_5() {
    report(2, "class-count lower bound at (3,5)", || {
        let ctx = HeisenbergCtx::build(FqField::search(3, 5, 0).unwrap());
        let oracle = codim2_oracle(3, 5);
        let cls = classify_family(&ctx, DEFAULT_SCALE_BOUND).map_err(err)?;
        ensure(cls.members.len() == 1210 && oracle == 1210, || {
            format!("{} members, oracle {oracle}", cls.members.len())
        })?;
        let bound = class_lower_bound(3, 5);
        ensure(bound == 2 && cls.class_count as u128 >= bound, || {
            format!("{} classes, bound {bound}", cls.class_count)
        })?;
        ensure(cls.burnside_count == cls.class_count, || {
            format!("Burnside {} vs {}", cls.burnside_count, cls.class_count)
        })?;
        let mut sizes: Vec<usize> = cls.orbits.iter().map(|o| o.members.len()).collect();
        sizes.sort();
        // Frozen regression values.
        ensure(cls.class_count == 2 && sizes == [605, 605], || {
            format!("orbit sizes {sizes:?}")
        })?;
        let (a, b) = (&cls.orbits[0].members, &cls.orbits[1].members);
        let cross = iso_test(&ctx, &cls.members[a[0]].n, &cls.members[b[0]].n).map_err(err)?;
        ensure(matches!(cross, IsoVerdict::NonIso), || {
            "representatives of different orbits test isomorphic".into()
        })?;
        match iso_test(&ctx, &cls.members[a[0]].n, &cls.members[a[1]].n).map_err(err)? {
            IsoVerdict::Iso(cert) => ensure(verify_certificate(&ctx, &cert), || "certificate fails".into())?,
            IsoVerdict::NonIso => return Err("members of one orbit test non-isomorphic".into()),
        }
        Ok(format!(
            "1210 members (oracle 1210), {} classes >= bound {bound}, orbit sizes {sizes:?}",
            cls.class_count
        ))
    });
}

/// `[[1, a, c], [0, 1, b], [0, 0, 1]]` as a dense `3 x 3` matrix over `F_q`.
fn unitriangular(ctx: &HeisenbergCtx, x: &GroupElem) -> Vec<Vec<FqElem>> {
    let f = &ctx.field;
    let (a, b, c) = ctx.to_field(x);
    vec![
        vec![f.one(), a, c],
        vec![f.zero(), f.one(), b],
        vec![f.zero(), f.zero(), f.one()],
    ]
}

fn mat3_mul(f: &FqField, x: &[Vec<FqElem>], y: &[Vec<FqElem>]) -> Vec<Vec<FqElem>> {
    (0..3)
        .map(|i| {
            (0..3)
                .map(|j| (0..3).fold(f.zero(), |acc, k| f.add(&acc, &f.mul(&x[i][k], &y[k][j]))))
                .collect()
        })
        .collect()
}

fn respects_products(ctx: &HeisenbergCtx, x: &GroupElem, y: &GroupElem) -> bool {
    unitriangular(ctx, &ctx.pencil.multiply(x, y)) == mat3_mul(&ctx.field, &unitriangular(ctx, x), &unitriangular(ctx, y))
}

#[test]
fn criterion_03_brahana_correspondence() {
    report(3, "Brahana correspondence with H(F_q)", || {
        let ctx = HeisenbergCtx::build(field(3, "1,0,1"));
        let pen = &ctx.pencil;
        let n = pen.order() as usize;
        let elems: Vec<GroupElem> = (0..n as u128).map(|i| pen.elem_from_index(i)).collect();
        let images: BTreeSet<Vec<Vec<Vec<u32>>>> = elems
            .iter()
            .map(|x| {
                unitriangular(&ctx, x)
                    .iter()
                    .map(|r| r.iter().map(|v| v.coords().to_vec()).collect())
                    .collect()
            })
            .collect();
        ensure(images.len() == n, || "the map is not injective".into())?;
        let ok = elems.par_iter().all(|x| elems.iter().all(|y| respects_products(&ctx, x, y)));
        ensure(ok, || "a product differs at (3,2)".into())?;

        let ctx3 = HeisenbergCtx::build(field(3, "1,2,0,1"));
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let pairs: Vec<(GroupElem, GroupElem)> = (0..10_000)
            .map(|_| (ctx3.pencil.random_elem(&mut rng), ctx3.pencil.random_elem(&mut rng)))
            .collect();
        ensure(pairs.par_iter().all(|(x, y)| respects_products(&ctx3, x, y)), || {
            "a product differs at (3,3)".into()
        })?;
        Ok(format!(
            "(3,2): bijective, all {} products; (3,3): 10000 random products",
            n * n
        ))
    });
}

fn flat(pair: &AdjPair) -> Vec<u32> {
    pair.f.as_slice().iter().chain(pair.fstar.as_slice()).copied().collect()
}

fn same_algebra(a: &AdjAlgebra, b: &AdjAlgebra) -> bool {
    a.dim() == b.dim() && a.basis.iter().all(|x| b.contains(x))
}

#[test]
fn criterion_04_adjoint_algebras() {
    report(4, "adjoint algebras", || {
        let ctx = HeisenbergCtx::build(field(3, "1,0,1"));
        let f = &ctx.field;
        let alg = adjoint_algebra(&ctx.pencil);
        ensure(alg.dim() == 8, || format!("Adj(H(F_9)) has dimension {}", alg.dim()))?;
        // Every image of M_2(F_9) lies in the algebra, and there are 9^4 = 3^8 distinct ones.
        let elems: Vec<FqElem> = f.elements().collect();
        let mut seen = BTreeSet::new();
        for a in &elems {
            for b in &elems {
                for c in &elems {
                    for d in &elems {
                        let pair = m2_pair(f, a, b, c, d);
                        ensure(alg.contains(&pair), || {
                            format!("M_2 image ({a}, {b}, {c}, {d}) is not an adjoint")
                        })?;
                        seen.insert(flat(&pair));
                    }
                }
            }
        }
        ensure(seen.len() == 6561, || format!("{} distinct M_2 images", seen.len()))?;
        let span: Vec<Vec<u32>> = m2_pairs(f).iter().map(flat).collect();
        ensure(MatFp::from_rows(3, span[0].len(), &span).rank() == 8, || {
            "spanning pairs are dependent".into()
        })?;

        let ctx3 = HeisenbergCtx::build(field(3, "1,2,0,1"));
        let h = adjoint_algebra(&ctx3.pencil);
        ensure(h.dim() == 12, || format!("Adj(H(F_27)) has dimension {}", h.dim()))?;
        let ms = members(&ctx3)?;
        for m in &ms {
            let a = adjoint_algebra(&m.pencil);
            ensure(a.dim() == 12, || format!("member {:?}: dimension {}", m.n, a.dim()))?;
            let center = a.center();
            ensure(center.len() == 3, || {
                format!("member {:?}: center dimension {}", m.n, center.len())
            })?;
            let generator = (1..27u32).find_map(|idx| {
                let coeffs = [idx % 3, idx / 3 % 3, idx / 9];
                let z = center
                    .iter()
                    .zip(coeffs)
                    .fold(center[0].scale(0), |acc, (b, c)| acc.add(&b.scale(c)));
                let mp = min_poly(&z.f);
                (mp.degree() == Some(3) && poly_irreducible(&mp)).then_some(z)
            });
            ensure(generator.is_some(), || {
                format!("member {:?}: no central element with irreducible cubic min poly", m.n)
            })?;
            ensure(same_algebra(&adjoint_algebra(&m.raw), &h), || {
                format!("member {:?}: Adj differs from Adj(H)", m.n)
            })?;
        }
        Ok(format!(
            "F_9: dim 8, all 6561 M_2 images; (3,3): {} members with dim 12, center generated by an irreducible cubic",
            ms.len()
        ))
    });
}

#[test]
fn criterion_05_genus_two_membership() {
    report(5, "genus-2 membership test", || {
        let ctx = HeisenbergCtx::build(field(3, "1,2,0,1"));
        let ms = members(&ctx)?;
        for m in &ms {
            ensure(is_heisenberg_quotient(&m.pencil, 3).map_err(err)?.is_member(), || {
                format!("member {:?} rejected", m.n)
            })?;
            ensure(is_heisenberg_quotient(&m.raw, 3).map_err(err)?.is_member(), || {
                format!("raw member {:?} rejected", m.n)
            })?;
        }
        let z3 = Zp::new(3).unwrap();
        let split = Pencil::from_mats(z3, vec![MatFp::identity(3, 3), MatFp::diag(3, &[0, 1, 2])]).unwrap();
        let swap = Pencil::from_mats(z3, vec![MatFp::identity(3, 2), MatFp::parse(3, "0,1;1,0").unwrap()]).unwrap();
        ensure(!is_heisenberg_quotient(&split, 3).map_err(err)?.is_member(), || {
            "(I_3, diag(0,1,2)) accepted".into()
        })?;
        ensure(!is_heisenberg_quotient(&swap, 2).map_err(err)?.is_member(), || {
            "(I_2, [[0,1],[1,0]]) accepted".into()
        })?;
        Ok(format!("{} members accepted, 2 controls rejected", ms.len()))
    });
}

#[test]
fn criterion_06_quotient_profiles() {
    report(6, "quotient profiles", || {
        let ctx = HeisenbergCtx::build(field(3, "1,2,0,1"));
        let ms = members(&ctx)?;
        let mut first: Option<String> = None;
        for m in &ms {
            ensure(all_combinations_invertible(&m.pencil), || {
                format!("member {:?} has a singular combination", m.n)
            })?;
            let rep = quotient_profile(m).map_err(err)?;
            let bytes = serde_json::to_string(&rep).map_err(|e| e.to_string())?;
            let genus_one: Vec<(&Fingerprint, &u64)> = rep.classes.iter().filter(|(fp, _)| fp.derived > 1).collect();
            ensure(genus_one.len() == 1 && *genus_one[0].1 == 4, || {
                format!("member {:?}: genus-one classes {genus_one:?}", m.n)
            })?;
            // Each genus-one quotient B(L) is carried onto B(I_3) by (a, b, c) -> (a L, b, c).
            for line in Subspace::enumerate(3, 2, 1) {
                let (q, _) = combine(&m.pencil, line.basis()).map_err(err)?;
                let l = &q.mats()[0];
                let li = l
                    .inverse()
                    .ok_or_else(|| format!("singular genus-one matrix {}", l.to_text()))?;
                let (target, iso) = transform(&q, &li, &MatFp::identity(3, 3)).map_err(err)?;
                ensure(
                    target.mats()[0] == MatFp::identity(3, 3) && iso.is_isomorphism() && iso.is_homomorphism(),
                    || format!("genus-one quotient {} is not carried onto B(I_3)", l.to_text()),
                )?;
            }
            match &first {
                None => first = Some(bytes),
                Some(f) => ensure(*f == bytes, || format!("member {:?} has a different report", m.n))?,
            }
        }
        Ok(format!(
            "{} byte-identical reports, 4 isomorphic genus-one quotients each",
            ms.len()
        ))
    });
}

fn check_formula(g_pen: &Pencil) -> Result<usize, String> {
    let (m_pen, incl) = last_row_maximal(g_pen).map_err(err)?;
    let g = SmallGroup::new(g_pen, DEFAULT_ORDER_BOUND).map_err(err)?;
    let m = SmallGroup::new(&m_pen, DEFAULT_ORDER_BOUND).map_err(err)?;
    ensure(m.is_hom_exhaustive(&g, &incl), || "inclusion is not a homomorphism".into())?;
    // Φ(G) = Φ(M) under the inclusion.
    let phi_m: BTreeSet<usize> = m
        .frattini(&m.whole())
        .elements()
        .into_iter()
        .map(|i| g.index_of(&incl.apply(&m.elem(i))))
        .collect();
    let phi_g: BTreeSet<usize> = g.frattini(&g.whole()).elements().into_iter().collect();
    ensure(phi_m == phi_g, || "Φ(M) differs from Φ(G)".into())?;
    let d_g = descriptor(g_pen).map_err(err)?.min_generators as u32;
    let st = stratify(&m, &m.enum_subgroups(None, DEFAULT_BUDGET).map_err(err)?);
    let predicted = formula_profile(Some(&st), d_g).map_err(err)?;
    let all = g.enum_subgroups(None, DEFAULT_BUDGET).map_err(err)?;
    let brute = brute_profile(&g, &all);
    ensure(predicted.classes == brute.classes, || {
        format!("formula {:?} vs brute {:?}", predicted.classes, brute.classes)
    })?;
    Ok(all.len())
}

#[test]
fn criterion_07_subgroup_profile_formula() {
    report(7, "subgroup-profile formula", || {
        let mut details = Vec::new();
        for (p, n) in [(3, 2), (3, 3), (5, 2)] {
            let count = check_formula(&elementary_abelian_pencil(p, n).map_err(err)?)?;
            details.push(format!("Z_{p}^{n}: {count} subgroups"));
        }
        let count = check_formula(&flagship_pencil())?;
        ensure(count == 3307, || format!("flagship has {count} subgroups"))?;
        details.push(format!("B(I_2, C(t^2+1)): {count} subgroups"));

        // Reading the sum from f = 0 divides by p^0 - 1; dropping that term undercounts.
        let g_pen = elementary_abelian_pencil(3, 2).map_err(err)?;
        let (m_pen, _) = last_row_maximal(&g_pen).map_err(err)?;
        let m = SmallGroup::new(&m_pen, DEFAULT_ORDER_BOUND).map_err(err)?;
        let st = stratify(&m, &m.enum_subgroups(None, DEFAULT_BUDGET).map_err(err)?);
        ensure(
            matches!(
                formula_profile_literal(&st, ZeroTerm::Fail),
                Err(Error::ZeroDenominator { f: 0 })
            ),
            || "literal reading does not hit a zero denominator".into(),
        )?;
        let g = SmallGroup::new(&g_pen, DEFAULT_ORDER_BOUND).map_err(err)?;
        let brute = brute_profile(&g, &g.enum_subgroups(None, DEFAULT_BUDGET).map_err(err)?);
        let skipped = formula_profile_literal(&st, ZeroTerm::Skip).map_err(err)?;
        ensure(skipped.classes != brute.classes, || {
            "literal reading with f = 0 skipped agrees".into()
        })?;
        details.push("literal f = 0 reading: zero denominator, mismatch when skipped".into());
        Ok(details.join("; "))
    });
}

#[test]
fn criterion_08_member_invariants() {
    report(8, "structural invariants of members", || {
        let ctx = HeisenbergCtx::build(field(3, "1,2,0,1"));
        let ms = members(&ctx)?;
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for m in &ms {
            let d = descriptor(&m.pencil).map_err(err)?;
            let ok = d.order() == 6561
                && d.min_generators == 6
                && d.exponent == 3
                && d.center_order() == 9
                && d.derived_order() == 9
                && d.noncentral_classes.keys().all(|&s| s == 9)
                && d.noncentral_classes.iter().map(|(s, n)| s * n).sum::<u128>() == 6561 - 9;
            ensure(ok, || format!("member {:?}: {d:?}", m.n))?;

            // Direct checks on sampled elements.
            let pen = &m.pencil;
            let all: Vec<GroupElem> = (0..6561u128).map(|i| pen.elem_from_index(i)).collect();
            let gens: Vec<GroupElem> = (0..6)
                .map(|i| pen.elem_from_coords(&(0..8).map(|j| (i == j) as u32).collect::<Vec<_>>()))
                .collect();
            let center = all
                .iter()
                .filter(|x| gens.iter().all(|y| pen.multiply(x, y) == pen.multiply(y, x)))
                .count();
            ensure(center == 9, || format!("member {:?}: {center} central elements", m.n))?;
            let mut comms = Vec::new();
            for _ in 0..40 {
                let x = pen.random_elem(&mut rng);
                ensure(pen.power(&x, 3).is_identity(), || "an element has order 9".into())?;
                let conj: BTreeSet<GroupElem> = all.iter().map(|y| pen.conjugate(&x, y)).collect();
                let central = x.a.iter().chain(&x.b).all(|&v| v == 0);
                ensure(conj.len() == if central { 1 } else { 9 }, || {
                    format!("class of size {}", conj.len())
                })?;
                comms.push(pen.commutator(&x, &pen.random_elem(&mut rng)).c);
            }
            let rank = MatFp::from_rows(3, 2, &comms).rank();
            ensure(rank == 2, || format!("sampled commutators span dimension {rank}"))?;
        }
        Ok(format!(
            "{} members: order 3^8, d = 6, exponent 3, |Z| = |G'| = 9, noncentral classes of size 9",
            ms.len()
        ))
    });
}

fn random_aut(ctx: &HeisenbergCtx, rng: &mut ChaCha8Rng) -> AutElem {
    let f = &ctx.field;
    let e = f.degree();
    loop {
        let m = [(); 4].map(|_| f.from_index(rng.gen_range(0..f.order())));
        let tau = MatFp::from_fn(f.p(), 2 * e, e, |_, _| rng.gen_range(0..f.p()));
        if let Ok(a) = AutElem::new(f, tau, m, rng.gen_range(0..e)) {
            return a;
        }
    }
}

#[test]
fn criterion_09_automorphisms() {
    report(9, "automorphism machinery at (3,2)", || {
        let ctx = HeisenbergCtx::build(field(3, "1,0,1"));
        let f = &ctx.field;
        let g = SmallGroup::new(&ctx.pencil, DEFAULT_ORDER_BOUND).map_err(err)?;
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for i in 0..100 {
            let a = random_aut(&ctx, &mut rng);
            let h = a.hom(&ctx);
            ensure(g.is_hom_exhaustive(&g, &h) && h.is_isomorphism(), || {
                format!("automorphism {i} is not an automorphism")
            })?;
            let [al, be, ga, de] = &a.mat2;
            let det = f.sub(&f.mul(al, de), &f.mul(be, ga));
            for z in f.elements() {
                let x = ctx.elem(&f.zero(), &f.zero(), &z);
                let expected = f.frobenius(&f.mul(&det, &z), a.frob_k);
                ensure(h.apply(&x).c == expected.coords(), || {
                    format!("automorphism {i}: induced action differs at {z}")
                })?;
            }
        }
        // H/N with N = 1 is H itself; its maximal subgroups are the 40 hyperplanes of H/Φ(H).
        let maximal = g
            .enum_subgroups(None, DEFAULT_BUDGET)
            .map_err(err)?
            .iter()
            .filter(|k| k.order() == 243)
            .count();
        let hyperplanes: BTreeSet<Subspace> = Subspace::enumerate(3, 4, 3).into_iter().collect();
        let gens: Vec<MatFp> = sl2_lifts(f).iter().map(|a| a.t_matrix(f)).collect();
        let orbit = hyperplane_orbit(&gens, hyperplanes.iter().next().unwrap());
        ensure(maximal == 40 && orbit == hyperplanes, || {
            format!("{maximal} maximal subgroups, orbit of size {}", orbit.len())
        })?;
        Ok("100 automorphisms checked on all 531441 pairs; action on H' is det then Frobenius; transitive on 40 maximal subgroups".into())
    });
}

fn exhaustive_small_side(h: &GroupHom) -> Result<(), String> {
    let s = SmallGroup::new(&h.source, DEFAULT_ORDER_BOUND).map_err(err)?;
    let elems: Vec<GroupElem> = (0..s.order()).map(|i| s.elem(i)).collect();
    let imgs: Vec<GroupElem> = elems.iter().map(|x| h.apply(x)).collect();
    ensure(imgs.iter().collect::<BTreeSet<_>>().len() == elems.len(), || {
        "not injective".into()
    })?;
    let ok = (0..elems.len())
        .into_par_iter()
        .all(|x| (0..elems.len()).all(|y| imgs[s.mul(x, y)] == h.target.multiply(&imgs[x], &imgs[y])));
    ensure(ok, || "not a homomorphism".into())
}

#[test]
fn criterion_10_embedding_chain() {
    report(10, "embedding chain", || {
        let ctx = HeisenbergCtx::build(field(3, "1,0,1"));
        let z3 = Zp::new(3).unwrap();
        let (p1, h1) = eliminate(&ctx.pencil, &[1], &[], &[]).map_err(err)?;
        let expected1 = Pencil::from_mats(z3, vec![MatFp::parse(3, "1,0").unwrap(), MatFp::parse(3, "0,1").unwrap()]).unwrap();
        let (p2, h2) = eliminate(&p1, &[], &[1], &[]).map_err(err)?;
        let expected2 = Pencil::from_mats(z3, vec![MatFp::parse(3, "1").unwrap(), MatFp::parse(3, "0").unwrap()]).unwrap();
        let (p3, h3) = eliminate(&p2, &[], &[], &[1]).map_err(err)?;
        let expected3 = Pencil::from_mats(z3, vec![MatFp::identity(3, 1)]).unwrap();
        ensure(p1 == expected1 && p2 == expected2 && p3 == expected3, || {
            "chain pencils differ".into()
        })?;
        let chain = h3.then(&h2).map_err(err)?.then(&h1).map_err(err)?;
        for h in [&h1, &h2, &h3, &chain] {
            exhaustive_small_side(h)?;
        }

        let mut rng = ChaCha8Rng::seed_from_u64(10);
        let monic = |deg: usize, rng: &mut ChaCha8Rng| {
            let mut c: Vec<u32> = (0..deg).map(|_| rng.gen_range(0..3)).collect();
            c.push(1);
            Poly::new(z3, c)
        };
        let mut degrees = BTreeMap::new();
        for _ in 0..5 {
            let f = rng.gen_range(1..3);
            let (b, a) = (monic(f, &mut rng), monic(3, &mut rng));
            let h = embed_lower(&b, &a).map_err(err)?;
            exhaustive_small_side(&h).map_err(|e| format!("embed_lower({b}, {a}): {e}"))?;
            *degrees.entry(f).or_insert(0) += 1;
        }
        Ok(format!(
            "B([1]) -> B([1],[0]) -> B([1|0],[0|1]) -> H(F_9) and 5 random embeddings (by degree {degrees:?})"
        ))
    });
}
