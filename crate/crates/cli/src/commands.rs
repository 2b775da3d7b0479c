use serde_json::json;

use heisquot::brahana::{companion_pencil, descriptor};
use heisquot::ff::{is_prime, FqField, Poly, Zp};
use heisquot::heisenberg::{codim2_count, enum_codim2, quotient_pencil, HeisenbergCtx};
use heisquot::isotest::{classify_family, iso_test, verify_certificate, IsoVerdict, DEFAULT_SCALE_BOUND};
use heisquot::linal::{MatFp, Subspace};
use heisquot::profile::{
    all_combinations_invertible, brute_profile, formula_profile, last_row_maximal, quotient_profile, stratify, ProfileReport,
    SmallGroup, DEFAULT_BUDGET, DEFAULT_ORDER_BOUND,
};

use crate::report::Record;
use crate::{Common, Failure, Outcome};

pub type CmdResult = Result<Outcome, Failure>;

pub fn build_field(c: &Common) -> Result<FqField, Failure> {
    if c.e == 0 {
        return Err(Failure::Usage("e must be at least 1".into()));
    }
    let zp = Zp::new(c.p)?;
    match &c.modulus {
        Some(m) => {
            let field = FqField::new(Poly::parse(zp, m)?)?;
            if field.degree() != c.e {
                return Err(Failure::Usage(format!(
                    "modulus has degree {}, but e = {}",
                    field.degree(),
                    c.e
                )));
            }
            Ok(field)
        }
        None => Ok(FqField::search(c.p, c.e, c.seed)?),
    }
}

pub fn provenance(command: &str, c: &Common, field: &FqField) -> Record {
    Record::new(
        "provenance",
        json!({
            "tool": "heisquot",
            "version": env!("CARGO_PKG_VERSION"),
            "command": command,
            "p": c.p,
            "e": c.e,
            "modulus": field.modulus().coeffs(),
            "seed": c.seed,
        }),
    )
}

/// Checks shared by the commands that enumerate the family.
pub fn family_ctx(c: &Common) -> Result<HeisenbergCtx, Failure> {
    let field = build_field(c)?;
    if c.e < 2 || !is_prime(c.e as u64) {
        return Err(Failure::Usage(format!("the family needs a prime e >= 2, got {}", c.e)));
    }
    let q = field.order();
    if !c.unsafe_scale && q > DEFAULT_SCALE_BOUND {
        return Err(Failure::Usage(format!(
            "p^e = {q} exceeds the guard {DEFAULT_SCALE_BOUND}; pass --unsafe-scale to override"
        )));
    }
    Ok(HeisenbergCtx::build(field))
}

pub fn scale_bound(c: &Common) -> u128 {
    if c.unsafe_scale {
        u128::MAX
    } else {
        DEFAULT_SCALE_BOUND
    }
}

fn pencil_texts(mats: &[MatFp]) -> Vec<String> {
    mats.iter().map(|m| m.to_text()).collect()
}

pub fn field(c: &Common) -> CmdResult {
    let f = build_field(c)?;
    let mut records = vec![provenance("field", c, &f)];
    records.push(Record::new(
        "field",
        json!({"order": f.order().to_string(), "modulus": f.modulus().coeffs(), "modulus_text": f.modulus().to_string()}),
    ));
    for (k, m) in f.structure_matrices().iter().enumerate() {
        records.push(Record::new("structure_matrix", json!({"k": k, "matrix": m.to_text()})));
    }
    Ok(Outcome { records, ok: true })
}

pub fn family(c: &Common) -> CmdResult {
    let ctx = family_ctx(c)?;
    let mut records = vec![provenance("family", c, &ctx.field)];
    let subs = enum_codim2(&ctx.field)?;
    records.push(Record::new(
        "family",
        json!({"member_count": subs.len(), "expected": codim2_count(c.p, c.e).to_string()}),
    ));
    for (i, n) in subs.iter().enumerate() {
        let m = quotient_pencil(&ctx, n)?;
        records.push(Record::new(
            "member",
            json!({
                "index": i,
                "n": n.basis().to_text(),
                "complement": [m.complement.0, m.complement.1],
                "projection": m.projection.to_text(),
                "raw": pencil_texts(m.raw.mats()),
                "pencil": pencil_texts(m.pencil.mats()),
                "min_poly": m.min_poly.coeffs(),
            }),
        ));
    }
    Ok(Outcome { records, ok: true })
}

pub fn parse_subspace(p: u32, e: usize, text: &str) -> Result<Subspace, Failure> {
    let m = MatFp::parse(p, text)?;
    if m.rows() == 0 {
        return Ok(Subspace::zero(p, e));
    }
    if m.cols() != e {
        return Err(Failure::Usage(format!(
            "subspace basis {text:?} has {} columns, expected {e}",
            m.cols()
        )));
    }
    Ok(Subspace::row_space(&m))
}

pub fn iso(c: &Common, n1: &str, n2: &str) -> CmdResult {
    let ctx = family_ctx(c)?;
    let (a, b) = (parse_subspace(c.p, c.e, n1)?, parse_subspace(c.p, c.e, n2)?);
    let mut records = vec![provenance("iso", c, &ctx.field)];
    let mut ok = true;
    match iso_test(&ctx, &a, &b)? {
        IsoVerdict::NonIso => {
            records.push(Record::new(
                "iso",
                json!({"n1": a.basis().to_text(), "n2": b.basis().to_text(), "verdict": "NONISO"}),
            ));
        }
        IsoVerdict::Iso(cert) => {
            let verified = verify_certificate(&ctx, &cert);
            ok &= verified;
            records.push(Record::new(
                "iso",
                json!({
                    "n1": a.basis().to_text(),
                    "n2": b.basis().to_text(),
                    "verdict": "ISO",
                    "gamma_lambda": cert.gamma.lambda.coords(),
                    "gamma_frobenius": cert.gamma.frob_k,
                    "t": cert.map.t.to_text(),
                    "d": cert.map.d.to_text(),
                    "tau": cert.map.tau.to_text(),
                    "verified": verified,
                }),
            ));
        }
    }
    Ok(Outcome { records, ok })
}

pub fn classify(c: &Common) -> CmdResult {
    let ctx = family_ctx(c)?;
    let cls = classify_family(&ctx, scale_bound(c))?;
    let rep = cls.report();
    let ok = rep.class_count == rep.burnside_count
        && rep.class_count as u128 >= rep.lower_bound
        && rep.orbits.iter().map(|o| o.size).sum::<usize>() == rep.member_count;
    let mut records = vec![provenance("classify", c, &ctx.field)];
    records.push(Record::new(
        "classification",
        json!({
            "p": rep.p,
            "e": rep.e,
            "member_count": rep.member_count,
            "class_count": rep.class_count,
            "burnside_count": rep.burnside_count,
            "lower_bound": rep.lower_bound.to_string(),
            "gamma_order": cls.gamma_order,
        }),
    ));
    for o in &rep.orbits {
        records.push(Record::new(
            "orbit",
            json!({"label": o.label, "size": o.size, "a_coeffs": o.a_coeffs}),
        ));
    }
    Ok(Outcome { records, ok })
}

fn profile_records(rep: &ProfileReport, basis: &str) -> Vec<Record> {
    rep.records()
        .into_iter()
        .map(|r| {
            Record::new(
                "profile",
                json!({
                    "basis": basis,
                    "order": r.order,
                    "d": r.d,
                    "derived": r.derived,
                    "center": r.center,
                    "exponent": r.exponent,
                    "classes": r.classes,
                    "count": r.count,
                }),
            )
        })
        .collect()
}

pub fn profile(c: &Common, gen_bound: Option<u32>, slow: bool) -> CmdResult {
    let field = build_field(c)?;
    let (order_bound, budget) = if c.unsafe_scale {
        (usize::MAX, u64::MAX)
    } else {
        (DEFAULT_ORDER_BOUND, DEFAULT_BUDGET)
    };
    let mut records = vec![provenance("profile", c, &field)];
    let mut ok = true;
    let g_pen = companion_pencil(field.modulus())?;
    let (m_pen, _) = last_row_maximal(&g_pen)?;
    let (dg, dm) = (descriptor(&g_pen)?.min_generators, descriptor(&m_pen)?.min_generators);
    records.push(Record::new(
        "group",
        json!({
            "order": g_pen.order().to_string(),
            "pencil": pencil_texts(g_pen.mats()),
            "maximal_order": m_pen.order().to_string(),
            "d_g": dg,
            "d_m": dm,
        }),
    ));
    let formula = if dg != dm + 1 {
        records.push(Record::new(
            "skipped",
            json!({"what": "formula", "reason": "d(G) is not 1 + d(M)"}),
        ));
        None
    } else if m_pen.order() <= order_bound as u128 {
        let m = SmallGroup::new(&m_pen, order_bound)?;
        let st = stratify(&m, &m.enum_subgroups(None, budget)?);
        let rep = formula_profile(Some(&st), dg as u32)?;
        records.extend(profile_records(&rep, "formula"));
        Some(rep)
    } else {
        records.push(Record::new(
            "skipped",
            json!({"what": "formula", "reason": "maximal subgroup above the order guard"}),
        ));
        None
    };
    if slow || g_pen.order() < DEFAULT_ORDER_BOUND as u128 {
        let g = SmallGroup::new(&g_pen, order_bound)?;
        let brute = brute_profile(&g, &g.enum_subgroups(gen_bound, budget)?);
        records.extend(profile_records(&brute, "brute"));
        if let (Some(f), None) = (&formula, gen_bound) {
            let agree = f.classes == brute.classes;
            ok &= agree;
            records.push(Record::new(
                "profile_check",
                json!({"agree": agree, "classes": brute.classes.len()}),
            ));
        }
    } else {
        records.push(Record::new(
            "skipped",
            json!({"what": "brute", "reason": "group order at or above the order guard; pass --slow"}),
        ));
    }
    if c.e >= 2 && is_prime(c.e as u64) && (c.unsafe_scale || field.order() <= DEFAULT_SCALE_BOUND) {
        let ctx = HeisenbergCtx::build(field);
        let mut first: Option<ProfileReport> = None;
        let (mut identical, mut invertible) = (true, true);
        let subs = enum_codim2(&ctx.field)?;
        for n in &subs {
            let m = quotient_pencil(&ctx, n)?;
            invertible &= all_combinations_invertible(&m.pencil);
            let rep = quotient_profile(&m)?;
            match &first {
                None => first = Some(rep),
                Some(f) => identical &= *f == rep,
            }
        }
        ok &= identical && invertible;
        if let Some(f) = &first {
            records.extend(profile_records(f, "quotient"));
        }
        records.push(Record::new(
            "quotient_check",
            json!({"members": subs.len(), "identical": identical, "combinations_invertible": invertible}),
        ));
    }
    Ok(Outcome { records, ok })
}
