//! JSON forms of reports and phase points. Rationals are strings `"p/q"` or `"p"`.

use anyhow::{anyhow, bail, Result};
use hitchin_core::curve::CurveSpec;
use hitchin_core::exact::{parse_rational, Assignment, Rational, VarId};
use hitchin_core::lax::{is_free_alpha, is_free_beta};
use hitchin_core::report::{CheckReport, Failure};
use serde_json::{json, Map, Value};

use crate::verify::VerifyOptions;

pub const SCHEMA: u32 = 1;

fn q(r: &Rational) -> Value {
    Value::String(r.to_string())
}

fn get_q(v: &Value, what: &str) -> Result<Rational> {
    let s = match v {
        Value::String(s) => s.clone(),
        Value::Number(n) => n.to_string(),
        _ => bail!("{what}: expected a rational string"),
    };
    parse_rational(s.trim()).ok_or_else(|| anyhow!("{what}: not a rational: {s}"))
}

fn get_list<'a>(doc: &'a Value, key: &str) -> Result<&'a Vec<Value>> {
    doc.get(key).and_then(Value::as_array).ok_or_else(|| anyhow!("missing array `{key}`"))
}

pub fn curve_json(c: &CurveSpec) -> Value {
    json!({ "genus": c.genus, "p": c.p.iter().map(q).collect::<Vec<_>>() })
}

/// Phase point JSON: `a`, `b`, `kappa` per point, `alpha` and `beta` as per-point
/// pairs `[x_1s, x_2s]`. Gauge-fixed entries are written as `null`.
pub fn point_json(curve: &CurveSpec, v: &Assignment) -> Value {
    let g = curve.genus;
    let n = 2 * g;
    let per = |f: fn(u8) -> VarId| (1..=n as u8).map(|s| v.get(&f(s)).map(q).unwrap_or(Value::Null)).collect::<Vec<_>>();
    let pairs = |f: fn(u8, u8) -> VarId, free: fn(usize, usize, usize) -> bool| {
        (1..=n)
            .map(|s| {
                Value::Array(
                    (1..=2)
                        .map(|i| if free(g, i, s) { v.get(&f(i as u8, s as u8)).map(q).unwrap_or(Value::Null) } else { Value::Null })
                        .collect(),
                )
            })
            .collect::<Vec<_>>()
    };
    json!({
        "curve": curve_json(curve),
        "a": per(VarId::A),
        "b": per(VarId::B),
        "kappa": per(VarId::Kappa),
        "alpha": pairs(VarId::Alpha, is_free_alpha),
        "beta": pairs(VarId::Beta, is_free_beta),
    })
}

/// Reads a point written by [`point_json`]. `alpha`/`beta` may stop before the gauge points.
pub fn parse_point(text: &str) -> Result<(CurveSpec, Assignment)> {
    let doc: Value = serde_json::from_str(text)?;
    let curve_doc = doc.get("curve").ok_or_else(|| anyhow!("missing `curve`"))?;
    let genus = curve_doc.get("genus").and_then(Value::as_u64).ok_or_else(|| anyhow!("missing curve genus"))? as usize;
    if genus < 2 {
        bail!("genus must be at least 2");
    }
    let p = get_list(curve_doc, "p")?.iter().map(|x| get_q(x, "curve p")).collect::<Result<Vec<_>>>()?;
    let curve = CurveSpec::new(genus, p).map_err(|e| anyhow!("curve: {e}"))?;
    let n = 2 * genus;
    let mut v = Assignment::new();
    for (key, f) in [("a", VarId::A as fn(u8) -> VarId), ("b", VarId::B), ("kappa", VarId::Kappa)] {
        let list = get_list(&doc, key)?;
        if list.len() != n {
            bail!("`{key}` needs {n} entries");
        }
        for (s, x) in list.iter().enumerate() {
            v.insert(f(s as u8 + 1), get_q(x, key)?);
        }
    }
    for (key, f, free) in [
        ("alpha", VarId::Alpha as fn(u8, u8) -> VarId, is_free_alpha as fn(usize, usize, usize) -> bool),
        ("beta", VarId::Beta, is_free_beta),
    ] {
        let list = get_list(&doc, key)?;
        for s in 1..=n {
            for i in 1..=2 {
                if !free(genus, i, s) {
                    continue;
                }
                let x = list
                    .get(s - 1)
                    .and_then(|pair| pair.get(i - 1))
                    .filter(|x| !x.is_null())
                    .ok_or_else(|| anyhow!("`{key}` is missing entry {i} of point {s}"))?;
                v.insert(f(i as u8, s as u8), get_q(x, key)?);
            }
        }
    }
    Ok((curve, v))
}

fn failure_json(f: &Failure) -> Value {
    let mut o = json!({ "trial": f.trial, "seed": f.seed, "item": f.item, "detail": f.detail });
    if let (Some(c), Some(p)) = (&f.curve, &f.point) {
        o["point"] = point_json(c, p);
    }
    o
}

pub fn report_json(r: &CheckReport) -> Value {
    let defects: Map<String, Value> = r.max_defect.iter().map(|(k, v)| (k.clone(), q(v))).collect();
    json!({
        "check": r.check,
        "genus": r.genus,
        "trials": r.trials,
        "seeds": r.seeds,
        "passed": r.passed,
        "informational": r.informational,
        "sigma": r.sigma,
        "sigma_h": r.sigma_h,
        "max_defect": defects,
        "notes": r.notes,
        "failures": r.failures.iter().map(failure_json).collect::<Vec<_>>(),
    })
}

pub fn verify_document(target: &str, opts: &VerifyOptions, reports: &[CheckReport], passed: bool) -> Value {
    json!({
        "schema": SCHEMA,
        "command": format!("verify {target}"),
        "seed": opts.seed,
        "p1": opts.p1.as_ref().map(q),
        "sampling": format!("{:?}", opts.sampling),
        "passed": passed,
        "checks": reports.iter().map(report_json).collect::<Vec<_>>(),
    })
}

pub fn to_pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}
