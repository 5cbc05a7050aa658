//! The `anglekit-report/1` JSON envelope and payload encoders.

use anglekit::angle::CensusMode;
use anglekit::catalog::{BoundsResult, VerifyOutcome};
use anglekit::numeric::Expr;
use anglekit::report::{AngleValue, CensusCount, CensusReport};
use anglekit::search::{
    ExtensionResult, FalsificationReport, PointStatus, ProbeRow, ProbeStatus, SubsetResult, TrialOutcome,
};
use serde_json::{json, Value};
use std::path::Path;

pub const REPORT_SCHEMA: &str = "anglekit-report/1";

/// Significant digits for angles that are not known π-multiples.
pub const DIGITS: usize = 50;

pub fn envelope(command: &str, params: Value, seed: Option<u64>, payload: Value) -> Value {
    json!({
        "schema": REPORT_SCHEMA,
        "tool": "anglekit",
        "version": env!("CARGO_PKG_VERSION"),
        "command": command,
        "params": params,
        "seed": seed,
        "payload": payload,
    })
}

pub fn write(path: &Path, report: &Value) -> std::io::Result<()> {
    let mut text = serde_json::to_string_pretty(report).expect("reports always serialize");
    text.push('\n');
    std::fs::write(path, text)
}

fn radians(v: &AngleValue) -> String {
    match v.pi_rational() {
        Some(p) if p.is_zero() => "0".to_string(),
        Some(p) => Expr::pi_times(p.num(), p.den())
            .eval(4 * DIGITS as u32 + 32)
            .map(|iv| iv.to_significant(DIGITS))
            .unwrap_or_else(|_| format!("{:e}", p.to_f64())),
        None => v.display(DIGITS),
    }
}

pub fn mode(m: CensusMode) -> &'static str {
    match m {
        CensusMode::ExcludeZero => "exclude_zero",
        CensusMode::IncludeZero => "include_zero",
    }
}

pub fn census(r: &CensusReport) -> Value {
    let count = match r.count {
        CensusCount::Exact(n) => json!(n),
        CensusCount::Range { min, max } => json!({ "min": min, "max": max }),
    };
    let values: Vec<Value> = r
        .values
        .iter()
        .zip(&r.witnesses)
        .map(|(v, w)| {
            json!({
                "pi": v.pi_rational().map(|p| p.to_ascii()),
                "label": v.display(DIGITS),
                "radians": radians(v),
                "witness": w,
            })
        })
        .collect();
    json!({
        "mode": mode(r.mode),
        "count": count,
        "certification": r.certification.to_string(),
        "precision_bits": r.precision_bits,
        "values": values,
        "summary": r.summary(),
    })
}

pub fn verify(out: &VerifyOutcome, points: usize) -> Value {
    json!({
        "name": out.name,
        "points": points,
        "passed": out.passed,
        "detail": out.detail,
        "census": out.report.as_ref().ok().map(census),
    })
}

pub fn bounds(b: &BoundsResult) -> Value {
    json!({ "k": b.k, "lower": b.lower, "upper": b.upper, "exact": b.exact })
}

pub fn extension(r: &ExtensionResult) -> Value {
    let points: Vec<Value> = r
        .certified
        .iter()
        .map(|p| {
            json!({
                "point": p.point.to_string(),
                "approx": [p.approx.0, p.approx.1],
                "status": match p.status {
                    PointStatus::Exact => "exact",
                    PointStatus::CertifiedNumeric => "certified",
                },
                "census": census(&p.census),
            })
        })
        .collect();
    json!({
        "k": r.k,
        "base_census": census(&r.base_census),
        "grid": { "center": [r.grid.center.0, r.grid.center.1], "half_width": r.grid.half_width, "step": r.grid.step },
        "grid_hits": r.grid_hits,
        "certified_points": points,
        "uncertified": r.uncertified.iter().map(|p| [p.0, p.1]).collect::<Vec<_>>(),
        "compatible": r.compatible,
        "max_compatible_size": r.max_compatible_sets.first().map_or(0, Vec::len),
        "max_compatible_sets": r.max_compatible_sets,
    })
}

pub fn subset(r: &SubsetResult) -> Value {
    let witnesses: Vec<Value> =
        r.witnesses.iter().map(|w| json!({ "indices": w.indices, "census": census(&w.report) })).collect();
    json!({
        "universe": r.universe,
        "k": r.k,
        "best_size": r.best_size,
        "witnesses": witnesses,
        "nodes_explored": r.nodes_explored,
    })
}

pub fn falsify(r: &FalsificationReport) -> Value {
    let counterexamples: Vec<Value> = r
        .counterexamples
        .iter()
        .map(|(trial, out)| match out {
            TrialOutcome::Counterexample { points, angles, distance } => json!({
                "trial": trial,
                "points": points.iter().map(|p| [p.0, p.1]).collect::<Vec<_>>(),
                "angles": angles,
                "distance": distance,
            }),
            other => json!({ "trial": trial, "outcome": format!("{other:?}") }),
        })
        .collect();
    json!({
        "trials": r.options.trials,
        "tol": r.options.tol,
        "max_evals": r.options.max_evals,
        "rectangles": r.rectangles,
        "twin_equilateral": r.twin_equilateral,
        "pentagon_minus_vertex": r.pentagon_minus_vertex,
        "stays_above": r.stays_above,
        "degenerate": r.degenerate,
        "counterexamples": counterexamples,
    })
}

pub fn probe_status(s: ProbeStatus) -> &'static str {
    match s {
        ProbeStatus::Consistent => "consistent",
        ProbeStatus::BelowConjecture => "below",
        ProbeStatus::ExceedsConjecture => "exceeds",
    }
}

pub fn probe(rows: &[ProbeRow]) -> Value {
    let rows: Vec<Value> = rows
        .iter()
        .map(|r| {
            json!({
                "k": r.k,
                "best": r.best,
                "universe": r.universe,
                "conjectured": r.conjectured,
                "lower": r.lower,
                "upper": r.upper,
                "exact": r.exact,
                "status": probe_status(r.status),
            })
        })
        .collect();
    json!({ "rows": rows })
}
