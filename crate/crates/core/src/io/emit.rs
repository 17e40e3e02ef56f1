// SPDX-License-Identifier: Apache-2.0

//! CSV and JSON writers. Numbers carry 12 significant digits so output is
//! byte-stable across runs and platforms.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::Path;

use serde_json::{json, Map, Value};

use crate::error::Result;
use crate::fmo::FmoPoint;
use crate::sweep::{PowerRow, SweepTable};
use crate::thermo::ThermoReport;

pub const REPORT_HEADER: &str = "j_abs,j_loss,power,ratio,sigma,verdict";
pub const SWEEP_HEADER: &str = "axis,j_abs,j_loss,power,ratio,sigma,verdict";
pub const FMO_HEADER: &str = "t_ps,j_abs,j_loss,sink_flow,sigma";
pub const POWER_HEADER: &str = "ratio,p_dec,p_ham";

/// `x` in scientific notation with 12 significant digits.
pub fn num(x: f64) -> String {
    format!("{x:.11e}")
}

/// `x` rounded to 12 significant digits, as a JSON value (`null` if not finite).
pub fn json_num(x: f64) -> Value {
    if x.is_finite() {
        json!(num(x).parse::<f64>().expect("formatted float parses"))
    } else {
        Value::Null
    }
}

fn csv_line(fields: &[String]) -> String {
    let mut s = fields.join(",");
    s.push('\n');
    s
}

fn report_fields(r: &ThermoReport) -> Vec<String> {
    vec![num(r.j_abs), num(r.j_loss), num(r.power), num(r.ratio), num(r.sigma), r.verdict.to_string()]
}

pub fn report_csv(r: &ThermoReport) -> String {
    format!("{REPORT_HEADER}\n{}", csv_line(&report_fields(r)))
}

pub fn sweep_csv(t: &SweepTable) -> String {
    let mut s = format!("{SWEEP_HEADER}\n");
    for row in &t.rows {
        let mut fields = vec![num(row.axis)];
        fields.extend(report_fields(&row.report));
        s.push_str(&csv_line(&fields));
    }
    for (lo, hi) in &t.violations {
        let _ = writeln!(s, "# violation: {}..{}", num(*lo), num(*hi));
    }
    s
}

pub fn fmo_csv(points: &[FmoPoint]) -> String {
    let mut s = format!("{FMO_HEADER}\n");
    for p in points {
        s.push_str(&csv_line(&[num(p.t_ps), num(p.j_abs), num(p.j_loss), num(p.sink_flow), num(p.sigma)]));
    }
    s
}

/// Power table; the Hamiltonian-scheme zero crossing, if found, goes in a footer.
pub fn power_csv(rows: &[PowerRow], ham_zero: Option<f64>) -> String {
    let mut s = format!("{POWER_HEADER}\n");
    for r in rows {
        s.push_str(&csv_line(&[num(r.ratio), num(r.p_dec), num(r.p_ham)]));
    }
    if let Some(z) = ham_zero {
        let _ = writeln!(s, "# p_ham zero: {}", num(z));
    }
    s
}

/// Rounds every number inside a JSON value.
pub fn round_json(v: Value) -> Value {
    match v {
        Value::Number(n) => match n.as_f64() {
            Some(x) if !n.is_i64() && !n.is_u64() => json_num(x),
            _ => Value::Number(n),
        },
        Value::Array(a) => Value::Array(a.into_iter().map(round_json).collect()),
        Value::Object(o) => Value::Object(o.into_iter().map(|(k, v)| (k, round_json(v))).collect()),
        other => other,
    }
}

pub fn report_row(r: &ThermoReport) -> Value {
    json!({
        "j_abs": r.j_abs,
        "j_loss": r.j_loss,
        "power": r.power,
        "ratio": r.ratio,
        "sigma": r.sigma,
        "verdict": r.verdict,
    })
}

/// `{model, params, rows, violations, units}` document, pretty-printed.
pub fn json_document(
    model: &str,
    params: Value,
    rows: Vec<Value>,
    violations: &[(f64, f64)],
    units: &[(&str, &str)],
) -> String {
    let units: Map<String, Value> = units.iter().map(|(k, v)| (k.to_string(), json!(v))).collect();
    let doc = json!({
        "model": model,
        "params": params,
        "rows": rows,
        "violations": violations.iter().map(|(lo, hi)| json!([lo, hi])).collect::<Vec<_>>(),
        "units": units,
    });
    let mut s = serde_json::to_string_pretty(&round_json(doc)).expect("json serializes");
    s.push('\n');
    s
}

pub const NATURAL_UNITS: &[(&str, &str)] = &[
    ("energy", "natural (hbar = k_B = 1)"),
    ("current", "energy per unit time"),
    ("sigma", "per unit time"),
];

pub const FMO_UNITS: &[(&str, &str)] = &[
    ("t_ps", "ps"),
    ("j_abs", "cm^-1/ps"),
    ("j_loss", "cm^-1/ps"),
    ("sink_flow", "cm^-1/ps"),
    ("sigma", "1/ps (k_B = 1)"),
];

pub fn sweep_json(t: &SweepTable) -> Result<String> {
    let rows = t
        .rows
        .iter()
        .map(|r| {
            let mut v = report_row(&r.report);
            v["axis"] = json!(r.axis);
            v
        })
        .collect();
    let params = json!({
        "axis": t.spec.axis,
        "grid_lo": t.spec.grid.first(),
        "grid_hi": t.spec.grid.last(),
        "n_points": t.spec.grid.len(),
        "fixed": t.spec.fixed,
    });
    Ok(json_document(t.spec.model.as_str(), params, rows, &t.violations, NATURAL_UNITS))
}

/// Writes `text` to `path`, or to stdout when `path` is `None`.
pub fn write_output(text: &str, path: Option<&Path>) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, text)?,
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())?;
            out.flush()?;
        }
    }
    Ok(())
}
