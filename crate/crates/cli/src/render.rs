//! Deterministic text rendering: 12 significant digits, `.` decimal point,
//! `\n` line endings.

use anyhow::Result;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use promiscuity::four_mode::EntanglementReport;
use promiscuity::qudit::{CopyTangles, QuditTangleReport};

pub const SIGNIFICANT_DIGITS: usize = 12;

/// Rounds to [`SIGNIFICANT_DIGITS`] and folds `-0` into `0`.
pub fn round_sig(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x + 0.0;
    }
    let s = format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x);
    s.parse::<f64>().expect("formatted float parses") + 0.0
}

/// Shortest decimal that reads back as `round_sig(x)`.
pub fn fmt_num(x: f64) -> String {
    let r = round_sig(x);
    let mag = r.abs();
    if r == 0.0 || (1e-5..1e15).contains(&mag) {
        format!("{r}")
    } else {
        format!("{r:e}")
    }
}

pub fn round_report(report: &EntanglementReport) -> EntanglementReport {
    let mut r = report.clone();
    for v in [
        &mut r.a,
        &mut r.s,
        &mut r.interpair_contangle,
        &mut r.residual,
        &mut r.tripartite_bound,
        &mut r.monogamy_residual,
        &mut r.max_route_discrepancy,
    ] {
        *v = round_sig(*v);
    }
    for v in r.pairwise_contangle.values_mut() {
        *v = round_sig(*v);
    }
    for v in r.one_vs_rest_contangle.values_mut() {
        *v = round_sig(*v);
    }
    for v in r.pair_verdicts.values_mut() {
        v.min_pt_eigenvalue = round_sig(v.min_pt_eigenvalue);
    }
    r
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CopyView {
    pub one_vs_rest: f64,
    pub pairwise_ab: f64,
    pub pairwise_ac: f64,
    pub three_tangle: f64,
    pub entropy_a: f64,
}

impl From<&CopyTangles> for CopyView {
    fn from(c: &CopyTangles) -> Self {
        Self {
            one_vs_rest: round_sig(c.one_vs_rest),
            pairwise_ab: round_sig(c.pairwise_ab),
            pairwise_ac: round_sig(c.pairwise_ac),
            three_tangle: round_sig(c.three_tangle),
            entropy_a: round_sig(c.entropy_a),
        }
    }
}

/// Qudit report as emitted, with exact fractions rendered as `p/q`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuditReportView {
    pub d: usize,
    pub three_tangle: f64,
    pub three_tangle_exact: String,
    pub pairwise_tangle: f64,
    pub pairwise_tangle_exact: String,
    pub one_vs_rest_tangle: f64,
    pub one_vs_rest_tangle_exact: String,
    pub monogamy_gap: f64,
    pub monogamy_gap_exact: String,
    pub nongaussianity: f64,
    pub squashed_one_vs_rest: f64,
    pub squashed_tripartite_lower: f64,
    pub squashed_pairwise: String,
    pub w_pair_negativity: f64,
    pub w_pair_log_negativity: f64,
    pub ghz_copy: CopyView,
    pub w_copy: CopyView,
}

impl QuditReportView {
    pub fn new(r: &QuditTangleReport, pairwise_form: &str, neg: f64, log_neg: f64) -> Self {
        Self {
            d: r.d,
            three_tangle: round_sig(r.three_tangle),
            three_tangle_exact: r.exact.three_tangle.to_string(),
            pairwise_tangle: round_sig(r.pairwise_tangle),
            pairwise_tangle_exact: r.exact.pairwise.to_string(),
            one_vs_rest_tangle: round_sig(r.one_vs_rest_tangle),
            one_vs_rest_tangle_exact: r.exact.one_vs_rest.to_string(),
            monogamy_gap: round_sig(r.monogamy_gap),
            monogamy_gap_exact: r.exact.monogamy_gap.to_string(),
            nongaussianity: round_sig(r.nongaussianity),
            squashed_one_vs_rest: round_sig(r.squashed_one_vs_rest),
            squashed_tripartite_lower: round_sig(r.squashed_tripartite_lower),
            squashed_pairwise: pairwise_form.to_string(),
            w_pair_negativity: round_sig(neg),
            w_pair_log_negativity: round_sig(log_neg),
            ghz_copy: (&r.ghz_copy).into(),
            w_copy: (&r.w_copy).into(),
        }
    }
}

pub fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let mut out = serde_json::to_string_pretty(value)?;
    out.push('\n');
    Ok(out)
}

fn child(name: &str, key: &str) -> String {
    if name.is_empty() {
        key.to_string()
    } else {
        format!("{name}_{key}")
    }
}

fn flatten(name: &str, value: &Value, out: &mut Vec<(String, String)>) {
    match value {
        Value::Object(map) => {
            for (k, v) in map {
                flatten(&child(name, k), v, out);
            }
        }
        Value::Array(items) => {
            for (i, v) in items.iter().enumerate() {
                flatten(&child(name, &i.to_string()), v, out);
            }
        }
        Value::Number(n) => {
            let text = match (n.as_u64(), n.as_i64()) {
                (Some(u), _) => u.to_string(),
                (None, Some(i)) => i.to_string(),
                _ => fmt_num(n.as_f64().unwrap_or(f64::NAN)),
            };
            out.push((name.to_string(), text));
        }
        Value::Bool(b) => out.push((name.to_string(), b.to_string())),
        Value::String(s) => out.push((name.to_string(), s.clone())),
        Value::Null => out.push((name.to_string(), String::new())),
    }
}

/// One header line plus one data line; nested fields are joined with `_`.
pub fn to_csv_record<T: Serialize>(value: &T) -> Result<String> {
    let tree = serde_json::to_value(value)?;
    let mut cells = Vec::new();
    flatten("", &tree, &mut cells);
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    w.write_record(cells.iter().map(|(k, _)| k.as_str()))?;
    w.write_record(cells.iter().map(|(_, v)| v.as_str()))?;
    Ok(String::from_utf8(w.into_inner()?)?)
}
