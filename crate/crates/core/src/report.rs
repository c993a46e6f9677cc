//! Text and JSON renderings of the library's reports.
//!
//! Both forms carry the arithmetic mode and seed of the run, and the text
//! form prints every numeric field exactly as the JSON form does.

use serde::Serialize;
use serde_json::{json, Value};

use crate::eval::GapReport;
use crate::rational::format_q;
use crate::reduction::ReductionReport;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Text,
    Json,
}

impl std::str::FromStr for ReportFormat {
    type Err = crate::error::Error;

    fn from_str(s: &str) -> crate::error::Result<Self> {
        match s {
            "text" => Ok(ReportFormat::Text),
            "json" | "structured" => Ok(ReportFormat::Json),
            _ => Err(crate::error::Error::Parameter(format!("unknown report format {s:?}"))),
        }
    }
}

/// Reproducibility header attached to every report.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RunMeta {
    pub command: String,
    pub arithmetic: String,
    pub seed: Option<u64>,
}

/// Builds `{"meta": ..., "<kind>": body}`.
pub fn envelope<T: Serialize>(meta: &RunMeta, kind: &str, body: &T) -> Value {
    let mut doc = json!({ "meta": meta });
    doc[kind] = serde_json::to_value(body).expect("report types serialize");
    doc
}

/// Stable line-oriented rendering of a JSON tree: one `path = value` line
/// per leaf, object keys in document order, array entries by index.
pub fn flatten_text(v: &Value) -> String {
    fn walk(prefix: &str, v: &Value, out: &mut String) {
        match v {
            Value::Object(map) => {
                for (k, child) in map {
                    let p = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                    walk(&p, child, out);
                }
            }
            Value::Array(items) if !items.is_empty() && items.iter().any(|i| i.is_object() || i.is_array()) => {
                for (i, child) in items.iter().enumerate() {
                    walk(&format!("{prefix}[{i}]"), child, out);
                }
            }
            Value::Array(items) => {
                let parts: Vec<String> = items.iter().map(scalar_text).collect();
                out.push_str(&format!("{prefix} = [{}]\n", parts.join(", ")));
            }
            leaf => out.push_str(&format!("{prefix} = {}\n", scalar_text(leaf))),
        }
    }
    let mut out = String::new();
    walk("", v, &mut out);
    out
}

fn scalar_text(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => "-".into(),
        other => other.to_string(),
    }
}

pub fn render(doc: &Value, format: ReportFormat) -> String {
    match format {
        ReportFormat::Json => {
            let mut s = serde_json::to_string_pretty(doc).expect("json values serialize");
            s.push('\n');
            s
        }
        ReportFormat::Text => flatten_text(doc),
    }
}

pub fn emit_gap_report(report: &GapReport, meta: &RunMeta, format: ReportFormat) -> String {
    render(&envelope(meta, "gap_report", report), format)
}

pub fn emit_reduction_report(report: &ReductionReport, meta: &RunMeta, format: ReportFormat) -> String {
    render(&envelope(meta, "reduction", report), format)
}

/// One line per loop value, for quick reading.
pub fn reduction_table(report: &ReductionReport) -> String {
    let mut out = String::from("k\tstatus\tt*\tell\tclique\tset\n");
    for r in &report.records {
        let set = r
            .candidate_set
            .as_ref()
            .map(|s| s.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(","))
            .unwrap_or_else(|| "-".into());
        let opt = |v: Option<usize>| v.map_or("-".to_string(), |x| x.to_string());
        out.push_str(&format!(
            "{}\t{:?}\t{}\t{}\t{}\t{}\n",
            r.k,
            r.oracle_status,
            opt(r.t_star),
            opt(r.ell),
            r.is_clique,
            set
        ));
    }
    out.push_str(&format!(
        "best clique ({}): {}\n",
        report.clique_size,
        report.clique.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(",")
    ));
    out
}

/// Exact value as printed in reports.
pub fn fmt_q(x: &crate::rational::Q) -> String {
    format_q(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eval::cce_gap;
    use crate::game::{Game, MixedStrategy, SparseMixture};

    #[test]
    fn zero_game_report() {
        let g = Game::zero(2);
        let mix = SparseMixture::product(MixedStrategy::uniform(2), MixedStrategy::uniform(2)).unwrap();
        let rep = cce_gap(&g, &mix).unwrap();
        let meta = RunMeta {
            command: "verify".into(),
            arithmetic: "exact".into(),
            seed: None,
        };
        let text = emit_gap_report(&rep, &meta, ReportFormat::Text);
        assert!(text.contains("gap_report.welfare = 0\n"));
        assert!(text.contains("gap_report.cce_gap = 0\n"));
        assert!(text.contains("meta.arithmetic = exact\n"));
        let js: Value = serde_json::from_str(&emit_gap_report(&rep, &meta, ReportFormat::Json)).unwrap();
        assert_eq!(js["gap_report"]["welfare"], "0");
    }
}
