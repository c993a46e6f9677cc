//! File formats: DIMACS-style graphs and JSON documents for games,
//! mixtures, joint distributions and node sets.
//!
//! Rationals are written as `"num/den"` strings (plain integers without a
//! slash). On input, JSON numbers are also accepted and converted to the
//! exact dyadic value of the double.

use std::fs;
use std::path::Path;

use serde::Serializer;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::game::{ActionLabel, Game, JointDistribution, MixedStrategy, SparseMixture};
use crate::graph::{Graph, NodeSet};
use crate::rational::{self, Q};

pub fn ser_q<S: Serializer>(x: &Q, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&rational::format_q(x))
}

pub fn ser_q_vec<S: Serializer>(xs: &[Q], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(xs.iter().map(rational::format_q))
}

pub fn ser_opt_q<S: Serializer>(x: &Option<Q>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match x {
        Some(v) => ser_q(v, s),
        None => s.serialize_none(),
    }
}

// ---- graphs ---------------------------------------------------------------

/// Parses the DIMACS-flavoured edge list: `c` comments, one `p <n> <m>`
/// header, then `e <i> <j>` lines with 1-based nodes. A `p edge <n> <m>`
/// header is accepted too.
pub fn parse_graph_str(text: &str) -> Result<Graph> {
    let mut graph: Option<Graph> = None;
    let mut declared = 0usize;
    let mut last_line = 0usize;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        last_line = line;
        let fields: Vec<&str> = raw.split_whitespace().collect();
        let err = |msg: String| Error::Parse { line, msg };
        match fields.first().copied() {
            None | Some("c") => continue,
            Some("p") => {
                if graph.is_some() {
                    return Err(err("second header line".into()));
                }
                let nums: Vec<&str> = fields[1..].iter().copied().filter(|f| *f != "edge" && *f != "col").collect();
                if nums.len() != 2 {
                    return Err(err(format!("expected \"p <n> <m>\", got {raw:?}")));
                }
                let n: usize = nums[0].parse().map_err(|_| err(format!("bad node count {:?}", nums[0])))?;
                declared = nums[1].parse().map_err(|_| err(format!("bad edge count {:?}", nums[1])))?;
                graph = Some(Graph::empty(n));
            }
            Some("e") => {
                let g = graph.as_mut().ok_or_else(|| err("edge line before header".into()))?;
                if fields.len() != 3 {
                    return Err(err(format!("expected \"e <i> <j>\", got {raw:?}")));
                }
                let i: usize = fields[1].parse().map_err(|_| err(format!("bad node {:?}", fields[1])))?;
                let j: usize = fields[2].parse().map_err(|_| err(format!("bad node {:?}", fields[2])))?;
                g.add_edge(i, j).map_err(|e| match e {
                    Error::Graph(msg) => err(msg),
                    other => err(other.to_string()),
                })?;
            }
            Some(tag) => return Err(err(format!("unknown line type {tag:?}"))),
        }
    }
    let g = graph.ok_or(Error::Parse {
        line: last_line.max(1),
        msg: "missing \"p\" header".into(),
    })?;
    if g.edge_count() != declared {
        return Err(Error::Parse {
            line: last_line,
            msg: format!("header declares {declared} edges, found {}", g.edge_count()),
        });
    }
    Ok(g)
}

pub fn parse_graph(path: &Path) -> Result<Graph> {
    parse_graph_str(&fs::read_to_string(path)?)
}

pub fn emit_graph(g: &Graph) -> String {
    let mut out = format!("p {} {}\n", g.n(), g.edge_count());
    for (i, j) in g.edges() {
        out.push_str(&format!("e {i} {j}\n"));
    }
    out
}

// ---- rationals inside JSON --------------------------------------------------

fn q_value(x: &Q) -> Value {
    Value::String(rational::format_q(x))
}

pub fn q_from_value(v: &Value) -> Result<Q> {
    match v {
        Value::String(s) => rational::parse_q(s),
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                Ok(rational::qi(i))
            } else {
                rational::from_f64(n.as_f64().unwrap_or(f64::NAN))
            }
        }
        other => Err(Error::Format(format!("expected a rational, got {other}"))),
    }
}

fn vec_value(xs: &[Q]) -> Value {
    Value::Array(xs.iter().map(q_value).collect())
}

fn vec_from_value(v: &Value, what: &str) -> Result<Vec<Q>> {
    v.as_array()
        .ok_or_else(|| Error::Format(format!("{what} must be an array")))?
        .iter()
        .map(q_from_value)
        .collect()
}

fn matrix_value(m: &[Vec<Q>]) -> Value {
    Value::Array(m.iter().map(|r| vec_value(r)).collect())
}

fn matrix_from_value(v: &Value, what: &str) -> Result<Vec<Vec<Q>>> {
    v.as_array()
        .ok_or_else(|| Error::Format(format!("{what} must be an array of rows")))?
        .iter()
        .map(|row| vec_from_value(row, what))
        .collect()
}

fn field<'a>(doc: &'a Value, key: &str) -> Result<&'a Value> {
    doc.get(key).ok_or_else(|| Error::Format(format!("missing field {key:?}")))
}

fn parse_json(text: &str) -> Result<Value> {
    serde_json::from_str(text).map_err(|e| Error::Parse {
        line: e.line(),
        msg: e.to_string(),
    })
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json values always serialize");
    s.push('\n');
    s
}

// ---- games --------------------------------------------------------------

pub fn game_to_json(g: &Game) -> Value {
    let labels = |ls: &[ActionLabel]| Value::Array(ls.iter().map(|l| Value::String(l.to_string())).collect());
    json!({
        "m": g.m(),
        "R": matrix_value(g.r()),
        "C": matrix_value(g.c()),
        "row_labels": labels(g.row_labels()),
        "col_labels": labels(g.col_labels()),
    })
}

pub fn game_from_json(doc: &Value) -> Result<Game> {
    let r = matrix_from_value(field(doc, "R")?, "R")?;
    let c = matrix_from_value(field(doc, "C")?, "C")?;
    if let Some(m) = doc.get("m").and_then(Value::as_u64) {
        if m as usize != r.len() {
            return Err(Error::Shape(format!("declared m = {m}, R has {} rows", r.len())));
        }
    }
    let labels = |key: &str| -> Result<Option<Vec<ActionLabel>>> {
        match doc.get(key) {
            None => Ok(None),
            Some(v) => v
                .as_array()
                .ok_or_else(|| Error::Format(format!("{key} must be an array")))?
                .iter()
                .map(|l| {
                    l.as_str()
                        .ok_or_else(|| Error::Format(format!("{key} entries must be strings")))?
                        .parse()
                })
                .collect::<Result<Vec<_>>>()
                .map(Some),
        }
    };
    match (labels("row_labels")?, labels("col_labels")?) {
        (Some(rl), Some(cl)) => Game::with_labels(r, c, rl, cl),
        (None, None) => Game::new(r, c),
        _ => Err(Error::Format("give both row_labels and col_labels or neither".into())),
    }
}

pub fn parse_game_str(text: &str) -> Result<Game> {
    game_from_json(&parse_json(text)?)
}

pub fn emit_game_str(g: &Game) -> String {
    pretty(&game_to_json(g))
}

pub fn parse_game(path: &Path) -> Result<Game> {
    parse_game_str(&fs::read_to_string(path)?)
}

pub fn emit_game(g: &Game, path: &Path) -> Result<()> {
    fs::write(path, emit_game_str(g))?;
    Ok(())
}

// ---- mixtures -----------------------------------------------------------

pub fn mixture_to_json(mix: &SparseMixture) -> Value {
    let strategies = |ss: &[MixedStrategy]| Value::Array(ss.iter().map(|s| vec_value(s.probs())).collect());
    json!({
        "weights": vec_value(mix.weights()),
        "rows": strategies(mix.rows()),
        "cols": strategies(mix.cols()),
        "uniform": mix.is_uniform(),
    })
}

pub fn mixture_from_json(doc: &Value) -> Result<SparseMixture> {
    let weights = vec_from_value(field(doc, "weights")?, "weights")?;
    let strategies = |key: &str| -> Result<Vec<MixedStrategy>> {
        matrix_from_value(field(doc, key)?, key)?
            .into_iter()
            .map(MixedStrategy::new)
            .collect()
    };
    let mix = SparseMixture::new(weights, strategies("rows")?, strategies("cols")?)?;
    if let Some(flag) = doc.get("uniform") {
        let flag = flag
            .as_bool()
            .ok_or_else(|| Error::Format("uniform must be a boolean".into()))?;
        if flag != mix.is_uniform() {
            return Err(Error::Format(format!(
                "uniform flag says {flag} but the weights say {}",
                mix.is_uniform()
            )));
        }
    }
    Ok(mix)
}

pub fn parse_mixture_str(text: &str) -> Result<SparseMixture> {
    mixture_from_json(&parse_json(text)?)
}

pub fn emit_mixture_str(mix: &SparseMixture) -> String {
    pretty(&mixture_to_json(mix))
}

pub fn parse_mixture(path: &Path) -> Result<SparseMixture> {
    parse_mixture_str(&fs::read_to_string(path)?)
}

pub fn emit_mixture(mix: &SparseMixture, path: &Path) -> Result<()> {
    fs::write(path, emit_mixture_str(mix))?;
    Ok(())
}

// ---- joint distributions and node sets ---------------------------------------

pub fn joint_to_json(joint: &JointDistribution) -> Value {
    json!({ "probs": matrix_value(joint.probs()) })
}

pub fn joint_from_json(doc: &Value) -> Result<JointDistribution> {
    JointDistribution::new(matrix_from_value(field(doc, "probs")?, "probs")?)
}

pub fn parse_joint_str(text: &str) -> Result<JointDistribution> {
    joint_from_json(&parse_json(text)?)
}

pub fn emit_joint_str(joint: &JointDistribution) -> String {
    pretty(&joint_to_json(joint))
}

pub fn node_set_to_json(s: &NodeSet) -> Value {
    Value::Array(s.iter().map(|&v| json!(v)).collect())
}

/// Accepts a bare array of 1-based node ids or an object with a `nodes`
/// array.
pub fn node_set_from_json(doc: &Value) -> Result<NodeSet> {
    let arr = match doc {
        Value::Array(a) => a,
        Value::Object(_) => field(doc, "nodes")?
            .as_array()
            .ok_or_else(|| Error::Format("nodes must be an array".into()))?,
        _ => return Err(Error::Format("expected an array of node ids".into())),
    };
    arr.iter()
        .map(|v| {
            v.as_u64()
                .filter(|&x| x >= 1)
                .map(|x| x as usize)
                .ok_or_else(|| Error::Format(format!("bad node id {v}")))
        })
        .collect()
}

pub fn parse_node_set_str(text: &str) -> Result<NodeSet> {
    node_set_from_json(&parse_json(text)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::four_node_example;
    use crate::rational::q;

    #[test]
    fn fig_graph_parses() {
        let text = "c four nodes\np 4 5\ne 1 2\ne 1 3\ne 1 4\ne 2 3\ne 3 4\n";
        assert_eq!(parse_graph_str(text).unwrap(), four_node_example());
        assert_eq!(parse_graph_str(&emit_graph(&four_node_example())).unwrap(), four_node_example());
    }

    #[test]
    fn graph_errors_carry_lines() {
        assert_eq!(parse_graph_str("p 3 0\n").unwrap(), Graph::empty(3));
        let e = parse_graph_str("p 3 1\ne 1 1\n").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 2, .. }), "{e}");
        let e = parse_graph_str("p 3 2\ne 1 2\ne 2 1\n").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 3, .. }), "{e}");
        let e = parse_graph_str("p 3 1\ne 1 4\n").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 2, .. }), "{e}");
        assert!(parse_graph_str("e 1 2\n").is_err());
        assert!(parse_graph_str("p 3 2\ne 1 2\n").is_err());
        assert!(parse_graph_str("p 3 1\nx 1 2\n").is_err());
    }

    #[test]
    fn floats_become_dyadic() {
        let g = parse_game_str(r#"{"R": [[0.5, 1]], "C": [["1/3", -2]]}"#).unwrap_err();
        assert!(matches!(g, Error::Shape(_)));
        let g = parse_game_str(r#"{"R": [[0.5]], "C": [["1/3"]]}"#).unwrap();
        assert_eq!(g.r()[0][0], q(1, 2));
        assert_eq!(g.c()[0][0], q(1, 3));
    }

    #[test]
    fn ragged_rows_rejected() {
        let e = parse_game_str(r#"{"R": [["1","2"],["3"]], "C": [["1","2"],["3","4"]]}"#).unwrap_err();
        assert!(matches!(e, Error::Shape(_)));
    }

    #[test]
    fn uniform_flag_checked() {
        let text = r#"{"weights": ["1/4","3/4"], "rows": [["1"],["1"]], "cols": [["1"],["1"]], "uniform": true}"#;
        assert!(parse_mixture_str(text).is_err());
    }
}
