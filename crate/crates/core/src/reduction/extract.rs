//! Post-processing of an oracle mixture: projection onto the adjacency
//! block, choice of the heaviest component, and clique extraction.

use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::game::{MixedStrategy, SparseMixture};
use crate::graph::{Graph, NodeSet};
use crate::rational::{self, qi, Q};

/// Restricts every strategy to its first `n` coordinates and rescales to a
/// distribution; strategies with no mass there become uniform on `1..n`.
/// Lengths are preserved, with zeros beyond `n`.
pub fn renormalize_mixture(mix: &SparseMixture, n: usize) -> Result<SparseMixture> {
    if n == 0 || mix.m() < n {
        return Err(Error::Shape(format!(
            "cannot project strategies of length {} onto {n} coordinates",
            mix.m()
        )));
    }
    let m = mix.m();
    let project = |s: &MixedStrategy| -> MixedStrategy {
        let head = &s.probs()[..n];
        let mass = rational::sum(head);
        let mut v = vec![Q::zero(); m];
        if mass.is_zero() {
            let share = rational::q(1, n as i64);
            v[..n].iter_mut().for_each(|x| *x = share.clone());
        } else if mass.is_one() {
            v[..n].clone_from_slice(head);
        } else {
            for (dst, src) in v.iter_mut().zip(head) {
                *dst = src / &mass;
            }
        }
        MixedStrategy::new(v).expect("projection is a distribution")
    };
    SparseMixture::new(
        mix.weights().to_vec(),
        mix.rows().iter().map(project).collect(),
        mix.cols().iter().map(project).collect(),
    )
}

/// Probability that component `t` leaves the adjacency block:
/// `1 - (sum_{i<=n} x_i)(sum_{j<=n} y_j)`.
pub fn block_deficit(mix: &SparseMixture, n: usize) -> Vec<Q> {
    mix.rows()
        .iter()
        .zip(mix.cols())
        .map(|(x, y)| {
            let px = rational::sum(&x.probs()[..n.min(x.len())]);
            let py = rational::sum(&y.probs()[..n.min(y.len())]);
            Q::one() - px * py
        })
        .collect()
}

/// 0-based index of the heaviest component, lowest index on ties.
pub fn select_tstar(mix: &SparseMixture) -> usize {
    let w = mix.weights();
    (0..w.len()).fold(0, |best, t| if w[t] > w[best] { t } else { best })
}

/// `floor(alpha * k)`.
pub fn block_size(alpha_star: &Q, k: usize) -> usize {
    rational::floor_to_usize(&(alpha_star * qi(k as i64)))
}

/// `1/l - 40 l k sqrt(gamma)`; needs `gamma` to be a perfect square.
pub fn topl_threshold(ell: usize, k: usize, gamma: &Q) -> Result<Q> {
    if ell == 0 {
        return Err(Error::Parameter("block size is zero".into()));
    }
    let root = rational::exact_sqrt(gamma).ok_or_else(|| {
        Error::Parameter(format!("gamma = {} is not a perfect square", rational::format_q(gamma)))
    })?;
    Ok(rational::q(1, ell as i64) - qi(40 * (ell * k) as i64) * root)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExtractionMethod {
    /// The threshold set had exactly `l` nodes and formed a clique.
    Threshold,
    /// Fallback to the `l` largest coordinates.
    TopCoordinates,
    /// `l = 0`: singleton of the largest coordinate.
    Degenerate,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Extraction {
    pub set: NodeSet,
    pub ell: usize,
    pub method: ExtractionMethod,
    /// Size of the threshold set, when the threshold could be evaluated.
    pub threshold_size: Option<usize>,
}

fn check_graph_len(g: &Graph, x: &MixedStrategy) -> Result<()> {
    if x.len() < g.n() {
        return Err(Error::Shape(format!(
            "strategy of length {} shorter than the {} graph nodes",
            x.len(),
            g.n()
        )));
    }
    Ok(())
}

/// The `l` largest of the first `n` coordinates as 1-based nodes, lowest
/// index first among equal values.
pub fn top_coordinates(x: &MixedStrategy, n: usize, ell: usize) -> NodeSet {
    let mut idx: Vec<usize> = (0..n.min(x.len())).collect();
    idx.sort_by(|&a, &b| x.probs()[b].cmp(&x.probs()[a]).then(a.cmp(&b)));
    idx.into_iter().take(ell).map(|i| i + 1).collect()
}

/// Threshold extraction with the `l`-largest fallback. The result is not
/// guaranteed to be a clique; callers check.
pub fn extract_clique_topl(g: &Graph, xhat: &MixedStrategy, alpha_star: &Q, k: usize, gamma: &Q) -> Result<Extraction> {
    check_graph_len(g, xhat)?;
    let n = g.n();
    let ell = block_size(alpha_star, k);
    if ell == 0 {
        return Ok(Extraction {
            set: top_coordinates(xhat, n, 1),
            ell,
            method: ExtractionMethod::Degenerate,
            threshold_size: None,
        });
    }
    let threshold = topl_threshold(ell, k, gamma).ok();
    let set: Option<NodeSet> = threshold
        .as_ref()
        .map(|th| (0..n).filter(|&i| xhat.probs()[i] >= *th).map(|i| i + 1).collect());
    let threshold_size = set.as_ref().map(NodeSet::len);
    if let Some(s) = set {
        if s.len() == ell && g.is_clique(&s)? {
            return Ok(Extraction {
                set: s,
                ell,
                method: ExtractionMethod::Threshold,
                threshold_size,
            });
        }
    }
    Ok(Extraction {
        set: top_coordinates(xhat, n, ell),
        ell,
        method: ExtractionMethod::TopCoordinates,
        threshold_size,
    })
}

/// Nodes where both strategies put at least `1/(16 l)`.
pub fn extract_clique_threshold16(g: &Graph, xhat: &MixedStrategy, yhat: &MixedStrategy, ell: usize) -> Result<NodeSet> {
    if ell == 0 {
        return Err(Error::Parameter("block size must be positive".into()));
    }
    check_graph_len(g, xhat)?;
    check_graph_len(g, yhat)?;
    let th = rational::q(1, 16 * ell as i64);
    Ok((0..g.n())
        .filter(|&i| xhat.probs()[i] >= th && yhat.probs()[i] >= th)
        .map(|i| i + 1)
        .collect())
}
