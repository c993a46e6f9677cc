//! The max-clique to optimal-sparse-CCE reduction.
//!
//! For each `k = 2T, 3T, ..., floor(n/T) T` the gadget game is built with
//! `gamma` from [`default_gamma`], the oracle is asked for a `T`-sparse
//! `eps`-CCE with `eps = k gamma / 2` and welfare slack
//! `eps_hat = gamma^2 T / 2`, its answer is re-checked exactly, projected
//! onto the adjacency block, and a clique is read off the heaviest
//! component. The best verified clique wins.

pub mod extract;
pub mod oracle;

use rayon::prelude::*;
use serde::Serialize;

use crate::constructions::{build_gz_game, default_gamma, GzParams};
use crate::error::{Error, Result};
use crate::eval::deviation_gap;
use crate::formats::{ser_opt_q, ser_q};
use crate::game::SparseMixture;
use crate::graph::{Graph, NodeSet};
use crate::rational::{self, qi, Q};

pub use extract::{
    block_deficit, extract_clique_threshold16, extract_clique_topl, renormalize_mixture, select_tstar,
    Extraction, ExtractionMethod,
};
pub use oracle::{BruteForceOracle, FileOracle, OracleQuery, PerturbationOracle, PlantedOracle, SparseCceOracle};

/// `k gamma / 2`.
pub fn schedule_eps(k: usize, gamma: &Q) -> Q {
    qi(k as i64) * gamma / qi(2)
}

/// `gamma^2 T / 2`.
pub fn schedule_eps_hat(sparsity: usize, gamma: &Q) -> Q {
    gamma * gamma * qi(sparsity as i64) / qi(2)
}

/// Loop values `2T, 3T, ..., floor(n/T) T`; empty when `n < 2T`.
pub fn loop_values(n: usize, sparsity: usize) -> Vec<usize> {
    if sparsity == 0 {
        return Vec::new();
    }
    (2..=n / sparsity).map(|j| j * sparsity).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum OracleStatus {
    Returned,
    NoAnswer,
    Failed,
    /// Answered, but the exact gap exceeded `eps` (or the shape was wrong).
    Rejected,
}

/// Trace of one loop iteration.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KRecord {
    pub k: usize,
    #[serde(serialize_with = "ser_q")]
    pub gamma: Q,
    #[serde(serialize_with = "ser_q")]
    pub eps: Q,
    #[serde(serialize_with = "ser_q")]
    pub eps_hat: Q,
    pub oracle_status: OracleStatus,
    pub oracle_ok: bool,
    pub oracle_message: Option<String>,
    /// Exact gap of the oracle answer.
    #[serde(serialize_with = "ser_opt_q")]
    pub gap: Option<Q>,
    #[serde(serialize_with = "ser_opt_q")]
    pub welfare: Option<Q>,
    /// Whether the answer met `welfare >= 1 + gamma T / k - eps_hat`.
    pub welfare_ok: Option<bool>,
    pub uniform: Option<bool>,
    /// 1-based index of the heaviest component.
    pub t_star: Option<usize>,
    #[serde(serialize_with = "ser_opt_q")]
    pub alpha_star: Option<Q>,
    pub ell: Option<usize>,
    pub method: Option<ExtractionMethod>,
    pub candidate_set: Option<NodeSet>,
    pub is_clique: bool,
    /// Whether this iteration replaced the running best clique.
    pub accepted: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReductionReport {
    pub n: usize,
    pub sparsity: usize,
    pub oracle: String,
    pub parallel: bool,
    pub records: Vec<KRecord>,
    pub clique: NodeSet,
    pub clique_size: usize,
}

impl ReductionReport {
    pub fn record(&self, k: usize) -> Option<&KRecord> {
        self.records.iter().find(|r| r.k == k)
    }
}

#[derive(Debug, Clone, Default)]
pub struct ReductionConfig {
    /// Run loop iterations concurrently when the oracle allows it.
    pub parallel: bool,
    /// Replaces the default `gamma(k)` for every `k`.
    pub gamma: Option<Q>,
}

/// Everything one iteration produced, including the intermediate mixtures.
#[derive(Debug, Clone)]
pub struct Iteration {
    pub record: KRecord,
    /// Oracle answer that passed the gap check.
    pub answer: Option<SparseMixture>,
    /// Its projection onto the adjacency block.
    pub renormalized: Option<SparseMixture>,
}

/// One pass of the loop body at a fixed `k`.
pub fn run_iteration(g: &Graph, sparsity: usize, k: usize, gamma: &Q, oracle: &dyn SparseCceOracle) -> Result<Iteration> {
    let n = g.n();
    let params = GzParams::new(k, gamma.clone(), sparsity)?;
    let game = build_gz_game(g, &params);
    let eps = schedule_eps(k, gamma);
    let eps_hat = schedule_eps_hat(sparsity, gamma);
    let query = OracleQuery {
        game: &game,
        sparsity,
        eps: &eps,
        eps_hat: &eps_hat,
        k,
        gamma,
    };
    let mut record = KRecord {
        k,
        gamma: gamma.clone(),
        eps: eps.clone(),
        eps_hat: eps_hat.clone(),
        oracle_status: OracleStatus::NoAnswer,
        oracle_ok: false,
        oracle_message: None,
        gap: None,
        welfare: None,
        welfare_ok: None,
        uniform: None,
        t_star: None,
        alpha_star: None,
        ell: None,
        method: None,
        candidate_set: None,
        is_clique: false,
        accepted: false,
    };
    let done = |record| Iteration {
        record,
        answer: None,
        renormalized: None,
    };
    let mix = match oracle.query(&query) {
        Ok(Some(mix)) => mix,
        Ok(None) => return Ok(done(record)),
        Err(e) => {
            record.oracle_status = OracleStatus::Failed;
            record.oracle_message = Some(e.to_string());
            return Ok(done(record));
        }
    };
    let d = match deviation_gap(&game, &mix) {
        Ok(d) => d,
        Err(e) => {
            record.oracle_status = OracleStatus::Rejected;
            record.oracle_message = Some(e.to_string());
            return Ok(done(record));
        }
    };
    let welfare = &d.utility_x + &d.utility_y;
    record.welfare_ok = Some(welfare >= query.target_welfare() - &eps_hat);
    record.gap = Some(d.gap.clone());
    record.welfare = Some(welfare);
    record.uniform = Some(mix.is_uniform());
    if d.gap > eps {
        record.oracle_status = OracleStatus::Rejected;
        record.oracle_message = Some(format!(
            "gap {} exceeds eps {}",
            rational::format_q(&d.gap),
            rational::format_q(&eps)
        ));
        return Ok(done(record));
    }
    record.oracle_status = OracleStatus::Returned;
    record.oracle_ok = true;

    let hat = renormalize_mixture(&mix, n)?;
    let t = select_tstar(&hat);
    let alpha = hat.weights()[t].clone();
    let ex = extract_clique_topl(g, &hat.rows()[t], &alpha, k, gamma)?;
    record.is_clique = g.is_clique(&ex.set)?;
    record.t_star = Some(t + 1);
    record.alpha_star = Some(alpha);
    record.ell = Some(ex.ell);
    record.method = Some(ex.method);
    record.candidate_set = Some(ex.set);
    Ok(Iteration {
        record,
        answer: Some(mix),
        renormalized: Some(hat),
    })
}

pub fn run_reduction(g: &Graph, sparsity: usize, oracle: &dyn SparseCceOracle) -> Result<ReductionReport> {
    run_reduction_with(g, sparsity, oracle, &ReductionConfig::default())
}

pub fn run_reduction_with(
    g: &Graph,
    sparsity: usize,
    oracle: &dyn SparseCceOracle,
    config: &ReductionConfig,
) -> Result<ReductionReport> {
    let n = g.n();
    if sparsity == 0 || sparsity > n {
        return Err(Error::Parameter(format!("sparsity must lie in 1..={n}, got {sparsity}")));
    }
    let ks = loop_values(n, sparsity);
    let gamma_for = |k: usize| config.gamma.clone().unwrap_or_else(|| default_gamma(k));
    let parallel = config.parallel && oracle.concurrency_safe();
    let iterations: Vec<Iteration> = if parallel {
        ks.par_iter()
            .map(|&k| run_iteration(g, sparsity, k, &gamma_for(k), oracle))
            .collect::<Result<_>>()?
    } else {
        ks.iter()
            .map(|&k| run_iteration(g, sparsity, k, &gamma_for(k), oracle))
            .collect::<Result<_>>()?
    };
    let mut clique: NodeSet = [1].into_iter().collect();
    let mut records = Vec::with_capacity(iterations.len());
    for it in iterations {
        let mut rec = it.record;
        if rec.is_clique {
            if let Some(s) = &rec.candidate_set {
                if !s.is_empty() {
                    clique = s.clone();
                    rec.accepted = true;
                }
            }
        }
        records.push(rec);
    }
    Ok(ReductionReport {
        n,
        sparsity,
        oracle: oracle.name(),
        parallel,
        clique_size: clique.len(),
        clique,
        records,
    })
}
