//! Game gadgets built from a graph, and the clique certificate mixture.
//!
//! Payoffs follow the halved block layout used throughout the reduction:
//! the adjacency block (with self-loops and a diagonal bonus `gamma`) is
//! shared by both players, and the auxiliary blocks are zero-sum.

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::game::{ActionLabel, Game, MixedStrategy, SparseMixture};
use crate::graph::{Graph, NodeSet};
use crate::rational::{q, qi, Q};
use crate::rng;

/// Parameters of the adjacency gadget.
#[derive(Debug, Clone, PartialEq)]
pub struct GzParams {
    /// Target clique size; also the magnitude of the punishment blocks.
    pub k: usize,
    /// Diagonal bonus on the adjacency block.
    pub gamma: Q,
    /// Sparsity the gadget is meant for; enters only through `r`.
    pub sparsity: usize,
}

impl GzParams {
    pub fn new(k: usize, gamma: Q, sparsity: usize) -> Result<Self> {
        if k < 1 {
            return Err(Error::Parameter("k must be positive".into()));
        }
        if sparsity < 1 {
            return Err(Error::Parameter("sparsity must be positive".into()));
        }
        if gamma.is_negative() {
            return Err(Error::Parameter("gamma must be non-negative".into()));
        }
        Ok(GzParams { k, gamma, sparsity })
    }

    /// Parameters with the default reduction-grade `gamma` for `k`.
    pub fn for_reduction(k: usize, sparsity: usize) -> Result<Self> {
        GzParams::new(k, default_gamma(k), sparsity)
    }

    /// `(1 + gamma T / k) / 2`, each player's payoff under the clique
    /// certificate and the value of the opt-out action.
    pub fn r(&self) -> Q {
        (Q::one() + &self.gamma * qi(self.sparsity as i64) / qi(self.k as i64)) / qi(2)
    }
}

/// `(1 / (80 k^3 (k+1)))^2`: strictly below `1/(40^2 k^6 (k+1)^2)` and a
/// perfect square, so its square root stays exact.
pub fn default_gamma(k: usize) -> Q {
    let k = k as i64;
    let root = Q::new(1.into(), (80 * k * k * k * (k + 1)).into());
    &root * &root
}

/// Upper bound `1/(40^2 k^6 (k+1)^2)` that `gamma` must stay strictly below.
pub fn gamma_bound(k: usize) -> Q {
    let k = num_bigint::BigInt::from(k);
    let kp: num_bigint::BigInt = &k + 1u32;
    let den = num_bigint::BigInt::from(1600) * k.pow(6) * kp.pow(2);
    Q::new(1.into(), den)
}

/// Adjacency matrix with ones on the diagonal.
pub fn adjacency_with_loops(g: &Graph) -> Vec<Vec<Q>> {
    let n = g.n();
    (1..=n)
        .map(|i| {
            (1..=n)
                .map(|j| if g.adjacent_or_equal(i, j) { Q::one() } else { Q::zero() })
                .collect()
        })
        .collect()
}

fn node_labels(n: usize, aux: usize) -> Vec<ActionLabel> {
    (1..=n)
        .map(ActionLabel::Node)
        .chain((1..=aux).map(ActionLabel::Aux))
        .collect()
}

/// The `2n x 2n` gadget:
/// `R = 1/2 [[A + gamma I, -k I], [k I, 0]]`, `C = R^T`.
pub fn build_gz_game(g: &Graph, p: &GzParams) -> Game {
    let n = g.n();
    let m = 2 * n;
    let half = q(1, 2);
    let half_k = qi(p.k as i64) * &half;
    let diag = (Q::one() + &p.gamma) * &half;
    let mut r = vec![vec![Q::zero(); m]; m];
    let mut c = vec![vec![Q::zero(); m]; m];
    for i in 0..n {
        for j in 0..n {
            let v = if i == j {
                diag.clone()
            } else if g.has_edge(i + 1, j + 1) {
                half.clone()
            } else {
                continue;
            };
            r[i][j] = v.clone();
            c[i][j] = v;
        }
        r[i][n + i] = -half_k.clone();
        c[i][n + i] = half_k.clone();
        r[n + i][i] = half_k.clone();
        c[n + i][i] = -half_k.clone();
    }
    let labels = node_labels(n, n);
    Game::with_labels(r, c, labels.clone(), labels).expect("square by construction")
}

/// Uniform `T`-sparse certificate: the sorted clique is cut into `T`
/// contiguous blocks and component `t` plays uniformly on block `t` for
/// both players. Strategies have length `game_size`.
pub fn clique_cce(clique: &NodeSet, sparsity: usize, game_size: usize) -> Result<SparseMixture> {
    let k = clique.len();
    if sparsity == 0 || k == 0 || k % sparsity != 0 {
        return Err(Error::Parameter(format!(
            "clique size {k} is not a positive multiple of sparsity {sparsity}"
        )));
    }
    if let Some(&max) = clique.iter().next_back() {
        if max > game_size || *clique.iter().next().unwrap() == 0 {
            return Err(Error::Shape(format!("clique node {max} outside the game")));
        }
    }
    let block = k / sparsity;
    let nodes: Vec<usize> = clique.iter().map(|&v| v - 1).collect();
    let strategies: Vec<MixedStrategy> = nodes
        .chunks(block)
        .map(|b| MixedStrategy::uniform_on(game_size, b))
        .collect::<Result<_>>()?;
    SparseMixture::uniform(strategies.clone(), strategies)
}

/// Gadget plus an opt-out action `O` (last index) worth `r` to whoever
/// plays it, `-r` to the opponent, and `(o_value, o_value)` at `(O, O)`.
fn with_opt_out(g: &Graph, p: &GzParams, o_value: Q) -> Game {
    let base = build_gz_game(g, p);
    let m = base.m();
    let r_val = p.r();
    let mut r: Vec<Vec<Q>> = base.r().to_vec();
    let mut c: Vec<Vec<Q>> = base.c().to_vec();
    for i in 0..m {
        r[i].push(-r_val.clone());
        c[i].push(r_val.clone());
    }
    let mut r_last = vec![r_val.clone(); m];
    let mut c_last = vec![-r_val.clone(); m];
    r_last.push(o_value.clone());
    c_last.push(o_value);
    r.push(r_last);
    c.push(c_last);
    let mut labels = base.row_labels().to_vec();
    labels.push(ActionLabel::Opt);
    Game::with_labels(r, c, labels.clone(), labels).expect("square by construction")
}

/// `(2n+1) x (2n+1)` game whose `(O, O)` cell pays `r` to both players.
pub fn build_augmented_game(g: &Graph, p: &GzParams) -> Game {
    with_opt_out(g, p, p.r())
}

/// Like [`build_augmented_game`] but `(O, O)` pays `eps` to both players.
pub fn build_basicemb_game(g: &Graph, p: &GzParams, eps: &Q) -> Result<Game> {
    if !eps.is_positive() || *eps >= q(1, 2) {
        return Err(Error::Parameter(format!("eps must lie in (0, 1/2), got {eps}")));
    }
    Ok(with_opt_out(g, p, eps.clone()))
}

/// Parameters of the spiked low-precision gadget.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LowPrecParams {
    /// Spike magnitude `M`; entries of `B` are `M` with probability `3/(4M)`.
    pub spike: u64,
    /// Total action count `N` per player.
    pub ambient: usize,
    pub seed: u64,
}

impl LowPrecParams {
    pub fn new(spike: u64, ambient: usize, seed: u64) -> Result<Self> {
        if spike == 0 {
            return Err(Error::Parameter("spike magnitude must be at least 1".into()));
        }
        Ok(LowPrecParams { spike, ambient, seed })
    }

    /// Whether `M > 4T`, the sparsity hypothesis of the dense-pair extraction.
    pub fn supports_sparsity(&self, sparsity: usize) -> bool {
        self.spike > 4 * sparsity as u64
    }
}

/// Scaled-down schedule used for experiments: `M = 5T`, `N = 8n`,
/// `k = ceil(c M^2 ln N)`.
#[derive(Debug, Clone, PartialEq)]
pub struct DeskSchedule {
    pub sparsity: usize,
    pub spike: u64,
    pub ambient: usize,
    pub clique: usize,
    pub constant: f64,
}

pub fn desk_schedule(n: usize, sparsity: usize, constant: f64) -> DeskSchedule {
    let spike = 5 * sparsity as u64;
    let ambient = 8 * n;
    let clique = (constant * (spike * spike) as f64 * (ambient as f64).ln()).ceil() as usize;
    DeskSchedule {
        sparsity,
        spike,
        ambient,
        clique,
        constant,
    }
}

/// Asymptotic parameter list of the low-precision hardness argument. `N` is
/// astronomically large, so it is kept as `ln N`.
#[derive(Debug, Clone, PartialEq)]
pub struct PaperSchedule {
    pub spike: u64,
    pub c2: u64,
    pub c1: u64,
    pub ln_ambient: f64,
    pub clique: f64,
    pub eps: f64,
    pub eps_hat: f64,
}

pub fn paper_schedule(n: usize, sparsity: usize) -> PaperSchedule {
    let spike = 5 * sparsity as u64;
    let c2 = 2000u64;
    let c1 = (c2 as f64 * (4.0 * spike as f64 / 3.0).ln()).ceil() as u64 + 2;
    let ln_ambient = c1 as f64 * (n as f64).ln();
    let clique = (96.0 * (spike * spike) as f64 * ln_ambient).ceil();
    let eps = 0.25;
    PaperSchedule {
        spike,
        c2,
        c1,
        ln_ambient,
        clique,
        eps,
        eps_hat: eps / (4.0 * spike as f64),
    }
}

/// Which planted-size threshold to use for the completeness check.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Threshold {
    /// `96 M^2 ln N`.
    Strict,
    /// `32 M^2 (ln N - 2 ln n)`.
    Relaxed,
}

pub fn completeness_threshold(spike: u64, ambient: usize, n: usize, which: Threshold) -> f64 {
    let m2 = (spike * spike) as f64;
    let ln_n_amb = (ambient as f64).ln();
    match which {
        Threshold::Strict => 96.0 * m2 * ln_n_amb,
        Threshold::Relaxed => 32.0 * m2 * (ln_n_amb - 2.0 * (n as f64).ln()),
    }
}

const SPIKE_STREAM: u64 = 0x5350_494b;

/// Spike matrix `B` (`(N - n) x n`) drawn from the seed.
pub fn spike_matrix(n: usize, p: &LowPrecParams) -> Result<Vec<Vec<u64>>> {
    if p.ambient < 2 * n {
        return Err(Error::Parameter(format!(
            "ambient size {} must be at least 2n = {}",
            p.ambient,
            2 * n
        )));
    }
    let den = 4 * p.spike;
    Ok((0..p.ambient - n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let bits = rng::hash4(p.seed, SPIKE_STREAM, i as u64, j as u64);
                    if rng::bernoulli(bits, 3, den) {
                        p.spike
                    } else {
                        0
                    }
                })
                .collect()
        })
        .collect())
}

/// `R = 1/2 [[A, -B^T], [B, 0]]`, `C = 1/2 [[A, B^T], [-B, 0]]`.
pub fn build_lowprec_game(g: &Graph, p: &LowPrecParams) -> Result<Game> {
    let n = g.n();
    let b = spike_matrix(n, p)?;
    let m = p.ambient;
    let half = q(1, 2);
    let mut r = vec![vec![Q::zero(); m]; m];
    let mut c = vec![vec![Q::zero(); m]; m];
    for i in 0..n {
        for j in 0..n {
            if g.adjacent_or_equal(i + 1, j + 1) {
                r[i][j] = half.clone();
                c[i][j] = half.clone();
            }
        }
    }
    for (i, row) in b.iter().enumerate() {
        for (j, &v) in row.iter().enumerate() {
            if v == 0 {
                continue;
            }
            let hv = qi(v as i64) * &half;
            r[j][n + i] = -hv.clone();
            c[j][n + i] = hv.clone();
            r[n + i][j] = hv.clone();
            c[n + i][j] = -hv;
        }
    }
    let labels = node_labels(n, m - n);
    Game::with_labels(r, c, labels.clone(), labels)
}
