//! Stand-ins for the sparse-CCE oracle queried by the reduction.

use std::path::PathBuf;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::constructions::clique_cce;
use crate::error::{Error, Result};
use crate::eval::deviation_gap;
use crate::formats;
use crate::game::{Game, MixedStrategy, SparseMixture};
use crate::graph::NodeSet;
use crate::rational::{self, qi, Q};
use crate::solvers::bruteforce_optimal_sparse_cce;

/// One oracle call: find a `T`-sparse mixture with gap at most `eps` whose
/// welfare is within `eps_hat` of the best such mixture.
#[derive(Debug, Clone, Copy)]
pub struct OracleQuery<'a> {
    pub game: &'a Game,
    pub sparsity: usize,
    pub eps: &'a Q,
    pub eps_hat: &'a Q,
    /// Loop parameters the game was built from.
    pub k: usize,
    pub gamma: &'a Q,
}

impl OracleQuery<'_> {
    /// `1 + gamma T / k`, the certificate welfare.
    pub fn target_welfare(&self) -> Q {
        Q::one() + self.gamma * qi(self.sparsity as i64) / qi(self.k as i64)
    }
}

pub trait SparseCceOracle: Sync {
    fn name(&self) -> String;

    /// Whether `query` may be called from several threads at once.
    fn concurrency_safe(&self) -> bool {
        true
    }

    /// `Ok(None)` means the oracle has no answer for this query.
    fn query(&self, q: &OracleQuery<'_>) -> Result<Option<SparseMixture>>;
}

/// Knows a clique and answers with the block certificate on its first `k`
/// nodes whenever that is possible.
#[derive(Debug, Clone)]
pub struct PlantedOracle {
    pub clique: NodeSet,
}

impl PlantedOracle {
    pub fn new(clique: NodeSet) -> Self {
        PlantedOracle { clique }
    }

    fn certificate(&self, q: &OracleQuery<'_>) -> Result<Option<SparseMixture>> {
        if q.k > self.clique.len() || q.k % q.sparsity != 0 {
            return Ok(None);
        }
        let nodes: NodeSet = self.clique.iter().take(q.k).copied().collect();
        clique_cce(&nodes, q.sparsity, q.game.m()).map(Some)
    }
}

impl SparseCceOracle for PlantedOracle {
    fn name(&self) -> String {
        "planted".into()
    }

    fn query(&self, q: &OracleQuery<'_>) -> Result<Option<SparseMixture>> {
        self.certificate(q)
    }
}

/// Planted certificate plus seeded noise: mass leaks from each block onto
/// auxiliary and non-clique actions, and mixture weights drift away from
/// uniform. The noise scale is halved until the output satisfies both the
/// gap and the welfare budgets exactly, so answers are always admissible.
#[derive(Debug, Clone)]
pub struct PerturbationOracle {
    pub planted: PlantedOracle,
    pub seed: u64,
    /// Fraction of each budget the first attempt may use.
    pub intensity: Q,
}

const NOISE_BITS: u32 = 20;
const MAX_HALVINGS: usize = 40;

impl PerturbationOracle {
    pub fn new(clique: NodeSet, seed: u64) -> Self {
        PerturbationOracle {
            planted: PlantedOracle::new(clique),
            seed,
            intensity: Q::one(),
        }
    }

    fn uniform_unit(rng: &mut ChaCha8Rng) -> Q {
        let v: u64 = rng.gen_range(1..=(1u64 << NOISE_BITS));
        Q::new(BigInt::from(v), BigInt::from(1u64 << NOISE_BITS))
    }

    /// Moves `mass` out of the support of `s`, spread over up to three
    /// random actions outside it.
    fn leak(s: &MixedStrategy, mass: &Q, rng: &mut ChaCha8Rng) -> MixedStrategy {
        let m = s.len();
        let support: Vec<usize> = (0..m).filter(|&i| !s.probs()[i].is_zero()).collect();
        let outside: Vec<usize> = (0..m).filter(|i| !support.contains(i)).collect();
        if outside.is_empty() || mass.is_zero() {
            return s.clone();
        }
        let count = rng.gen_range(1..=3usize.min(outside.len()));
        let mut targets = Vec::with_capacity(count);
        while targets.len() < count {
            let t = outside[rng.gen_range(0..outside.len())];
            if !targets.contains(&t) {
                targets.push(t);
            }
        }
        let mut v = s.probs().to_vec();
        let take = mass / qi(support.len() as i64);
        for &i in &support {
            v[i] -= &take;
        }
        let give = mass / qi(count as i64);
        for &t in &targets {
            v[t] += &give;
        }
        MixedStrategy::new(v).expect("leak keeps a distribution")
    }

    fn perturb(&self, base: &SparseMixture, q: &OracleQuery<'_>, scale: &Q, rng: &mut ChaCha8Rng) -> Result<SparseMixture> {
        let t = base.sparsity();
        let tq = qi(t as i64);
        let leak_budget = q.eps_hat * scale / qi(4);
        let weight_budget = q.eps * scale / tq.clone();
        let rows: Vec<MixedStrategy> = base
            .rows()
            .iter()
            .map(|x| Self::leak(x, &(&leak_budget * Self::uniform_unit(rng)), rng))
            .collect();
        let cols: Vec<MixedStrategy> = base
            .cols()
            .iter()
            .map(|y| Self::leak(y, &(&leak_budget * Self::uniform_unit(rng)), rng))
            .collect();
        let mut weights = base.weights().to_vec();
        if t > 1 {
            let shifts: Vec<Q> = (0..t)
                .map(|_| (Self::uniform_unit(rng) * qi(2) - Q::one()) * &weight_budget)
                .collect();
            let mean = rational::sum(&shifts) / tq;
            for (w, s) in weights.iter_mut().zip(&shifts) {
                *w += s - &mean;
            }
            if weights.iter().any(|w| !w.is_positive()) {
                weights = base.weights().to_vec();
            }
        }
        SparseMixture::new(weights, rows, cols)
    }

    fn admissible(&self, mix: &SparseMixture, q: &OracleQuery<'_>) -> Result<bool> {
        let d = deviation_gap(q.game, mix)?;
        let welfare = &d.utility_x + &d.utility_y;
        Ok(d.gap <= *q.eps && welfare >= q.target_welfare() - q.eps_hat)
    }
}

impl SparseCceOracle for PerturbationOracle {
    fn name(&self) -> String {
        format!("perturbation(seed={})", self.seed)
    }

    fn query(&self, q: &OracleQuery<'_>) -> Result<Option<SparseMixture>> {
        let Some(base) = self.planted.certificate(q)? else {
            return Ok(None);
        };
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed ^ (q.k as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15));
        let mut scale = self.intensity.clone();
        for _ in 0..MAX_HALVINGS {
            let cand = self.perturb(&base, q, &scale, &mut rng)?;
            if self.admissible(&cand, q)? {
                return Ok(Some(cand));
            }
            scale /= qi(2);
        }
        Ok(Some(base))
    }
}

/// Exhaustive grid search; only usable on tiny games.
#[derive(Debug, Clone)]
pub struct BruteForceOracle {
    pub resolution: usize,
}

impl SparseCceOracle for BruteForceOracle {
    fn name(&self) -> String {
        format!("bruteforce(d={})", self.resolution)
    }

    fn query(&self, q: &OracleQuery<'_>) -> Result<Option<SparseMixture>> {
        match bruteforce_optimal_sparse_cce(q.game, q.sparsity, self.resolution, q.eps) {
            Ok(res) => Ok(Some(res.mixture)),
            Err(Error::NotFound(_)) => Ok(None),
            Err(e) => Err(e),
        }
    }
}

/// Reads answers from disk: either one mixture file used for every query,
/// or a directory holding `mixture_k<k>.json` per loop value.
#[derive(Debug, Clone)]
pub struct FileOracle {
    pub path: PathBuf,
}

impl SparseCceOracle for FileOracle {
    fn name(&self) -> String {
        format!("file({})", self.path.display())
    }

    fn query(&self, q: &OracleQuery<'_>) -> Result<Option<SparseMixture>> {
        let file = if self.path.is_dir() {
            let f = self.path.join(format!("mixture_k{}.json", q.k));
            if !f.exists() {
                return Ok(None);
            }
            f
        } else {
            self.path.clone()
        };
        formats::parse_mixture(&file).map(Some)
    }
}
