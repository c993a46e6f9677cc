//! Exhaustive search over uniform `T`-sparse mixtures on a rational grid.
//!
//! Only meant for tiny games. Candidates are screened in floating point
//! and every survivor that could beat the incumbent is certified exactly.
//! Among equal-welfare certified mixtures the first in enumeration order
//! wins; the parallel split reduces with the same order, so the result does
//! not depend on scheduling.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::eval::{deviation_gap, mixture_gap_generic};
use crate::game::{Game, MixedStrategy, SparseMixture};
use crate::rational::{self, Q};

pub const MAX_ACTIONS: usize = 5;
pub const MAX_SPARSITY: usize = 2;
pub const MAX_RESOLUTION: usize = 6;
/// Upper bound on enumerated mixtures.
pub const ENUMERATION_BUDGET: u64 = 50_000_000;

const SCREEN_SLACK: f64 = 1e-7;

#[derive(Debug, Clone, PartialEq)]
pub struct BruteForceResult {
    pub mixture: SparseMixture,
    pub welfare: Q,
    pub gap: Q,
    pub enumerated: u64,
}

/// All points of the simplex in `m` dimensions with denominator `d`, as
/// numerator vectors, in lexicographically decreasing order of the first
/// coordinate.
pub fn simplex_grid(m: usize, d: usize) -> Vec<Vec<usize>> {
    fn rec(m: usize, left: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() + 1 == m {
            cur.push(left);
            out.push(cur.clone());
            cur.pop();
            return;
        }
        for v in (0..=left).rev() {
            cur.push(v);
            rec(m, left - v, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if m > 0 {
        rec(m, d, &mut Vec::with_capacity(m), &mut out);
    }
    out
}

fn binom(n: u64, k: u64) -> u64 {
    (0..k).fold(1u64, |acc, i| acc.saturating_mul(n - i) / (i + 1))
}

/// Number of mixtures the search would visit.
pub fn enumeration_size(m: usize, sparsity: usize, d: usize) -> u64 {
    let g = binom((d + m - 1) as u64, (m - 1) as u64);
    let pairs = g.saturating_mul(g);
    // unordered multisets of `sparsity` product components
    binom(pairs + sparsity as u64 - 1, sparsity as u64)
}

struct Candidate {
    welfare_f: f64,
    welfare: Q,
    gap: Q,
    comps: Vec<usize>,
}

pub fn bruteforce_optimal_sparse_cce(game: &Game, sparsity: usize, resolution: usize, eps: &Q) -> Result<BruteForceResult> {
    let m = game.m();
    if m > MAX_ACTIONS || sparsity == 0 || sparsity > MAX_SPARSITY || resolution == 0 || resolution > MAX_RESOLUTION {
        return Err(Error::Parameter(format!(
            "brute force needs m <= {MAX_ACTIONS}, 1 <= T <= {MAX_SPARSITY}, 1 <= d <= {MAX_RESOLUTION}; got m = {m}, T = {sparsity}, d = {resolution}"
        )));
    }
    let total = enumeration_size(m, sparsity, resolution);
    if total > ENUMERATION_BUDGET {
        return Err(Error::Parameter(format!(
            "{total} candidate mixtures exceed the budget of {ENUMERATION_BUDGET}"
        )));
    }
    let grid = simplex_grid(m, resolution);
    let df = resolution as f64;
    let gf: Vec<Vec<f64>> = grid.iter().map(|p| p.iter().map(|&v| v as f64 / df).collect()).collect();
    let gq: Vec<Vec<Q>> = grid
        .iter()
        .map(|p| p.iter().map(|&v| rational::q(v as i64, resolution as i64)).collect())
        .collect();
    let pairs: Vec<(usize, usize)> = (0..grid.len()).flat_map(|i| (0..grid.len()).map(move |j| (i, j))).collect();
    let r = game.r_f64();
    let c = game.c_f64();
    let eps_f = rational::to_f64(eps);
    let w_f = vec![1.0 / sparsity as f64; sparsity];
    let w_q = vec![rational::q(1, sparsity as i64); sparsity];
    let np = pairs.len();

    let certify = |comps: &[usize]| -> Option<(Q, Q)> {
        let xs: Vec<&[Q]> = comps.iter().map(|&p| gq[pairs[p].0].as_slice()).collect();
        let ys: Vec<&[Q]> = comps.iter().map(|&p| gq[pairs[p].1].as_slice()).collect();
        let d = mixture_gap_generic(game.r(), game.c(), &w_q, &xs, &ys);
        (d.gap <= *eps).then(|| (&d.utility_x + &d.utility_y, d.gap))
    };

    // Each task owns one first component; later components have index >= it.
    let best = (0..np)
        .into_par_iter()
        .map(|first| {
            let mut local: Option<Candidate> = None;
            let mut comps = vec![first; sparsity];
            loop {
                let xs: Vec<&[f64]> = comps.iter().map(|&p| gf[pairs[p].0].as_slice()).collect();
                let ys: Vec<&[f64]> = comps.iter().map(|&p| gf[pairs[p].1].as_slice()).collect();
                let d = mixture_gap_generic(&r, &c, &w_f, &xs, &ys);
                let wf = d.utility_x + d.utility_y;
                let promising = d.gap <= eps_f + SCREEN_SLACK
                    && local.as_ref().is_none_or(|b| wf >= b.welfare_f - SCREEN_SLACK);
                if promising {
                    if let Some((welfare, gap)) = certify(&comps) {
                        if local.as_ref().is_none_or(|b| welfare > b.welfare) {
                            local = Some(Candidate {
                                welfare_f: wf,
                                welfare,
                                gap,
                                comps: comps.clone(),
                            });
                        }
                    }
                }
                // next non-decreasing tail
                let mut pos = sparsity;
                loop {
                    if pos == 1 {
                        return local;
                    }
                    pos -= 1;
                    if comps[pos] + 1 < np {
                        let v = comps[pos] + 1;
                        for slot in comps.iter_mut().skip(pos) {
                            *slot = v;
                        }
                        break;
                    }
                }
            }
        })
        .collect::<Vec<_>>()
        .into_iter()
        .enumerate()
        .filter_map(|(first, c)| c.map(|c| (first, c)))
        .fold(None::<(usize, Candidate)>, |acc, (first, c)| match acc {
            Some((f, b)) if b.welfare >= c.welfare => Some((f, b)),
            _ => Some((first, c)),
        });

    let Some((_, cand)) = best else {
        return Err(Error::NotFound(format!(
            "no uniform {sparsity}-sparse mixture on the 1/{resolution} grid has gap <= {}",
            rational::format_q(eps)
        )));
    };
    let strat = |i: usize| MixedStrategy::new(gq[i].clone()).expect("grid point");
    let rows = cand.comps.iter().map(|&p| strat(pairs[p].0)).collect();
    let cols = cand.comps.iter().map(|&p| strat(pairs[p].1)).collect();
    let mixture = SparseMixture::uniform(rows, cols)?;
    debug_assert_eq!(deviation_gap(game, &mixture)?.gap, cand.gap);
    Ok(BruteForceResult {
        mixture,
        welfare: cand.welfare,
        gap: cand.gap,
        enumerated: total,
    })
}
