//! Simultaneous multiplicative weights under full feedback.
//!
//! Both players start uniform. Payoffs are affinely mapped to `[-1, 1]`
//! using the joint range of `R` and `C` before the exponential update;
//! histories and regrets stay in raw payoff units.

use num_traits::Zero;
use serde::Serialize;

use super::Arithmetic;
use crate::error::{Error, Result};
use crate::eval::mixture_gap_generic;
use crate::game::{Game, MixedStrategy, SparseMixture};
use crate::rational::{self, Q};
use crate::scalar::{convert_matrix, Scalar};

/// Denominator exponent used to keep strategies exact.
pub const STRATEGY_BITS: u32 = 48;

#[derive(Debug, Clone, PartialEq)]
pub struct DynamicsHistory<S> {
    pub xs: Vec<Vec<S>>,
    pub ys: Vec<Vec<S>>,
    /// `u_x^(t) = R y^(t)`.
    pub ux: Vec<Vec<S>>,
    /// `u_y^(t) = C^T x^(t)`.
    pub uy: Vec<Vec<S>>,
    pub reg_x: S,
    pub reg_y: S,
    pub eta: f64,
    pub arithmetic: Arithmetic,
}

/// Compact, printable digest of a run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DynamicsSummary {
    pub rounds: usize,
    pub eta: f64,
    pub arithmetic: Arithmetic,
    pub reg_x: String,
    pub reg_y: String,
    pub average_regret: f64,
    pub regret_ceiling: f64,
    pub empirical_gap: String,
}

impl<S: Scalar> DynamicsHistory<S> {
    pub fn rounds(&self) -> usize {
        self.xs.len()
    }

    /// `max(Reg_x, Reg_y) / T`.
    pub fn average_regret(&self) -> S {
        let best = if self.reg_x >= self.reg_y {
            self.reg_x.clone()
        } else {
            self.reg_y.clone()
        };
        best / S::from_q(&rational::qi(self.rounds() as i64))
    }

    /// Gap of the uniform empirical mixture, computed directly from the
    /// stored strategies in the history's own arithmetic.
    pub fn empirical_gap(&self, game: &Game) -> Result<S> {
        game_len(game, self.xs.first().map_or(0, Vec::len))?;
        let r: Vec<Vec<S>> = convert_matrix(game.r());
        let c: Vec<Vec<S>> = convert_matrix(game.c());
        let t = self.rounds();
        let w = vec![S::one() / S::from_q(&rational::qi(t as i64)); t];
        let xs: Vec<&[S]> = self.xs.iter().map(Vec::as_slice).collect();
        let ys: Vec<&[S]> = self.ys.iter().map(Vec::as_slice).collect();
        Ok(mixture_gap_generic(&r, &c, &w, &xs, &ys).gap)
    }
}

fn game_len(game: &Game, len: usize) -> Result<()> {
    if len != game.m() {
        return Err(Error::Shape(format!("history has {len} actions, game has {}", game.m())));
    }
    Ok(())
}

pub fn default_eta(m: usize, rounds: usize) -> f64 {
    (8.0 * (m as f64).ln() / rounds as f64).sqrt()
}

/// `max - min` over all entries of `R` and `C`.
pub fn payoff_range(game: &Game) -> f64 {
    let (lo, hi) = range_of(game);
    hi - lo
}

fn range_of(game: &Game) -> (f64, f64) {
    game.r()
        .iter()
        .chain(game.c())
        .flatten()
        .map(rational::to_f64)
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)))
}

/// Average-regret ceiling for the default step size:
/// `1.25 * range * sqrt(ln m / (2T))`.
///
/// With payoffs in `[-1, 1]` and `eta = sqrt(8 ln m / T)` the Hedge bound
/// gives `Reg <= ln m / eta + eta T / 2`, which is `1.25 sqrt(2 T ln m)` in
/// normalized units and half the range times that in raw units.
pub fn regret_ceiling(game: &Game, rounds: usize) -> f64 {
    1.25 * payoff_range(game) * ((game.m() as f64).ln() / (2.0 * rounds as f64)).sqrt()
}

/// Regrets against the best fixed pure action in hindsight.
pub fn external_regret<S: Scalar>(h: &DynamicsHistory<S>) -> (S, S) {
    (regret(&h.xs, &h.ux), regret(&h.ys, &h.uy))
}

fn regret<S: Scalar>(strats: &[Vec<S>], utils: &[Vec<S>]) -> S {
    let m = utils.first().map_or(0, Vec::len);
    let mut cum = vec![S::zero(); m];
    let mut realized = S::zero();
    for (x, u) in strats.iter().zip(utils) {
        for (a, ua) in u.iter().enumerate() {
            cum[a] = cum[a].clone() + ua.clone();
            if !x[a].is_zero() {
                realized = realized + x[a].clone() * ua.clone();
            }
        }
    }
    let best = cum
        .into_iter()
        .reduce(|a, b| if b > a { b } else { a })
        .unwrap_or_else(S::zero);
    best - realized
}

fn softmax(cum: &[f64], eta: f64) -> Vec<f64> {
    let top = cum.iter().fold(f64::NEG_INFINITY, |a, &b| a.max(b));
    let w: Vec<f64> = cum.iter().map(|&v| (eta * (v - top)).exp()).collect();
    let s: f64 = w.iter().sum();
    w.into_iter().map(|v| v / s).collect()
}

/// Validates the inputs and resolves the step size. The default is zero
/// only for one-action games, where it makes no difference.
fn resolve_eta(m: usize, rounds: usize, eta: Option<f64>) -> Result<f64> {
    if rounds == 0 {
        return Err(Error::Parameter("need at least one round".into()));
    }
    match eta {
        Some(e) if !(e > 0.0 && e.is_finite()) => {
            Err(Error::Parameter(format!("step size must be positive, got {e}")))
        }
        Some(e) => Ok(e),
        None => Ok(default_eta(m, rounds)),
    }
}

/// Step size on raw cumulative payoffs equivalent to `eta` on normalized ones.
fn raw_eta(game: &Game, eta: f64) -> f64 {
    let (lo, hi) = range_of(game);
    if hi > lo {
        2.0 * eta / (hi - lo)
    } else {
        0.0
    }
}

/// Rational-mode run: each round's strategies are rounded onto multiples of
/// `2^-48`, and feedback, regrets and the returned mixture are exact
/// functions of those rounded strategies.
pub fn mwu_run(game: &Game, rounds: usize, eta: Option<f64>) -> Result<(SparseMixture, DynamicsHistory<Q>)> {
    let m = game.m();
    let eta = resolve_eta(m, rounds, eta)?;
    let step = raw_eta(game, eta);
    let (mut cx, mut cy) = (vec![0.0; m], vec![0.0; m]);
    let mut h = DynamicsHistory {
        xs: Vec::with_capacity(rounds),
        ys: Vec::with_capacity(rounds),
        ux: Vec::with_capacity(rounds),
        uy: Vec::with_capacity(rounds),
        reg_x: Q::zero(),
        reg_y: Q::zero(),
        eta,
        arithmetic: Arithmetic::Exact,
    };
    for _ in 0..rounds {
        let x = rational::quantize_simplex(&softmax(&cx, step), STRATEGY_BITS);
        let y = rational::quantize_simplex(&softmax(&cy, step), STRATEGY_BITS);
        let ux: Vec<Q> = (0..m)
            .map(|a| (0..m).fold(Q::zero(), |acc, j| acc + &game.r()[a][j] * &y[j]))
            .collect();
        let uy: Vec<Q> = (0..m)
            .map(|b| (0..m).fold(Q::zero(), |acc, i| acc + &x[i] * &game.c()[i][b]))
            .collect();
        for a in 0..m {
            cx[a] += rational::to_f64(&ux[a]);
            cy[a] += rational::to_f64(&uy[a]);
        }
        h.xs.push(x);
        h.ys.push(y);
        h.ux.push(ux);
        h.uy.push(uy);
    }
    let (rx, ry) = external_regret(&h);
    h.reg_x = rx;
    h.reg_y = ry;
    let mix = empirical_mixture(&h.xs, &h.ys)?;
    Ok((mix, h))
}

/// Float-mode run. The returned mixture rounds each stored strategy onto
/// multiples of `2^-48` so it can be evaluated exactly.
pub fn mwu_run_float(game: &Game, rounds: usize, eta: Option<f64>) -> Result<(SparseMixture, DynamicsHistory<f64>)> {
    let m = game.m();
    let eta = resolve_eta(m, rounds, eta)?;
    let step = raw_eta(game, eta);
    let r = game.r_f64();
    let c = game.c_f64();
    let (mut cx, mut cy) = (vec![0.0; m], vec![0.0; m]);
    let mut h = DynamicsHistory {
        xs: Vec::with_capacity(rounds),
        ys: Vec::with_capacity(rounds),
        ux: Vec::with_capacity(rounds),
        uy: Vec::with_capacity(rounds),
        reg_x: 0.0,
        reg_y: 0.0,
        eta,
        arithmetic: Arithmetic::Float,
    };
    for _ in 0..rounds {
        let x = softmax(&cx, step);
        let y = softmax(&cy, step);
        let ux: Vec<f64> = (0..m).map(|a| (0..m).map(|j| r[a][j] * y[j]).sum()).collect();
        let uy: Vec<f64> = (0..m).map(|b| (0..m).map(|i| x[i] * c[i][b]).sum()).collect();
        for a in 0..m {
            cx[a] += ux[a];
            cy[a] += uy[a];
        }
        h.xs.push(x);
        h.ys.push(y);
        h.ux.push(ux);
        h.uy.push(uy);
    }
    let (rx, ry) = external_regret(&h);
    h.reg_x = rx;
    h.reg_y = ry;
    let q = |v: &Vec<f64>| rational::quantize_simplex(v, STRATEGY_BITS);
    let xs: Vec<Vec<Q>> = h.xs.iter().map(q).collect();
    let ys: Vec<Vec<Q>> = h.ys.iter().map(q).collect();
    let mix = empirical_mixture(&xs, &ys)?;
    Ok((mix, h))
}

fn empirical_mixture(xs: &[Vec<Q>], ys: &[Vec<Q>]) -> Result<SparseMixture> {
    let wrap = |v: &[Vec<Q>]| -> Result<Vec<MixedStrategy>> { v.iter().cloned().map(MixedStrategy::new).collect() };
    SparseMixture::uniform(wrap(xs)?, wrap(ys)?)
}

pub fn summarize<S: Scalar>(game: &Game, h: &DynamicsHistory<S>, fmt: impl Fn(&S) -> String) -> Result<DynamicsSummary> {
    Ok(DynamicsSummary {
        rounds: h.rounds(),
        eta: h.eta,
        arithmetic: h.arithmetic,
        reg_x: fmt(&h.reg_x),
        reg_y: fmt(&h.reg_y),
        average_regret: h.average_regret().to_f64(),
        regret_ceiling: regret_ceiling(game, h.rounds()),
        empirical_gap: fmt(&h.empirical_gap(game)?),
    })
}
