//! Exact evaluators: welfare, CCE and CE gaps, sparse/joint conversions.
//!
//! Gaps range over pure deviations only; by linearity a mixed deviation is
//! never better than the best pure one. Gaps are signed, so a strict
//! equilibrium reports a negative CCE gap.

use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::game::{Game, JointDistribution, MixedStrategy, SparseMixture};
use crate::rational::{self, Q};
use crate::scalar::Scalar;

/// Full equilibrium/welfare summary of a mixture.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GapReport {
    #[serde(serialize_with = "crate::formats::ser_q")]
    pub cce_gap: Q,
    #[serde(serialize_with = "crate::formats::ser_q")]
    pub ce_gap: Q,
    /// 0-based index of the best constant deviation for the row player.
    pub best_row_deviation: usize,
    pub best_col_deviation: usize,
    #[serde(serialize_with = "crate::formats::ser_q")]
    pub welfare: Q,
    #[serde(serialize_with = "crate::formats::ser_q")]
    pub egalitarian: Q,
    #[serde(serialize_with = "crate::formats::ser_q")]
    pub utility_x: Q,
    #[serde(serialize_with = "crate::formats::ser_q")]
    pub utility_y: Q,
}

/// Constant-deviation gap data, cheaper than a [`GapReport`].
#[derive(Debug, Clone, PartialEq)]
pub struct DeviationGap<S> {
    pub gap: S,
    pub row_gain: S,
    pub col_gain: S,
    pub best_row: usize,
    pub best_col: usize,
    pub utility_x: S,
    pub utility_y: S,
}

pub fn mixture_to_joint(mix: &SparseMixture, m: usize) -> Result<JointDistribution> {
    if mix.m() != m {
        return Err(Error::Shape(format!(
            "mixture strategies have length {}, expected {m}",
            mix.m()
        )));
    }
    let mut mu = vec![vec![Q::zero(); m]; m];
    for (w, x, y) in mix.active() {
        for (i, xi) in x.probs().iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            let wx = w * xi;
            for (j, yj) in y.probs().iter().enumerate() {
                if !yj.is_zero() {
                    mu[i][j] += &wx * yj;
                }
            }
        }
    }
    JointDistribution::new(mu)
}

/// Row-by-row decomposition of a joint distribution into `m` products.
///
/// Component `t` is the point mass on row `t` times the normalized row of
/// `mu`; an all-zero row gets weight 0 and a uniform column strategy.
pub fn n_sparse_decompose(joint: &JointDistribution) -> SparseMixture {
    let m = joint.m();
    let mut weights = Vec::with_capacity(m);
    let mut rows = Vec::with_capacity(m);
    let mut cols = Vec::with_capacity(m);
    for (t, row) in joint.probs().iter().enumerate() {
        let mass = rational::sum(row);
        let y = if mass.is_zero() {
            MixedStrategy::uniform(m)
        } else {
            MixedStrategy::new(row.iter().map(|p| p / &mass).collect())
                .expect("normalized row is a distribution")
        };
        weights.push(mass);
        rows.push(MixedStrategy::pure(m, t));
        cols.push(y);
    }
    SparseMixture::new(weights, rows, cols).expect("row sums form a distribution")
}

fn check_joint(game: &Game, joint: &JointDistribution) -> Result<()> {
    game.check_len("joint distribution", joint.m())
}

/// Expected utilities `(u_x, u_y)` under a joint distribution.
pub fn joint_utilities(game: &Game, joint: &JointDistribution) -> Result<(Q, Q)> {
    check_joint(game, joint)?;
    let mut ux = Q::zero();
    let mut uy = Q::zero();
    for (i, row) in joint.probs().iter().enumerate() {
        for (j, p) in row.iter().enumerate() {
            if !p.is_zero() {
                ux += p * &game.r()[i][j];
                uy += p * &game.c()[i][j];
            }
        }
    }
    Ok((ux, uy))
}

pub fn social_welfare(game: &Game, joint: &JointDistribution) -> Result<Q> {
    let (ux, uy) = joint_utilities(game, joint)?;
    Ok(ux + uy)
}

pub fn egalitarian_welfare(game: &Game, joint: &JointDistribution) -> Result<Q> {
    let (ux, uy) = joint_utilities(game, joint)?;
    Ok(if ux <= uy { ux } else { uy })
}

/// `(x^T R y, x^T C y)` for a single product.
pub fn product_utilities(game: &Game, x: &MixedStrategy, y: &MixedStrategy) -> Result<(Q, Q)> {
    game.check_len("row strategy", x.len())?;
    game.check_len("column strategy", y.len())?;
    let r: DeviationGap<Q> = mixture_gap_generic(
        game.r(),
        game.c(),
        &[Q::one()],
        &[x.probs()],
        &[y.probs()],
    );
    Ok((r.utility_x, r.utility_y))
}

/// Expected utilities under a mixture, without materializing the joint.
pub fn mixture_utilities(game: &Game, mix: &SparseMixture) -> Result<(Q, Q)> {
    let d = deviation_gap(game, mix)?;
    Ok((d.utility_x, d.utility_y))
}

pub fn mixture_welfare(game: &Game, mix: &SparseMixture) -> Result<Q> {
    let (ux, uy) = mixture_utilities(game, mix)?;
    Ok(ux + uy)
}

/// Constant-deviation gap of a product mixture over any scalar backend.
///
/// `xs[t]`/`ys[t]` are the component strategies and `weights[t]` their
/// weights; zero entries are skipped.
pub fn mixture_gap_generic<S: Scalar>(
    r: &[Vec<S>],
    c: &[Vec<S>],
    weights: &[S],
    xs: &[&[S]],
    ys: &[&[S]],
) -> DeviationGap<S> {
    let m = r.len();
    let mut xbar = vec![S::zero(); m];
    let mut ybar = vec![S::zero(); m];
    let mut ux = S::zero();
    let mut uy = S::zero();
    for ((w, x), y) in weights.iter().zip(xs).zip(ys) {
        if w.is_zero() {
            continue;
        }
        let ysupp: Vec<(usize, &S)> = y.iter().enumerate().filter(|(_, v)| !v.is_zero()).collect();
        let mut px = S::zero();
        let mut py = S::zero();
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            let mut rx = S::zero();
            let mut cx = S::zero();
            for &(j, yj) in &ysupp {
                rx = rx + r[i][j].clone() * yj.clone();
                cx = cx + c[i][j].clone() * yj.clone();
            }
            px = px + xi.clone() * rx;
            py = py + xi.clone() * cx;
            xbar[i] = xbar[i].clone() + w.clone() * xi.clone();
        }
        for &(j, yj) in &ysupp {
            ybar[j] = ybar[j].clone() + w.clone() * yj.clone();
        }
        ux = ux + w.clone() * px;
        uy = uy + w.clone() * py;
    }
    let ysupp: Vec<usize> = (0..m).filter(|&j| !ybar[j].is_zero()).collect();
    let xsupp: Vec<usize> = (0..m).filter(|&i| !xbar[i].is_zero()).collect();
    let mut best_row = 0;
    let mut best_row_val: Option<S> = None;
    for (a, ra) in r.iter().enumerate() {
        let v = ysupp
            .iter()
            .fold(S::zero(), |acc, &j| acc + ra[j].clone() * ybar[j].clone());
        if best_row_val.as_ref().is_none_or(|b| v > *b) {
            best_row = a;
            best_row_val = Some(v);
        }
    }
    let mut best_col = 0;
    let mut best_col_val: Option<S> = None;
    for b in 0..m {
        let v = xsupp
            .iter()
            .fold(S::zero(), |acc, &i| acc + xbar[i].clone() * c[i][b].clone());
        if best_col_val.as_ref().is_none_or(|bv| v > *bv) {
            best_col = b;
            best_col_val = Some(v);
        }
    }
    let row_gain = best_row_val.unwrap_or_else(S::zero) - ux.clone();
    let col_gain = best_col_val.unwrap_or_else(S::zero) - uy.clone();
    let gap = if row_gain >= col_gain { row_gain.clone() } else { col_gain.clone() };
    DeviationGap {
        gap,
        row_gain,
        col_gain,
        best_row,
        best_col,
        utility_x: ux,
        utility_y: uy,
    }
}

fn check_mixture(game: &Game, mix: &SparseMixture) -> Result<()> {
    game.check_len("mixture strategies", mix.m())
}

/// Exact constant-deviation gap of a mixture (no CE computation).
pub fn deviation_gap(game: &Game, mix: &SparseMixture) -> Result<DeviationGap<Q>> {
    check_mixture(game, mix)?;
    let xs: Vec<&[Q]> = mix.rows().iter().map(|s| s.probs()).collect();
    let ys: Vec<&[Q]> = mix.cols().iter().map(|s| s.probs()).collect();
    Ok(mixture_gap_generic(game.r(), game.c(), mix.weights(), &xs, &ys))
}

/// Exact constant-deviation gap of an explicit joint distribution.
pub fn joint_deviation_gap(game: &Game, joint: &JointDistribution) -> Result<DeviationGap<Q>> {
    check_joint(game, joint)?;
    let mix = n_sparse_decompose(joint);
    deviation_gap(game, &mix)
}

pub fn cce_gap(game: &Game, mix: &SparseMixture) -> Result<GapReport> {
    let d = deviation_gap(game, mix)?;
    let joint = mixture_to_joint(mix, game.m())?;
    let ce = ce_gap_joint(game, &joint)?;
    let welfare = &d.utility_x + &d.utility_y;
    let egalitarian = rational::min_q(&d.utility_x, &d.utility_y).clone();
    Ok(GapReport {
        cce_gap: d.gap,
        ce_gap: ce,
        best_row_deviation: d.best_row,
        best_col_deviation: d.best_col,
        welfare,
        egalitarian,
        utility_x: d.utility_x,
        utility_y: d.utility_y,
    })
}

pub fn ce_gap(game: &Game, mix: &SparseMixture) -> Result<Q> {
    check_mixture(game, mix)?;
    let joint = mixture_to_joint(mix, game.m())?;
    ce_gap_joint(game, &joint)
}

/// Swap-deviation gap: for each player, the total benefit of the best swap
/// function, i.e. the sum over recommended actions of the best non-negative
/// reassignment benefit. Always at least the constant-deviation gap.
pub fn ce_gap_joint(game: &Game, joint: &JointDistribution) -> Result<Q> {
    check_joint(game, joint)?;
    let m = game.m();
    let mu = joint.probs();
    let mut row_total = Q::zero();
    for a in 0..m {
        let supp: Vec<usize> = (0..m).filter(|&j| !mu[a][j].is_zero()).collect();
        if supp.is_empty() {
            continue;
        }
        let base = supp.iter().fold(Q::zero(), |acc, &j| acc + &mu[a][j] * &game.r()[a][j]);
        let mut best = Q::zero();
        for b in 0..m {
            let alt = supp.iter().fold(Q::zero(), |acc, &j| acc + &mu[a][j] * &game.r()[b][j]);
            let gain = alt - &base;
            if gain > best {
                best = gain;
            }
        }
        row_total += best;
    }
    let mut col_total = Q::zero();
    for b in 0..m {
        let supp: Vec<usize> = (0..m).filter(|&i| !mu[i][b].is_zero()).collect();
        if supp.is_empty() {
            continue;
        }
        let base = supp.iter().fold(Q::zero(), |acc, &i| acc + &mu[i][b] * &game.c()[i][b]);
        let mut best = Q::zero();
        for b2 in 0..m {
            let alt = supp.iter().fold(Q::zero(), |acc, &i| acc + &mu[i][b] * &game.c()[i][b2]);
            let gain = alt - &base;
            if gain > best {
                best = gain;
            }
        }
        col_total += best;
    }
    Ok(if row_total >= col_total { row_total } else { col_total })
}
