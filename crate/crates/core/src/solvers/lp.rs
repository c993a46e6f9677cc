//! Optimal unconstrained CCE by linear programming over the joint
//! distribution `mu`: `m^2` probabilities, one equality, `2m` deviation
//! constraints.

use serde::Serialize;

use super::simplex::{self, LinearProgram, LpStatus, Relation};
use super::Arithmetic;
use crate::eval;
use crate::game::{Game, JointDistribution};
use crate::rational::{self, Q};
use crate::scalar::{convert_matrix, Scalar};

/// Largest action count solved with exact pivoting by default.
pub const EXACT_LIMIT: usize = 64;

const MAX_PIVOTS: usize = 200_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum LpObjective {
    Welfare,
    /// `max z` with `z <= u_x` and `z <= u_y`.
    Egalitarian,
    PlayerX,
    PlayerY,
}

impl std::str::FromStr for LpObjective {
    type Err = crate::error::Error;

    fn from_str(s: &str) -> crate::error::Result<Self> {
        match s {
            "welfare" => Ok(LpObjective::Welfare),
            "egalitarian" => Ok(LpObjective::Egalitarian),
            "player-x" | "x" => Ok(LpObjective::PlayerX),
            "player-y" | "y" => Ok(LpObjective::PlayerY),
            _ => Err(crate::error::Error::Parameter(format!("unknown LP objective {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpSolution {
    pub status: LpStatus,
    pub arithmetic: Arithmetic,
    /// Present when `status` is optimal. In float mode the solver's output is
    /// rounded onto a dyadic grid so it is still an exact distribution.
    pub joint: Option<JointDistribution>,
    /// Exact objective of `joint`.
    pub objective_value: Option<Q>,
    pub pivots: usize,
}

/// Objective value of a joint distribution, exact.
pub fn objective_of(game: &Game, joint: &JointDistribution, objective: LpObjective) -> crate::error::Result<Q> {
    let (ux, uy) = eval::joint_utilities(game, joint)?;
    Ok(match objective {
        LpObjective::Welfare => ux + uy,
        LpObjective::Egalitarian => rational::min_q(&ux, &uy).clone(),
        LpObjective::PlayerX => ux,
        LpObjective::PlayerY => uy,
    })
}

fn build<S: Scalar>(game: &Game, objective: LpObjective) -> LinearProgram<S> {
    let m = game.m();
    let r: Vec<Vec<S>> = convert_matrix(game.r());
    let c: Vec<Vec<S>> = convert_matrix(game.c());
    let nv = m * m;
    let epigraph = objective == LpObjective::Egalitarian;
    let width = if epigraph { nv + 2 } else { nv };
    let idx = |i: usize, j: usize| i * m + j;
    let mut rows = Vec::with_capacity(2 * m + 3);

    let mut total = vec![S::zero(); width];
    total[..nv].iter_mut().for_each(|v| *v = S::one());
    rows.push((total, Relation::Eq, S::one()));

    for a in 0..m {
        let mut row = vec![S::zero(); width];
        for i in 0..m {
            for j in 0..m {
                row[idx(i, j)] = r[a][j].clone() - r[i][j].clone();
            }
        }
        rows.push((row, Relation::Le, S::zero()));
    }
    for b in 0..m {
        let mut row = vec![S::zero(); width];
        for i in 0..m {
            for j in 0..m {
                row[idx(i, j)] = c[i][b].clone() - c[i][j].clone();
            }
        }
        rows.push((row, Relation::Le, S::zero()));
    }

    let mut obj = vec![S::zero(); width];
    match objective {
        LpObjective::Welfare | LpObjective::PlayerX | LpObjective::PlayerY => {
            for i in 0..m {
                for j in 0..m {
                    obj[idx(i, j)] = match objective {
                        LpObjective::Welfare => r[i][j].clone() + c[i][j].clone(),
                        LpObjective::PlayerX => r[i][j].clone(),
                        _ => c[i][j].clone(),
                    };
                }
            }
        }
        LpObjective::Egalitarian => {
            // z = z_plus - z_minus at columns nv, nv + 1.
            obj[nv] = S::one();
            obj[nv + 1] = -S::one();
            for pay in [&r, &c] {
                let mut row = vec![S::zero(); width];
                for i in 0..m {
                    for j in 0..m {
                        row[idx(i, j)] = -pay[i][j].clone();
                    }
                }
                row[nv] = S::one();
                row[nv + 1] = -S::one();
                rows.push((row, Relation::Le, S::zero()));
            }
        }
    }
    LinearProgram { objective: obj, rows }
}

/// Welfare-style optimum over all CCEs, exact for `m <= 64`.
pub fn lp_optimal_cce(game: &Game, objective: LpObjective) -> LpSolution {
    let mode = if game.m() <= EXACT_LIMIT {
        Arithmetic::Exact
    } else {
        Arithmetic::Float
    };
    lp_optimal_cce_with(game, objective, mode)
}

pub fn lp_optimal_cce_with(game: &Game, objective: LpObjective, mode: Arithmetic) -> LpSolution {
    let m = game.m();
    let (status, flat, pivots) = match mode {
        Arithmetic::Exact => {
            let out = simplex::solve::<Q>(&build(game, objective), MAX_PIVOTS);
            (out.status, out.x[..m * m].to_vec(), out.iterations)
        }
        Arithmetic::Float => {
            let out = simplex::solve::<f64>(&build(game, objective), MAX_PIVOTS);
            let q = rational::quantize_simplex(&out.x[..m * m], 48);
            (out.status, q, out.iterations)
        }
    };
    if status != LpStatus::Optimal {
        return LpSolution {
            status,
            arithmetic: mode,
            joint: None,
            objective_value: None,
            pivots,
        };
    }
    let probs: Vec<Vec<Q>> = flat.chunks(m).map(|r| r.to_vec()).collect();
    let joint = JointDistribution::new(probs).expect("simplex output is a distribution");
    let value = objective_of(game, &joint, objective).expect("shapes agree");
    LpSolution {
        status,
        arithmetic: mode,
        joint: Some(joint),
        objective_value: Some(value),
        pivots,
    }
}
