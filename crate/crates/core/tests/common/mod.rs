#![allow(dead_code)]

use num_traits::{One, Signed, Zero};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use sparse_cce::eval;
use sparse_cce::game::{Game, JointDistribution, MixedStrategy, SparseMixture};
use sparse_cce::rational::{q, Q};
use sparse_cce::solvers::LpObjective;

pub fn rng(seed: u64) -> ChaCha8Rng {
    rand::SeedableRng::seed_from_u64(seed)
}

pub fn rand_q(rng: &mut ChaCha8Rng) -> Q {
    q(rng.gen_range(-10..=10), rng.gen_range(1..=6))
}

pub fn rand_game(rng: &mut ChaCha8Rng, m: usize) -> Game {
    let mat = |rng: &mut ChaCha8Rng| -> Vec<Vec<Q>> { (0..m).map(|_| (0..m).map(|_| rand_q(rng)).collect()).collect() };
    let r = mat(rng);
    let c = mat(rng);
    Game::new(r, c).unwrap()
}

/// Random distribution with small positive integer weights, some zeroed.
pub fn rand_dist(rng: &mut ChaCha8Rng, m: usize) -> Vec<Q> {
    let mut w: Vec<i64> = (0..m).map(|_| if rng.gen_bool(0.3) { 0 } else { rng.gen_range(1..=9) }).collect();
    if w.iter().all(|&v| v == 0) {
        w[rng.gen_range(0..m)] = 1;
    }
    let s: i64 = w.iter().sum();
    w.into_iter().map(|v| q(v, s)).collect()
}

pub fn rand_strategy(rng: &mut ChaCha8Rng, m: usize) -> MixedStrategy {
    MixedStrategy::new(rand_dist(rng, m)).unwrap()
}

pub fn rand_mixture(rng: &mut ChaCha8Rng, m: usize, t: usize) -> SparseMixture {
    let weights = if rng.gen_bool(0.5) { vec![q(1, t as i64); t] } else { rand_dist(rng, t) };
    let rows = (0..t).map(|_| rand_strategy(rng, m)).collect();
    let cols = (0..t).map(|_| rand_strategy(rng, m)).collect();
    SparseMixture::new(weights, rows, cols).unwrap()
}

pub fn rand_joint(rng: &mut ChaCha8Rng, m: usize) -> JointDistribution {
    let flat = rand_dist(rng, m * m);
    JointDistribution::new(flat.chunks(m).map(|r| r.to_vec()).collect()).unwrap()
}

/// Solves a square system exactly; `None` when singular.
pub fn solve_exact(mut a: Vec<Vec<Q>>, mut b: Vec<Q>) -> Option<Vec<Q>> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, piv);
        b.swap(col, piv);
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = &a[r][col] / &a[col][col];
                for j in col..n {
                    let v = &f * &a[col][j];
                    a[r][j] -= v;
                }
                let v = &f * &b[col];
                b[r] -= v;
            }
        }
    }
    Some((0..n).map(|i| &b[i] / &a[i][i]).collect())
}

/// Optimum of a CCE objective on a 2x2 game by enumerating every vertex of
/// the CCE polytope: three active inequalities plus the normalization.
/// Linear objectives only.
pub fn vertex_enumeration_2x2(game: &Game, objective: LpObjective) -> Q {
    assert_eq!(game.m(), 2);
    assert_ne!(objective, LpObjective::Egalitarian, "not linear in mu");
    let r = game.r();
    let c = game.c();
    let idx = |i: usize, j: usize| i * 2 + j;
    // inequalities g.mu <= 0
    let mut ineq: Vec<Vec<Q>> = Vec::new();
    for a in 0..2 {
        let mut row = vec![Q::zero(); 4];
        for i in 0..2 {
            for j in 0..2 {
                row[idx(i, j)] = &r[a][j] - &r[i][j];
            }
        }
        ineq.push(row);
    }
    for b in 0..2 {
        let mut row = vec![Q::zero(); 4];
        for i in 0..2 {
            for j in 0..2 {
                row[idx(i, j)] = &c[i][b] - &c[i][j];
            }
        }
        ineq.push(row);
    }
    for v in 0..4 {
        let mut row = vec![Q::zero(); 4];
        row[v] = -Q::one();
        ineq.push(row);
    }
    let mut best: Option<Q> = None;
    let n = ineq.len();
    for a in 0..n {
        for b in a + 1..n {
            for cc in b + 1..n {
                let sys = vec![vec![Q::one(); 4], ineq[a].clone(), ineq[b].clone(), ineq[cc].clone()];
                let rhs = vec![Q::one(), Q::zero(), Q::zero(), Q::zero()];
                let Some(mu) = solve_exact(sys, rhs) else { continue };
                let feasible = ineq
                    .iter()
                    .all(|g| !g.iter().zip(&mu).fold(Q::zero(), |acc, (x, y)| acc + x * y).is_positive());
                if !feasible {
                    continue;
                }
                let joint = JointDistribution::new(vec![mu[0..2].to_vec(), mu[2..4].to_vec()]).unwrap();
                let (ux, uy) = eval::joint_utilities(game, &joint).unwrap();
                let val = match objective {
                    LpObjective::Welfare => &ux + &uy,
                    LpObjective::PlayerX => ux,
                    _ => uy,
                };
                if best.as_ref().is_none_or(|b| val > *b) {
                    best = Some(val);
                }
            }
        }
    }
    best.expect("the CCE polytope is non-empty")
}
