//! Planted-clique instances and the low-precision recovery chain:
//! density, dense-pair extraction from a mixture, and clique peeling.

use num_traits::Zero;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::game::{Game, SparseMixture};
use crate::graph::{Graph, NodeSet};
use crate::rational::{self, qi, Q};
use crate::rng;

const EDGE_STREAM: u64 = 0x4544_4745;

#[derive(Debug, Clone, PartialEq)]
pub struct PlantedInstance {
    pub graph: Graph,
    pub planted: NodeSet,
    pub n: usize,
    pub k: usize,
    pub seed: u64,
}

/// `G(n, 1/2, k)` with the clique on nodes `1..=k`; every other pair is a
/// fair coin drawn from `(seed, i, j)`.
pub fn gen_planted_graph(n: usize, k: usize, seed: u64) -> Result<PlantedInstance> {
    if k == 0 || k > n {
        return Err(Error::Parameter(format!("planted size must lie in 1..={n}, got {k}")));
    }
    let mut graph = Graph::empty(n);
    for i in 1..=n {
        for j in i + 1..=n {
            let edge = j <= k || rng::hash4(seed, EDGE_STREAM, i as u64, j as u64) & 1 == 1;
            if edge {
                graph.add_edge(i, j)?;
            }
        }
    }
    Ok(PlantedInstance {
        graph,
        planted: (1..=k).collect(),
        n,
        k,
        seed,
    })
}

/// Relabels nodes by a seeded permutation; returns the new graph and the
/// image of the planted set.
pub fn permute_instance(inst: &PlantedInstance, seed: u64) -> Result<(Graph, NodeSet)> {
    let mut perm: Vec<usize> = (1..=inst.n).collect();
    perm.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    let map = |v: usize| perm[v - 1];
    let mut g = Graph::empty(inst.n);
    for (i, j) in inst.graph.edges() {
        g.add_edge(map(i), map(j))?;
    }
    Ok((g, inst.planted.iter().map(|&v| map(v)).collect()))
}

/// Clique grown over a seeded random node order; a lower bound on the
/// clique number.
pub fn greedy_clique(g: &Graph, seed: u64) -> NodeSet {
    let mut order: Vec<usize> = (1..=g.n()).collect();
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    let mut clique = NodeSet::new();
    for v in order {
        if clique.iter().all(|&u| g.has_edge(u, v)) {
            clique.insert(v);
        }
    }
    clique
}

/// Fraction of pairs in `s x t` that are edges or self-loops.
pub fn dens(g: &Graph, s: &NodeSet, t: &NodeSet) -> Result<Q> {
    if s.is_empty() || s.len() != t.len() {
        return Err(Error::Parameter(format!(
            "density needs equal non-empty sets, got sizes {} and {}",
            s.len(),
            t.len()
        )));
    }
    for &v in s.iter().chain(t) {
        g.check_node(v)?;
    }
    let hits = s
        .iter()
        .map(|&i| t.iter().filter(|&&j| g.adjacent_or_equal(i, j)).count())
        .sum::<usize>();
    Ok(rational::q(hits as i64, (s.len() * t.len()) as i64))
}

/// Graph encoded by the leading node-labelled block of a game: `{i, j}` is
/// an edge when `R_ij > 0` and `R_ji > 0`.
pub fn graph_from_game(game: &Game) -> Result<Graph> {
    let n = game.node_block();
    let mut g = Graph::empty(n);
    for i in 0..n {
        for j in i + 1..n {
            if game.r()[i][j] > Q::zero() && game.r()[j][i] > Q::zero() {
                g.add_edge(i + 1, j + 1)?;
            }
        }
    }
    Ok(g)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DensePair {
    /// 0-based index of the mixture component used.
    pub component: usize,
    pub rows: NodeSet,
    pub cols: NodeSet,
}

fn take_lowest(v: Vec<usize>, d: usize) -> NodeSet {
    v.into_iter().take(d).map(|i| i + 1).collect()
}

/// Dense pair read off the first component with weight at least `1/T`:
/// columns in the support of `y` that `x` hits with adjacency mass at least
/// 4/5, then rows in the support of `x` with mass at least 3/5 against the
/// uniform distribution on those columns. Each side is cut to its `d`
/// lowest nodes; fewer than `d` on either side is `NotFound`.
///
/// The adjacency block is the leading `n x n` block, where `n` counts the
/// node-labelled actions, and `A_ij = 1` exactly when `R_ij > 0` there.
pub fn extract_dense_pair(game: &Game, mix: &SparseMixture, d: usize, spike: u64) -> Result<DensePair> {
    let t_count = mix.sparsity();
    if d == 0 {
        return Err(Error::Parameter("target size must be positive".into()));
    }
    if spike <= 4 * t_count as u64 {
        return Err(Error::Parameter(format!(
            "spike magnitude {spike} must exceed 4T = {}",
            4 * t_count
        )));
    }
    if mix.m() != game.m() {
        return Err(Error::Shape(format!(
            "mixture length {} differs from game size {}",
            mix.m(),
            game.m()
        )));
    }
    let n = game.node_block();
    let adj = |i: usize, j: usize| game.r()[i][j] > Q::zero();
    let share = rational::q(1, t_count as i64);
    let t = mix
        .weights()
        .iter()
        .position(|w| *w >= share)
        .expect("some weight reaches the average");
    let x = mix.rows()[t].probs();
    let y = mix.cols()[t].probs();
    if x[n..].iter().chain(&y[n..]).any(|v| !v.is_zero()) {
        return Err(Error::Distribution("mixture must be supported on the adjacency block".into()));
    }
    let four_fifths = rational::q(4, 5);
    let iy: Vec<usize> = (0..n)
        .filter(|&j| !y[j].is_zero())
        .filter(|&j| (0..n).filter(|&i| adj(i, j)).fold(Q::zero(), |acc, i| acc + &x[i]) >= four_fifths)
        .collect();
    if iy.len() < d {
        return Err(Error::NotFound(format!("only {} columns pass the 4/5 test, need {d}", iy.len())));
    }
    let cols = take_lowest(iy, d);
    let three_fifths = rational::q(3, 5) * qi(cols.len() as i64);
    let ix: Vec<usize> = (0..n)
        .filter(|&i| !x[i].is_zero())
        .filter(|&i| qi(cols.iter().filter(|&&j| adj(i, j - 1)).count() as i64) >= three_fifths)
        .collect();
    if ix.len() < d {
        return Err(Error::NotFound(format!("only {} rows pass the 3/5 test, need {d}", ix.len())));
    }
    Ok(DensePair {
        component: t,
        rows: take_lowest(ix, d),
        cols,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CliqueRecovery {
    pub clique: NodeSet,
    pub target: usize,
    pub reached: bool,
}

/// Peels `s ∪ t`: while the remainder is not a clique, drop the node with
/// the fewest neighbours inside it (lowest index on ties). An empty union
/// yields the singleton `{1}`.
pub fn clique_from_dense_pair(g: &Graph, s: &NodeSet, t: &NodeSet, target: usize) -> Result<CliqueRecovery> {
    let mut cur: NodeSet = s.union(t).copied().collect();
    for &v in &cur {
        g.check_node(v)?;
    }
    while !g.is_clique(&cur)? {
        let worst = cur
            .iter()
            .map(|&v| (cur.iter().filter(|&&u| g.has_edge(u, v)).count(), v))
            .min()
            .map(|(_, v)| v)
            .expect("non-clique sets are non-empty");
        cur.remove(&worst);
    }
    if cur.is_empty() && g.n() > 0 {
        cur.insert(1);
    }
    Ok(CliqueRecovery {
        reached: cur.len() >= target,
        target,
        clique: cur,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::four_node_example;

    fn set(v: &[usize]) -> NodeSet {
        v.iter().copied().collect()
    }

    #[test]
    fn full_plant_is_complete() {
        let inst = gen_planted_graph(7, 7, 3).unwrap();
        assert_eq!(inst.graph, Graph::complete(7));
        assert!(gen_planted_graph(3, 4, 0).is_err());
        let inst = gen_planted_graph(30, 5, 9).unwrap();
        assert!(inst.graph.is_clique(&inst.planted).unwrap());
        assert_eq!(inst, gen_planted_graph(30, 5, 9).unwrap());
    }

    #[test]
    fn density_examples() {
        let g = four_node_example();
        assert_eq!(dens(&g, &set(&[2, 4]), &set(&[2, 4])).unwrap(), rational::q(1, 2));
        assert_eq!(dens(&g, &set(&[1, 2, 3]), &set(&[1, 2, 3])).unwrap(), Q::from_integer(1.into()));
        let e = Graph::empty(4);
        assert_eq!(dens(&e, &set(&[1, 2]), &set(&[3, 4])).unwrap(), Q::zero());
        assert!(dens(&e, &set(&[1]), &set(&[3, 4])).is_err());
    }

    #[test]
    fn peeling() {
        let g = four_node_example();
        assert_eq!(clique_from_dense_pair(&g, &set(&[1, 2, 3]), &set(&[1, 2, 3]), 3).unwrap().clique, set(&[1, 2, 3]));
        let r = clique_from_dense_pair(&g, &set(&[1, 2, 3, 4]), &set(&[1, 2, 3, 4]), 3).unwrap();
        assert_eq!(r.clique, set(&[1, 3, 4]));
        let e = Graph::empty(3);
        assert_eq!(clique_from_dense_pair(&e, &set(&[1, 2]), &set(&[2, 3]), 2).unwrap().clique.len(), 1);
    }

    #[test]
    fn graph_round_trips_through_gadgets() {
        let inst = gen_planted_graph(12, 4, 2).unwrap();
        let p = crate::constructions::GzParams::for_reduction(4, 2).unwrap();
        let game = crate::constructions::build_gz_game(&inst.graph, &p);
        assert_eq!(graph_from_game(&game).unwrap(), inst.graph);
        let lp = crate::constructions::LowPrecParams::new(10, 24, 3).unwrap();
        let game = crate::constructions::build_lowprec_game(&inst.graph, &lp).unwrap();
        assert_eq!(graph_from_game(&game).unwrap(), inst.graph);
    }

    #[test]
    fn permutation_keeps_clique() {
        let inst = gen_planted_graph(20, 6, 1).unwrap();
        let (g, k) = permute_instance(&inst, 77).unwrap();
        assert!(g.is_clique(&k).unwrap());
        assert_eq!(g.edge_count(), inst.graph.edge_count());
    }
}
