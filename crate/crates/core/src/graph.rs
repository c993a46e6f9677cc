use std::collections::BTreeSet;

use crate::error::{Error, Result};

/// Node set, 1-based labels in ascending order.
pub type NodeSet = BTreeSet<usize>;

/// Undirected simple graph on nodes `1..=n`.
///
/// Self-loops are never stored; the adjacency convention used by the game
/// builders treats every node as adjacent to itself.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    adj: Vec<Vec<bool>>,
    edges: BTreeSet<(usize, usize)>,
}

impl Graph {
    pub fn empty(n: usize) -> Self {
        Graph {
            n,
            adj: vec![vec![false; n]; n],
            edges: BTreeSet::new(),
        }
    }

    pub fn complete(n: usize) -> Self {
        let mut g = Graph::empty(n);
        for i in 1..=n {
            for j in i + 1..=n {
                g.add_edge(i, j).expect("valid edge");
            }
        }
        g
    }

    /// Builds a graph from an edge list, rejecting loops, duplicates and
    /// out-of-range endpoints.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Graph::empty(n);
        for &(i, j) in edges {
            g.add_edge(i, j)?;
        }
        Ok(g)
    }

    pub fn add_edge(&mut self, i: usize, j: usize) -> Result<()> {
        if i == j {
            return Err(Error::Graph(format!("self-loop on node {i}")));
        }
        self.check_node(i)?;
        self.check_node(j)?;
        let key = (i.min(j), i.max(j));
        if !self.edges.insert(key) {
            return Err(Error::Graph(format!("duplicate edge {{{}, {}}}", key.0, key.1)));
        }
        self.adj[i - 1][j - 1] = true;
        self.adj[j - 1][i - 1] = true;
        Ok(())
    }

    pub fn check_node(&self, i: usize) -> Result<()> {
        if i == 0 || i > self.n {
            Err(Error::Graph(format!("node {i} outside 1..={}", self.n)))
        } else {
            Ok(())
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().copied()
    }

    /// Edge test on 1-based labels; `false` for `i == j`.
    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        i != j && self.adj[i - 1][j - 1]
    }

    /// Adjacency with forced self-loops, 1-based labels.
    pub fn adjacent_or_equal(&self, i: usize, j: usize) -> bool {
        i == j || self.adj[i - 1][j - 1]
    }

    pub fn neighbors(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        self.adj[i - 1]
            .iter()
            .enumerate()
            .filter(|(_, &e)| e)
            .map(|(j, _)| j + 1)
    }

    pub fn is_clique(&self, s: &NodeSet) -> Result<bool> {
        for &i in s {
            self.check_node(i)?;
        }
        let nodes: Vec<usize> = s.iter().copied().collect();
        for (a, &i) in nodes.iter().enumerate() {
            for &j in &nodes[a + 1..] {
                if !self.has_edge(i, j) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// Clique number by exhaustive branch and bound. Exponential; meant for
    /// test-sized graphs.
    pub fn clique_number(&self) -> usize {
        fn grow(g: &Graph, current: usize, candidates: &[usize], best: &mut usize) {
            if current + candidates.len() <= *best {
                return;
            }
            if candidates.is_empty() {
                *best = (*best).max(current);
                return;
            }
            for (idx, &v) in candidates.iter().enumerate() {
                let rest: Vec<usize> = candidates[idx + 1..]
                    .iter()
                    .copied()
                    .filter(|&u| g.has_edge(u, v))
                    .collect();
                grow(g, current + 1, &rest, best);
                if current + candidates.len() - idx <= *best {
                    break;
                }
            }
        }
        let all: Vec<usize> = (1..=self.n).collect();
        let mut best = 0;
        grow(self, 0, &all, &mut best);
        best
    }
}

/// The 4-node example graph: every pair adjacent except `{2, 4}`.
pub fn four_node_example() -> Graph {
    Graph::from_edges(4, &[(1, 2), (1, 3), (1, 4), (2, 3), (3, 4)]).expect("valid")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(v: &[usize]) -> NodeSet {
        v.iter().copied().collect()
    }

    #[test]
    fn rejects_bad_edges() {
        let mut g = Graph::empty(3);
        assert!(g.add_edge(1, 1).is_err());
        assert!(g.add_edge(0, 2).is_err());
        assert!(g.add_edge(1, 4).is_err());
        g.add_edge(1, 2).unwrap();
        assert!(g.add_edge(2, 1).is_err());
    }

    #[test]
    fn cliques_in_example() {
        let g = four_node_example();
        assert!(g.is_clique(&set(&[])).unwrap());
        assert!(g.is_clique(&set(&[4])).unwrap());
        assert!(g.is_clique(&set(&[1, 2, 3])).unwrap());
        assert!(!g.is_clique(&set(&[1, 2, 4])).unwrap());
        assert!(g.is_clique(&set(&[9])).is_err());
        assert_eq!(g.clique_number(), 3);
    }

    #[test]
    fn complete_graph_is_clique() {
        let g = Graph::complete(6);
        assert!(g.is_clique(&(1..=6).collect()).unwrap());
        assert_eq!(g.clique_number(), 6);
        assert_eq!(Graph::empty(5).clique_number(), 1);
    }
}
