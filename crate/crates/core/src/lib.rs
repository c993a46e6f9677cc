//! Sparse coarse correlated equilibria in two-player games.
//!
//! Exact evaluators for welfare and equilibrium gaps, LP and no-regret
//! solvers, the graph-to-game gadgets of the max-clique reduction, the
//! reduction pipeline itself, and planted-clique tooling.

pub mod constructions;
pub mod error;
pub mod eval;
pub mod formats;
pub mod game;
pub mod graph;
pub mod planted;
pub mod rational;
pub mod reduction;
pub mod report;
pub mod rng;
pub mod scalar;
pub mod solvers;

pub use error::{Error, Result};
pub use eval::{cce_gap, ce_gap, GapReport};
pub use game::{ActionLabel, Game, JointDistribution, MixedStrategy, SparseMixture};
pub use graph::{Graph, NodeSet};
pub use rational::Q;
