//! Equilibrium solvers: LP over the CCE polytope, multiplicative weights,
//! and exhaustive search for tiny sparse instances.

pub mod bruteforce;
pub mod lp;
pub mod mwu;
pub mod simplex;

use serde::Serialize;

pub use bruteforce::{bruteforce_optimal_sparse_cce, BruteForceResult};
pub use lp::{lp_optimal_cce, lp_optimal_cce_with, LpObjective, LpSolution};
pub use mwu::{external_regret, mwu_run, mwu_run_float, DynamicsHistory};
pub use simplex::LpStatus;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Arithmetic {
    Exact,
    Float,
}

impl std::fmt::Display for Arithmetic {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Arithmetic::Exact => "exact",
            Arithmetic::Float => "float",
        })
    }
}

impl std::str::FromStr for Arithmetic {
    type Err = crate::error::Error;

    fn from_str(s: &str) -> crate::error::Result<Self> {
        match s {
            "exact" => Ok(Arithmetic::Exact),
            "float" => Ok(Arithmetic::Float),
            _ => Err(crate::error::Error::Parameter(format!("unknown arithmetic mode {s:?}"))),
        }
    }
}
