//! Numeric backend shared by the exact and floating-point code paths.

use std::fmt::Debug;

use num_traits::{Num, Signed};

use crate::rational::{self, Q};

pub trait Scalar: Num + Signed + Clone + PartialOrd + Debug + Send + Sync {
    const EXACT: bool;

    /// Magnitude below which a value counts as zero.
    fn tolerance() -> Self;

    fn from_q(q: &Q) -> Self;

    fn to_f64(&self) -> f64;

    fn is_pos(&self) -> bool {
        *self > Self::tolerance()
    }

    fn is_neg(&self) -> bool {
        *self < -Self::tolerance()
    }

    fn is_negligible(&self) -> bool {
        !self.is_pos() && !self.is_neg()
    }
}

impl Scalar for Q {
    const EXACT: bool = true;

    fn tolerance() -> Self {
        num_traits::Zero::zero()
    }

    fn from_q(q: &Q) -> Self {
        q.clone()
    }

    fn to_f64(&self) -> f64 {
        rational::to_f64(self)
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn tolerance() -> Self {
        1e-9
    }

    fn from_q(q: &Q) -> Self {
        rational::to_f64(q)
    }

    fn to_f64(&self) -> f64 {
        *self
    }
}

pub fn convert_matrix<S: Scalar>(m: &[Vec<Q>]) -> Vec<Vec<S>> {
    m.iter().map(|row| row.iter().map(S::from_q).collect()).collect()
}
