//! Games, mixed strategies, sparse mixtures and joint distributions.

use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{self, Q};

/// Name of a pure action.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ActionLabel {
    /// Graph node (1-based).
    Node(usize),
    /// Auxiliary action paired with a node or a row of the spike matrix (1-based).
    Aux(usize),
    /// The opt-out action of the augmented gadgets.
    Opt,
    /// Anything else, e.g. actions of games read from disk.
    Plain(usize),
}

impl fmt::Display for ActionLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ActionLabel::Node(i) => write!(f, "{i}"),
            ActionLabel::Aux(i) => write!(f, "aux{i}"),
            ActionLabel::Opt => write!(f, "O"),
            ActionLabel::Plain(i) => write!(f, "a{i}"),
        }
    }
}

impl std::str::FromStr for ActionLabel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Format(format!("bad action label {s:?}"));
        if s == "O" {
            Ok(ActionLabel::Opt)
        } else if let Some(rest) = s.strip_prefix("aux") {
            rest.parse().map(ActionLabel::Aux).map_err(|_| bad())
        } else if let Some(rest) = s.strip_prefix('a') {
            rest.parse().map(ActionLabel::Plain).map_err(|_| bad())
        } else {
            s.parse().map(ActionLabel::Node).map_err(|_| bad())
        }
    }
}

/// Square two-player game with exact rational payoffs.
#[derive(Debug, Clone, PartialEq)]
pub struct Game {
    r: Vec<Vec<Q>>,
    c: Vec<Vec<Q>>,
    row_labels: Vec<ActionLabel>,
    col_labels: Vec<ActionLabel>,
}

impl Game {
    pub fn new(r: Vec<Vec<Q>>, c: Vec<Vec<Q>>) -> Result<Self> {
        let m = r.len();
        let labels: Vec<ActionLabel> = (1..=m).map(ActionLabel::Plain).collect();
        Game::with_labels(r, c, labels.clone(), labels)
    }

    pub fn with_labels(
        r: Vec<Vec<Q>>,
        c: Vec<Vec<Q>>,
        row_labels: Vec<ActionLabel>,
        col_labels: Vec<ActionLabel>,
    ) -> Result<Self> {
        let m = r.len();
        if m == 0 {
            return Err(Error::Shape("game needs at least one action".into()));
        }
        if c.len() != m {
            return Err(Error::Shape(format!("R has {m} rows, C has {}", c.len())));
        }
        for (name, mat) in [("R", &r), ("C", &c)] {
            if let Some((i, row)) = mat.iter().enumerate().find(|(_, row)| row.len() != m) {
                return Err(Error::Shape(format!(
                    "{name} row {} has length {}, expected {m}",
                    i + 1,
                    row.len()
                )));
            }
        }
        if row_labels.len() != m || col_labels.len() != m {
            return Err(Error::Shape("label count differs from action count".into()));
        }
        Ok(Game {
            r,
            c,
            row_labels,
            col_labels,
        })
    }

    pub fn from_ints(r: &[&[i64]], c: &[&[i64]]) -> Result<Self> {
        let conv = |m: &[&[i64]]| -> Vec<Vec<Q>> {
            m.iter().map(|row| row.iter().map(|&v| rational::qi(v)).collect()).collect()
        };
        Game::new(conv(r), conv(c))
    }

    pub fn zero(m: usize) -> Self {
        Game::new(vec![vec![Q::zero(); m]; m], vec![vec![Q::zero(); m]; m]).expect("square")
    }

    pub fn m(&self) -> usize {
        self.r.len()
    }

    pub fn r(&self) -> &[Vec<Q>] {
        &self.r
    }

    pub fn c(&self) -> &[Vec<Q>] {
        &self.c
    }

    pub fn row_labels(&self) -> &[ActionLabel] {
        &self.row_labels
    }

    pub fn col_labels(&self) -> &[ActionLabel] {
        &self.col_labels
    }

    /// Number of leading `Node` actions, i.e. the size of the adjacency block.
    pub fn node_block(&self) -> usize {
        self.row_labels
            .iter()
            .take_while(|l| matches!(l, ActionLabel::Node(_)))
            .count()
    }

    pub fn scaled(&self, lambda: &Q) -> Game {
        let s = |m: &[Vec<Q>]| -> Vec<Vec<Q>> {
            m.iter().map(|row| row.iter().map(|v| v * lambda).collect()).collect()
        };
        Game {
            r: s(&self.r),
            c: s(&self.c),
            row_labels: self.row_labels.clone(),
            col_labels: self.col_labels.clone(),
        }
    }

    /// Removes the action at `idx` for both players.
    pub fn without_action(&self, idx: usize) -> Result<Game> {
        if idx >= self.m() || self.m() == 1 {
            return Err(Error::Shape(format!("cannot remove action {idx}")));
        }
        let cut = |m: &[Vec<Q>]| -> Vec<Vec<Q>> {
            m.iter()
                .enumerate()
                .filter(|(i, _)| *i != idx)
                .map(|(_, row)| {
                    row.iter()
                        .enumerate()
                        .filter(|(j, _)| *j != idx)
                        .map(|(_, v)| v.clone())
                        .collect()
                })
                .collect()
        };
        let drop = |l: &[ActionLabel]| -> Vec<ActionLabel> {
            l.iter()
                .enumerate()
                .filter(|(i, _)| *i != idx)
                .map(|(_, v)| v.clone())
                .collect()
        };
        Game::with_labels(
            cut(&self.r),
            cut(&self.c),
            drop(&self.row_labels),
            drop(&self.col_labels),
        )
    }

    pub fn r_f64(&self) -> Vec<Vec<f64>> {
        to_f64_matrix(&self.r)
    }

    pub fn c_f64(&self) -> Vec<Vec<f64>> {
        to_f64_matrix(&self.c)
    }

    pub fn is_symmetric(&self) -> bool {
        let m = self.m();
        (0..m).all(|i| (0..m).all(|j| self.r[i][j] == self.c[j][i]))
    }

    pub(crate) fn check_len(&self, what: &str, len: usize) -> Result<()> {
        if len != self.m() {
            Err(Error::Shape(format!(
                "{what} has length {len}, game has {} actions",
                self.m()
            )))
        } else {
            Ok(())
        }
    }
}

fn to_f64_matrix(m: &[Vec<Q>]) -> Vec<Vec<f64>> {
    m.iter().map(|row| row.iter().map(rational::to_f64).collect()).collect()
}

/// Probability vector over one player's actions.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MixedStrategy(Vec<Q>);

impl MixedStrategy {
    pub fn new(probs: Vec<Q>) -> Result<Self> {
        if probs.is_empty() {
            return Err(Error::Distribution("empty strategy".into()));
        }
        if probs.iter().any(|p| p.is_negative()) {
            return Err(Error::Distribution("negative probability".into()));
        }
        if !rational::sum(&probs).is_one() {
            return Err(Error::Distribution("probabilities do not sum to 1".into()));
        }
        Ok(MixedStrategy(probs))
    }

    pub fn pure(m: usize, i: usize) -> Self {
        let mut v = vec![Q::zero(); m];
        v[i] = Q::one();
        MixedStrategy(v)
    }

    pub fn uniform(m: usize) -> Self {
        MixedStrategy(vec![Q::new(1.into(), (m as i64).into()); m])
    }

    /// Uniform over the given 0-based indices, padded to length `m`.
    pub fn uniform_on(m: usize, support: &[usize]) -> Result<Self> {
        if support.is_empty() {
            return Err(Error::Distribution("empty support".into()));
        }
        let w = Q::new(1.into(), (support.len() as i64).into());
        let mut v = vec![Q::zero(); m];
        for &i in support {
            if i >= m {
                return Err(Error::Shape(format!("index {i} outside 0..{m}")));
            }
            v[i] = w.clone();
        }
        MixedStrategy::new(v)
    }

    pub fn probs(&self) -> &[Q] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn into_inner(self) -> Vec<Q> {
        self.0
    }
}

/// Weighted mixture of product distributions `sum_t w_t x_t (x) y_t`.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseMixture {
    weights: Vec<Q>,
    rows: Vec<MixedStrategy>,
    cols: Vec<MixedStrategy>,
    uniform: bool,
}

impl SparseMixture {
    pub fn new(weights: Vec<Q>, rows: Vec<MixedStrategy>, cols: Vec<MixedStrategy>) -> Result<Self> {
        let t = weights.len();
        if t == 0 {
            return Err(Error::Distribution("mixture needs at least one component".into()));
        }
        if rows.len() != t || cols.len() != t {
            return Err(Error::Shape(format!(
                "{t} weights, {} row strategies, {} column strategies",
                rows.len(),
                cols.len()
            )));
        }
        if weights.iter().any(|w| w.is_negative()) {
            return Err(Error::Distribution("negative mixture weight".into()));
        }
        if !rational::sum(&weights).is_one() {
            return Err(Error::Distribution("mixture weights do not sum to 1".into()));
        }
        let m = rows[0].len();
        if rows.iter().chain(cols.iter()).any(|s| s.len() != m) {
            return Err(Error::Shape("strategies of unequal length".into()));
        }
        let share = Q::new(1.into(), (t as i64).into());
        let uniform = weights.iter().all(|w| *w == share);
        Ok(SparseMixture {
            weights,
            rows,
            cols,
            uniform,
        })
    }

    pub fn uniform(rows: Vec<MixedStrategy>, cols: Vec<MixedStrategy>) -> Result<Self> {
        let t = rows.len().max(1) as i64;
        let w = vec![Q::new(1.into(), t.into()); rows.len()];
        SparseMixture::new(w, rows, cols)
    }

    pub fn product(x: MixedStrategy, y: MixedStrategy) -> Result<Self> {
        SparseMixture::new(vec![Q::one()], vec![x], vec![y])
    }

    pub fn sparsity(&self) -> usize {
        self.weights.len()
    }

    /// Strategy length (number of actions per player).
    pub fn m(&self) -> usize {
        self.rows[0].len()
    }

    pub fn weights(&self) -> &[Q] {
        &self.weights
    }

    pub fn rows(&self) -> &[MixedStrategy] {
        &self.rows
    }

    pub fn cols(&self) -> &[MixedStrategy] {
        &self.cols
    }

    pub fn is_uniform(&self) -> bool {
        self.uniform
    }

    /// Components with positive weight, as `(weight, x, y)`.
    pub fn active(&self) -> impl Iterator<Item = (&Q, &MixedStrategy, &MixedStrategy)> {
        self.weights
            .iter()
            .zip(self.rows.iter().zip(self.cols.iter()))
            .filter(|(w, _)| !w.is_zero())
            .map(|(w, (x, y))| (w, x, y))
    }

    /// Extends every strategy with `extra` zero-probability actions.
    pub fn padded(&self, extra: usize) -> SparseMixture {
        let pad = |s: &MixedStrategy| {
            let mut v = s.probs().to_vec();
            v.extend(std::iter::repeat(Q::zero()).take(extra));
            MixedStrategy(v)
        };
        SparseMixture {
            weights: self.weights.clone(),
            rows: self.rows.iter().map(pad).collect(),
            cols: self.cols.iter().map(pad).collect(),
            uniform: self.uniform,
        }
    }
}

/// Explicit correlated distribution over action pairs.
#[derive(Debug, Clone, PartialEq)]
pub struct JointDistribution(Vec<Vec<Q>>);

impl JointDistribution {
    pub fn new(probs: Vec<Vec<Q>>) -> Result<Self> {
        let m = probs.len();
        if m == 0 || probs.iter().any(|r| r.len() != m) {
            return Err(Error::Shape("joint distribution must be a non-empty square matrix".into()));
        }
        if probs.iter().flatten().any(|p| p.is_negative()) {
            return Err(Error::Distribution("negative joint probability".into()));
        }
        let total = probs.iter().flatten().fold(Q::zero(), |a, b| a + b);
        if !total.is_one() {
            return Err(Error::Distribution("joint probabilities do not sum to 1".into()));
        }
        Ok(JointDistribution(probs))
    }

    pub fn point(m: usize, i: usize, j: usize) -> Self {
        let mut p = vec![vec![Q::zero(); m]; m];
        p[i][j] = Q::one();
        JointDistribution(p)
    }

    pub fn probs(&self) -> &[Vec<Q>] {
        &self.0
    }

    pub fn m(&self) -> usize {
        self.0.len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    #[test]
    fn game_shape_errors() {
        let one = || vec![Q::one()];
        assert!(Game::new(vec![one(), vec![Q::one()]], vec![one(), one()]).is_err());
        assert!(Game::new(vec![one()], vec![one(), one()]).is_err());
        assert!(Game::new(vec![], vec![]).is_err());
    }

    #[test]
    fn strategy_validation() {
        assert!(MixedStrategy::new(vec![q(1, 2), q(1, 2)]).is_ok());
        assert!(MixedStrategy::new(vec![q(1, 2), q(1, 3)]).is_err());
        assert!(MixedStrategy::new(vec![q(3, 2), q(-1, 2)]).is_err());
    }

    #[test]
    fn mixture_flags_uniform() {
        let e = |i| MixedStrategy::pure(2, i);
        let mix = SparseMixture::uniform(vec![e(0), e(1)], vec![e(0), e(1)]).unwrap();
        assert!(mix.is_uniform());
        let skew = SparseMixture::new(vec![q(1, 3), q(2, 3)], vec![e(0), e(1)], vec![e(0), e(1)]).unwrap();
        assert!(!skew.is_uniform());
        assert!(SparseMixture::new(vec![q(1, 3)], vec![e(0)], vec![e(0)]).is_err());
        assert!(SparseMixture::new(vec![Q::one()], vec![e(0), e(1)], vec![e(0)]).is_err());
    }

    #[test]
    fn labels_round_trip() {
        for l in [ActionLabel::Node(3), ActionLabel::Aux(2), ActionLabel::Opt, ActionLabel::Plain(7)] {
            assert_eq!(l.to_string().parse::<ActionLabel>().unwrap(), l);
        }
    }
}
