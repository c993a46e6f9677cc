//! Dense two-phase primal simplex with Bland's rule.
//!
//! Generic over [`Scalar`]: with exact rationals every comparison is exact;
//! with `f64` values within the scalar tolerance count as zero.

use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Le,
    Eq,
    Ge,
}

/// `maximize c.x` subject to the rows and `x >= 0`.
#[derive(Debug, Clone)]
pub struct LinearProgram<S> {
    pub objective: Vec<S>,
    pub rows: Vec<(Vec<S>, Relation, S)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum LpStatus {
    Optimal,
    Infeasible,
    /// The objective is unbounded along some ray.
    UnboundedGuard,
    /// Iteration limit hit (only plausible in float mode).
    NotConverged,
}

#[derive(Debug, Clone)]
pub struct SimplexOutcome<S> {
    pub status: LpStatus,
    pub x: Vec<S>,
    pub value: S,
    pub iterations: usize,
}

struct Tableau<S> {
    t: Vec<Vec<S>>,
    obj: Vec<S>,
    basis: Vec<usize>,
    width: usize,
}

impl<S: Scalar> Tableau<S> {
    fn rhs(&self) -> usize {
        self.width
    }

    fn set_objective(&mut self, c: &[S]) {
        let mut obj: Vec<S> = (0..=self.width).map(|j| c.get(j).cloned().unwrap_or_else(S::zero)).collect();
        obj[self.width] = S::zero();
        for (r, &b) in self.basis.iter().enumerate() {
            let cb = c.get(b).cloned().unwrap_or_else(S::zero);
            if cb.is_zero() {
                continue;
            }
            for (o, v) in obj.iter_mut().zip(&self.t[r]) {
                if !v.is_zero() {
                    *o = o.clone() - cb.clone() * v.clone();
                }
            }
        }
        self.obj = obj;
    }

    fn value(&self) -> S {
        -self.obj[self.width].clone()
    }

    fn pivot(&mut self, row: usize, col: usize) {
        let p = self.t[row][col].clone();
        for v in self.t[row].iter_mut() {
            if !v.is_zero() {
                *v = v.clone() / p.clone();
            }
        }
        let prow = self.t[row].clone();
        let nz: Vec<usize> = (0..=self.width).filter(|&j| !prow[j].is_zero()).collect();
        for (r, trow) in self.t.iter_mut().enumerate() {
            if r == row || trow[col].is_zero() {
                continue;
            }
            let f = trow[col].clone();
            for &j in &nz {
                trow[j] = trow[j].clone() - f.clone() * prow[j].clone();
            }
            if !S::EXACT {
                trow[col] = S::zero();
            }
        }
        if !self.obj[col].is_zero() {
            let f = self.obj[col].clone();
            for &j in &nz {
                self.obj[j] = self.obj[j].clone() - f.clone() * prow[j].clone();
            }
            if !S::EXACT {
                self.obj[col] = S::zero();
            }
        }
        self.basis[row] = col;
    }

    /// Runs Bland-rule pivots over the allowed columns until optimal.
    fn optimize(&mut self, allowed: usize, budget: &mut usize, iterations: &mut usize) -> LpStatus {
        loop {
            let Some(col) = (0..allowed).find(|&j| self.obj[j].is_pos()) else {
                return LpStatus::Optimal;
            };
            if *budget == 0 {
                return LpStatus::NotConverged;
            }
            *budget -= 1;
            *iterations += 1;
            let rhs = self.rhs();
            let mut best: Option<(usize, S)> = None;
            for (r, row) in self.t.iter().enumerate() {
                if !row[col].is_pos() {
                    continue;
                }
                let ratio = row[rhs].clone() / row[col].clone();
                let better = match &best {
                    None => true,
                    Some((br, bv)) => {
                        let d = ratio.clone() - bv.clone();
                        d.is_neg() || (d.is_negligible() && self.basis[r] < self.basis[*br])
                    }
                };
                if better {
                    best = Some((r, ratio));
                }
            }
            match best {
                None => return LpStatus::UnboundedGuard,
                Some((r, _)) => self.pivot(r, col),
            }
        }
    }
}

pub fn solve<S: Scalar>(lp: &LinearProgram<S>, max_iterations: usize) -> SimplexOutcome<S> {
    let n = lp.objective.len();
    let rows: Vec<(Vec<S>, Relation, S)> = lp
        .rows
        .iter()
        .map(|(a, rel, b)| {
            if b.is_negative() {
                let flipped = match rel {
                    Relation::Le => Relation::Ge,
                    Relation::Ge => Relation::Le,
                    Relation::Eq => Relation::Eq,
                };
                (a.iter().map(|v| -v.clone()).collect(), flipped, -b.clone())
            } else {
                (a.clone(), *rel, b.clone())
            }
        })
        .collect();
    let n_slack = rows.iter().filter(|r| r.1 != Relation::Eq).count();
    let n_art = rows.iter().filter(|r| r.1 != Relation::Le).count();
    let art_start = n + n_slack;
    let width = art_start + n_art;
    let mut t = Vec::with_capacity(rows.len());
    let mut basis = Vec::with_capacity(rows.len());
    let (mut s, mut a) = (n, art_start);
    for (coef, rel, b) in rows {
        let mut row = vec![S::zero(); width + 1];
        for (j, v) in coef.into_iter().enumerate() {
            row[j] = v;
        }
        row[width] = b;
        match rel {
            Relation::Le => {
                row[s] = S::one();
                basis.push(s);
                s += 1;
            }
            Relation::Ge => {
                row[s] = -S::one();
                s += 1;
                row[a] = S::one();
                basis.push(a);
                a += 1;
            }
            Relation::Eq => {
                row[a] = S::one();
                basis.push(a);
                a += 1;
            }
        }
        t.push(row);
    }
    let mut tab = Tableau {
        t,
        obj: Vec::new(),
        basis,
        width,
    };
    let mut budget = max_iterations;
    let mut iterations = 0;
    let fail = |status, iterations| SimplexOutcome {
        status,
        x: vec![S::zero(); n],
        value: S::zero(),
        iterations,
    };

    if n_art > 0 {
        let phase1: Vec<S> = (0..width)
            .map(|j| if j >= art_start { -S::one() } else { S::zero() })
            .collect();
        tab.set_objective(&phase1);
        match tab.optimize(width, &mut budget, &mut iterations) {
            LpStatus::Optimal => {}
            other => return fail(other, iterations),
        }
        if tab.value().is_neg() {
            return fail(LpStatus::Infeasible, iterations);
        }
        // Drive zero-level artificials out of the basis; drop redundant rows.
        let mut r = 0;
        while r < tab.t.len() {
            if tab.basis[r] >= art_start {
                match (0..art_start).find(|&j| !tab.t[r][j].is_negligible()) {
                    Some(j) => tab.pivot(r, j),
                    None => {
                        tab.t.remove(r);
                        tab.basis.remove(r);
                        continue;
                    }
                }
            }
            r += 1;
        }
    }

    tab.set_objective(&lp.objective);
    let status = tab.optimize(art_start, &mut budget, &mut iterations);
    if status != LpStatus::Optimal {
        return fail(status, iterations);
    }
    let mut x = vec![S::zero(); n];
    for (r, &b) in tab.basis.iter().enumerate() {
        if b < n {
            x[b] = tab.t[r][width].clone();
        }
    }
    let value = tab.value();
    SimplexOutcome {
        status,
        x,
        value,
        iterations,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{qi, Q};

    fn lp(obj: &[i64], rows: &[(&[i64], Relation, i64)]) -> LinearProgram<Q> {
        LinearProgram {
            objective: obj.iter().map(|&v| qi(v)).collect(),
            rows: rows
                .iter()
                .map(|(a, r, b)| (a.iter().map(|&v| qi(v)).collect(), *r, qi(*b)))
                .collect(),
        }
    }

    #[test]
    fn textbook_maximum() {
        // max 3x + 5y, x <= 4, 2y <= 12, 3x + 2y <= 18 -> 36 at (2, 6)
        let p = lp(
            &[3, 5],
            &[(&[1, 0], Relation::Le, 4), (&[0, 2], Relation::Le, 12), (&[3, 2], Relation::Le, 18)],
        );
        let out = solve(&p, 1000);
        assert_eq!(out.status, LpStatus::Optimal);
        assert_eq!(out.value, qi(36));
        assert_eq!(out.x, vec![qi(2), qi(6)]);
    }

    #[test]
    fn equality_and_ge() {
        // max -x - y, x + y = 1, x >= 1/2 (as 2x >= 1) -> -1
        let mut p = lp(&[-1, -1], &[(&[1, 1], Relation::Eq, 1), (&[2, 0], Relation::Ge, 1)]);
        let out = solve(&p, 1000);
        assert_eq!(out.status, LpStatus::Optimal);
        assert_eq!(out.value, qi(-1));
        p.objective = vec![qi(1), qi(0)];
        let out = solve(&p, 1000);
        assert_eq!(out.value, qi(1));
        assert_eq!(out.x[0], qi(1));
    }

    #[test]
    fn infeasible_and_unbounded() {
        let p = lp(&[1], &[(&[1], Relation::Le, 1), (&[1], Relation::Ge, 2)]);
        assert_eq!(solve(&p, 1000).status, LpStatus::Infeasible);
        let p = lp(&[1, 0], &[(&[-1, 1], Relation::Le, 1)]);
        assert_eq!(solve(&p, 1000).status, LpStatus::UnboundedGuard);
    }

    #[test]
    fn float_mode_agrees() {
        let p = LinearProgram {
            objective: vec![3.0, 5.0],
            rows: vec![
                (vec![1.0, 0.0], Relation::Le, 4.0),
                (vec![0.0, 2.0], Relation::Le, 12.0),
                (vec![3.0, 2.0], Relation::Le, 18.0),
            ],
        };
        let out = solve(&p, 1000);
        assert!((out.value - 36.0).abs() < 1e-9);
    }

    #[test]
    fn redundant_equalities() {
        let p = lp(&[1, 1], &[(&[1, 1], Relation::Eq, 1), (&[2, 2], Relation::Eq, 2)]);
        let out = solve(&p, 1000);
        assert_eq!(out.status, LpStatus::Optimal);
        assert_eq!(out.value, qi(1));
    }
}
