//! Dense two-phase tableau simplex over an ordered field.
//!
//! Entering variables follow Dantzig's rule (most negative reduced cost,
//! lowest index on ties). After a run of degenerate pivots the solver switches
//! to Bland's rule until the objective moves again, which rules out cycling.
//! With an exact field (`BigRational`) every reported quantity is exact.
//!
//! In floating point the leaving row is picked by a two-pass (Harris) ratio
//! test that prefers large pivots, and the tableau is periodically rebuilt
//! from the original rows and the current basis to stop rounding drift.

use std::fmt::Write as _;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::Field;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Relation {
    Le,
    Eq,
    Ge,
}

impl Relation {
    fn symbol(self) -> &'static str {
        match self {
            Relation::Le => "<=",
            Relation::Eq => "=",
            Relation::Ge => ">=",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Constraint<S> {
    pub name: String,
    pub coeffs: Vec<S>,
    pub relation: Relation,
    pub rhs: S,
}

/// `maximize c·x subject to rows, x >= 0`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LinearProgram<S> {
    pub names: Vec<String>,
    pub objective: Vec<S>,
    pub constraints: Vec<Constraint<S>>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LpSolution<S> {
    pub x: Vec<S>,
    pub objective: S,
    /// One dual value per constraint (sign convention of the maximisation
    /// dual: `>= 0` for `<=` rows, `<= 0` for `>=` rows, free for `=` rows).
    pub duals: Vec<S>,
    pub dual_objective: S,
    pub iterations: usize,
}

impl<S: Field> LpSolution<S> {
    pub fn duality_gap(&self) -> S {
        (self.dual_objective.clone() - self.objective.clone()).abs()
    }
}

impl<S: Field> LinearProgram<S> {
    pub fn new(names: Vec<String>, objective: Vec<S>) -> Self {
        Self { names, objective, constraints: Vec::new() }
    }

    pub fn n_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn push(&mut self, name: impl Into<String>, coeffs: Vec<S>, relation: Relation, rhs: S) {
        debug_assert_eq!(coeffs.len(), self.n_vars());
        self.constraints.push(Constraint { name: name.into(), coeffs, relation, rhs });
    }

    /// Plain-text dump in an LP-file-like layout, one constraint per line and
    /// zero coefficients omitted.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let term = |out: &mut String, c: &S, name: &str| {
            if !c.is_zero() {
                let sign = if c.is_negative() { "-" } else { "+" };
                let _ = write!(out, " {sign} {} {name}", c.abs());
            }
        };
        out.push_str("maximize\n obj:");
        for (c, n) in self.objective.iter().zip(&self.names) {
            term(&mut out, c, n);
        }
        out.push_str("\nsubject to\n");
        for row in &self.constraints {
            let _ = write!(out, " {}:", row.name);
            for (c, n) in row.coeffs.iter().zip(&self.names) {
                term(&mut out, c, n);
            }
            let _ = writeln!(out, " {} {}", row.relation.symbol(), row.rhs);
        }
        out.push_str("bounds\n all variables >= 0\nend\n");
        out
    }

    pub fn solve(&self) -> Result<LpSolution<S>> {
        Tableau::build(self).run(self)
    }
}

const DEGENERATE_RUN: usize = 50;
const REINVERT_EVERY: usize = 40;

struct Tableau<S> {
    /// `m` rows of `width + 1` entries (last entry is the right-hand side).
    rows: Vec<Vec<S>>,
    /// The rows as built, for rebuilding the tableau from a basis.
    original: Vec<Vec<S>>,
    basis: Vec<usize>,
    n: usize,
    /// Column of the slack, surplus or artificial attached to each row.
    row_col: Vec<usize>,
    /// Sign applied to each original row to make its right-hand side
    /// nonnegative.
    flipped: Vec<bool>,
    relations: Vec<Relation>,
    artificial_start: usize,
    width: usize,
    iterations: usize,
}

impl<S: Field> Tableau<S> {
    fn build(lp: &LinearProgram<S>) -> Self {
        let n = lp.n_vars();
        let m = lp.constraints.len();
        let mut flipped = Vec::with_capacity(m);
        let mut relations = Vec::with_capacity(m);
        for c in &lp.constraints {
            let flip = c.rhs.is_negative();
            flipped.push(flip);
            relations.push(match (c.relation, flip) {
                (Relation::Le, true) => Relation::Ge,
                (Relation::Ge, true) => Relation::Le,
                (r, _) => r,
            });
        }
        let n_slack = relations.iter().filter(|r| **r != Relation::Eq).count();
        let n_art = relations.iter().filter(|r| **r != Relation::Le).count();
        let artificial_start = n + n_slack;
        let width = artificial_start + n_art;
        let mut rows = Vec::with_capacity(m);
        let mut basis = Vec::with_capacity(m);
        let mut row_col = Vec::with_capacity(m);
        let (mut next_slack, mut next_art) = (n, artificial_start);
        for (i, c) in lp.constraints.iter().enumerate() {
            let mut row = vec![S::zero(); width + 1];
            for (j, a) in c.coeffs.iter().enumerate() {
                row[j] = if flipped[i] { -a.clone() } else { a.clone() };
            }
            row[width] = if flipped[i] { -c.rhs.clone() } else { c.rhs.clone() };
            match relations[i] {
                Relation::Le => {
                    row[next_slack] = S::one();
                    basis.push(next_slack);
                    row_col.push(next_slack);
                    next_slack += 1;
                }
                Relation::Ge => {
                    row[next_slack] = -S::one();
                    row[next_art] = S::one();
                    basis.push(next_art);
                    row_col.push(next_slack);
                    next_slack += 1;
                    next_art += 1;
                }
                Relation::Eq => {
                    row[next_art] = S::one();
                    basis.push(next_art);
                    row_col.push(next_art);
                    next_art += 1;
                }
            }
            rows.push(row);
        }
        Self {
            original: rows.clone(),
            rows,
            basis,
            n,
            row_col,
            flipped,
            relations,
            artificial_start,
            width,
            iterations: 0,
        }
    }

    /// Recomputes `B^-1 [A | b]` for the current basis by Gauss-Jordan
    /// elimination with partial pivoting. Leaves the tableau untouched if the
    /// basis matrix is numerically singular.
    fn reinvert(&mut self) -> bool {
        let m = self.rows.len();
        let w = self.width + 1;
        // [B | A b]
        let mut aug: Vec<Vec<S>> = (0..m)
            .map(|i| {
                let mut r: Vec<S> = self.basis.iter().map(|&b| self.original[i][b].clone()).collect();
                r.extend(self.original[i].iter().cloned());
                r
            })
            .collect();
        let eps = S::tolerance();
        for k in 0..m {
            let p = (k..m).max_by(|&a, &b| aug[a][k].abs().partial_cmp(&aug[b][k].abs()).unwrap()).unwrap();
            if aug[p][k].abs() <= eps {
                return false;
            }
            aug.swap(k, p);
            let piv = aug[k][k].clone();
            for v in aug[k].iter_mut() {
                *v = v.clone() / piv.clone();
            }
            let pivot_row = aug[k].clone();
            for (i, r) in aug.iter_mut().enumerate() {
                if i == k || r[k].is_zero() {
                    continue;
                }
                let f = r[k].clone();
                for (v, pv) in r.iter_mut().zip(&pivot_row) {
                    if !pv.is_zero() {
                        *v = v.clone() - f.clone() * pv.clone();
                    }
                }
            }
        }
        for (i, r) in aug.into_iter().enumerate() {
            let mut row: Vec<S> = r.into_iter().skip(m).collect();
            debug_assert_eq!(row.len(), w);
            // exact unit columns for the basis, nonnegative right-hand side
            for (k, &b) in self.basis.iter().enumerate() {
                row[b] = if k == i { S::one() } else { S::zero() };
            }
            if row[w - 1].is_negative() {
                row[w - 1] = S::zero();
            }
            self.rows[i] = row;
        }
        true
    }

    /// Reduced costs `c_B B^-1 A_j - c_j` for the cost vector `cost`.
    fn reduced_costs(&self, cost: &[S]) -> Vec<S> {
        let mut r: Vec<S> = cost.iter().map(|c| -c.clone()).collect();
        for (i, &b) in self.basis.iter().enumerate() {
            let cb = &cost[b];
            if cb.is_zero() {
                continue;
            }
            for (j, rj) in r.iter_mut().enumerate() {
                let t = &self.rows[i][j];
                if !t.is_zero() {
                    *rj = rj.clone() + cb.clone() * t.clone();
                }
            }
        }
        r
    }

    fn pivot(&mut self, row: usize, col: usize, reduced: &mut [S]) {
        let p = self.rows[row][col].clone();
        for v in self.rows[row].iter_mut() {
            if !v.is_zero() {
                *v = v.clone() / p.clone();
            }
        }
        let pivot_row = self.rows[row].clone();
        for (i, r) in self.rows.iter_mut().enumerate() {
            if i == row {
                continue;
            }
            let factor = r[col].clone();
            if factor.is_zero() {
                continue;
            }
            for (v, pv) in r.iter_mut().zip(&pivot_row) {
                if !pv.is_zero() {
                    *v = v.clone() - factor.clone() * pv.clone();
                }
            }
            r[col] = S::zero();
        }
        let factor = reduced[col].clone();
        if !factor.is_zero() {
            for (v, pv) in reduced.iter_mut().zip(&pivot_row) {
                if !pv.is_zero() {
                    *v = v.clone() - factor.clone() * pv.clone();
                }
            }
            reduced[col] = S::zero();
        }
        self.basis[row] = col;
        self.iterations += 1;
    }

    /// Optimises `cost` over columns `< allowed`; `reduced` holds the
    /// current reduced costs.
    fn optimise(&mut self, cost: &[S], reduced: &mut Vec<S>, allowed: usize, limit: usize) -> Result<()> {
        let exact = S::is_exact();
        let tol = S::tolerance();
        let hundred = S::from_f64_exact(100.0).unwrap_or_else(S::one);
        let ten = S::from_f64_exact(10.0).unwrap_or_else(S::one);
        let pivot_tol = tol.clone() * hundred;
        let feas_tol = tol.clone() * ten;
        let neg_tol = -tol.clone();
        let mut degenerate = 0usize;
        let mut since_reinvert = 0usize;
        loop {
            if self.iterations >= limit {
                return Err(Error::IterationLimit(limit));
            }
            if !exact && since_reinvert >= REINVERT_EVERY {
                if self.reinvert() {
                    *reduced = self.reduced_costs(cost);
                }
                since_reinvert = 0;
            }
            let bland = degenerate >= DEGENERATE_RUN;
            let mut enter: Option<usize> = None;
            for j in 0..allowed {
                if reduced[j] < neg_tol {
                    match enter {
                        None => {
                            enter = Some(j);
                            if bland {
                                break;
                            }
                        }
                        Some(e) if reduced[j] < reduced[e] => enter = Some(j),
                        _ => {}
                    }
                }
            }
            let Some(col) = enter else {
                // confirm optimality on a freshly rebuilt tableau
                if !exact && since_reinvert > 0 && self.reinvert() {
                    *reduced = self.reduced_costs(cost);
                    since_reinvert = 0;
                    if (0..allowed).any(|j| reduced[j] < neg_tol) {
                        continue;
                    }
                }
                return Ok(());
            };
            let rhs = self.width;
            // pass 1: largest step keeping every basic variable above -feas_tol
            let mut theta_max: Option<S> = None;
            for r in &self.rows {
                let a = &r[col];
                if *a > pivot_tol {
                    let bound = (r[rhs].clone() + feas_tol.clone()) / a.clone();
                    if theta_max.as_ref().is_none_or(|t| bound < *t) {
                        theta_max = Some(bound);
                    }
                }
            }
            let Some(theta_max) = theta_max else { return Err(Error::Unbounded) };
            // pass 2: among rows within that step, the largest pivot (Bland:
            // the smallest basic index among minimum ratios)
            let mut leave: Option<(usize, S)> = None;
            for (i, r) in self.rows.iter().enumerate() {
                let a = &r[col];
                if *a <= pivot_tol {
                    continue;
                }
                let ratio = r[rhs].clone() / a.clone();
                if ratio > theta_max {
                    continue;
                }
                leave = match leave {
                    None => Some((i, ratio)),
                    Some((k, best)) => {
                        let better = if bland || exact {
                            ratio < best || (ratio == best && self.basis[i] < self.basis[k])
                        } else {
                            *a > self.rows[k][col]
                        };
                        if better {
                            Some((i, ratio))
                        } else {
                            Some((k, best))
                        }
                    }
                };
            }
            let (row, ratio) = leave.expect("theta_max comes from an eligible row");
            if ratio <= tol {
                degenerate += 1;
            } else {
                degenerate = 0;
            }
            self.pivot(row, col, reduced);
            if !exact {
                for r in self.rows.iter_mut() {
                    if r[rhs].is_negative() {
                        r[rhs] = S::zero();
                    }
                }
            }
            since_reinvert += 1;
        }
    }

    fn run(mut self, lp: &LinearProgram<S>) -> Result<LpSolution<S>> {
        let m = self.rows.len();
        let limit = 50 * (m + self.width) + 1000;
        let tol = S::tolerance();
        // Phase 1: maximise minus the sum of artificials.
        if self.artificial_start < self.width {
            let mut cost = vec![S::zero(); self.width + 1];
            for c in cost[self.artificial_start..self.width].iter_mut() {
                *c = -S::one();
            }
            let mut reduced = self.reduced_costs(&cost);
            self.optimise(&cost, &mut reduced, self.width, limit)?;
            let infeasibility: S = self
                .basis
                .iter()
                .enumerate()
                .filter(|(_, &b)| b >= self.artificial_start)
                .fold(S::zero(), |acc, (i, _)| acc + self.rows[i][self.width].clone());
            if infeasibility > tol.clone() * S::from_f64_exact(1e3).unwrap_or_else(S::one) {
                return Err(Error::Infeasible);
            }
            // Drive zero-level artificials out of the basis where possible.
            for i in 0..m {
                if self.basis[i] < self.artificial_start {
                    continue;
                }
                if let Some(col) = (0..self.artificial_start).find(|&j| self.rows[i][j].abs() > tol) {
                    let mut scratch = vec![S::zero(); self.width + 1];
                    self.pivot(i, col, &mut scratch);
                }
            }
        }
        // Phase 2.
        let mut cost = vec![S::zero(); self.width + 1];
        for (c, o) in cost.iter_mut().zip(&lp.objective) {
            *c = o.clone();
        }
        let mut reduced = self.reduced_costs(&cost);
        self.optimise(&cost, &mut reduced, self.artificial_start, limit)?;

        let mut x = vec![S::zero(); self.n];
        for (i, &b) in self.basis.iter().enumerate() {
            if b < self.n {
                x[b] = self.rows[i][self.width].clone();
            }
        }
        let objective = x.iter().zip(&lp.objective).fold(S::zero(), |acc, (xi, c)| acc + xi.clone() * c.clone());
        let duals: Vec<S> = (0..m)
            .map(|i| {
                let r = reduced[self.row_col[i]].clone();
                // surplus columns carry -e_i
                let y = if self.relations[i] == Relation::Ge { -r } else { r };
                if self.flipped[i] {
                    -y
                } else {
                    y
                }
            })
            .collect();
        let dual_objective =
            duals.iter().zip(&lp.constraints).fold(S::zero(), |acc, (y, c)| acc + y.clone() * c.rhs.clone());
        Ok(LpSolution { x, objective, duals, dual_objective, iterations: self.iterations })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    fn names(n: usize) -> Vec<String> {
        (0..n).map(|i| format!("x{i}")).collect()
    }

    #[test]
    fn textbook_problem() {
        // max 3x + 5y s.t. x <= 4, 2y <= 12, 3x + 2y <= 18 -> (2, 6), 36
        let mut lp = LinearProgram::<f64>::new(names(2), vec![3.0, 5.0]);
        lp.push("a", vec![1.0, 0.0], Relation::Le, 4.0);
        lp.push("b", vec![0.0, 2.0], Relation::Le, 12.0);
        lp.push("c", vec![3.0, 2.0], Relation::Le, 18.0);
        let s = lp.solve().unwrap();
        assert!((s.objective - 36.0).abs() < 1e-12);
        assert!((s.x[0] - 2.0).abs() < 1e-12 && (s.x[1] - 6.0).abs() < 1e-12);
        assert!(s.duality_gap() < 1e-12);
        assert!((s.duals[1] - 1.5).abs() < 1e-12 && (s.duals[2] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn equalities_and_ge_rows_in_exact_arithmetic() {
        let q = |n: i64, d: i64| BigRational::new(n.into(), d.into());
        // max x - y s.t. x + y = 1, x >= 1/3, y >= 1/4 -> x = 3/4
        let mut lp = LinearProgram::new(names(2), vec![q(1, 1), q(-1, 1)]);
        lp.push("sum", vec![q(1, 1), q(1, 1)], Relation::Eq, q(1, 1));
        lp.push("xlo", vec![q(1, 1), q(0, 1)], Relation::Ge, q(1, 3));
        lp.push("ylo", vec![q(0, 1), q(1, 1)], Relation::Ge, q(1, 4));
        let s = lp.solve().unwrap();
        assert_eq!(s.x, vec![q(3, 4), q(1, 4)]);
        assert_eq!(s.objective, q(1, 2));
        assert_eq!(s.duality_gap(), q(0, 1));
        assert!(s.duals[2] <= q(0, 1));
    }

    #[test]
    fn negative_rhs_is_normalised() {
        // max -x s.t. -x <= -2 -> x = 2
        let mut lp = LinearProgram::<f64>::new(names(1), vec![-1.0]);
        lp.push("lo", vec![-1.0], Relation::Le, -2.0);
        let s = lp.solve().unwrap();
        assert!((s.x[0] - 2.0).abs() < 1e-12);
        assert!(s.duality_gap() < 1e-12);
    }

    #[test]
    fn infeasible_and_unbounded() {
        let mut lp = LinearProgram::new(names(1), vec![1.0]);
        lp.push("hi", vec![1.0], Relation::Le, 1.0);
        lp.push("lo", vec![1.0], Relation::Ge, 2.0);
        assert_eq!(lp.solve(), Err(Error::Infeasible));
        let mut lp = LinearProgram::new(names(2), vec![1.0, 0.0]);
        lp.push("r", vec![-1.0, 1.0], Relation::Le, 1.0);
        assert_eq!(lp.solve(), Err(Error::Unbounded));
    }

    #[test]
    fn degenerate_problem_terminates() {
        // Beale's cycling example under the textbook rule.
        let q = |n: i64, d: i64| BigRational::new(n.into(), d.into());
        let mut lp = LinearProgram::new(names(4), vec![q(3, 4), q(-150, 1), q(1, 50), q(-6, 1)]);
        lp.push("a", vec![q(1, 4), q(-60, 1), q(-1, 25), q(9, 1)], Relation::Le, q(0, 1));
        lp.push("b", vec![q(1, 2), q(-90, 1), q(-1, 50), q(3, 1)], Relation::Le, q(0, 1));
        lp.push("c", vec![q(0, 1), q(0, 1), q(1, 1), q(0, 1)], Relation::Le, q(1, 1));
        let s = lp.solve().unwrap();
        assert_eq!(s.objective, q(1, 20));
        assert_eq!(s.duality_gap(), q(0, 1));
    }

    #[test]
    fn text_dump_lists_rows() {
        let mut lp = LinearProgram::new(names(2), vec![1.0, -2.0]);
        lp.push("r0", vec![1.0, 1.0], Relation::Eq, 1.0);
        let t = lp.to_text();
        assert!(t.contains("obj: + 1 x0 - 2 x1"));
        assert!(t.contains("r0: + 1 x0 + 1 x1 = 1"));
    }
}
