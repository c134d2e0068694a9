use serde::Serialize;

use crate::error::{Error, Result};
use crate::oracle::simplex::{LinearProgram, Relation};
use crate::oracle::DiscreteInstance;
use crate::scalar::Field;

pub const LP_VARIABLE_LIMIT: usize = 20_000;
pub const IC_TOL: f64 = 1e-9;

/// Which incentive constraints enter the LP.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Default)]
pub enum IcConstraints {
    /// Both directions between neighbouring types. With Vetoer's
    /// single-crossing payoff these imply every pairwise constraint.
    #[default]
    Adjacent,
    AllPairs,
}

/// Per-type lottery over the action grid.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Mechanism<S> {
    pub actions: Vec<S>,
    pub types: Vec<S>,
    /// `rows[i][k]`: probability that type `i` gets action `k`.
    pub rows: Vec<Vec<S>>,
}

/// Post-hoc feasibility audit of a mechanism (all in `f64`).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Audit {
    pub max_row_error: f64,
    /// Largest gain any type gets from mimicking any other type.
    pub max_ic_violation: f64,
    /// Largest gain any type gets from the status quo.
    pub max_ir_violation: f64,
    /// Largest drop in expected action between consecutive types.
    pub max_monotonicity_violation: f64,
    pub min_probability: f64,
}

impl Audit {
    pub fn passes(&self, tol: f64) -> bool {
        self.max_row_error <= tol
            && self.max_ic_violation <= tol
            && self.max_ir_violation <= tol
            && self.max_monotonicity_violation <= tol
            && self.min_probability >= -tol
    }
}

impl<S: Field> Mechanism<S> {
    pub fn expected_action(&self, i: usize) -> S {
        self.rows[i].iter().zip(&self.actions).fold(S::zero(), |acc, (p, a)| acc + p.clone() * a.clone())
    }

    /// Type `i`'s payoff index from type `j`'s lottery.
    pub fn payoff(&self, i: usize, j: usize) -> S {
        let v = &self.types[i];
        let two = S::one() + S::one();
        self.rows[j]
            .iter()
            .zip(&self.actions)
            .fold(S::zero(), |acc, (p, a)| acc + p.clone() * (v.clone() * a.clone() - a.clone() * a.clone() / two.clone()))
    }

    pub fn audit(&self) -> Audit {
        let n = self.types.len();
        let f = |x: S| x.to_f64_lossy();
        let mut audit = Audit {
            max_row_error: 0.0,
            max_ic_violation: 0.0,
            max_ir_violation: 0.0,
            max_monotonicity_violation: 0.0,
            min_probability: f64::INFINITY,
        };
        let own: Vec<f64> = (0..n).map(|i| f(self.payoff(i, i))).collect();
        for i in 0..n {
            let sum = self.rows[i].iter().fold(S::zero(), |acc, p| acc + p.clone());
            audit.max_row_error = audit.max_row_error.max((f(sum) - 1.0).abs());
            for p in &self.rows[i] {
                audit.min_probability = audit.min_probability.min(f(p.clone()));
            }
            audit.max_ir_violation = audit.max_ir_violation.max(-own[i]);
            for j in 0..n {
                if j != i {
                    audit.max_ic_violation = audit.max_ic_violation.max(f(self.payoff(i, j)) - own[i]);
                }
            }
            if i + 1 < n {
                let drop = f(self.expected_action(i)) - f(self.expected_action(i + 1));
                audit.max_monotonicity_violation = audit.max_monotonicity_violation.max(drop);
            }
        }
        audit
    }
}

/// Optimal stochastic mechanism on a discrete instance.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StochasticSolution<S> {
    pub mechanism: Mechanism<S>,
    /// Proposer's expected utility, including types outside `[0, 1]`.
    pub value: S,
    pub duality_gap: S,
    pub iterations: usize,
    pub audit: Audit,
}

fn var(i: usize, k: usize, n_a: usize) -> usize {
    (i - 1) * n_a + k
}

/// The LP over lotteries `m(v_i)[a_k]`, `i >= 1`; type `v_0 = 0` is pinned to
/// the status quo. Returns the program and the constant objective term.
pub fn stochastic_lp<S: Field>(inst: &DiscreteInstance<S>, ic: IcConstraints) -> Result<(LinearProgram<S>, S)> {
    let n_a = inst.n_actions();
    let n_v = inst.n_types();
    if !inst.types[0].is_zero() {
        return Err(Error::BadInstance("the type grid must start at 0".into()));
    }
    let n_vars = n_a * (n_v - 1);
    if n_vars > LP_VARIABLE_LIMIT {
        return Err(Error::TooLarge { what: "LP variables", size: n_vars, limit: LP_VARIABLE_LIMIT });
    }
    let mut names = Vec::with_capacity(n_vars);
    let mut objective = Vec::with_capacity(n_vars);
    for i in 1..n_v {
        for k in 0..n_a {
            names.push(format!("m_{i}_{k}"));
            objective.push(inst.weights[i].clone() * inst.proposer_u[k].clone());
        }
    }
    let constant = inst.outside_value() + inst.weights[0].clone() * inst.u_zero.clone();
    let mut lp = LinearProgram::new(names, objective);
    for i in 1..n_v {
        let mut row = vec![S::zero(); n_vars];
        for k in 0..n_a {
            row[var(i, k, n_a)] = S::one();
        }
        lp.push(format!("sum_{i}"), row, Relation::Eq, S::one());
    }
    // type i must not gain from type j's lottery:
    // sum_k p_i(a_k) (m_j[k] - m_i[k]) <= 0, with m_0 = status quo (payoff 0)
    let mut ic_row = |i: usize, j: usize| {
        let mut row = vec![S::zero(); n_vars];
        for k in 0..n_a {
            let p = inst.payoff(i, k);
            if j > 0 {
                row[var(j, k, n_a)] = row[var(j, k, n_a)].clone() + p.clone();
            }
            if i > 0 {
                row[var(i, k, n_a)] = row[var(i, k, n_a)].clone() - p;
            }
        }
        lp.push(format!("ic_{i}_{j}"), row, Relation::Le, S::zero());
    };
    match ic {
        IcConstraints::Adjacent => {
            for i in 0..n_v - 1 {
                ic_row(i, i + 1);
                ic_row(i + 1, i);
            }
        }
        IcConstraints::AllPairs => {
            for i in 0..n_v {
                for j in 0..n_v {
                    if i != j {
                        ic_row(i, j);
                    }
                }
            }
        }
    }
    Ok((lp, constant))
}

/// Solves the finite version of the stochastic mechanism-design problem and
/// audits the result against every pairwise IC and IR constraint.
pub fn best_stochastic_lp<S: Field>(inst: &DiscreteInstance<S>) -> Result<StochasticSolution<S>> {
    best_stochastic_lp_with(inst, IcConstraints::Adjacent)
}

pub fn best_stochastic_lp_with<S: Field>(inst: &DiscreteInstance<S>, ic: IcConstraints) -> Result<StochasticSolution<S>> {
    let (lp, constant) = stochastic_lp(inst, ic)?;
    let sol = lp.solve()?;
    let n_a = inst.n_actions();
    let mut rows = Vec::with_capacity(inst.n_types());
    let mut status_quo = vec![S::zero(); n_a];
    status_quo[inst.zero_index()] = S::one();
    rows.push(status_quo);
    for i in 1..inst.n_types() {
        rows.push((0..n_a).map(|k| sol.x[var(i, k, n_a)].clone()).collect());
    }
    let mechanism = Mechanism { actions: inst.actions.clone(), types: inst.types.clone(), rows };
    let audit = mechanism.audit();
    Ok(StochasticSolution {
        value: sol.objective.clone() + constant,
        duality_gap: sol.duality_gap(),
        iterations: sol.iterations,
        mechanism,
        audit,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{ProposerUtility, TypeDistribution};
    use crate::oracle::{best_delegation_exhaustive, GridSpec};
    use num_traits::Zero;

    #[test]
    fn lp_dominates_delegation_and_is_feasible() {
        let u = ProposerUtility::<f64>::lq(0.0).unwrap();
        let d = TypeDistribution::uniform01();
        let inst = DiscreteInstance::from_model(&u, &d, &GridSpec::new(11).with_types(11)).unwrap();
        let lp = best_stochastic_lp(&inst).unwrap();
        let det = best_delegation_exhaustive(&inst).unwrap();
        assert!(lp.value >= det.value - 1e-9);
        assert!(lp.audit.passes(IC_TOL), "{:?}", lp.audit);
        assert!(lp.duality_gap < 1e-9);
    }

    #[test]
    fn adjacent_and_all_pairs_agree() {
        let u = ProposerUtility::<f64>::lq(0.4).unwrap();
        let d = TypeDistribution::normal(0.6, 0.3).unwrap();
        let inst = DiscreteInstance::from_model(&u, &d, &GridSpec::new(6)).unwrap();
        let a = best_stochastic_lp_with(&inst, IcConstraints::Adjacent).unwrap();
        let b = best_stochastic_lp_with(&inst, IcConstraints::AllPairs).unwrap();
        assert!((a.value - b.value).abs() < 1e-10);
    }

    #[test]
    fn exact_arithmetic_matches_floating_point() {
        let u = ProposerUtility::lq(0.5).unwrap();
        let d = TypeDistribution::normal(0.3, 0.5).unwrap();
        let inst = DiscreteInstance::from_model(&u, &d, &GridSpec::new(5).with_types(6)).unwrap();
        let float = best_stochastic_lp(&inst).unwrap();
        let exact = best_stochastic_lp(&inst.to_exact().unwrap()).unwrap();
        assert!(exact.duality_gap.is_zero());
        assert!(exact.audit.passes(0.0) || exact.audit.passes(1e-15));
        assert!((exact.value.to_f64_lossy() - float.value).abs() < 1e-10);
    }

    #[test]
    fn lp_text_has_one_line_per_constraint() {
        let inst = DiscreteInstance::from_model(
            &ProposerUtility::<f64>::linear(),
            &TypeDistribution::uniform01(),
            &GridSpec::new(3),
        )
        .unwrap();
        let (lp, _) = stochastic_lp(&inst, IcConstraints::Adjacent).unwrap();
        let text = lp.to_text();
        assert_eq!(text.lines().filter(|l| l.starts_with(" sum_") || l.starts_with(" ic_")).count(), lp.constraints.len());
    }
}
