use num_rational::BigRational;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{ProposerUtility, TypeDistribution};
use crate::scalar::{linspace, Field, Real};

/// Grid sizes for discretising a continuous model.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GridSpec {
    /// Number of evenly spaced actions on `[0, 1]`.
    pub actions: usize,
    /// Number of evenly spaced types on `[0, 1]`; defaults to
    /// `2 (actions - 1) + 1`, so type midpoints hit every action.
    pub types: Option<usize>,
    /// Extra actions (lottery tails below `0`, off-grid points).
    pub extra_actions: Vec<f64>,
}

impl GridSpec {
    pub fn new(actions: usize) -> Self {
        Self { actions, types: None, extra_actions: Vec::new() }
    }

    pub fn with_types(mut self, types: usize) -> Self {
        self.types = Some(types);
        self
    }

    pub fn with_extra_actions(mut self, extra: &[f64]) -> Self {
        self.extra_actions.extend_from_slice(extra);
        self
    }

    pub fn type_count(&self) -> usize {
        self.types.unwrap_or(2 * self.actions.saturating_sub(1) + 1)
    }
}

/// Finite version of the mechanism-design problem: a sorted action grid
/// containing `0` and `1`, a type grid on `[0, 1]` with cell masses, and
/// Proposer's utility on the action grid.
///
/// Types below `0` always get the status quo and types above `1` always get
/// action `1`; their contribution is the constant [`Self::outside_value`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiscreteInstance<S> {
    pub actions: Vec<S>,
    pub types: Vec<S>,
    pub weights: Vec<S>,
    pub proposer_u: Vec<S>,
    pub mass_below: S,
    pub mass_above: S,
    pub u_zero: S,
    pub u_one: S,
}

impl<S: Field> DiscreteInstance<S> {
    /// Validates and assembles an instance from raw parts.
    #[allow(clippy::too_many_arguments)]
    pub fn from_parts(
        actions: Vec<S>,
        types: Vec<S>,
        weights: Vec<S>,
        proposer_u: Vec<S>,
        mass_below: S,
        mass_above: S,
    ) -> Result<Self> {
        if actions.len() != proposer_u.len() || types.len() != weights.len() || types.is_empty() {
            return Err(Error::BadInstance("grid and value lengths differ".into()));
        }
        if actions.windows(2).any(|w| w[0] >= w[1]) || types.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::BadInstance("grids must be strictly increasing".into()));
        }
        let zero = actions.iter().position(|a| a.is_zero());
        let one = actions.iter().position(|a| a.is_one());
        let (Some(zero), Some(one)) = (zero, one) else {
            return Err(Error::BadInstance("action grid must contain 0 and 1".into()));
        };
        if actions.last() != Some(&actions[one]) {
            return Err(Error::BadInstance("actions above 1 are never useful".into()));
        }
        if types[0] < S::zero() || types[types.len() - 1] > S::one() {
            return Err(Error::BadInstance("types must lie in [0, 1]".into()));
        }
        if weights.iter().any(|w| w.is_negative()) || mass_below.is_negative() || mass_above.is_negative() {
            return Err(Error::BadInstance("masses must be nonnegative".into()));
        }
        let u_zero = proposer_u[zero].clone();
        let u_one = proposer_u[one].clone();
        Ok(Self { actions, types, weights, proposer_u, mass_below, mass_above, u_zero, u_one })
    }

    pub fn n_actions(&self) -> usize {
        self.actions.len()
    }

    pub fn n_types(&self) -> usize {
        self.types.len()
    }

    pub fn zero_index(&self) -> usize {
        self.actions.iter().position(|a| a.is_zero()).expect("validated")
    }

    pub fn one_index(&self) -> usize {
        self.actions.len() - 1
    }

    /// Indices of actions in `[0, 1]`.
    pub fn unit_actions(&self) -> Vec<usize> {
        (self.zero_index()..self.actions.len()).collect()
    }

    /// Contribution of types outside `[0, 1]`.
    pub fn outside_value(&self) -> S {
        self.mass_below.clone() * self.u_zero.clone() + self.mass_above.clone() * self.u_one.clone()
    }

    /// Vetoer payoff index `v a - a^2 / 2` of type `i` for action `k`.
    pub fn payoff(&self, i: usize, k: usize) -> S {
        let a = &self.actions[k];
        let two = S::one() + S::one();
        self.types[i].clone() * a.clone() - a.clone() * a.clone() / two
    }

    /// Action index chosen by each type from `menu` (sorted action indices)
    /// plus the status quo; ties go to the action Proposer prefers.
    pub fn induced_actions(&self, menu: &[usize]) -> Vec<usize> {
        let zero = self.zero_index();
        let mut full: Vec<usize> = Vec::with_capacity(menu.len() + 1);
        full.push(zero);
        full.extend(menu.iter().copied().filter(|&k| k != zero));
        full.sort_unstable();
        full.dedup();
        let tol = S::tolerance();
        let mut j = 0;
        let mut out = Vec::with_capacity(self.types.len());
        for i in 0..self.types.len() {
            while j + 1 < full.len() && self.payoff(i, full[j + 1]) - self.payoff(i, full[j]) > tol {
                j += 1;
            }
            let mut pick = full[j];
            if j + 1 < full.len() {
                let gap = self.payoff(i, full[j + 1]) - self.payoff(i, full[j]);
                if gap.abs() <= tol && self.proposer_u[full[j + 1]] > self.proposer_u[pick] {
                    pick = full[j + 1];
                }
            }
            if j > 0 {
                let gap = self.payoff(i, full[j - 1]) - self.payoff(i, full[j]);
                if gap.abs() <= tol && self.proposer_u[full[j - 1]] > self.proposer_u[pick] {
                    pick = full[j - 1];
                }
            }
            out.push(pick);
        }
        out
    }

    /// Proposer's expected utility from offering `menu`.
    pub fn menu_value(&self, menu: &[usize]) -> S {
        let induced = self.induced_actions(menu);
        induced
            .iter()
            .zip(&self.weights)
            .fold(self.outside_value(), |acc, (&k, w)| acc + w.clone() * self.proposer_u[k].clone())
    }
}

impl<T: Real + Field> DiscreteInstance<T> {
    /// Builds an instance from a utility and a CDF given as closures.
    pub fn from_fns(
        actions: Vec<T>,
        types: Vec<T>,
        u: impl Fn(T) -> Result<T>,
        cdf: impl Fn(T) -> T,
    ) -> Result<Self> {
        let n = types.len();
        let half = T::lit(0.5);
        let mut cuts = Vec::with_capacity(n + 1);
        cuts.push(T::lit(0.0));
        cuts.extend(types.windows(2).map(|w| (w[0] + w[1]) * half));
        cuts.push(T::lit(1.0));
        let fc: Vec<T> = cuts.iter().map(|&c| cdf(c)).collect();
        let weights = fc.windows(2).map(|w| w[1] - w[0]).collect();
        let proposer_u = actions.iter().map(|&a| u(a)).collect::<Result<Vec<T>>>()?;
        DiscreteInstance::from_parts(actions, types, weights, proposer_u, fc[0], num_traits::Float::max(T::lit(1.0) - fc[n], T::lit(0.0)))
    }

    /// Discretises a continuous model: `spec.actions` evenly spaced actions on
    /// `[0, 1]` plus any extra actions, and evenly spaced types with
    /// midpoint-split cell masses.
    pub fn from_model(util: &ProposerUtility<T>, dist: &TypeDistribution<T>, spec: &GridSpec) -> Result<Self> {
        if spec.actions < 2 || spec.type_count() < 2 {
            return Err(Error::BadInstance("need at least two actions and two types".into()));
        }
        let mut actions = linspace(T::lit(0.0), T::lit(1.0), spec.actions);
        for &x in &spec.extra_actions {
            if !(x <= 1.0) || !x.is_finite() {
                return Err(Error::BadInstance(format!("extra action {x} must be finite and at most 1")));
            }
            actions.push(T::lit(x));
        }
        actions.sort_by(|a, b| a.partial_cmp(b).unwrap());
        actions.dedup_by(|a, b| num_traits::Float::abs(*a - *b) <= T::epsilon() * T::lit(4.0));
        let types = linspace(T::lit(0.0), T::lit(1.0), spec.type_count());
        Self::from_fns(actions, types, |a| util.u(a), |v| dist.cdf(v))
    }
}

impl DiscreteInstance<f64> {
    /// Exact rational copy (every double is a dyadic rational).
    pub fn to_exact(&self) -> Result<DiscreteInstance<BigRational>> {
        let conv = |xs: &[f64]| -> Result<Vec<BigRational>> {
            xs.iter()
                .map(|&x| BigRational::from_f64_exact(x).ok_or_else(|| Error::BadInstance(format!("non-finite value {x}"))))
                .collect()
        };
        let one = |x: f64| BigRational::from_f64_exact(x).ok_or_else(|| Error::BadInstance(format!("non-finite value {x}")));
        DiscreteInstance::from_parts(
            conv(&self.actions)?,
            conv(&self.types)?,
            conv(&self.weights)?,
            conv(&self.proposer_u)?,
            one(self.mass_below)?,
            one(self.mass_above)?,
        )
    }
}
