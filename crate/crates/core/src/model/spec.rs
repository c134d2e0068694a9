//! JSON construction schema for utilities and distributions.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::model::{ProposerUtility, TypeDistribution};
use crate::scalar::Real;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case", deny_unknown_fields)]
pub enum UtilitySpec {
    Lq {
        gamma: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        scale: Option<f64>,
    },
    Tabulated {
        knots: Vec<(f64, f64)>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case", deny_unknown_fields)]
pub enum DistributionSpec {
    Normal { mu: f64, sigma: f64 },
    #[serde(alias = "uniform01")]
    Uniform,
    Pwl { knots: Vec<(f64, f64)> },
    TabulatedCdf { grid: Vec<(f64, f64)> },
    /// Linear density with a dip around 1/2 (see [`TypeDistribution::dipped_linear`]).
    Dipped { delta: f64, slope: f64 },
}

fn cast<T: Real>(pairs: &[(f64, f64)]) -> Vec<(T, T)> {
    pairs.iter().map(|&(a, b)| (T::lit(a), T::lit(b))).collect()
}

impl UtilitySpec {
    pub fn build<T: Real>(&self) -> Result<ProposerUtility<T>> {
        match self {
            UtilitySpec::Lq { gamma, scale } => {
                let u = ProposerUtility::lq(T::lit(*gamma))?;
                match scale {
                    Some(s) => u.scaled(T::lit(*s)),
                    None => Ok(u),
                }
            }
            UtilitySpec::Tabulated { knots } => ProposerUtility::tabulated(cast(knots)),
        }
    }
}

impl DistributionSpec {
    pub fn build<T: Real>(&self) -> Result<TypeDistribution<T>> {
        match self {
            DistributionSpec::Normal { mu, sigma } => TypeDistribution::normal(T::lit(*mu), T::lit(*sigma)),
            DistributionSpec::Uniform => Ok(TypeDistribution::uniform01()),
            DistributionSpec::Pwl { knots } => TypeDistribution::piecewise_linear(cast(knots)),
            DistributionSpec::TabulatedCdf { grid } => TypeDistribution::tabulated_cdf(cast(grid)),
            DistributionSpec::Dipped { delta, slope } => TypeDistribution::dipped_linear(T::lit(*delta), T::lit(*slope)),
        }
    }
}
