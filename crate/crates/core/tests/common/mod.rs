#![allow(dead_code)]

use veto_delegation::model::{ProposerUtility, TypeDistribution};
use veto_delegation::oracle::{DiscreteInstance, GridSpec};

pub struct Case {
    pub name: &'static str,
    pub util: ProposerUtility<f64>,
    pub dist: TypeDistribution<f64>,
}

fn case(name: &'static str, gamma: f64, dist: TypeDistribution<f64>) -> Case {
    Case { name, util: ProposerUtility::lq(gamma).unwrap(), dist }
}

fn normal(mu: f64, sigma: f64) -> TypeDistribution<f64> {
    TypeDistribution::normal(mu, sigma).unwrap()
}

fn pwl(knots: &[(f64, f64)]) -> TypeDistribution<f64> {
    TypeDistribution::piecewise_linear(knots.to_vec()).unwrap()
}

/// Ten LQ instances covering decreasing, flat, interior-peaked and
/// increasing densities.
pub fn battery() -> Vec<Case> {
    vec![
        case("uniform-linear", 0.0, TypeDistribution::uniform01()),
        case("uniform-quadratic", 1.0, TypeDistribution::uniform01()),
        case("normal(-0.5,1)-linear", 0.0, normal(-0.5, 1.0)),
        case("normal(0.45,1)-linear", 0.0, normal(0.45, 1.0)),
        case("normal(0.45,1)-mixed", 0.5, normal(0.45, 1.0)),
        case("normal(1.5,0.5)-linear", 0.0, normal(1.5, 0.5)),
        case("normal(0.3,0.3)-mixed", 0.3, normal(0.3, 0.3)),
        case("normal(0.7,0.2)-mixed", 0.8, normal(0.7, 0.2)),
        case("pwl-decreasing", 0.2, pwl(&[(0.0, 2.0), (1.0, 1.0)])),
        case("pwl-increasing", 0.0, pwl(&[(0.0, 1.0), (1.0, 3.0)])),
    ]
}

/// The battery members whose density is logconcave on `[0, 1]`.
pub fn logconcave_battery() -> Vec<Case> {
    battery()
}

pub fn instance(c: &Case, actions: usize, types: usize) -> DiscreteInstance<f64> {
    DiscreteInstance::from_model(&c.util, &c.dist, &GridSpec::new(actions).with_types(types)).unwrap()
}

/// Two-piece linear density with its minimum at `0.6`.
pub fn single_dipped() -> TypeDistribution<f64> {
    pwl(&[(0.0, 2.0), (0.6, 0.2), (1.0, 2.0)])
}
