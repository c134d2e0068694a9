//! Brute-force ground truth on a discretised instance: exhaustive and
//! structured menu search, and the optimal stochastic mechanism by linear
//! programming.

mod e1;
mod instance;
mod lp;
mod search;
pub mod simplex;

pub use e1::{e1_lottery, example_e1_menu, E1Report};
pub use instance::{DiscreteInstance, GridSpec};
pub use lp::{
    best_stochastic_lp, best_stochastic_lp_with, stochastic_lp, Audit, IcConstraints, Mechanism, StochasticSolution,
    IC_TOL, LP_VARIABLE_LIMIT,
};
pub use search::{
    best_delegation_exhaustive, best_delegation_sampled, best_delegation_structured, best_interval_menu, MenuShape,
    MenuSolution, EXHAUSTIVE_LIMIT,
};
