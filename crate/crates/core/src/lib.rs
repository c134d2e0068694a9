//! Optimal delegation in veto bargaining.
//!
//! A Proposer offers a menu of actions; a Vetoer with privately known ideal
//! point picks from the menu or keeps the status quo `0`. The crate checks the
//! optimality conditions for full delegation, no compromise and interval
//! delegation, solves for optimal interval thresholds and cheap-talk
//! equilibria, and cross-validates everything against a discretised
//! mechanism-design oracle (exhaustive menu search and a simplex LP).

pub mod cheap_talk;
pub mod cli;
pub mod conditions;
pub mod error;
pub mod interval;
pub mod model;
pub mod numeric;
pub mod oracle;
pub mod scalar;

pub use error::{Error, Result};
pub use scalar::{Field, Real};

pub type Utility = model::ProposerUtility<f64>;
pub type Distribution = model::TypeDistribution<f64>;
pub type Menu = model::DelegationSet<f64>;
