//! Proposer and Vetoer preferences and the distribution of Vetoer types.

mod distribution;
mod menu;
mod spec;
mod utility;

pub use distribution::{DistributionFamily, TypeDistribution};
pub use menu::{lottery_menu_welfare, vetoer_payoff, DelegationSet, Lottery, MenuOutcome};
pub use spec::{DistributionSpec, UtilitySpec};
pub use utility::{ProposerUtility, UtilityFamily, LQ_GUARD};
