//! A density with a small dip around 1/2 under which a lottery beats every
//! deterministic menu.

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{lottery_menu_welfare, DelegationSet, Lottery, ProposerUtility, TypeDistribution};
use crate::scalar::Field;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct E1Report {
    pub delta: f64,
    pub slope: f64,
    /// Probability of the low atom, `1 / (2 - 4 delta)`.
    pub p: f64,
    /// Low atom `1 - 1/(2p) = 2 delta`.
    pub tail: f64,
    /// Welfare of `{lottery, 1}` minus welfare of `{1}`.
    pub gain: f64,
    /// Welfare of `{1}` minus welfare of `{1/2, 1}`.
    pub half_menu_loss: f64,
    /// Type `1/2 - delta`: payoff from the lottery minus payoff from `0`.
    pub residual_low: f64,
    /// Type `1/2 + delta`: payoff from the lottery minus payoff from `1`.
    pub residual_high: f64,
    /// Both indifference conditions hold exactly in rational arithmetic.
    pub exact_indifference: bool,
    /// Type intervals choosing the lottery under `{lottery, 1}`.
    pub lottery_region: (f64, f64),
}

/// `(p, tail)` of the lottery for a given `delta`.
pub fn e1_lottery(delta: f64) -> Result<(f64, f64)> {
    if !(delta > 0.0 && delta < 0.25) {
        return Err(Error::BadDelta(delta));
    }
    let p = 1.0 / (2.0 - 4.0 * delta);
    Ok((p, 1.0 - 1.0 / (2.0 * p)))
}

fn exact_residuals(delta: f64) -> Option<(BigRational, BigRational)> {
    let d = BigRational::from_f64_exact(delta)?;
    let one = BigRational::one();
    let two = &one + &one;
    let four = &two + &two;
    let half = &one / &two;
    let p = &one / (&two - &four * &d);
    let tail = &one - &one / (&two * &p);
    let mean = &p * &tail + (&one - &p);
    let second = &p * &tail * &tail + (&one - &p);
    let payoff = |v: &BigRational| v * &mean - &second / &two;
    let low = payoff(&(&half - &d));
    let high_v = &half + &d;
    let high = payoff(&high_v) - (&high_v - &half);
    Some((low, high))
}

/// Builds the lottery menu for the dipped density with parameters
/// `(delta, slope)` under linear loss and reports its gain over `{1}`.
pub fn example_e1_menu(delta: f64, slope: f64) -> Result<E1Report> {
    let (p, tail) = e1_lottery(delta)?;
    let dist = TypeDistribution::<f64>::dipped_linear(delta, slope)?;
    let util = ProposerUtility::<f64>::linear();
    let lottery = Lottery::new(vec![(tail, p), (1.0, 1.0 - p)])?;
    let with_lottery = lottery_menu_welfare(&util, &dist, &[lottery.clone(), Lottery::degenerate(1.0)])?;
    let only_one = lottery_menu_welfare(&util, &dist, &[Lottery::degenerate(1.0)])?;
    let half_menu = DelegationSet::points(&[0.5, 1.0]).welfare(&util, &dist)?;
    let lottery_region = with_lottery
        .regions
        .iter()
        .find(|r| r.0 == Some(0))
        .map(|r| (r.1, r.2))
        .unwrap_or((f64::NAN, f64::NAN));
    let (lo, hi) = (0.5 - delta, 0.5 + delta);
    let residual_low = lottery.vetoer_payoff(lo);
    let residual_high = lottery.vetoer_payoff(hi) - (hi - 0.5);
    let exact_indifference = exact_residuals(delta).is_some_and(|(a, b)| a.is_zero() && b.is_zero());
    Ok(E1Report {
        delta,
        slope,
        p,
        tail,
        gain: with_lottery.welfare - only_one.welfare,
        half_menu_loss: only_one.welfare - half_menu,
        residual_low,
        residual_high,
        exact_indifference,
        lottery_region,
    })
}
