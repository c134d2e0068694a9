//! Two-message cheap-talk equilibria before Proposer's offer, and their
//! comparison with optimal interval delegation.

use serde::Serialize;

use crate::conditions::check_no_compromise;
use crate::error::{Error, Result};
use crate::interval::{solve_interval, welfare, welfare_foc};
use crate::model::{vetoer_payoff, DelegationSet, ProposerUtility, TypeDistribution};
use crate::numeric::bisect;
use crate::scalar::{linspace, Real};

pub const CHEAP_TALK_GRID: usize = 4001;
pub const DOWNCROSSING_MARGIN: f64 = 1e-12;
pub const TYPE_GRID: usize = 2001;
const ZERO_REL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheapTalkEquilibria<T> {
    /// Noninfluential proposals: Proposer ignores the message.
    #[serde(rename = "a_U")]
    pub a_u: Vec<T>,
    /// Low proposals of influential equilibria.
    #[serde(rename = "a_I")]
    pub a_i: Vec<T>,
    /// Type indifferent between the two proposals, `(1 + a_i) / 2`.
    #[serde(rename = "v_I")]
    pub v_i: Vec<T>,
}

/// Proposer's payoff from offering `a` to the prior:
/// `u(0) F(a/2) + u(a) (1 - F(a/2))`.
pub fn noninfluential_value<T: Real>(util: &ProposerUtility<T>, dist: &TypeDistribution<T>, a: T) -> T {
    let h = dist.cdf(a * T::lit(0.5));
    util.u_unit(T::zero()) * h + util.u_unit(a) * (T::one() - h)
}

fn noninfluential_terms<T: Real>(util: &ProposerUtility<T>, dist: &TypeDistribution<T>, a: T) -> (T, T) {
    let h = a * T::lit(0.5);
    (
        T::lit(2.0) * util.u_prime_unit(a) * (T::one() - dist.cdf(h)),
        dist.pdf(h) * (util.u_unit(a) - util.u_unit(T::zero())),
    )
}

/// `2u'(a)[1 - F(a/2)] - f(a/2)[u(a) - u(0)]`, twice the derivative of
/// [`noninfluential_value`].
pub fn noninfluential_foc<T: Real>(util: &ProposerUtility<T>, dist: &TypeDistribution<T>, a: T) -> T {
    let (g, l) = noninfluential_terms(util, dist, a);
    g - l
}

fn influential_terms<T: Real>(util: &ProposerUtility<T>, dist: &TypeDistribution<T>, a: T) -> (T, T) {
    let h = a * T::lit(0.5);
    let top = (T::one() + a) * T::lit(0.5);
    (
        T::lit(2.0) * util.u_prime_unit(a) * (dist.cdf(top) - dist.cdf(h)),
        dist.pdf(h) * (util.u_unit(a) - util.u_unit(T::zero())),
    )
}

/// `2u'(a)[F((1+a)/2) - F(a/2)] - f(a/2)[u(a) - u(0)]`; its zeros are the
/// candidate low proposals of influential equilibria.
pub fn influential_foc<T: Real>(util: &ProposerUtility<T>, dist: &TypeDistribution<T>, a: T) -> T {
    let (g, l) = influential_terms(util, dist, a);
    g - l
}

/// Roots of `g - l` on the open grid interval, treating values within
/// rounding of zero as zero. Runs of zeros are reported by their endpoints.
fn roots<T: Real>(terms: impl Fn(T) -> (T, T), xs: &[T]) -> Vec<T> {
    let sign = |x: T| {
        let (g, l) = terms(x);
        let d = g - l;
        if d.abs() <= T::tol_or_eps(ZERO_REL, 16.0) * (g.abs() + l.abs()) {
            0
        } else if d > T::zero() {
            1
        } else {
            -1
        }
    };
    let signs: Vec<i8> = xs.iter().map(|&x| sign(x)).collect();
    let xtol = T::tol_or_eps(1e-12, 4.0);
    let mut out = Vec::new();
    let mut i = 0;
    while i < xs.len() {
        if signs[i] == 0 {
            let s = i;
            while i + 1 < xs.len() && signs[i + 1] == 0 {
                i += 1;
            }
            out.push(xs[s]);
            if i > s {
                out.push(xs[i]);
            }
        } else if i + 1 < xs.len() && signs[i + 1] != 0 && signs[i] != signs[i + 1] {
            out.push(bisect(
                |x| {
                    let (g, l) = terms(x);
                    g - l
                },
                xs[i],
                xs[i + 1],
                xtol,
            ));
        }
        i += 1;
    }
    out
}

fn dedup<T: Real>(mut xs: Vec<T>, tol: T) -> Vec<T> {
    xs.sort_by(|a, b| a.partial_cmp(b).unwrap());
    xs.dedup_by(|a, b| (*a - *b).abs() <= tol);
    xs
}

/// Global maximisers of [`noninfluential_value`] over `(0, 1]`.
pub fn solve_noninfluential<T: Real>(util: &ProposerUtility<T>, dist: &TypeDistribution<T>) -> Vec<T> {
    solve_noninfluential_with_grid(util, dist, CHEAP_TALK_GRID)
}

pub fn solve_noninfluential_with_grid<T: Real>(util: &ProposerUtility<T>, dist: &TypeDistribution<T>, n: usize) -> Vec<T> {
    let xs = linspace(T::zero(), T::one(), n.max(3));
    let xs = &xs[1..];
    let value = |a: T| noninfluential_value(util, dist, a);
    let mut candidates = roots(|a| noninfluential_terms(util, dist, a), xs);
    candidates.push(T::one());
    let grid_best = xs.iter().copied().max_by(|a, b| value(*a).partial_cmp(&value(*b)).unwrap()).unwrap();
    candidates.push(grid_best);
    let best = candidates.iter().map(|&a| value(a)).fold(T::neg_infinity(), T::max);
    let eps = T::tol_or_eps(1e-9, 64.0) * (T::one() + best.abs());
    let keep: Vec<T> = candidates.into_iter().filter(|&a| value(a) >= best - eps).collect();
    // prefer refined roots over the raw grid point they bracket
    let step = T::one() / T::from_usize(n - 1).unwrap();
    let refined: Vec<T> = keep.iter().copied().filter(|&a| a != grid_best).collect();
    let mut out = refined.clone();
    if !refined.iter().any(|&a| (a - grid_best).abs() <= step) {
        out.push(grid_best);
    }
    dedup(out, T::tol_or_eps(1e-9, 64.0))
}

/// Proposer's payoff from offering `a` when types above `v_hi` have revealed
/// themselves: `u(0) F(a/2) + u(a) (F(v_hi) - F(a/2))` (unnormalised).
fn low_message_value<T: Real>(util: &ProposerUtility<T>, dist: &TypeDistribution<T>, a: T, v_hi: T) -> T {
    let h = dist.cdf(a * T::lit(0.5));
    util.u_unit(T::zero()) * h + util.u_unit(a) * (dist.cdf(v_hi) - h)
}

/// Whether `a` maximises Proposer's payoff against the posterior truncated
/// above `(1 + a)/2`, checked on an `n`-point grid of offers in `[0, 1]`.
pub fn is_low_best_response<T: Real>(util: &ProposerUtility<T>, dist: &TypeDistribution<T>, a: T, n: usize) -> bool {
    let v_hi = (T::one() + a) * T::lit(0.5);
    let own = low_message_value(util, dist, a, v_hi);
    let eps = T::tol_or_eps(1e-9, 64.0) * (T::one() + own.abs());
    linspace(T::zero(), T::one(), n).into_iter().all(|b| low_message_value(util, dist, b, v_hi) <= own + eps)
}

/// Low proposals `a` in `(0, 1)` that solve the influential first-order
/// condition and are best responses to the induced posterior.
pub fn solve_influential<T: Real>(util: &ProposerUtility<T>, dist: &TypeDistribution<T>) -> Vec<T> {
    solve_influential_with_grid(util, dist, CHEAP_TALK_GRID)
}

pub fn solve_influential_with_grid<T: Real>(util: &ProposerUtility<T>, dist: &TypeDistribution<T>, n: usize) -> Vec<T> {
    let xs = linspace(T::zero(), T::one(), n.max(3));
    let xs = &xs[1..xs.len() - 1];
    let found = roots(|a| influential_terms(util, dist, a), xs);
    let verified = found.into_iter().filter(|&a| is_low_best_response(util, dist, a, n)).collect();
    dedup(verified, T::tol_or_eps(1e-9, 64.0))
}

pub fn solve_cheap_talk<T: Real>(util: &ProposerUtility<T>, dist: &TypeDistribution<T>) -> CheapTalkEquilibria<T> {
    solve_cheap_talk_with_grid(util, dist, CHEAP_TALK_GRID)
}

pub fn solve_cheap_talk_with_grid<T: Real>(
    util: &ProposerUtility<T>,
    dist: &TypeDistribution<T>,
    n: usize,
) -> CheapTalkEquilibria<T> {
    let a_i = solve_influential_with_grid(util, dist, n);
    let v_i = a_i.iter().map(|&a| (T::one() + a) * T::lit(0.5)).collect();
    CheapTalkEquilibria { a_u: solve_noninfluential_with_grid(util, dist, n), a_i, v_i }
}

/// Action type `v` ends up with in the influential equilibrium with low
/// proposal `a`: types below `(1+a)/2` are offered `a`, the rest `1`.
pub fn influential_outcome<T: Real>(a: T, v: T) -> T {
    let v_i = (T::one() + a) * T::lit(0.5);
    if v >= v_i {
        T::one()
    } else if vetoer_payoff(v, a) >= T::zero() {
        a
    } else {
        T::zero()
    }
}

/// Whether `values` (ordered along their grid) are positive up to some
/// point and below `-margin` after it.
pub fn strictly_downcrossing<T: Real>(values: &[T], margin: T) -> bool {
    match values.iter().position(|&x| x <= T::zero()) {
        None => true,
        Some(k) => values[k + 1..].iter().all(|&x| x < -margin),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ParetoReport<T> {
    pub c_star: T,
    #[serde(rename = "a_I")]
    pub a_i: Vec<T>,
    #[serde(rename = "a_U")]
    pub a_u: Vec<T>,
    /// Interval welfare minus the best cheap-talk welfare for Proposer.
    pub proposer_gain: T,
    /// Smallest, over cheap-talk outcomes, probability mass of types in
    /// `[0, 1]` strictly better off under `[c_star, 1]`.
    pub vetoer_gain_measure: T,
    /// Largest loss any grid type suffers under `[c_star, 1]` relative to a
    /// cheap-talk outcome (nonpositive when delegation dominates).
    pub vetoer_worst_loss: T,
    pub interval_foc_downcrossing: bool,
    pub influential_foc_downcrossing: bool,
    /// Every optimal threshold lies below every cheap-talk proposal.
    pub ordering_holds: bool,
    pub vetoer_dominates: bool,
}

/// Compares optimal interval delegation with every cheap-talk equilibrium
/// outcome, for Proposer ex ante and for Vetoer type by type.
pub fn pareto_compare<T: Real>(util: &ProposerUtility<T>, dist: &TypeDistribution<T>) -> Result<ParetoReport<T>> {
    let interval = solve_interval(util, dist);
    let no_compromise_optimal = match check_no_compromise(util, dist) {
        Ok(r) => r.verdict,
        Err(Error::NotLq) => interval.contains(T::one(), T::zero()),
        Err(e) => return Err(e),
    };
    if no_compromise_optimal {
        return Err(Error::HypothesisFailed("no compromise is optimal".into()));
    }
    let xs = linspace(T::zero(), T::one(), CHEAP_TALK_GRID);
    let inner = &xs[1..];
    let margin = T::tol_or_eps(DOWNCROSSING_MARGIN, 4.0);
    let two = inner.iter().map(|&c| welfare_foc(util, dist, c)).collect::<Result<Vec<T>>>()?;
    let four: Vec<T> = inner[..inner.len() - 1].iter().map(|&a| influential_foc(util, dist, a)).collect();
    let interval_down = strictly_downcrossing(&two, margin);
    let influential_down = strictly_downcrossing(&four, margin);
    if !interval_down && !influential_down {
        return Err(Error::HypothesisFailed("neither first-order expression is strictly downcrossing".into()));
    }

    let eq = solve_cheap_talk(util, dist);
    let c_star = interval.c_lo();
    let c_top = interval.c_hi();
    let lowest = eq.a_i.iter().chain(&eq.a_u).copied().fold(T::infinity(), T::min);
    let ordering_holds = c_top < lowest;

    let w_interval = welfare(util, dist, c_star)?;
    let mut best_cheap = T::neg_infinity();
    for &a in &eq.a_u {
        best_cheap = best_cheap.max(noninfluential_value(util, dist, a));
    }
    for &a in &eq.a_i {
        best_cheap = best_cheap.max(DelegationSet::points(&[a, T::one()]).welfare(util, dist)?);
    }

    let menu = DelegationSet::interval(c_star, T::one());
    let types = linspace(T::zero(), T::one(), TYPE_GRID);
    let half = T::lit(0.5);
    let mut cell = Vec::with_capacity(types.len());
    for (k, _) in types.iter().enumerate() {
        let lo = if k == 0 { T::zero() } else { (types[k - 1] + types[k]) * half };
        let hi = if k + 1 == types.len() { T::one() } else { (types[k] + types[k + 1]) * half };
        cell.push(dist.cdf(hi) - dist.cdf(lo));
    }
    let delegated = types
        .iter()
        .map(|&v| Ok(vetoer_payoff(v, menu.choice(util, v, &[T::zero()])?)))
        .collect::<Result<Vec<T>>>()?;
    let mut outcomes: Vec<Box<dyn Fn(T) -> T>> = Vec::new();
    for &a in &eq.a_u {
        outcomes.push(Box::new(move |v| if vetoer_payoff(v, a) >= T::zero() { a } else { T::zero() }));
    }
    for &a in &eq.a_i {
        outcomes.push(Box::new(move |v| influential_outcome(a, v)));
    }
    let strict = T::tol_or_eps(1e-12, 64.0);
    let mut worst_loss = T::neg_infinity();
    let mut gain_measure = if outcomes.is_empty() { T::zero() } else { T::infinity() };
    for outcome in &outcomes {
        let mut mass = T::zero();
        for (k, &v) in types.iter().enumerate() {
            let diff = delegated[k] - vetoer_payoff(v, outcome(v));
            worst_loss = worst_loss.max(-diff);
            if diff > strict {
                mass = mass + cell[k];
            }
        }
        gain_measure = gain_measure.min(mass);
    }
    if outcomes.is_empty() {
        worst_loss = T::zero();
    }
    Ok(ParetoReport {
        c_star,
        a_i: eq.a_i,
        a_u: eq.a_u,
        proposer_gain: w_interval - best_cheap,
        vetoer_gain_measure: gain_measure,
        vetoer_worst_loss: worst_loss,
        interval_foc_downcrossing: interval_down,
        influential_foc_downcrossing: influential_down,
        ordering_holds,
        vetoer_dominates: worst_loss <= strict && gain_measure > T::zero(),
    })
}
