//! Numerical checks of the optimality conditions for full delegation, no
//! compromise and interval delegation.
//!
//! Every check samples the relevant inequality on a grid and reports the
//! smallest slack found. A check passes when that slack is no worse than
//! `-tol`, where `tol` is `1e-9` times the magnitude of the tested expression
//! (plus a rounding floor), so flat stretches count as weakly increasing.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{ProposerUtility, TypeDistribution};
use crate::scalar::{linspace, Real};

pub const FULL_DELEGATION_GRID: usize = 10_001;
pub const PAIR_GRID: usize = 2001;
pub const LOGCONCAVE_GRID: usize = 10_001;

const REL_TOL: f64 = 1e-9;

/// Where the worst slack of a check was attained.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Witness<T> {
    /// Which inequality: `"monotone"`, `"pair"`, `"upper"`, `"lower"`,
    /// `"concavity"`.
    pub part: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub v: Option<T>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub s: Option<T>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t: Option<T>,
}

impl<T> Witness<T> {
    fn at_v(part: &'static str, v: T) -> Self {
        Self { part, v: Some(v), s: None, t: None }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConditionReport<T> {
    pub verdict: bool,
    pub worst_margin: T,
    pub witness: Witness<T>,
    pub grid_resolution: usize,
    pub tolerance: T,
    /// Whether a `false` verdict proves the candidate set suboptimal. The
    /// converse directions hold under linear-quadratic utility only.
    pub certifies_necessity: bool,
}

impl<T: Real> ConditionReport<T> {
    fn new(margin: T, tol: T, witness: Witness<T>, grid: usize, necessity: bool) -> Self {
        Self {
            verdict: margin >= -tol,
            worst_margin: margin,
            witness,
            grid_resolution: grid,
            tolerance: tol,
            certifies_necessity: necessity,
        }
    }

    /// Worst margin in units of the tolerance (negative when violated).
    pub fn relative_margin(&self) -> T {
        self.worst_margin / self.tolerance
    }

    /// Combines reports for the parts of a compound condition.
    fn all(parts: Vec<Self>) -> Self {
        let verdict = parts.iter().all(|p| p.verdict);
        let worst = parts
            .iter()
            .min_by(|a, b| a.relative_margin().partial_cmp(&b.relative_margin()).unwrap())
            .expect("at least one part")
            .clone();
        let margin = parts.iter().map(|p| p.worst_margin).fold(T::infinity(), T::min);
        Self { verdict, worst_margin: margin, ..worst }
    }
}

fn tolerance<T: Real>(scale: T) -> T {
    let rel = T::tol_or_eps(REL_TOL, 16.0);
    rel * scale + T::min_positive_value()
}

/// `G(v) = kappa F(v) - u'(v) f(v)`.
pub fn g_value<T: Real>(util: &ProposerUtility<T>, dist: &TypeDistribution<T>, kappa: T, v: T) -> T {
    kappa * dist.cdf(v) - util.u_prime_unit(v) * dist.pdf(v)
}

fn monotone_report<T: Real>(
    util: &ProposerUtility<T>,
    dist: &TypeDistribution<T>,
    lo: T,
    n: usize,
) -> ConditionReport<T> {
    let kappa = util.kappa();
    if lo >= T::one() {
        return ConditionReport::new(T::zero(), tolerance(T::one()), Witness::at_v("monotone", T::one()), 1, util.is_lq());
    }
    let vs = linspace(lo, T::one(), n);
    let gs: Vec<T> = vs.iter().map(|&v| g_value(util, dist, kappa, v)).collect();
    let scale = gs.iter().fold(T::zero(), |m, g| m.max(g.abs()));
    let (mut worst, mut at) = (T::infinity(), lo);
    for i in 0..n - 1 {
        let d = gs[i + 1] - gs[i];
        if d < worst {
            worst = d;
            at = vs[i];
        }
    }
    ConditionReport::new(worst, tolerance(scale), Witness::at_v("monotone", at), n, util.is_lq())
}

/// Full delegation: `kappa F(v) - u'(v) f(v)` is increasing on `[0, 1]`.
pub fn check_full_delegation<T: Real>(util: &ProposerUtility<T>, dist: &TypeDistribution<T>) -> ConditionReport<T> {
    check_full_delegation_with_grid(util, dist, FULL_DELEGATION_GRID)
}

pub fn check_full_delegation_with_grid<T: Real>(
    util: &ProposerUtility<T>,
    dist: &TypeDistribution<T>,
    n: usize,
) -> ConditionReport<T> {
    monotone_report(util, dist, T::zero(), n.max(2))
}

/// Difference quotient `(F(b) - F(a)) / (b - a)`, with `f(a)` in the limit.
fn slope<T: Real>(dist: &TypeDistribution<T>, a: T, b: T) -> T {
    if b == a {
        dist.pdf(a)
    } else {
        (dist.cdf(b) - dist.cdf(a)) / (b - a)
    }
}

/// Best (smallest) upper value and best (largest) lower value of a separable
/// pair inequality `upper(t) >= lower(s)`.
fn pair_report<T: Real>(
    upper: impl Fn(T) -> T,
    ts: &[T],
    lower: impl Fn(T) -> T,
    ss: &[T],
    part: &'static str,
    necessity: bool,
) -> ConditionReport<T> {
    let pick = |xs: &[T], f: &dyn Fn(T) -> T, want_min: bool| {
        let mut best = (xs[0], f(xs[0]));
        for &x in &xs[1..] {
            let y = f(x);
            if (want_min && y < best.1) || (!want_min && y > best.1) {
                best = (x, y);
            }
        }
        best
    };
    let (t, lhs) = pick(ts, &upper, true);
    let (s, rhs) = pick(ss, &lower, false);
    let scale = lhs.abs().max(rhs.abs());
    ConditionReport::new(
        lhs - rhs,
        tolerance(scale),
        Witness { part, v: None, s: Some(s), t: Some(t) },
        ts.len().max(ss.len()),
        necessity,
    )
}

/// No compromise (LQ only): for all `1 >= t > 1/2 > s >= 0`,
/// `(u'(1) + kappa (1-t)) (F(t)-F(1/2))/(t-1/2) >= (u'(0) - kappa s) (F(1/2)-F(s))/(1/2-s)`.
///
/// The two sides depend on `t` and `s` separately, so the pair scan reduces to
/// minimising the left side over `t` and maximising the right side over `s`.
pub fn check_no_compromise<T: Real>(util: &ProposerUtility<T>, dist: &TypeDistribution<T>) -> Result<ConditionReport<T>> {
    check_no_compromise_with_grid(util, dist, PAIR_GRID)
}

pub fn check_no_compromise_with_grid<T: Real>(
    util: &ProposerUtility<T>,
    dist: &TypeDistribution<T>,
    n: usize,
) -> Result<ConditionReport<T>> {
    if !util.is_lq() {
        return Err(Error::NotLq);
    }
    let half = T::lit(0.5);
    let kappa = util.kappa();
    let up1 = util.u_prime_unit(T::one());
    let up0 = util.u_prime_unit(T::zero());
    let ts = linspace(half, T::one(), n.max(2));
    let ss = linspace(T::zero(), half, n.max(2));
    Ok(pair_report(
        |t| (up1 + kappa * (T::one() - t)) * slope(dist, half, t),
        &ts,
        |s| (up0 - kappa * s) * slope(dist, s, half),
        &ss,
        "pair",
        true,
    ))
}

/// Interval delegation `[c, 1]`:
/// (i) `kappa F - u' f` increasing on `[c, 1]`;
/// (ii) `(u'(c) + kappa (c - t)) (F(t)-F(c/2))/(t-c/2) >= u'(c) (F(c)-F(c/2))/(c/2)` on `(c/2, c]`;
/// (iii) `u'(c) (F(c)-F(c/2))/(c/2) >= (u'(0) - kappa s) (F(c/2)-F(s))/(c/2-s)` on `[0, c/2)`.
///
/// Limits at `c/2` use `f(c/2)`; (ii) and (iii) are vacuous at `c = 0`.
pub fn check_interval<T: Real>(util: &ProposerUtility<T>, dist: &TypeDistribution<T>, c: T) -> Result<ConditionReport<T>> {
    check_interval_with_grid(util, dist, c, FULL_DELEGATION_GRID, PAIR_GRID)
}

pub fn check_interval_with_grid<T: Real>(
    util: &ProposerUtility<T>,
    dist: &TypeDistribution<T>,
    c: T,
    monotone_grid: usize,
    pair_grid: usize,
) -> Result<ConditionReport<T>> {
    if !(c >= T::zero() && c <= T::one()) {
        return Err(Error::OutOfDomain { value: c.as_f64(), lo: 0.0, hi: 1.0 });
    }
    let necessity = util.is_lq() && c > T::zero() && c < T::one();
    let mut parts = vec![monotone_report(util, dist, c, monotone_grid.max(2))];
    if c > T::zero() {
        let half = c * T::lit(0.5);
        let kappa = util.kappa();
        let upc = util.u_prime_unit(c);
        let up0 = util.u_prime_unit(T::zero());
        let middle = upc * slope(dist, half, c);
        let n = pair_grid.max(2);
        let ts = linspace(half, c, n);
        let ss = linspace(T::zero(), half, n);
        parts.push(pair_report(
            |t| (upc + kappa * (c - t)) * slope(dist, half, t),
            &ts,
            |_| middle,
            &[half],
            "upper",
            necessity,
        ));
        parts.push(pair_report(|_| middle, &[half], |s| (up0 - kappa * s) * slope(dist, s, half), &ss, "lower", necessity));
    }
    let mut report = ConditionReport::all(parts);
    report.certifies_necessity = necessity;
    Ok(report)
}

/// Logconcavity of `f` on `[0, 1]` via second differences of `ln f`.
pub fn check_logconcave<T: Real>(dist: &TypeDistribution<T>) -> ConditionReport<T> {
    check_logconcave_with_grid(dist, LOGCONCAVE_GRID)
}

pub fn check_logconcave_with_grid<T: Real>(dist: &TypeDistribution<T>, n: usize) -> ConditionReport<T> {
    let n = n.max(3);
    let vs = linspace(T::zero(), T::one(), n);
    let logs: Vec<T> = vs.iter().map(|&v| dist.log_pdf(v)).collect();
    let mut worst = T::infinity();
    let mut at = vs[1];
    let mut scale = T::zero();
    for i in 1..n - 1 {
        let d2 = logs[i + 1] - (logs[i] + logs[i]) + logs[i - 1];
        scale = scale.max(d2.abs());
        if -d2 < worst {
            worst = -d2;
            at = vs[i];
        }
    }
    let level = logs.iter().fold(T::one(), |m, l| m.max(l.abs()));
    let tol = tolerance(scale) + T::epsilon() * T::lit(64.0) * level;
    ConditionReport::new(worst, tol, Witness::at_v("concavity", at), n, false)
}

/// `sup_{[0,1)} f'/f - inf_{[0,1)} (-u''/u')`. A nonpositive value means
/// Proposer is risk averse enough for full delegation.
pub fn check_risk_aversion_threshold<T: Real>(util: &ProposerUtility<T>, dist: &TypeDistribution<T>) -> T {
    check_risk_aversion_threshold_with_grid(util, dist, FULL_DELEGATION_GRID)
}

pub fn check_risk_aversion_threshold_with_grid<T: Real>(
    util: &ProposerUtility<T>,
    dist: &TypeDistribution<T>,
    n: usize,
) -> T {
    let vs = linspace(T::zero(), T::one(), n.max(3));
    let interior = &vs[..vs.len() - 1];
    let sup_score = interior.iter().map(|&v| dist.score(v)).fold(T::neg_infinity(), T::max);
    let inf_ap = interior
        .iter()
        .map(|&v| util.arrow_pratt(v).expect("[0,1) lies in every utility domain"))
        .fold(T::infinity(), T::min);
    sup_score - inf_ap
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lq(g: f64) -> ProposerUtility<f64> {
        ProposerUtility::lq(g).unwrap()
    }
    fn normal(mu: f64, s: f64) -> TypeDistribution<f64> {
        TypeDistribution::normal(mu, s).unwrap()
    }

    #[test]
    fn full_delegation_examples() {
        assert!(check_full_delegation(&lq(0.0), &normal(-0.5, 1.0)).verdict);
        let r = check_full_delegation(&lq(0.0), &TypeDistribution::uniform01());
        assert!(r.verdict && r.worst_margin.abs() < 1e-15);
        assert!(!check_full_delegation(&lq(0.0), &normal(2.0, 0.1)).verdict);
        assert!(check_full_delegation(&lq(1.0), &TypeDistribution::uniform01()).verdict);
    }

    #[test]
    fn no_compromise_examples() {
        assert!(check_no_compromise(&lq(0.0), &normal(1.5, 0.5)).unwrap().verdict);
        assert!(check_no_compromise(&lq(0.0), &TypeDistribution::uniform01()).unwrap().verdict);
        let r = check_no_compromise(&lq(0.0), &normal(0.45, 1.0)).unwrap();
        assert!(!r.verdict);
        assert!(r.witness.s.is_some() && r.witness.t.is_some());
        // differentiable peak: never no compromise
        assert!(!check_no_compromise(&lq(1.0), &normal(1.5, 0.5)).unwrap().verdict);
        let tab = ProposerUtility::tabulate_fn(|a: f64| -(1.0 - a).abs(), 0.0, 1.0, 11).unwrap();
        assert_eq!(check_no_compromise(&tab, &TypeDistribution::uniform01()), Err(Error::NotLq));
    }

    #[test]
    fn interval_at_zero_matches_full_delegation() {
        for (g, d) in [(0.0, normal(-0.5, 1.0)), (1.0, TypeDistribution::uniform01()), (0.0, normal(2.0, 0.1))] {
            let a = check_interval(&lq(g), &d, 0.0).unwrap();
            let b = check_full_delegation(&lq(g), &d);
            assert_eq!(a.verdict, b.verdict);
            assert_eq!(a.worst_margin, b.worst_margin);
        }
    }

    #[test]
    fn interval_rejects_wrong_threshold() {
        // uniform + quadratic: only c = 0 is optimal
        assert!(!check_interval(&lq(1.0), &TypeDistribution::uniform01(), 0.5).unwrap().verdict);
        assert!(check_interval(&lq(1.0), &TypeDistribution::uniform01(), 0.0).unwrap().verdict);
        assert!(check_interval(&lq(0.0), &TypeDistribution::uniform01(), 0.3).unwrap().verdict);
        assert!(check_interval(&lq(0.0), &TypeDistribution::uniform01(), 1.5).is_err());
    }

    #[test]
    fn logconcavity() {
        assert!(check_logconcave(&normal(0.45, 1.0)).verdict);
        assert!(check_logconcave(&normal(3.0, 0.05)).verdict);
        assert!(check_logconcave(&TypeDistribution::<f64>::uniform01()).verdict);
        let e1 = TypeDistribution::dipped_linear(0.05, 1.0).unwrap();
        assert!(!check_logconcave(&e1).verdict);
    }

    #[test]
    fn risk_aversion_threshold() {
        let u = TypeDistribution::uniform01();
        assert_eq!(check_risk_aversion_threshold(&lq(0.0), &u), 0.0);
        // inf of 2/(2-2v) on [0,1) is attained at v = 0
        assert!((check_risk_aversion_threshold(&lq(1.0), &u) + 1.0).abs() < 1e-12);
        assert!(check_risk_aversion_threshold(&lq(0.0), &normal(2.0, 0.1)) > 0.0);
    }
}
