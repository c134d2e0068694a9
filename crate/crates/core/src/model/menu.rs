//! Vetoer preferences, lotteries, and continuous menus (delegation sets).

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{ProposerUtility, TypeDistribution};
use crate::numeric::integrate;
use crate::scalar::Real;

/// Vetoer's payoff index `a v - a^2 / 2`, an affine transform of `-(v - a)^2`.
#[inline]
pub fn vetoer_payoff<T: Real>(v: T, a: T) -> T {
    a * v - a * a * T::lit(0.5)
}

/// A finite lottery over actions.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Lottery<T> {
    atoms: Vec<(T, T)>,
}

impl<T: Real> Lottery<T> {
    /// Lottery from `(action, probability)` atoms; probabilities must be
    /// nonnegative and sum to one.
    pub fn new(atoms: Vec<(T, T)>) -> Result<Self> {
        if atoms.is_empty() {
            return Err(Error::BadInstance("lottery needs at least one atom".into()));
        }
        if atoms.iter().any(|&(a, p)| !a.is_finite() || !(p >= T::zero())) {
            return Err(Error::BadInstance("lottery atoms must be finite with nonnegative mass".into()));
        }
        let total: T = atoms.iter().map(|a| a.1).sum();
        if (total - T::one()).abs() > T::tol_or_eps(1e-12, 16.0) {
            return Err(Error::BadInstance(format!("lottery probabilities sum to {total}")));
        }
        Ok(Self { atoms })
    }

    pub fn degenerate(a: T) -> Self {
        Self { atoms: vec![(a, T::one())] }
    }

    pub fn atoms(&self) -> &[(T, T)] {
        &self.atoms
    }

    pub fn mean(&self) -> T {
        self.atoms.iter().map(|&(a, p)| a * p).sum()
    }

    pub fn second_moment(&self) -> T {
        self.atoms.iter().map(|&(a, p)| a * a * p).sum()
    }

    /// Type-`v` Vetoer payoff; depends on the lottery only through its first
    /// two moments.
    pub fn vetoer_payoff(&self, v: T) -> T {
        self.mean() * v - self.second_moment() * T::lit(0.5)
    }

    pub fn expected_u(&self, util: &ProposerUtility<T>) -> Result<T> {
        self.atoms.iter().map(|&(a, p)| util.u(a).map(|u| u * p)).sum()
    }
}

/// Result of evaluating a lottery menu: Proposer welfare and the type
/// intervals on which each menu item (index into the menu, `None` for the
/// status quo) is chosen.
#[derive(Debug, Clone, PartialEq)]
pub struct MenuOutcome<T> {
    pub welfare: T,
    pub regions: Vec<(Option<usize>, T, T)>,
}

/// Proposer welfare from offering `menu` (the status quo is always
/// available). Types choose the item maximising `E[a] v - E[a^2]/2`; ties on
/// a positive-measure set go to the item Proposer prefers.
pub fn lottery_menu_welfare<T: Real>(
    util: &ProposerUtility<T>,
    dist: &TypeDistribution<T>,
    menu: &[Lottery<T>],
) -> Result<MenuOutcome<T>> {
    // line: payoff(v) = slope * v - offset
    struct Line<T> {
        item: Option<usize>,
        slope: T,
        offset: T,
        value: T,
    }
    let mut lines = vec![Line { item: None, slope: T::zero(), offset: T::zero(), value: util.u(T::zero())? }];
    for (i, l) in menu.iter().enumerate() {
        lines.push(Line {
            item: Some(i),
            slope: l.mean(),
            offset: l.second_moment() * T::lit(0.5),
            value: l.expected_u(util)?,
        });
    }
    lines.sort_by(|a, b| {
        a.slope
            .partial_cmp(&b.slope)
            .unwrap()
            .then(a.offset.partial_cmp(&b.offset).unwrap())
            .then(b.value.partial_cmp(&a.value).unwrap())
    });
    // identical slopes: only the lowest offset can ever be chosen
    lines.dedup_by(|later, earlier| later.slope == earlier.slope);

    let cross = |a: &Line<T>, b: &Line<T>| (b.offset - a.offset) / (b.slope - a.slope);
    let mut hull: Vec<Line<T>> = Vec::new();
    for line in lines {
        while hull.len() >= 2 {
            let n = hull.len();
            if cross(&hull[n - 2], &line) <= cross(&hull[n - 2], &hull[n - 1]) {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(line);
    }
    let mut regions = Vec::with_capacity(hull.len());
    let mut welfare = T::zero();
    let mut lo = T::neg_infinity();
    for (k, line) in hull.iter().enumerate() {
        let hi = if k + 1 < hull.len() { cross(line, &hull[k + 1]) } else { T::infinity() };
        welfare = welfare + line.value * (dist.cdf(hi) - dist.cdf(lo));
        regions.push((line.item, lo, hi));
        lo = hi;
    }
    Ok(MenuOutcome { welfare, regions })
}

/// Closed menu of actions: a finite union of closed intervals (isolated
/// actions are degenerate intervals).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DelegationSet<T> {
    pieces: Vec<(T, T)>,
}

impl<T: Real> DelegationSet<T> {
    /// Builds a set from arbitrary closed intervals; overlapping or touching
    /// pieces are merged.
    pub fn new(mut pieces: Vec<(T, T)>) -> Result<Self> {
        if pieces.iter().any(|&(a, b)| !a.is_finite() || !b.is_finite() || a > b) {
            return Err(Error::BadInstance("delegation set pieces must be finite closed intervals".into()));
        }
        pieces.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        let mut merged: Vec<(T, T)> = Vec::with_capacity(pieces.len());
        for (a, b) in pieces {
            match merged.last_mut() {
                Some(last) if a <= last.1 => last.1 = last.1.max(b),
                _ => merged.push((a, b)),
            }
        }
        Ok(Self { pieces: merged })
    }

    pub fn interval(lo: T, hi: T) -> Self {
        Self::new(vec![(lo, hi)]).expect("valid interval")
    }

    pub fn points(points: &[T]) -> Self {
        Self::new(points.iter().map(|&p| (p, p)).collect()).expect("finite points")
    }

    pub fn pieces(&self) -> &[(T, T)] {
        &self.pieces
    }

    pub fn is_empty(&self) -> bool {
        self.pieces.is_empty()
    }

    pub fn union(&self, other: &Self) -> Self {
        let mut all = self.pieces.clone();
        all.extend_from_slice(&other.pieces);
        Self::new(all).expect("pieces already validated")
    }

    pub fn contains(&self, a: T) -> bool {
        self.pieces.iter().any(|&(lo, hi)| a >= lo && a <= hi)
    }

    /// Whether two sets agree up to `tol` on every piece endpoint.
    pub fn approx_eq(&self, other: &Self, tol: T) -> bool {
        self.pieces.len() == other.pieces.len()
            && self.pieces.iter().zip(&other.pieces).all(|(a, b)| (a.0 - b.0).abs() <= tol && (a.1 - b.1).abs() <= tol)
    }

    /// Action chosen by type `v` from this set plus the `defaults` (veto
    /// options); ties go to the action Proposer prefers.
    pub fn choice(&self, util: &ProposerUtility<T>, v: T, defaults: &[T]) -> Result<T> {
        let full = self.union(&Self::points(defaults));
        let mut best: Option<(T, T)> = None;
        for &(lo, hi) in &full.pieces {
            let a = v.max(lo).min(hi);
            let dist = (a - v).abs();
            let tie_tol = T::tol_or_eps(1e-12, 8.0);
            best = match best {
                None => Some((a, dist)),
                Some((_, d)) if dist < d - tie_tol => Some((a, dist)),
                Some((b, d)) if (dist - d).abs() <= tie_tol && util.u(a)? > util.u(b)? => Some((a, dist.min(d))),
                keep => keep,
            };
        }
        Ok(best.map(|b| b.0).unwrap_or(v))
    }

    /// Proposer's expected utility when types choose from this set together
    /// with the veto options `defaults` (usually `[0]`).
    pub fn welfare_with_defaults(
        &self,
        util: &ProposerUtility<T>,
        dist: &TypeDistribution<T>,
        defaults: &[T],
        tol: T,
    ) -> Result<T> {
        let full = self.union(&Self::points(defaults));
        let pieces = &full.pieces;
        if pieces.is_empty() {
            return Err(Error::BadInstance("empty menu".into()));
        }
        let (dom_lo, dom_hi) = util.domain();
        if pieces[0].0 < dom_lo || pieces[pieces.len() - 1].1 > dom_hi {
            return Err(Error::OutOfDomain { value: pieces[0].0.as_f64(), lo: dom_lo.as_f64(), hi: dom_hi.as_f64() });
        }
        let mut breaks = dist.breakpoints();
        breaks.extend(util.kinks());
        let mut total = util.u(pieces[0].0)? * dist.cdf(pieces[0].0);
        let last = pieces[pieces.len() - 1].1;
        total = total + util.u(last)? * (T::one() - dist.cdf(last));
        let n = T::from_usize(pieces.len()).unwrap();
        for (k, &(lo, hi)) in pieces.iter().enumerate() {
            if hi > lo {
                let part = integrate(|v| util.u(v).unwrap_or(T::nan()) * dist.pdf(v), lo, hi, &breaks, tol / n);
                total = total + part;
            }
            if let Some(&(next_lo, _)) = pieces.get(k + 1) {
                // types in the gap go to the nearer endpoint
                let mid = (hi + next_lo) * T::lit(0.5);
                let f_mid = dist.cdf(mid);
                total = total + util.u(hi)? * (f_mid - dist.cdf(hi)) + util.u(next_lo)? * (dist.cdf(next_lo) - f_mid);
            }
        }
        if total.is_nan() {
            return Err(Error::OutOfDomain { value: f64::NAN, lo: dom_lo.as_f64(), hi: dom_hi.as_f64() });
        }
        Ok(total)
    }

    /// Proposer welfare with the status quo `0` as the only veto option.
    pub fn welfare(&self, util: &ProposerUtility<T>, dist: &TypeDistribution<T>) -> Result<T> {
        self.welfare_with_defaults(util, dist, &[T::zero()], T::tol_or_eps(1e-11, 64.0))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lottery_moments_and_payoff() {
        let l = Lottery::<f64>::new(vec![(0.1, 0.5), (1.0, 0.5)]).unwrap();
        assert!((l.mean() - 0.55).abs() < 1e-15);
        assert!((l.second_moment() - 0.505).abs() < 1e-15);
        // payoff depends only on the two moments
        let m = Lottery::<f64>::new(vec![(0.55 - 0.45, 0.5), (0.55 + 0.45, 0.5)]).unwrap();
        assert!((l.vetoer_payoff(0.3) - m.vetoer_payoff(0.3)).abs() < 1e-15);
        assert!(Lottery::new(vec![(0.0, 0.3)]).is_err());
    }

    #[test]
    fn uniform_linear_interval_welfare_is_flat() {
        let u = ProposerUtility::<f64>::linear();
        let d = TypeDistribution::uniform01();
        for &c in &[0.0, 0.2, 0.5, 0.9, 1.0] {
            let w = DelegationSet::interval(c, 1.0).welfare(&u, &d).unwrap();
            assert!((w + 0.5).abs() < 1e-12, "c = {c}: {w}");
        }
    }

    #[test]
    fn finite_menu_matches_lottery_envelope() {
        let u = ProposerUtility::<f64>::lq(0.6).unwrap();
        let d = TypeDistribution::normal(0.3, 0.7).unwrap();
        let set = DelegationSet::points(&[0.4, 1.0]);
        let w_set = set.welfare(&u, &d).unwrap();
        let menu = [Lottery::degenerate(0.4), Lottery::degenerate(1.0)];
        let out = lottery_menu_welfare(&u, &d, &menu).unwrap();
        assert!((w_set - out.welfare).abs() < 1e-13);
        // thresholds are the midpoints 0.2 and 0.7
        assert_eq!(out.regions.len(), 3);
        assert!((out.regions[1].1 - 0.2).abs() < 1e-15);
        assert!((out.regions[2].1 - 0.7).abs() < 1e-15);
    }

    #[test]
    fn dominated_menu_items_are_never_chosen() {
        let u = ProposerUtility::<f64>::linear();
        let d = TypeDistribution::uniform01();
        // a lottery with mean 1/2 and huge variance is worse than the status quo
        // and than action 1 for every type
        let bad = Lottery::new(vec![(-5.0, 0.5), (6.0, 0.5)]).unwrap();
        let out = lottery_menu_welfare(&u, &d, &[bad, Lottery::degenerate(1.0)]).unwrap();
        assert!(out.regions.iter().all(|r| r.0 != Some(0)));
        assert!((out.welfare + 0.5).abs() < 1e-15);
    }

    #[test]
    fn choice_breaks_ties_for_proposer() {
        let u = ProposerUtility::<f64>::linear();
        let set = DelegationSet::points(&[1.0]);
        assert_eq!(set.choice(&u, 0.5, &[0.0]).unwrap(), 1.0);
        assert_eq!(set.choice(&u, 0.49, &[0.0]).unwrap(), 0.0);
        let s = DelegationSet::new(vec![(0.3, 0.5), (0.4, 0.6), (0.8, 0.8)]).unwrap();
        assert_eq!(s.pieces(), &[(0.3, 0.6), (0.8, 0.8)]);
        assert_eq!(s.choice(&u, 0.45, &[0.0]).unwrap(), 0.45);
    }
}
