use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Guard range for LQ evaluations; lotteries in the oracle may put mass on
/// actions well below the status quo.
pub const LQ_GUARD: f64 = 10.0;

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum UtilityFamily<T> {
    /// `u(a) = -(1-gamma)|1-a| - gamma (1-a)^2`.
    Lq { gamma: T },
    /// Piecewise-linear interpolation of `(a, u(a))` knots.
    Tabulated { knots: Vec<(T, T)> },
}

/// Proposer's concave utility over actions, peaked at `a = 1`.
///
/// A positive `scale` multiplies every value and derivative; it leaves every
/// optimal delegation set unchanged and is used for invariance checks and for
/// affine re-coordinatisation of subproblems.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProposerUtility<T> {
    family: UtilityFamily<T>,
    scale: T,
    #[serde(skip)]
    slopes: Vec<T>,
}

impl<T: Real> ProposerUtility<T> {
    pub fn lq(gamma: T) -> Result<Self> {
        if !(gamma >= T::zero() && gamma <= T::one()) {
            return Err(Error::BadUtility(format!("gamma must lie in [0, 1], got {gamma}")));
        }
        Ok(Self { family: UtilityFamily::Lq { gamma }, scale: T::one(), slopes: Vec::new() })
    }

    pub fn linear() -> Self {
        Self::lq(T::zero()).unwrap()
    }

    pub fn quadratic() -> Self {
        Self::lq(T::one()).unwrap()
    }

    /// Tabulated utility. Knots must be strictly increasing in `a`, cover
    /// `[0, 1]`, contain `a = 1`, and describe a concave function whose unique
    /// maximiser is `a = 1`.
    pub fn tabulated(mut knots: Vec<(T, T)>) -> Result<Self> {
        if knots.len() < 2 {
            return Err(Error::BadUtility("need at least two knots".into()));
        }
        if knots.iter().any(|(a, u)| !a.is_finite() || !u.is_finite()) {
            return Err(Error::BadUtility("knots must be finite".into()));
        }
        knots.sort_by(|x, y| x.0.partial_cmp(&y.0).unwrap());
        if knots.windows(2).any(|w| w[0].0 >= w[1].0) {
            return Err(Error::BadUtility("knot abscissae must be distinct".into()));
        }
        if knots[0].0 > T::zero() || knots[knots.len() - 1].0 < T::one() {
            return Err(Error::BadUtility("knots must cover [0, 1]".into()));
        }
        let peak = knots
            .iter()
            .position(|&(a, _)| a == T::one())
            .ok_or_else(|| Error::BadUtility("a knot at a = 1 is required".into()))?;
        let slopes: Vec<T> = knots.windows(2).map(|w| (w[1].1 - w[0].1) / (w[1].0 - w[0].0)).collect();
        let mag = slopes.iter().fold(T::one(), |m, s| m.max(s.abs()));
        let tol = T::lit(1e-12) * mag;
        if slopes.windows(2).any(|w| w[1] > w[0] + tol) {
            return Err(Error::BadUtility("tabulated utility is not concave".into()));
        }
        if peak == 0 || slopes[peak - 1] <= T::zero() {
            return Err(Error::BadUtility("utility must be strictly increasing into a = 1".into()));
        }
        if peak < slopes.len() && slopes[peak] >= T::zero() {
            return Err(Error::BadUtility("utility must be strictly decreasing after a = 1".into()));
        }
        Ok(Self { family: UtilityFamily::Tabulated { knots }, scale: T::one(), slopes })
    }

    /// Tabulates an arbitrary concave utility on `n` evenly spaced knots over
    /// `[lo, hi]` (which must contain `[0, 1]` with `1` on the grid).
    pub fn tabulate_fn(f: impl Fn(T) -> T, lo: T, hi: T, n: usize) -> Result<Self> {
        let knots = crate::scalar::linspace(lo, hi, n).into_iter().map(|a| (a, f(a))).collect();
        Self::tabulated(knots)
    }

    /// Positive multiple `lambda * u`.
    pub fn scaled(&self, lambda: T) -> Result<Self> {
        if !(lambda > T::zero()) || !lambda.is_finite() {
            return Err(Error::BadUtility(format!("scale must be positive, got {lambda}")));
        }
        let mut out = self.clone();
        out.scale = self.scale * lambda;
        Ok(out)
    }

    pub fn family(&self) -> &UtilityFamily<T> {
        &self.family
    }

    pub fn scale(&self) -> T {
        self.scale
    }

    /// Whether the utility belongs to the linear-quadratic family (up to a
    /// positive multiple).
    pub fn is_lq(&self) -> bool {
        matches!(self.family, UtilityFamily::Lq { .. })
    }

    pub fn gamma(&self) -> Option<T> {
        match self.family {
            UtilityFamily::Lq { gamma } => Some(gamma),
            UtilityFamily::Tabulated { .. } => None,
        }
    }

    pub fn domain(&self) -> (T, T) {
        match &self.family {
            UtilityFamily::Lq { .. } => (-T::lit(LQ_GUARD), T::lit(LQ_GUARD)),
            UtilityFamily::Tabulated { knots } => (knots[0].0, knots[knots.len() - 1].0),
        }
    }

    fn check_domain(&self, a: T) -> Result<()> {
        let (lo, hi) = self.domain();
        if a >= lo && a <= hi {
            Ok(())
        } else {
            Err(Error::OutOfDomain { value: a.as_f64(), lo: lo.as_f64(), hi: hi.as_f64() })
        }
    }

    /// Segment index `i` with `x_i < a <= x_{i+1}` (or `0` at the first knot).
    fn left_segment(knots: &[(T, T)], a: T) -> usize {
        let idx = knots.partition_point(|&(x, _)| x < a);
        idx.saturating_sub(1).min(knots.len() - 2)
    }

    /// Proposer utility `u(a)`.
    pub fn u(&self, a: T) -> Result<T> {
        self.check_domain(a)?;
        let raw = match &self.family {
            UtilityFamily::Lq { gamma } => {
                let g = *gamma;
                let d = T::one() - a;
                -(T::one() - g) * d.abs() - g * d * d
            }
            UtilityFamily::Tabulated { knots } => {
                let i = Self::left_segment(knots, a);
                knots[i].1 + self.slopes[i] * (a - knots[i].0)
            }
        };
        Ok(raw * self.scale)
    }

    /// Left derivative `u'(a)` for `a <= 1` (at `a = 1` this is the left
    /// derivative, `1 - gamma` under LQ).
    pub fn u_prime(&self, a: T) -> Result<T> {
        if a > T::one() {
            return Err(Error::OutOfDomain { value: a.as_f64(), lo: self.domain().0.as_f64(), hi: 1.0 });
        }
        self.check_domain(a)?;
        let raw = match &self.family {
            UtilityFamily::Lq { gamma } => {
                let g = *gamma;
                T::one() + g - (g + g) * a
            }
            UtilityFamily::Tabulated { knots } => self.slopes[Self::left_segment(knots, a)],
        };
        Ok(raw * self.scale)
    }

    /// Second derivative on `[0, 1)`; for tabulated utilities the local second
    /// difference at the nearest interior knot.
    pub fn u_second(&self, a: T) -> Result<T> {
        if a >= T::one() {
            return Err(Error::OutOfDomain { value: a.as_f64(), lo: self.domain().0.as_f64(), hi: 1.0 });
        }
        self.check_domain(a)?;
        let raw = match &self.family {
            UtilityFamily::Lq { gamma } => -(*gamma + *gamma),
            UtilityFamily::Tabulated { knots } => {
                if knots.len() < 3 {
                    T::zero()
                } else {
                    let nearest = (1..knots.len() - 1)
                        .min_by(|&i, &j| {
                            (knots[i].0 - a).abs().partial_cmp(&(knots[j].0 - a).abs()).unwrap()
                        })
                        .unwrap();
                    self.second_difference(knots, nearest)
                }
            }
        };
        Ok(raw * self.scale)
    }

    fn second_difference(&self, knots: &[(T, T)], i: usize) -> T {
        let span = (knots[i + 1].0 - knots[i - 1].0) * T::lit(0.5);
        (self.slopes[i] - self.slopes[i - 1]) / span
    }

    /// Curvature floor `kappa = inf_{a in [0,1)} -u''(a)`, floored at zero.
    pub fn kappa(&self) -> T {
        let raw = match &self.family {
            UtilityFamily::Lq { gamma } => *gamma + *gamma,
            UtilityFamily::Tabulated { knots } => (1..knots.len().saturating_sub(1))
                .filter(|&i| knots[i].0 >= T::zero() && knots[i].0 < T::one())
                .map(|i| -self.second_difference(knots, i))
                .fold(T::infinity(), T::min),
        };
        if raw.is_finite() {
            raw.max(T::zero()) * self.scale
        } else {
            T::zero()
        }
    }

    /// Arrow-Pratt coefficient `-u''(a)/u'(a)` on `[0, 1)`.
    pub fn arrow_pratt(&self, a: T) -> Result<T> {
        Ok(-self.u_second(a)? / self.u_prime(a)?)
    }

    /// Kinks of the utility inside `[lo, hi]` (knots for tabulated, `1` for LQ).
    pub fn kinks(&self) -> Vec<T> {
        match &self.family {
            UtilityFamily::Lq { .. } => vec![T::one()],
            UtilityFamily::Tabulated { knots } => knots.iter().map(|k| k.0).collect(),
        }
    }

    /// `u` on `[0, 1]`, where the validated domain guarantees success.
    #[inline]
    pub(crate) fn u_unit(&self, a: T) -> T {
        self.u(a.max(T::zero()).min(T::one())).expect("[0,1] lies in every utility domain")
    }

    #[inline]
    pub(crate) fn u_prime_unit(&self, a: T) -> T {
        self.u_prime(a.max(T::zero()).min(T::one())).expect("[0,1] lies in every utility domain")
    }
}
