use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::{linspace, Real};

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum DistributionFamily<T> {
    Normal { mu: T, sigma: T },
    Uniform01,
    /// Continuous piecewise-linear density through the given knots
    /// (normalised at construction).
    PiecewiseLinear { knots: Vec<(T, T)> },
    /// Monotone cubic (PCHIP) interpolation of tabulated `(v, F(v))` pairs.
    TabulatedCdf { grid: Vec<(T, T)> },
}

#[derive(Debug, Clone, PartialEq)]
enum Repr<T> {
    Normal { mu: T, sigma: T },
    Uniform01,
    Pwl { xs: Vec<T>, fs: Vec<T>, slopes: Vec<T>, cum: Vec<T> },
    Pchip { xs: Vec<T>, ys: Vec<T>, ds: Vec<T> },
}

/// Distribution of Vetoer's ideal point.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TypeDistribution<T> {
    family: DistributionFamily<T>,
    #[serde(skip)]
    repr: Repr<T>,
}

const POSITIVITY_SAMPLES: usize = 1001;

impl<T: Real> TypeDistribution<T> {
    pub fn normal(mu: T, sigma: T) -> Result<Self> {
        if !mu.is_finite() || !(sigma > T::zero()) || !sigma.is_finite() {
            return Err(Error::BadDistribution(format!("normal needs finite mu and sigma > 0, got ({mu}, {sigma})")));
        }
        Ok(Self { family: DistributionFamily::Normal { mu, sigma }, repr: Repr::Normal { mu, sigma } })
    }

    pub fn uniform01() -> Self {
        Self { family: DistributionFamily::Uniform01, repr: Repr::Uniform01 }
    }

    /// Piecewise-linear density. The knots are rescaled so the density
    /// integrates to one; kinks report the right-hand derivative.
    pub fn piecewise_linear(mut knots: Vec<(T, T)>) -> Result<Self> {
        if knots.len() < 2 {
            return Err(Error::BadDistribution("piecewise-linear density needs at least two knots".into()));
        }
        if knots.iter().any(|(v, f)| !v.is_finite() || !f.is_finite() || *f < T::zero()) {
            return Err(Error::BadDistribution("density knots must be finite and nonnegative".into()));
        }
        knots.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        if knots.windows(2).any(|w| w[0].0 >= w[1].0) {
            return Err(Error::BadDistribution("density knots must have distinct abscissae".into()));
        }
        let xs: Vec<T> = knots.iter().map(|k| k.0).collect();
        let raw: Vec<T> = knots.iter().map(|k| k.1).collect();
        let half = T::lit(0.5);
        let area: T = xs.windows(2).zip(raw.windows(2)).map(|(x, f)| (x[1] - x[0]) * (f[0] + f[1]) * half).sum();
        if !(area > T::zero()) {
            return Err(Error::BadDistribution("density has zero mass".into()));
        }
        let fs: Vec<T> = raw.iter().map(|&f| f / area).collect();
        let slopes: Vec<T> = xs.windows(2).zip(fs.windows(2)).map(|(x, f)| (f[1] - f[0]) / (x[1] - x[0])).collect();
        let mut cum = Vec::with_capacity(xs.len());
        cum.push(T::zero());
        for i in 0..xs.len() - 1 {
            let next = cum[i] + (xs[i + 1] - xs[i]) * (fs[i] + fs[i + 1]) * half;
            cum.push(next);
        }
        let normalized: Vec<(T, T)> = xs.iter().copied().zip(fs.iter().copied()).collect();
        let dist = Self {
            family: DistributionFamily::PiecewiseLinear { knots: normalized },
            repr: Repr::Pwl { xs, fs, slopes, cum },
        };
        dist.validate_unit_interval()?;
        Ok(dist)
    }

    /// Tabulated CDF, interpolated by a monotone cubic so the density is
    /// continuous. Values are affinely normalised to run from 0 to 1.
    pub fn tabulated_cdf(mut grid: Vec<(T, T)>) -> Result<Self> {
        if grid.len() < 2 {
            return Err(Error::BadDistribution("tabulated CDF needs at least two points".into()));
        }
        if grid.iter().any(|(v, f)| !v.is_finite() || !f.is_finite()) {
            return Err(Error::BadDistribution("CDF grid must be finite".into()));
        }
        grid.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        if grid.windows(2).any(|w| w[0].0 >= w[1].0) {
            return Err(Error::BadDistribution("CDF grid abscissae must be distinct".into()));
        }
        if grid.windows(2).any(|w| w[1].1 < w[0].1) {
            return Err(Error::BadDistribution("CDF must be nondecreasing".into()));
        }
        let tol = T::lit(1e-8);
        let (f0, f1) = (grid[0].1, grid[grid.len() - 1].1);
        if f0.abs() > tol || (f1 - T::one()).abs() > tol {
            return Err(Error::BadDistribution(format!("CDF must run from 0 to 1, got {f0} .. {f1}")));
        }
        let xs: Vec<T> = grid.iter().map(|g| g.0).collect();
        let ys: Vec<T> = grid.iter().map(|g| (g.1 - f0) / (f1 - f0)).collect();
        let ds = pchip_slopes(&xs, &ys);
        let normalized = xs.iter().copied().zip(ys.iter().copied()).collect();
        let dist = Self { family: DistributionFamily::TabulatedCdf { grid: normalized }, repr: Repr::Pchip { xs, ys, ds } };
        dist.validate_unit_interval()?;
        Ok(dist)
    }

    /// Density that rises with constant slope except on `(1/2 - delta,
    /// 1/2 + delta)`, where it falls with the same slope. Before
    /// normalisation the density starts at `1` at `v = 0`.
    pub fn dipped_linear(delta: T, slope: T) -> Result<Self> {
        let quarter = T::lit(0.25);
        if !(delta > T::zero() && delta < quarter) {
            return Err(Error::BadDelta(delta.as_f64()));
        }
        if !(slope > T::zero()) || !slope.is_finite() {
            return Err(Error::BadDistribution(format!("slope must be positive, got {slope}")));
        }
        let half = T::lit(0.5);
        let peak = T::one() + slope * (half - delta);
        let trough = peak - slope * (delta + delta);
        let end = trough + slope * (half - delta);
        Self::piecewise_linear(vec![(T::zero(), T::one()), (half - delta, peak), (half + delta, trough), (T::one(), end)])
    }

    fn validate_unit_interval(&self) -> Result<()> {
        let (lo, hi) = self.support();
        if lo > T::zero() || hi < T::one() {
            return Err(Error::BadDistribution("support must contain [0, 1]".into()));
        }
        let mut pts = linspace(T::zero(), T::one(), POSITIVITY_SAMPLES);
        pts.extend(self.breakpoints().into_iter().filter(|&v| v >= T::zero() && v <= T::one()));
        if let Some(v) = pts.into_iter().find(|&v| !(self.pdf(v) > T::zero())) {
            return Err(Error::BadDistribution(format!("density must be positive on [0, 1]; f({v}) = {}", self.pdf(v))));
        }
        Ok(())
    }

    pub fn family(&self) -> &DistributionFamily<T> {
        &self.family
    }

    /// Support `[v_lo, v_hi]`, possibly infinite.
    pub fn support(&self) -> (T, T) {
        match &self.repr {
            Repr::Normal { .. } => (T::neg_infinity(), T::infinity()),
            Repr::Uniform01 => (T::zero(), T::one()),
            Repr::Pwl { xs, .. } | Repr::Pchip { xs, .. } => (xs[0], xs[xs.len() - 1]),
        }
    }

    fn segment(xs: &[T], v: T) -> usize {
        xs.partition_point(|&x| x <= v).saturating_sub(1).min(xs.len() - 2)
    }

    pub fn cdf(&self, v: T) -> T {
        match &self.repr {
            Repr::Normal { mu, sigma } => {
                let z = (v - *mu) / (*sigma * T::SQRT_2());
                T::lit(0.5) * (-z).erfc()
            }
            Repr::Uniform01 => v.max(T::zero()).min(T::one()),
            Repr::Pwl { xs, fs, slopes, cum } => {
                if v <= xs[0] {
                    return T::zero();
                }
                if v >= xs[xs.len() - 1] {
                    return T::one();
                }
                let i = Self::segment(xs, v);
                let t = v - xs[i];
                cum[i] + fs[i] * t + slopes[i] * t * t * T::lit(0.5)
            }
            Repr::Pchip { xs, ys, ds } => {
                if v <= xs[0] {
                    return T::zero();
                }
                if v >= xs[xs.len() - 1] {
                    return T::one();
                }
                let i = Self::segment(xs, v);
                hermite(xs, ys, ds, i, v, 0)
            }
        }
    }

    pub fn pdf(&self, v: T) -> T {
        match &self.repr {
            Repr::Normal { mu, sigma } => {
                let z = (v - *mu) / *sigma;
                (-(z * z) * T::lit(0.5)).exp() / (*sigma * (T::PI() + T::PI()).sqrt())
            }
            Repr::Uniform01 => {
                if v >= T::zero() && v <= T::one() {
                    T::one()
                } else {
                    T::zero()
                }
            }
            Repr::Pwl { xs, fs, slopes, .. } => {
                if v < xs[0] || v > xs[xs.len() - 1] {
                    return T::zero();
                }
                let i = Self::segment(xs, v);
                fs[i] + slopes[i] * (v - xs[i])
            }
            Repr::Pchip { xs, ys, ds } => {
                if v < xs[0] || v > xs[xs.len() - 1] {
                    return T::zero();
                }
                let i = Self::segment(xs, v);
                hermite(xs, ys, ds, i, v, 1)
            }
        }
    }

    /// Derivative of the density; right-hand value at kinks.
    pub fn pdf_prime(&self, v: T) -> T {
        match &self.repr {
            Repr::Normal { mu, sigma } => -(v - *mu) / (*sigma * *sigma) * self.pdf(v),
            Repr::Uniform01 => T::zero(),
            Repr::Pwl { xs, slopes, .. } => {
                if v < xs[0] || v > xs[xs.len() - 1] {
                    return T::zero();
                }
                slopes[Self::segment(xs, v)]
            }
            Repr::Pchip { xs, ys, ds } => {
                if v < xs[0] || v > xs[xs.len() - 1] {
                    return T::zero();
                }
                hermite(xs, ys, ds, Self::segment(xs, v), v, 2)
            }
        }
    }

    /// `ln f(v)`, analytic for the normal family so narrow normals do not
    /// underflow.
    pub fn log_pdf(&self, v: T) -> T {
        match &self.repr {
            Repr::Normal { mu, sigma } => {
                let z = (v - *mu) / *sigma;
                -(z * z) * T::lit(0.5) - (*sigma * (T::PI() + T::PI()).sqrt()).ln()
            }
            _ => self.pdf(v).ln(),
        }
    }

    /// Score `f'(v) / f(v)`.
    pub fn score(&self, v: T) -> T {
        match &self.repr {
            Repr::Normal { mu, sigma } => -(v - *mu) / (*sigma * *sigma),
            _ => self.pdf_prime(v) / self.pdf(v),
        }
    }

    /// Points where the density is not smooth or has most of its curvature;
    /// used to split quadrature domains.
    pub fn breakpoints(&self) -> Vec<T> {
        match &self.repr {
            Repr::Normal { mu, sigma } => (-8..=8).map(|k| *mu + *sigma * T::from_i32(k).unwrap()).collect(),
            Repr::Uniform01 => vec![T::zero(), T::one()],
            Repr::Pwl { xs, .. } | Repr::Pchip { xs, .. } => xs.clone(),
        }
    }

    /// Mode of the density restricted to the real line (normal: `mu`).
    pub fn mode(&self) -> Option<T> {
        match &self.repr {
            Repr::Normal { mu, .. } => Some(*mu),
            _ => None,
        }
    }
}

/// Fritsch-Carlson style monotone derivative estimates (as in PCHIP).
fn pchip_slopes<T: Real>(xs: &[T], ys: &[T]) -> Vec<T> {
    let n = xs.len();
    let h: Vec<T> = xs.windows(2).map(|w| w[1] - w[0]).collect();
    let delta: Vec<T> = (0..n - 1).map(|i| (ys[i + 1] - ys[i]) / h[i]).collect();
    if n == 2 {
        return vec![delta[0], delta[0]];
    }
    let two = T::lit(2.0);
    let three = T::lit(3.0);
    let mut d = vec![T::zero(); n];
    for k in 1..n - 1 {
        if delta[k - 1] * delta[k] > T::zero() {
            let w1 = two * h[k] + h[k - 1];
            let w2 = h[k] + two * h[k - 1];
            d[k] = (w1 + w2) / (w1 / delta[k - 1] + w2 / delta[k]);
        }
    }
    let end = |h0: T, h1: T, d0: T, d1: T| {
        let mut s = ((two * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
        if s.signum() != d0.signum() || d0 == T::zero() {
            s = T::zero();
        } else if d0.signum() != d1.signum() && s.abs() > three * d0.abs() {
            s = three * d0;
        }
        s
    };
    d[0] = end(h[0], h[1], delta[0], delta[1]);
    d[n - 1] = end(h[n - 2], h[n - 3], delta[n - 2], delta[n - 3]);
    d
}

/// Cubic Hermite interpolant on segment `i` and its first two derivatives.
fn hermite<T: Real>(xs: &[T], ys: &[T], ds: &[T], i: usize, v: T, order: u8) -> T {
    let h = xs[i + 1] - xs[i];
    let t = (v - xs[i]) / h;
    let (y0, y1, d0, d1) = (ys[i], ys[i + 1], ds[i] * h, ds[i + 1] * h);
    let c = |x: f64| T::lit(x);
    match order {
        0 => {
            let t2 = t * t;
            let t3 = t2 * t;
            (c(2.0) * t3 - c(3.0) * t2 + T::one()) * y0
                + (t3 - c(2.0) * t2 + t) * d0
                + (c(3.0) * t2 - c(2.0) * t3) * y1
                + (t3 - t2) * d1
        }
        1 => {
            let t2 = t * t;
            ((c(6.0) * t2 - c(6.0) * t) * y0
                + (c(3.0) * t2 - c(4.0) * t + T::one()) * d0
                + (c(6.0) * t - c(6.0) * t2) * y1
                + (c(3.0) * t2 - c(2.0) * t) * d1)
                / h
        }
        _ => {
            ((c(12.0) * t - c(6.0)) * y0 + (c(6.0) * t - c(4.0)) * d0 + (c(6.0) - c(12.0) * t) * y1 + (c(6.0) * t - c(2.0)) * d1)
                / (h * h)
        }
    }
}
