//! Scalar abstractions.
//!
//! The continuous model (utilities, densities, quadrature, root finding) is
//! written against [`Real`], implemented for `f32` and `f64`. The discrete
//! oracle and its simplex solver only need ordered-field arithmetic and are
//! written against [`Field`], which additionally covers exact rationals.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Float, FloatConst, FromPrimitive, Num, Signed, ToPrimitive, Zero};

/// Floating-point scalar used by the continuous model.
pub trait Real:
    Float + FloatConst + FromPrimitive + Debug + Display + Default + Sum + Send + Sync + serde::Serialize + 'static
{
    /// Converts an `f64` literal. Panics only if the target cannot represent
    /// finite `f64` values at all, which never happens for `f32`/`f64`.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("finite literal")
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    /// Complementary error function.
    fn erfc(self) -> Self;

    /// Machine-precision-aware absolute tolerance: `max(tol, k * eps)`.
    #[inline]
    fn tol_or_eps(tol: f64, k: f64) -> Self {
        let floor = Self::epsilon() * Self::lit(k);
        Self::lit(tol).max(floor)
    }
}

impl Real for f64 {
    #[inline]
    fn erfc(self) -> Self {
        libm::erfc(self)
    }
}

impl Real for f32 {
    #[inline]
    fn erfc(self) -> Self {
        libm::erfcf(self)
    }
}

/// Ordered field used by the linear-programming oracle.
///
/// `tolerance()` is the pivot/feasibility threshold: zero for exact types.
pub trait Field: Clone + PartialOrd + Num + Signed + Debug + Display + Send + Sync {
    fn tolerance() -> Self;

    /// Exact conversion from `f64` (every finite double is a dyadic rational).
    fn from_f64_exact(x: f64) -> Option<Self>;

    fn to_f64_lossy(&self) -> f64;

    fn is_exact() -> bool {
        Self::tolerance().is_zero()
    }
}

impl Field for f64 {
    fn tolerance() -> Self {
        1e-11
    }
    fn from_f64_exact(x: f64) -> Option<Self> {
        x.is_finite().then_some(x)
    }
    fn to_f64_lossy(&self) -> f64 {
        *self
    }
}

impl Field for f32 {
    fn tolerance() -> Self {
        1e-5
    }
    fn from_f64_exact(x: f64) -> Option<Self> {
        x.is_finite().then_some(x as f32)
    }
    fn to_f64_lossy(&self) -> f64 {
        *self as f64
    }
}

impl Field for BigRational {
    fn tolerance() -> Self {
        BigRational::zero()
    }
    fn from_f64_exact(x: f64) -> Option<Self> {
        BigRational::from_float(x)
    }
    fn to_f64_lossy(&self) -> f64 {
        // Scale down big numerators/denominators before converting.
        self.to_f64().unwrap_or_else(|| {
            let n: &BigInt = self.numer();
            let d: &BigInt = self.denom();
            let shift = n.bits().max(d.bits()).saturating_sub(1000);
            let n = (n >> shift).to_f64().unwrap_or(f64::NAN);
            let d = (d >> shift).to_f64().unwrap_or(f64::NAN);
            n / d
        })
    }
}

/// Evenly spaced grid of `n >= 2` points on `[lo, hi]` with exact endpoints.
pub fn linspace<T: Real>(lo: T, hi: T, n: usize) -> Vec<T> {
    assert!(n >= 2, "linspace needs at least two points");
    let steps = T::from_usize(n - 1).unwrap();
    (0..n)
        .map(|i| {
            if i == n - 1 {
                hi
            } else {
                let t = T::from_usize(i).unwrap() / steps;
                lo + (hi - lo) * t
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    #[test]
    fn erfc_matches_known_values() {
        assert!((Real::erfc(0.0f64) - 1.0).abs() < 1e-16);
        assert!((Real::erfc(1.0f64) - 0.157_299_207_050_285_13).abs() < 1e-15);
        assert!((Real::erfc(-1.0f32) - 1.842_700_8).abs() < 1e-6);
    }

    #[test]
    fn rational_conversion_is_exact() {
        let r = BigRational::from_f64_exact(0.1).unwrap();
        assert_eq!(r.to_f64_lossy(), 0.1);
        assert!(BigRational::is_exact());
        assert!(!f64::is_exact());
        assert_eq!(BigRational::one().to_f64_lossy(), 1.0);
    }

    #[test]
    fn linspace_hits_endpoints() {
        let g = linspace(0.0f64, 1.0, 11);
        assert_eq!(g.len(), 11);
        assert_eq!(g[0], 0.0);
        assert_eq!(g[10], 1.0);
        assert!((g[3] - 0.3).abs() < 1e-15);
    }
}
