//! Quadrature and one-dimensional root finding.

use crate::scalar::Real;

// Gauss-Kronrod 7/15 abscissae and weights on [-1, 1] (QUADPACK qk15).
#[allow(clippy::excessive_precision)]
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];
#[allow(clippy::excessive_precision)]
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

const MAX_DEPTH: u32 = 48;

/// One Gauss-Kronrod panel: returns (kronrod estimate, |kronrod - gauss|).
fn gk15<T: Real, F: Fn(T) -> T>(f: &F, a: T, b: T) -> (T, T) {
    let half = T::lit(0.5);
    let center = (a + b) * half;
    let radius = (b - a) * half;
    let fc = f(center);
    let mut kronrod = fc * T::lit(WGK[7]);
    let mut gauss = fc * T::lit(WG[3]);
    for j in 0..7 {
        let dx = radius * T::lit(XGK[j]);
        let pair = f(center - dx) + f(center + dx);
        kronrod = kronrod + pair * T::lit(WGK[j]);
        if j % 2 == 1 {
            gauss = gauss + pair * T::lit(WG[j / 2]);
        }
    }
    (kronrod * radius, ((kronrod - gauss) * radius).abs())
}

fn adapt<T: Real, F: Fn(T) -> T>(f: &F, a: T, b: T, tol: T, whole: (T, T), depth: u32) -> T {
    let (est, err) = whole;
    let floor = T::epsilon() * T::lit(50.0) * est.abs();
    if err <= tol.max(floor) || depth == 0 || !(b - a > T::epsilon() * (a.abs() + b.abs())) {
        return est;
    }
    let mid = (a + b) * T::lit(0.5);
    let left = gk15(f, a, mid);
    let right = gk15(f, mid, b);
    let half_tol = tol * T::lit(0.5);
    adapt(f, a, mid, half_tol, left, depth - 1) + adapt(f, mid, b, half_tol, right, depth - 1)
}

/// Adaptive Gauss-Kronrod quadrature of `f` over `[a, b]` to absolute
/// tolerance `tol`. Points in `breaks` that fall strictly inside `(a, b)`
/// split the domain first (kinks, narrow peaks).
pub fn integrate<T: Real, F: Fn(T) -> T>(f: F, a: T, b: T, breaks: &[T], tol: T) -> T {
    if a == b {
        return T::zero();
    }
    if b < a {
        return -integrate(f, b, a, breaks, tol);
    }
    let mut pts: Vec<T> = Vec::with_capacity(breaks.len() + 2);
    pts.push(a);
    pts.extend(breaks.iter().copied().filter(|&x| x > a && x < b));
    pts.push(b);
    pts.sort_by(|x, y| x.partial_cmp(y).unwrap());
    pts.dedup();
    let pieces = T::from_usize(pts.len() - 1).unwrap();
    let piece_tol = tol / pieces;
    pts.windows(2)
        .map(|w| {
            let whole = gk15(&f, w[0], w[1]);
            adapt(&f, w[0], w[1], piece_tol, whole, MAX_DEPTH)
        })
        .sum()
}

/// Bisection on a bracket `[lo, hi]` where `f(lo)` and `f(hi)` differ in sign
/// (or one of them is zero). Stops when the bracket is narrower than `xtol`.
pub fn bisect<T: Real, F: Fn(T) -> T>(f: F, mut lo: T, mut hi: T, xtol: T) -> T {
    let mut flo = f(lo);
    let fhi = f(hi);
    if flo == T::zero() {
        return lo;
    }
    if fhi == T::zero() {
        return hi;
    }
    debug_assert!(flo.signum() != fhi.signum(), "bisect called without a bracket");
    let half = T::lit(0.5);
    for _ in 0..200 {
        if hi - lo <= xtol {
            break;
        }
        let mid = (lo + hi) * half;
        if mid <= lo || mid >= hi {
            break;
        }
        let fm = f(mid);
        if fm == T::zero() {
            return mid;
        }
        if fm.signum() == flo.signum() {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    (lo + hi) * half
}

/// A root location found by scanning a grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Bracket<T> {
    /// The function vanishes exactly at this grid point.
    Exact(T),
    /// Strict sign change between two adjacent grid points.
    Between(T, T),
}

/// Locates sign changes of sampled values `ys` on the grid `xs`.
pub fn scan_sign_changes<T: Real>(xs: &[T], ys: &[T]) -> Vec<Bracket<T>> {
    debug_assert_eq!(xs.len(), ys.len());
    let mut out = Vec::new();
    for i in 0..xs.len() {
        if ys[i] == T::zero() {
            out.push(Bracket::Exact(xs[i]));
            continue;
        }
        if i + 1 < xs.len() && ys[i + 1] != T::zero() && ys[i].signum() != ys[i + 1].signum() {
            out.push(Bracket::Between(xs[i], xs[i + 1]));
        }
    }
    out
}

/// Finds every root of `f` on `xs` by sign-change scanning and bisection.
pub fn grid_roots<T: Real, F: Fn(T) -> T>(f: F, xs: &[T], xtol: T) -> Vec<T> {
    let ys: Vec<T> = xs.iter().map(|&x| f(x)).collect();
    scan_sign_changes(xs, &ys)
        .into_iter()
        .map(|b| match b {
            Bracket::Exact(x) => x,
            Bracket::Between(lo, hi) => bisect(&f, lo, hi, xtol),
        })
        .collect()
}
