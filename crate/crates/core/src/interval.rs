//! Interval delegation `[c, 1]`: welfare, the first-order condition, the set
//! of optimal thresholds, comparative statics, and extra veto options.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{DelegationSet, ProposerUtility, TypeDistribution};
use crate::numeric::{bisect, integrate};
use crate::oracle::{best_delegation_structured, DiscreteInstance};
use crate::scalar::{linspace, Field, Real};

pub const WELFARE_TOL: f64 = 1e-10;
pub const SOLVE_GRID: usize = 4001;
pub const ROOT_XTOL: f64 = 1e-10;
pub const G_GRID: usize = 2001;
const FOC_ZERO_REL: f64 = 1e-9;

fn quad_breaks<T: Real>(util: &ProposerUtility<T>, dist: &TypeDistribution<T>) -> Vec<T> {
    let mut b = dist.breakpoints();
    b.extend(util.kinks());
    b
}

fn check_unit<T: Real>(c: T) -> Result<()> {
    if c >= T::zero() && c <= T::one() {
        Ok(())
    } else {
        Err(Error::OutOfDomain { value: c.as_f64(), lo: 0.0, hi: 1.0 })
    }
}

/// Terms of `W(c)` that need no quadrature:
/// `u(0) F(c/2) + u(c) (F(c) - F(c/2)) + u(1) (1 - F(1))`.
fn boundary_terms<T: Real>(util: &ProposerUtility<T>, dist: &TypeDistribution<T>, c: T) -> T {
    let half = dist.cdf(c * T::lit(0.5));
    util.u_unit(T::zero()) * half
        + util.u_unit(c) * (dist.cdf(c) - half)
        + util.u_unit(T::one()) * (T::one() - dist.cdf(T::one()))
}

fn welfare_integrand<'a, T: Real>(util: &'a ProposerUtility<T>, dist: &'a TypeDistribution<T>) -> impl Fn(T) -> T + 'a {
    move |v| util.u_unit(v) * dist.pdf(v)
}

/// Proposer welfare from the menu `[c, 1]` to absolute tolerance `tol`.
pub fn welfare_with_tol<T: Real>(util: &ProposerUtility<T>, dist: &TypeDistribution<T>, c: T, tol: T) -> Result<T> {
    check_unit(c)?;
    let tail = integrate(welfare_integrand(util, dist), c, T::one(), &quad_breaks(util, dist), tol);
    Ok(boundary_terms(util, dist, c) + tail)
}

/// `W(c) = u(0)F(c/2) + u(c)(F(c)-F(c/2)) + ∫_c^1 u f + u(1)(1-F(1))`.
pub fn welfare<T: Real>(util: &ProposerUtility<T>, dist: &TypeDistribution<T>, c: T) -> Result<T> {
    welfare_with_tol(util, dist, c, T::tol_or_eps(WELFARE_TOL, 64.0))
}

/// The two terms of the first-order expression
/// `2u'(c)[F(c)-F(c/2)] - f(c/2)[u(c)-u(0)]`.
fn foc_terms<T: Real>(util: &ProposerUtility<T>, dist: &TypeDistribution<T>, c: T) -> (T, T) {
    let h = c * T::lit(0.5);
    let gain = T::lit(2.0) * util.u_prime_unit(c) * (dist.cdf(c) - dist.cdf(h));
    let loss = dist.pdf(h) * (util.u_unit(c) - util.u_unit(T::zero()));
    (gain, loss)
}

/// `2u'(c)[F(c)-F(c/2)] - f(c/2)[u(c)-u(0)]`, twice `W'(c)`.
pub fn welfare_foc<T: Real>(util: &ProposerUtility<T>, dist: &TypeDistribution<T>, c: T) -> Result<T> {
    check_unit(c)?;
    let (g, l) = foc_terms(util, dist, c);
    Ok(g - l)
}

/// Closed form of [`welfare_foc`] under linear-quadratic utility:
/// `λ (2(1+γ-2γc)[F(c)-F(c/2)] - c(1+γ-γc) f(c/2))`.
pub fn welfare_foc_lq<T: Real>(util: &ProposerUtility<T>, dist: &TypeDistribution<T>, c: T) -> Result<T> {
    check_unit(c)?;
    let g = util.gamma().ok_or(Error::NotLq)?;
    let one = T::one();
    let h = c * T::lit(0.5);
    let v = T::lit(2.0) * (one + g - T::lit(2.0) * g * c) * (dist.cdf(c) - dist.cdf(h)) - c * (one + g - g * c) * dist.pdf(h);
    Ok(v * util.scale())
}

/// Sign of the first-order expression, treating values within rounding of
/// zero (relative to the size of its two terms) as zero.
fn foc_sign<T: Real>(util: &ProposerUtility<T>, dist: &TypeDistribution<T>, c: T) -> i8 {
    let (g, l) = foc_terms(util, dist, c);
    let d = g - l;
    let tol = T::tol_or_eps(FOC_ZERO_REL, 16.0) * (g.abs() + l.abs());
    if d.abs() <= tol {
        0
    } else if d > T::zero() {
        1
    } else {
        -1
    }
}

/// Optimal interval thresholds.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IntervalSolutionSet<T> {
    /// Disjoint closed pieces `[lo, hi]` of optimal thresholds, sorted.
    pub c_set: Vec<(T, T)>,
    pub w_star: T,
    /// `c_set` has positive length and welfare is constant on it.
    pub flat: bool,
    /// Isolated interior zeros of the first-order expression.
    pub foc_roots: Vec<T>,
    /// Stretches where the first-order expression vanishes identically.
    pub flat_runs: Vec<(T, T)>,
    pub grid_resolution: usize,
}

impl<T: Real> IntervalSolutionSet<T> {
    pub fn c_lo(&self) -> T {
        self.c_set[0].0
    }

    pub fn c_hi(&self) -> T {
        self.c_set[self.c_set.len() - 1].1
    }

    pub fn contains(&self, c: T, tol: T) -> bool {
        self.c_set.iter().any(|&(lo, hi)| c >= lo - tol && c <= hi + tol)
    }

    /// `eps_opt = 1e-9 (1 + |w_star|)`.
    pub fn eps_opt(&self) -> T {
        optimality_tol(self.w_star)
    }
}

fn optimality_tol<T: Real>(w: T) -> T {
    T::tol_or_eps(1e-9, 64.0) * (T::one() + w.abs())
}

/// Welfare on an evenly spaced grid of `n` thresholds, by accumulating
/// per-cell integrals from the right.
pub fn welfare_grid<T: Real>(util: &ProposerUtility<T>, dist: &TypeDistribution<T>, n: usize) -> (Vec<T>, Vec<T>) {
    let cs = linspace(T::zero(), T::one(), n.max(2));
    let breaks = quad_breaks(util, dist);
    let cell_tol = T::tol_or_eps(WELFARE_TOL, 64.0) / T::from_usize(cs.len()).unwrap();
    let f = welfare_integrand(util, dist);
    let cells: Vec<T> = cs.windows(2).map(|w| integrate(&f, w[0], w[1], &breaks, cell_tol)).collect();
    let mut tail = vec![T::zero(); cs.len()];
    for k in (0..cells.len()).rev() {
        tail[k] = tail[k + 1] + cells[k];
    }
    let ws = cs.iter().zip(&tail).map(|(&c, &t)| boundary_terms(util, dist, c) + t).collect();
    (cs, ws)
}

/// Solves `max_c W(c)` over `[0, 1]`.
///
/// Scans the first-order expression on the grid, refines every sign change
/// by bisection, and compares the resulting interior candidates, the
/// endpoints and stretches where the expression vanishes identically.
/// Thresholds within `eps_opt` of the best welfare form `c_set`.
pub fn solve_interval<T: Real>(util: &ProposerUtility<T>, dist: &TypeDistribution<T>) -> IntervalSolutionSet<T> {
    solve_interval_with_grid(util, dist, SOLVE_GRID)
}

pub fn solve_interval_with_grid<T: Real>(
    util: &ProposerUtility<T>,
    dist: &TypeDistribution<T>,
    n: usize,
) -> IntervalSolutionSet<T> {
    let n = n.max(3);
    let (cs, ws) = welfare_grid(util, dist, n);
    let signs: Vec<i8> = cs.iter().map(|&c| if c > T::zero() { foc_sign(util, dist, c) } else { 0 }).collect();
    let xtol = T::tol_or_eps(ROOT_XTOL, 4.0);
    let tight = T::tol_or_eps(1e-12, 64.0);
    let foc = |c: T| {
        let (g, l) = foc_terms(util, dist, c);
        g - l
    };

    let mut roots = Vec::new();
    let mut runs = Vec::new();
    let mut i = 1;
    while i < n {
        if signs[i] == 0 {
            let start = i;
            while i + 1 < n && signs[i + 1] == 0 {
                i += 1;
            }
            if i > start {
                runs.push((start, i));
            } else if cs[i] < T::one() {
                roots.push(cs[i]);
            }
        } else if i + 1 < n && signs[i + 1] != 0 && signs[i] != signs[i + 1] {
            roots.push(bisect(foc, cs[i], cs[i + 1], xtol));
        }
        i += 1;
    }

    // candidate points with precise welfare
    let mut points: Vec<(T, T)> = Vec::new();
    for &c in roots.iter().chain([T::zero(), T::one()].iter()) {
        points.push((c, welfare_with_tol(util, dist, c, tight).expect("c in [0,1]")));
    }
    let mut w_star = points.iter().map(|p| p.1).fold(T::neg_infinity(), T::max);
    for &(a, b) in &runs {
        for &w in &ws[a..=b] {
            w_star = w_star.max(w);
        }
    }
    let grid_best = (0..n).max_by(|&a, &b| ws[a].partial_cmp(&ws[b]).unwrap()).unwrap();
    let eps = optimality_tol(w_star.max(ws[grid_best]));
    if ws[grid_best] > w_star + eps {
        // a root was missed between grid points; keep the grid optimum
        points.push((cs[grid_best], ws[grid_best]));
        w_star = ws[grid_best];
    }
    let eps = optimality_tol(w_star);

    let mut pieces: Vec<(T, T)> = points.iter().filter(|p| p.1 >= w_star - eps).map(|p| (p.0, p.0)).collect();
    let mut run_values = Vec::new();
    for &(a, b) in &runs {
        let mut k = a;
        while k <= b {
            if ws[k] >= w_star - eps {
                let s = k;
                while k < b && ws[k + 1] >= w_star - eps {
                    k += 1;
                }
                pieces.push((cs[s], cs[k]));
                run_values.extend_from_slice(&ws[s..=k]);
            }
            k += 1;
        }
    }
    pieces.sort_by(|x, y| x.0.partial_cmp(&y.0).unwrap());
    let step = T::one() / T::from_usize(n - 1).unwrap();
    let mut c_set: Vec<(T, T)> = Vec::new();
    for p in pieces {
        match c_set.last_mut() {
            Some(last) if p.0 <= last.1 + step * T::lit(1.000001) => last.1 = last.1.max(p.1),
            _ => c_set.push(p),
        }
    }
    let positive_length = c_set.iter().any(|p| p.1 > p.0);
    let spread = run_values.iter().fold(T::zero(), |m, &w| m.max((w - w_star).abs()));
    let flat = positive_length && spread <= eps;
    roots.sort_by(|a, b| a.partial_cmp(b).unwrap());
    IntervalSolutionSet {
        c_set,
        w_star,
        flat,
        foc_roots: roots,
        flat_runs: runs.iter().map(|&(a, b)| (cs[a], cs[b])).collect(),
        grid_resolution: n,
    }
}

/// Grid values of `G(v) = kappa F(v) - u'(v) f(v)` and `G'(v)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GCurve<T> {
    pub v: Vec<T>,
    pub g: Vec<T>,
    pub g_prime: Vec<T>,
}

impl<T: Real> GCurve<T> {
    /// `G'` changes sign at most once, from negative to positive, ignoring
    /// values within `tol` of zero.
    pub fn is_quasiconvex(&self, tol: T) -> bool {
        let mut seen_positive = false;
        for &d in &self.g_prime {
            if d > tol {
                seen_positive = true;
            } else if d < -tol && seen_positive {
                return false;
            }
        }
        true
    }

    pub fn is_nondecreasing(&self, tol: T) -> bool {
        self.g.windows(2).all(|w| w[1] - w[0] >= -tol)
    }

    /// Magnitude of `G'` on the grid, for scaling tolerances.
    pub fn g_prime_scale(&self) -> T {
        self.g_prime.iter().fold(T::zero(), |m, d| m.max(d.abs()))
    }
}

/// `G'(v)`; closed form `λ (4γ f(v) - (1-γ+2γ(1-v)) f'(v))` under LQ.
pub fn g_prime<T: Real>(util: &ProposerUtility<T>, dist: &TypeDistribution<T>, v: T) -> Result<T> {
    let g = util.gamma().ok_or(Error::NotLq)?;
    let one = T::one();
    let raw = T::lit(4.0) * g * dist.pdf(v) - (one - g + T::lit(2.0) * g * (one - v)) * dist.pdf_prime(v);
    Ok(raw * util.scale())
}

pub fn g_curve<T: Real>(util: &ProposerUtility<T>, dist: &TypeDistribution<T>) -> GCurve<T> {
    g_curve_with_grid(util, dist, G_GRID)
}

pub fn g_curve_with_grid<T: Real>(util: &ProposerUtility<T>, dist: &TypeDistribution<T>, n: usize) -> GCurve<T> {
    let v = linspace(T::zero(), T::one(), n.max(3));
    let kappa = util.kappa();
    let g: Vec<T> = v.iter().map(|&x| crate::conditions::g_value(util, dist, kappa, x)).collect();
    let g_prime = if util.is_lq() {
        v.iter().map(|&x| g_prime(util, dist, x).expect("LQ")).collect()
    } else {
        let m = v.len();
        (0..m)
            .map(|i| {
                let (a, b) = (i.saturating_sub(1), (i + 1).min(m - 1));
                (g[b] - g[a]) / (v[b] - v[a])
            })
            .collect()
    };
    GCurve { v, g, g_prime }
}

/// `|∫_{c/2}^c (v-c) G'(v) dv - W'(c)|` with `W'` a central difference of
/// step `1e-5`. Requires linear-quadratic utility and `c` in `(0, 1)`.
pub fn foc_integral_identity_check<T: Real>(util: &ProposerUtility<T>, dist: &TypeDistribution<T>, c: T) -> Result<T> {
    if !util.is_lq() {
        return Err(Error::NotLq);
    }
    let h = T::lit(1e-5);
    if !(c - h >= T::zero() && c + h <= T::one()) {
        return Err(Error::OutOfDomain { value: c.as_f64(), lo: 1e-5, hi: 1.0 - 1e-5 });
    }
    let breaks = quad_breaks(util, dist);
    let tol = T::tol_or_eps(1e-13, 64.0);
    let lhs = integrate(|v| (v - c) * g_prime(util, dist, v).expect("LQ"), c * T::lit(0.5), c, &breaks, tol);
    // W(c+h) - W(c-h) without cancelling two long integrals
    let mid = integrate(welfare_integrand(util, dist), c - h, c + h, &breaks, tol);
    let dw = (boundary_terms(util, dist, c + h) - boundary_terms(util, dist, c - h) - mid) / (h + h);
    Ok((lhs - dw).abs())
}

/// Swept parameter of the LQ-normal family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepParam {
    Gamma,
    Mu,
    Sigma,
}

/// Base point `(gamma, mu, sigma)` of an LQ utility with normal types.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LqNormal<T> {
    pub gamma: T,
    pub mu: T,
    pub sigma: T,
}

impl<T: Real> LqNormal<T> {
    pub fn with(self, param: SweepParam, value: T) -> Self {
        match param {
            SweepParam::Gamma => Self { gamma: value, ..self },
            SweepParam::Mu => Self { mu: value, ..self },
            SweepParam::Sigma => Self { sigma: value, ..self },
        }
    }

    pub fn build(&self) -> Result<(ProposerUtility<T>, TypeDistribution<T>)> {
        Ok((ProposerUtility::lq(self.gamma)?, TypeDistribution::normal(self.mu, self.sigma)?))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepRow<T> {
    pub param: T,
    pub c_lo: T,
    pub c_hi: T,
    pub w_star: T,
}

/// Solves the interval problem at every parameter value (in parallel) and
/// returns rows sorted by parameter.
pub fn sweep<T: Real>(base: LqNormal<T>, param: SweepParam, values: &[T]) -> Result<Vec<SweepRow<T>>> {
    sweep_with_grid(base, param, values, SOLVE_GRID)
}

pub fn sweep_with_grid<T: Real>(base: LqNormal<T>, param: SweepParam, values: &[T], n: usize) -> Result<Vec<SweepRow<T>>> {
    let mut values = values.to_vec();
    values.sort_by(|a, b| a.partial_cmp(b).unwrap());
    values
        .par_iter()
        .map(|&x| {
            let (u, d) = base.with(param, x).build()?;
            let s = solve_interval_with_grid(&u, &d, n);
            Ok(SweepRow { param: x, c_lo: s.c_lo(), c_hi: s.c_hi(), w_star: s.w_star })
        })
        .collect()
}

/// Affine change of coordinates `x = d + y (e - d)` mapping a subproblem with
/// veto option `d` and Proposer ideal `e` onto the standard one.
struct Subproblem<T> {
    d: T,
    e: T,
}

impl<T: Real + Field> Subproblem<T> {
    fn to_x(&self, y: T) -> T {
        self.d + y * (self.e - self.d)
    }

    fn solve(&self, util: &ProposerUtility<T>, dist: &TypeDistribution<T>, n: usize) -> Result<DelegationSet<T>> {
        let flip = self.e < self.d;
        let grid = linspace(T::lit(0.0), T::lit(1.0), n);
        let types = linspace(T::lit(0.0), T::lit(1.0), 2 * (n - 1) + 1);
        let cdf = |y: T| {
            let f = dist.cdf(self.to_x(y));
            if flip {
                T::lit(1.0) - f
            } else {
                f
            }
        };
        let inst = DiscreteInstance::from_fns(grid.clone(), types, |y| util.u(self.to_x(y)), cdf)?;
        let best = best_delegation_structured(&inst);
        let mut pieces: Vec<(T, T)> = Vec::new();
        let mut run: Option<(usize, usize)> = None;
        for &k in &best.menu {
            run = match run {
                Some((s, e)) if k == e + 1 => Some((s, k)),
                Some((s, e)) => {
                    pieces.push((grid[s], grid[e]));
                    Some((k, k))
                }
                None => Some((k, k)),
            };
        }
        if let Some((s, e)) = run {
            pieces.push((grid[s], grid[e]));
        }
        let mapped = pieces
            .into_iter()
            .map(|(a, b)| {
                let (xa, xb) = (self.to_x(a), self.to_x(b));
                (num_traits::Float::min(xa, xb), num_traits::Float::max(xa, xb))
            })
            .collect();
        DelegationSet::new(mapped)
    }
}

/// Optimal menu when Vetoer can veto to either `0` or `a_star > 0`, obtained
/// by solving one subproblem on each side of `min(a_star, 1)` on an
/// `n`-point action grid and taking the union. Each subproblem is mapped
/// affinely onto the standard one (veto option at `0`, ideal at `1`) and
/// solved by the structured oracle search.
pub fn stitch_with_default<T: Real + Field>(
    util: &ProposerUtility<T>,
    dist: &TypeDistribution<T>,
    a_star: T,
    n: usize,
) -> Result<DelegationSet<T>> {
    if !(a_star > T::lit(0.0)) || !num_traits::Float::is_finite(a_star) {
        return Err(Error::BadDefault(a_star.as_f64()));
    }
    if n < 3 {
        return Err(Error::BadInstance("stitching needs at least three grid actions".into()));
    }
    let one = T::lit(1.0);
    let (first, second) = if a_star > one {
        (Subproblem { d: T::lit(0.0), e: one }, Some(Subproblem { d: a_star, e: one }))
    } else if a_star < one {
        (Subproblem { d: T::lit(0.0), e: a_star }, Some(Subproblem { d: a_star, e: one }))
    } else {
        (Subproblem { d: T::lit(0.0), e: one }, None)
    };
    let mut set = first.solve(util, dist, n)?;
    if let Some(s) = second {
        set = set.union(&s.solve(util, dist, n)?);
    }
    Ok(set)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lq(g: f64) -> ProposerUtility<f64> {
        ProposerUtility::lq(g).unwrap()
    }

    #[test]
    fn welfare_closed_forms() {
        let u = TypeDistribution::uniform01();
        assert!((welfare(&lq(0.0), &u, 0.5).unwrap() + 0.5).abs() < 1e-12);
        assert!((welfare(&lq(1.0), &u, 0.0).unwrap() + 1.0 / 3.0).abs() < 1e-12);
        assert!((welfare(&lq(0.0), &u, 0.0).unwrap() + 0.5).abs() < 1e-12);
        assert!(welfare(&lq(0.0), &u, 1.5).is_err());
    }

    #[test]
    fn welfare_matches_menu_evaluation() {
        let u = lq(0.3);
        let d = TypeDistribution::normal(0.45, 0.4).unwrap();
        for &c in &[0.0, 0.3, 0.8, 1.0] {
            let a = welfare(&u, &d, c).unwrap();
            let b = DelegationSet::interval(c, 1.0).welfare(&u, &d).unwrap();
            assert!((a - b).abs() < 1e-10, "c = {c}");
        }
    }

    #[test]
    fn foc_values() {
        let u = TypeDistribution::uniform01();
        // -c^2 at c = 1/2
        assert!((welfare_foc(&lq(1.0), &u, 0.5).unwrap() + 0.25).abs() < 1e-15);
        assert!(welfare_foc(&lq(0.0), &u, 0.37).unwrap().abs() < 1e-15);
        let d = TypeDistribution::normal(0.45, 1.0).unwrap();
        for &g in &[0.0, 0.4, 1.0] {
            for &c in &[0.1, 0.5, 0.9, 1.0] {
                let a = welfare_foc(&lq(g), &d, c).unwrap();
                let b = welfare_foc_lq(&lq(g), &d, c).unwrap();
                assert!((a - b).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn solve_uniform_cases() {
        let u = TypeDistribution::uniform01();
        let flat = solve_interval(&lq(0.0), &u);
        assert!(flat.flat);
        assert_eq!(flat.c_set, vec![(0.0, 1.0)]);
        assert!((flat.w_star + 0.5).abs() < 1e-10);
        let quad = solve_interval(&lq(1.0), &u);
        assert_eq!(quad.c_set, vec![(0.0, 0.0)]);
        assert!(!quad.flat);
        assert!((quad.w_star + 1.0 / 3.0).abs() < 1e-9);
    }

    #[test]
    fn solve_interior_normal() {
        let d = TypeDistribution::normal(0.45, 1.0).unwrap();
        let s = solve_interval(&lq(0.0), &d);
        assert_eq!(s.c_set.len(), 1);
        let c = s.c_lo();
        assert!(c > 0.0 && c < 1.0 && s.c_hi() == c);
        assert!(welfare_foc(&lq(0.0), &d, c).unwrap().abs() < 1e-8);
    }

    #[test]
    fn g_curve_examples() {
        let u = TypeDistribution::uniform01();
        let g = g_curve(&lq(1.0), &u);
        for (v, gv) in g.v.iter().zip(&g.g) {
            assert!((gv - (4.0 * v - 2.0)).abs() < 1e-12);
        }
        let g0 = g_curve(&lq(0.0), &u);
        assert!(g0.g.iter().all(|&x| (x + 1.0).abs() < 1e-15));
        let dec = g_curve(&lq(0.0), &TypeDistribution::normal(-0.5, 1.0).unwrap());
        assert!(dec.is_nondecreasing(0.0));
        assert!(dec.is_quasiconvex(1e-12));
    }

    #[test]
    fn identity_examples() {
        let u = TypeDistribution::uniform01();
        assert!(foc_integral_identity_check(&lq(1.0), &u, 0.5).unwrap() < 1e-6);
        assert!(foc_integral_identity_check(&lq(0.0), &u, 0.7).unwrap() < 1e-6);
        let d = TypeDistribution::normal(0.45, 1.0).unwrap();
        assert!(foc_integral_identity_check(&lq(0.5), &d, 0.3).unwrap() < 1e-6);
    }

    #[test]
    fn stitching_rejects_nonpositive_default() {
        let u = TypeDistribution::uniform01();
        assert_eq!(stitch_with_default(&lq(0.0), &u, 0.0, 11), Err(Error::BadDefault(0.0)));
    }
}
