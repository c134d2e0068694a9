mod common;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use veto_delegation::conditions::check_logconcave;
use veto_delegation::interval::*;
use veto_delegation::model::{DelegationSet, ProposerUtility, TypeDistribution};
use veto_delegation::scalar::linspace;

fn lq(g: f64) -> ProposerUtility<f64> {
    ProposerUtility::lq(g).unwrap()
}

fn normal(mu: f64, sigma: f64) -> TypeDistribution<f64> {
    TypeDistribution::normal(mu, sigma).unwrap()
}

fn uniform() -> TypeDistribution<f64> {
    TypeDistribution::uniform01()
}

#[test]
fn welfare_examples() {
    assert!((welfare(&lq(0.0), &uniform(), 0.5).unwrap() + 0.5).abs() < 1e-10);
    assert!((welfare(&lq(1.0), &uniform(), 0.0).unwrap() + 1.0 / 3.0).abs() < 1e-10);
    assert!((welfare(&lq(0.0), &uniform(), 0.0).unwrap() + 0.5).abs() < 1e-10);
}

#[test]
fn welfare_foc_examples() {
    // 2(2 - 2c)(c/2) - c(2 - c) = -c^2
    assert!((welfare_foc(&lq(1.0), &uniform(), 0.5).unwrap() + 0.25).abs() < 1e-12);
    for c in [0.1, 0.5, 0.93] {
        assert!(welfare_foc(&lq(0.0), &uniform(), c).unwrap().abs() < 1e-12);
    }
    let d = normal(0.45, 1.0);
    let c = solve_interval(&lq(0.0), &d).c_lo();
    assert!(welfare_foc(&lq(0.0), &d, c).unwrap().abs() < 1e-8);
}

#[test]
fn foc_forms_agree() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..200 {
        let u = lq(rng.gen_range(0.0..=1.0));
        let d = normal(rng.gen_range(-1.0..2.0), rng.gen_range(0.1..2.0));
        let c = rng.gen_range(0.001..1.0);
        let (a, b) = (welfare_foc(&u, &d, c).unwrap(), welfare_foc_lq(&u, &d, c).unwrap());
        assert!((a - b).abs() < 1e-12 * (1.0 + a.abs()));
    }
}

#[test]
fn solve_examples() {
    let flat = solve_interval(&lq(0.0), &uniform());
    assert_eq!(flat.c_set, vec![(0.0, 1.0)]);
    assert!(flat.flat);
    assert!((flat.w_star + 0.5).abs() < 1e-9);
    let quad = solve_interval(&lq(1.0), &uniform());
    assert_eq!(quad.c_set, vec![(0.0, 0.0)]);
    assert!((quad.w_star + 1.0 / 3.0).abs() < 1e-9);
}

#[test]
fn threshold_approaches_twice_the_mean_as_noise_vanishes() {
    let c = |s: f64| solve_interval(&lq(0.0), &normal(0.45, s)).c_lo();
    let cs: Vec<f64> = [0.1, 0.03, 0.01, 0.003, 0.001, 0.0003].iter().map(|&s| c(s)).collect();
    assert!(cs.windows(2).all(|w| w[1] > w[0]), "{cs:?}");
    assert!((cs[5] - 0.9).abs() < 0.01, "{cs:?}");
    assert!(cs.iter().all(|&x| x < 0.9));
}

#[test]
fn g_curve_examples() {
    let g = g_curve(&lq(1.0), &uniform());
    for (v, gv) in g.v.iter().zip(&g.g) {
        assert!((gv - (4.0 * v - 2.0)).abs() < 1e-12);
    }
    assert!(g.g_prime.iter().all(|&d| (d - 4.0).abs() < 1e-12));
    let flat = g_curve(&lq(0.0), &uniform());
    assert!(flat.g.iter().all(|&x| (x + 1.0).abs() < 1e-15));
    assert!(g_curve(&lq(0.0), &normal(-0.5, 1.0)).is_nondecreasing(0.0));
}

#[test]
fn identity_examples() {
    assert!(foc_integral_identity_check(&lq(1.0), &uniform(), 0.5).unwrap() < 1e-6);
    assert!(foc_integral_identity_check(&lq(0.5), &normal(0.45, 1.0), 0.3).unwrap() < 1e-6);
    assert!(foc_integral_identity_check(&lq(0.0), &uniform(), 0.7).unwrap() < 1e-6);
    assert!(foc_integral_identity_check(&ProposerUtility::tabulate_fn(|a: f64| -(1.0 - a).abs(), -1.0, 2.0, 31).unwrap(), &uniform(), 0.5).is_err());
}

#[test]
fn identity_on_random_instances() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for _ in 0..20 {
        let g = rng.gen_range(0.0..=1.0);
        let (m, s) = (rng.gen_range(-0.5..1.5), rng.gen_range(0.2..1.5));
        let c = rng.gen_range(0.05..0.95);
        let err = foc_integral_identity_check(&lq(g), &normal(m, s), c).unwrap();
        assert!(err < 1e-6, "g={g} mu={m} sigma={s} c={c}: {err}");
    }
}

fn base() -> LqNormal<f64> {
    LqNormal { gamma: 0.0, mu: 0.45, sigma: 1.0 }
}

#[test]
fn sweep_gamma_is_nonincreasing() {
    let rows = sweep(base(), SweepParam::Gamma, &linspace(0.0, 1.0, 11)).unwrap();
    assert_eq!(rows.len(), 11);
    assert!(rows.windows(2).all(|w| w[1].c_lo <= w[0].c_lo + 1e-9 && w[1].param > w[0].param));
    assert!(rows[0].c_lo > rows[10].c_lo);
}

#[test]
fn sweep_mu_is_nondecreasing() {
    let rows = sweep(base(), SweepParam::Mu, &linspace(0.0, 1.0, 11)).unwrap();
    assert!(rows.windows(2).all(|w| w[1].c_lo >= w[0].c_lo - 1e-9));
    assert!(rows[10].c_lo > rows[0].c_lo);
}

#[test]
fn sweep_sigma_rises_toward_the_limit() {
    let sigmas: Vec<f64> = linspace(0.0, -2.0, 11).into_iter().map(|e| 10f64.powf(e)).collect();
    let rows = sweep(base(), SweepParam::Sigma, &sigmas).unwrap();
    // sorted by sigma ascending, so thresholds fall along the table
    assert!(rows.windows(2).all(|w| w[1].param > w[0].param && w[1].c_lo <= w[0].c_lo + 1e-9));
    assert!(rows[0].c_lo > 0.8 && rows[0].c_lo < 0.9);
}

#[test]
fn sweep_rows_are_sorted_regardless_of_input_order() {
    let a = sweep(base(), SweepParam::Gamma, &[0.9, 0.1, 0.5]).unwrap();
    let b = sweep(base(), SweepParam::Gamma, &[0.1, 0.5, 0.9]).unwrap();
    assert_eq!(a, b);
}

#[test]
fn scale_invariance() {
    for c in common::battery() {
        let s = solve_interval(&c.util, &c.dist);
        for lambda in [0.5, 3.0] {
            let t = solve_interval(&c.util.scaled(lambda).unwrap(), &c.dist);
            assert_eq!(s.c_set.len(), t.c_set.len(), "{}", c.name);
            for (a, b) in s.c_set.iter().zip(&t.c_set) {
                assert!((a.0 - b.0).abs() < 1e-9 && (a.1 - b.1).abs() < 1e-9, "{} {lambda}", c.name);
            }
            assert!((t.w_star - lambda * s.w_star).abs() < 1e-9 * (1.0 + t.w_star.abs()));
        }
    }
}

fn quasiconcave(w: &[f64], tol: f64) -> bool {
    // nondecreasing up to the first strict fall, nonincreasing after
    let mut falling = false;
    for p in w.windows(2) {
        let d = p[1] - p[0];
        if d < -tol {
            falling = true;
        } else if d > tol && falling {
            return false;
        }
    }
    true
}

#[test]
fn welfare_quasiconcave_and_g_quasiconvex_under_logconcavity() {
    for c in common::logconcave_battery() {
        assert!(check_logconcave(&c.dist).verdict, "{}", c.name);
        let (_, w) = welfare_grid(&c.util, &c.dist, 2001);
        assert!(quasiconcave(&w, 1e-9), "{}", c.name);
        let g = g_curve(&c.util, &c.dist);
        assert!(g.is_quasiconvex(1e-9 * (1.0 + g.g_prime_scale())), "{}", c.name);
        assert_eq!(solve_interval(&c.util, &c.dist).c_set.len(), 1, "{}", c.name);
    }
}

#[test]
fn g_prime_signs_at_threshold() {
    for c in common::battery() {
        let s = solve_interval(&c.util, &c.dist);
        let tol = 1e-6 * (1.0 + g_curve(&c.util, &c.dist).g_prime_scale());
        for &(lo, hi) in &s.c_set {
            for cs in [lo, hi] {
                if cs > 0.0 {
                    assert!(g_prime(&c.util, &c.dist, cs / 2.0).unwrap() <= tol, "{} c*={cs}", c.name);
                }
                if cs < 1.0 {
                    assert!(g_prime(&c.util, &c.dist, cs).unwrap() >= -tol, "{} c*={cs}", c.name);
                }
            }
        }
    }
}

#[test]
fn w_star_matches_dense_grid_max() {
    for c in common::battery() {
        let s = solve_interval(&c.util, &c.dist);
        let mut grid = linspace(0.0, 1.0, 4001);
        for &(lo, hi) in &s.c_set {
            for x in [lo, hi] {
                grid.extend(linspace((x - 1e-3).max(0.0), (x + 1e-3).min(1.0), 2001));
            }
        }
        let best = grid.iter().map(|&x| welfare(&c.util, &c.dist, x).unwrap()).fold(f64::NEG_INFINITY, f64::max);
        assert!((s.w_star - best).abs() < 1e-9, "{}: {} vs {best}", c.name, s.w_star);
        for &(lo, hi) in &s.c_set {
            assert!(welfare(&c.util, &c.dist, lo).unwrap() >= s.w_star - s.eps_opt());
            assert!(welfare(&c.util, &c.dist, hi).unwrap() >= s.w_star - s.eps_opt());
        }
    }
}

#[test]
fn threshold_at_most_twice_the_mode() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..30 {
        let (m, s) = (rng.gen_range(0.02..1.0), rng.gen_range(0.05..1.5));
        let d = normal(m, s);
        let bound = (2.0 * d.mode().unwrap()).min(1.0);
        let sol = solve_interval(&lq(0.0), &d);
        assert!(sol.c_hi() <= bound + 1e-9, "mu={m} sigma={s}: {} > {bound}", sol.c_hi());
    }
}

#[test]
fn stitching_above_one_leaves_solution_unchanged() {
    let (u, d) = (lq(0.0), normal(0.45, 1.0));
    let c = solve_interval(&u, &d).c_lo();
    let n = 81;
    let h = 1.0 / (n - 1) as f64;
    let set = stitch_with_default(&u, &d, 1.5, n).unwrap();
    assert!(set.approx_eq(&DelegationSet::interval(c, 1.0), h), "{set:?} vs c* = {c}");
}

#[test]
fn stitching_inside_the_interval_leaves_solution_unchanged() {
    let (u, d) = (lq(0.0), normal(0.45, 1.0));
    let c = solve_interval(&u, &d).c_lo();
    let n = 81;
    for a_star in [c + 0.05, 0.9, 1.0] {
        let set = stitch_with_default(&u, &d, a_star, n).unwrap();
        let h = a_star.max(1.0 - a_star) / (n - 1) as f64;
        // a gap next to a* is immaterial: Vetoer can pick a* by vetoing
        let merged = close_gaps(&set, 2.0 * h);
        assert!(merged.approx_eq(&DelegationSet::interval(c, 1.0), 2.0 * h), "a* = {a_star}: {set:?} vs c* = {c}");
    }
}

fn close_gaps(set: &DelegationSet<f64>, gap: f64) -> DelegationSet<f64> {
    let mut out: Vec<(f64, f64)> = Vec::new();
    for &(lo, hi) in set.pieces() {
        match out.last_mut() {
            Some(last) if lo - last.1 <= gap => last.1 = last.1.max(hi),
            _ => out.push((lo, hi)),
        }
    }
    DelegationSet::new(out).unwrap()
}

#[test]
fn stitching_uniform_with_far_default() {
    let set = stitch_with_default(&lq(0.0), &uniform(), 2.0, 11).unwrap();
    // full delegation below 1; no type lies above 1, so any piece on [1, 2) is optimal there
    let pieces = set.pieces();
    assert!((pieces[0].0 - 0.1).abs() < 1e-12, "{set:?}");
    assert!(set.contains(1.0) && pieces.iter().all(|&(_, hi)| hi < 2.0), "{set:?}");
    let below = DelegationSet::interval(0.0, 1.0).welfare(&lq(0.0), &uniform()).unwrap();
    assert!((set.welfare(&lq(0.0), &uniform()).unwrap() - below).abs() < 1e-12);
    assert!(stitch_with_default(&lq(0.0), &uniform(), 0.0, 11).is_err());
    assert!(stitch_with_default(&lq(0.0), &uniform(), -1.0, 11).is_err());
}
