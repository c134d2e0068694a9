mod common;

use veto_delegation::interval::solve_interval;
use veto_delegation::model::{ProposerUtility, TypeDistribution};
use veto_delegation::oracle::*;
use veto_delegation::{Error, Field};

fn lq(g: f64) -> ProposerUtility<f64> {
    ProposerUtility::lq(g).unwrap()
}

fn inst(g: f64, d: &TypeDistribution<f64>, spec: GridSpec) -> DiscreteInstance<f64> {
    DiscreteInstance::from_model(&lq(g), d, &spec).unwrap()
}

fn normal(mu: f64, sigma: f64) -> TypeDistribution<f64> {
    TypeDistribution::normal(mu, sigma).unwrap()
}

#[test]
fn instance_invariants() {
    let i = inst(0.3, &normal(0.45, 1.0), GridSpec::new(11).with_types(21).with_extra_actions(&[-0.5]));
    assert!(i.actions.contains(&0.0) && i.actions.contains(&1.0) && i.actions.contains(&-0.5));
    assert!(i.actions.windows(2).all(|w| w[0] < w[1]));
    let d = normal(0.45, 1.0);
    let total: f64 = i.weights.iter().sum();
    assert!((total - (d.cdf(1.0) - d.cdf(0.0))).abs() < 1e-12);
    assert!(serde_json::to_string(&i).is_ok());
}

#[test]
fn exhaustive_uniform_linear_is_flat() {
    let i = inst(0.0, &TypeDistribution::uniform01(), GridSpec::new(11));
    let s = best_delegation_exhaustive(&i).unwrap();
    assert!((s.value + 0.5).abs() < 0.03, "{}", s.value);
    let full = i.menu_value(&i.unit_actions()[1..]);
    let only_one = i.menu_value(&[i.one_index()]);
    assert!((full - s.value).abs() < 1e-12 && (only_one - s.value).abs() < 1e-12);
    assert!(s.optimal_count > 1);
}

#[test]
fn exhaustive_decreasing_density_delegates_everything() {
    let i = inst(0.0, &normal(-0.5, 1.0), GridSpec::new(11));
    let s = best_delegation_exhaustive(&i).unwrap();
    assert_eq!(s.actions, (1..=10).map(|k| k as f64 / 10.0).collect::<Vec<_>>());
}

#[test]
fn exhaustive_high_mean_offers_only_one() {
    let i = inst(0.0, &normal(1.5, 0.5), GridSpec::new(11));
    let s = best_delegation_exhaustive(&i).unwrap();
    assert_eq!(s.actions, vec![1.0]);
}

#[test]
fn exhaustive_refuses_large_grids() {
    let i = inst(0.0, &TypeDistribution::uniform01(), GridSpec::new(24));
    assert!(matches!(best_delegation_exhaustive(&i), Err(Error::TooLarge { .. })));
}

#[test]
fn structured_single_dipped_beats_intervals() {
    for n in [11, 16] {
        let i = DiscreteInstance::from_model(&lq(0.0), &common::single_dipped(), &GridSpec::new(n)).unwrap();
        let s = best_delegation_structured(&i);
        let iv = best_interval_menu(&i);
        let ex = best_delegation_exhaustive(&i).unwrap();
        assert!(is_low_interval_plus_one(&s.actions, 1.0 / (n - 1) as f64), "{:?}", s.actions);
        assert!(s.value > iv.value + 1e-3, "{} vs {}", s.value, iv.value);
        assert!((ex.value - s.value).abs() < 1e-12, "n={n}");
    }
}

/// `[0, x] ∪ {1}` on a grid of step `h`, with `0 < x < 1`.
fn is_low_interval_plus_one(actions: &[f64], h: f64) -> bool {
    let (last, low) = actions.split_last().unwrap();
    *last == 1.0
        && !low.is_empty()
        && (low[0] - h).abs() < 1e-12
        && low.windows(2).all(|w| (w[1] - w[0] - h).abs() < 1e-12)
        && *low.last().unwrap() < 1.0 - h - 1e-12
}

#[test]
fn structured_uniform_linear() {
    let i = inst(0.0, &TypeDistribution::uniform01(), GridSpec::new(41));
    assert!((best_delegation_structured(&i).value + 0.5).abs() < 0.01);
}

#[test]
fn structured_matches_interval_solution() {
    let d = normal(0.45, 1.0);
    let cont = solve_interval(&lq(0.0), &d);
    let value = |n: usize| best_delegation_structured(&inst(0.0, &d, GridSpec::new(n)));
    let (coarse, fine) = (value(41), value(81));
    // grid error estimated from the two resolutions
    let err = 2.0 * (coarse.value - fine.value).abs() + 1e-9;
    assert!((fine.value - cont.w_star).abs() <= err, "{} vs {} (err {err})", fine.value, cont.w_star);
    assert!((fine.actions[0] - cont.c_lo()).abs() <= 1.0 / 80.0);
    assert!(fine.covers(&inst(0.0, &d, GridSpec::new(81)), &fine.actions[0], &1.0));
}

#[test]
fn lp_dominates_deterministic_on_uniform() {
    let i = inst(0.0, &TypeDistribution::uniform01(), GridSpec::new(11).with_types(11));
    let lp = best_stochastic_lp(&i).unwrap();
    assert!(lp.value >= best_delegation_exhaustive(&i).unwrap().value - 1e-9);
}

#[test]
fn lp_full_delegation_under_decreasing_density() {
    let i = inst(0.0, &normal(-0.5, 1.0), GridSpec::new(11).with_types(21));
    let lp = best_stochastic_lp(&i).unwrap();
    let full = i.menu_value(&i.unit_actions()[1..]);
    assert!((lp.value - full).abs() < 1e-7, "{} vs {full}", lp.value);
}

#[test]
fn lp_strictly_beats_menus_on_dipped_density() {
    let (_, tail) = e1_lottery(0.05).unwrap();
    let d = TypeDistribution::dipped_linear(0.05, 1.0).unwrap();
    let i = inst(0.0, &d, GridSpec::new(11).with_types(41).with_extra_actions(&[tail, -0.5, -1.0]));
    let lp = best_stochastic_lp(&i).unwrap();
    let det = best_delegation_structured(&i);
    assert!(lp.audit.passes(IC_TOL), "{:?}", lp.audit);
    assert!(lp.value > det.value + 1e-4, "{} vs {}", lp.value, det.value);
    // some type is given a nondegenerate lottery
    assert!(lp.mechanism.rows.iter().any(|r| r.iter().filter(|&&p| p > 1e-6).count() > 1));
}

#[test]
fn sandwich_on_battery() {
    for c in common::battery() {
        let i = common::instance(&c, 11, 21);
        let s = best_delegation_structured(&i);
        let e = best_delegation_exhaustive(&i).unwrap();
        let l = best_stochastic_lp(&i).unwrap();
        assert!(s.value <= e.value + 1e-9 && e.value <= l.value + 1e-9, "{}", c.name);
        // none of these densities is dipped, so the structured family is enough
        assert!((s.value - e.value).abs() < 1e-9, "{}", c.name);
        assert!(l.audit.passes(IC_TOL), "{}: {:?}", c.name, l.audit);
        assert!(l.duality_gap.abs() < 1e-9, "{}", c.name);
        let m = &l.mechanism;
        for k in 1..m.types.len() {
            assert!(m.expected_action(k) >= m.expected_action(k - 1) - IC_TOL, "{}", c.name);
        }
    }
}

#[test]
fn adjacent_constraints_suffice() {
    for c in common::battery().into_iter().take(4) {
        let i = common::instance(&c, 6, 11);
        let a = best_stochastic_lp_with(&i, IcConstraints::Adjacent).unwrap();
        let b = best_stochastic_lp_with(&i, IcConstraints::AllPairs).unwrap();
        assert!((a.value - b.value).abs() < 1e-10, "{}", c.name);
        assert!(a.audit.passes(IC_TOL));
    }
}

#[test]
fn exact_lp_on_small_instances() {
    for c in common::battery().into_iter().skip(3).take(3) {
        let i = common::instance(&c, 5, 8);
        let float = best_stochastic_lp(&i).unwrap();
        let exact = best_stochastic_lp(&i.to_exact().unwrap()).unwrap();
        assert!(exact.audit.passes(0.0), "{}: {:?}", c.name, exact.audit);
        assert!((exact.value.to_f64_lossy() - float.value).abs() < 1e-10, "{}", c.name);
    }
}

#[test]
fn sampled_search_never_beats_exhaustive() {
    let c = &common::battery()[3];
    let i = common::instance(c, 11, 21);
    let e = best_delegation_exhaustive(&i).unwrap();
    let a = best_delegation_sampled(&i, 200, 9);
    assert!(a.value <= e.value + 1e-12);
    assert_eq!(a, best_delegation_sampled(&i, 200, 9));
}

#[test]
fn e1_menu_examples() {
    let r = example_e1_menu(0.05, 1.0).unwrap();
    assert!((r.p - 1.0 / 1.8).abs() < 1e-15 && (r.tail - 0.1).abs() < 1e-12);
    assert!(r.gain > 1e-10);
    assert!(r.half_menu_loss > 0.0);
    assert!(r.residual_low.abs() < 1e-12 && r.residual_high.abs() < 1e-12 && r.exact_indifference);
    let gains: Vec<f64> = [0.05, 0.01, 0.001].iter().map(|&d| example_e1_menu(d, 1.0).unwrap().gain).collect();
    assert!(gains.windows(2).all(|w| w[1] < w[0]) && gains[2] < 1e-4, "{gains:?}");
    assert!(matches!(example_e1_menu(0.3, 1.0), Err(Error::BadDelta(_))));
}
