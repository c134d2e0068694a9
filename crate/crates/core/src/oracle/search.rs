use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::oracle::DiscreteInstance;
use crate::scalar::Field;

pub const EXHAUSTIVE_LIMIT: usize = 22;

/// Shape of a menu found by the structured search.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MenuShape {
    /// `[0, x] ∪ [c, 1]` (grid indices into the unit actions).
    Intervals { x: usize, c: usize },
    /// `[0, x] ∪ {y, 1}`.
    Points { x: usize, y: usize },
    Unstructured,
}

/// A deterministic menu (subset of the action grid) and its value.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MenuSolution<S> {
    /// Offered action indices, sorted; the status quo is always available.
    pub menu: Vec<usize>,
    pub actions: Vec<S>,
    pub value: S,
    /// Number of menus attaining `value` within tolerance.
    pub optimal_count: usize,
    pub shape: MenuShape,
}

impl<S: Field> MenuSolution<S> {
    fn from_menu(inst: &DiscreteInstance<S>, menu: Vec<usize>, value: S, count: usize, shape: MenuShape) -> Self {
        let actions = menu.iter().map(|&k| inst.actions[k].clone()).collect();
        Self { menu, actions, value, optimal_count: count, shape }
    }

    /// Whether the menu contains every grid action in `[lo, hi]`.
    pub fn covers(&self, inst: &DiscreteInstance<S>, lo: &S, hi: &S) -> bool {
        (0..inst.n_actions())
            .filter(|&k| &inst.actions[k] >= lo && &inst.actions[k] <= hi)
            .all(|k| self.menu.contains(&k) || inst.actions[k].is_zero())
    }
}

#[derive(Clone)]
struct Best<S> {
    value: S,
    key: u64,
    count: usize,
}

fn merge<S: Field>(a: Best<S>, b: Best<S>) -> Best<S> {
    let tol = S::tolerance();
    let diff = a.value.clone() - b.value.clone();
    if diff > tol {
        a
    } else if diff < -tol.clone() {
        b
    } else {
        let count = a.count + b.count;
        if a.key <= b.key {
            Best { count, ..a }
        } else {
            Best { count, ..b }
        }
    }
}

fn interior<S: Field>(inst: &DiscreteInstance<S>) -> Vec<usize> {
    let (z, o) = (inst.zero_index(), inst.one_index());
    (z + 1..o).collect()
}

fn mask_menu(interior: &[usize], one: usize, mask: u64) -> Vec<usize> {
    let mut menu: Vec<usize> = interior.iter().enumerate().filter(|(b, _)| mask >> b & 1 == 1).map(|(_, &k)| k).collect();
    menu.push(one);
    menu
}

/// Optimal delegation set by enumerating every subset of the grid actions in
/// `(0, 1)`, always offering `1`. Ties prefer the subset with the smallest
/// bitmask, so the result is deterministic.
pub fn best_delegation_exhaustive<S: Field>(inst: &DiscreteInstance<S>) -> Result<MenuSolution<S>> {
    let unit = inst.unit_actions().len();
    if unit > EXHAUSTIVE_LIMIT {
        return Err(Error::TooLarge { what: "action grid", size: unit, limit: EXHAUSTIVE_LIMIT });
    }
    let inner = interior(inst);
    let one = inst.one_index();
    let best = (0..1u64 << inner.len())
        .into_par_iter()
        .map(|mask| Best { value: inst.menu_value(&mask_menu(&inner, one, mask)), key: mask, count: 1 })
        .reduce_with(merge)
        .expect("at least the empty subset");
    let menu = mask_menu(&inner, one, best.key);
    Ok(MenuSolution::from_menu(inst, menu, best.value, best.count, MenuShape::Unstructured))
}

fn structured_menu(unit: &[usize], shape: MenuShape) -> Vec<usize> {
    let last = unit.len() - 1;
    match shape {
        MenuShape::Intervals { x, c } => (1..=x).chain(c.max(x + 1)..=last).map(|i| unit[i]).collect(),
        MenuShape::Points { x, y } => {
            let mut m: Vec<usize> = (1..=x).map(|i| unit[i]).collect();
            m.push(unit[y]);
            if y != last {
                m.push(unit[last]);
            }
            m
        }
        MenuShape::Unstructured => unit.to_vec(),
    }
}

fn structured_shapes(k: usize) -> Vec<MenuShape> {
    let last = k - 1;
    let mut shapes = Vec::new();
    for x in 0..=last {
        for c in x + 1..=last {
            shapes.push(MenuShape::Intervals { x, c });
        }
        for y in x + 2..last {
            shapes.push(MenuShape::Points { x, y });
        }
    }
    shapes
}

/// Best menu among `[0, x] ∪ [c, 1]` and `[0, x] ∪ {y, 1}` over grid pairs.
pub fn best_delegation_structured<S: Field>(inst: &DiscreteInstance<S>) -> MenuSolution<S> {
    search_shapes(inst, structured_shapes(inst.unit_actions().len()))
}

/// Best interval menu `[c, 1]` over the grid.
pub fn best_interval_menu<S: Field>(inst: &DiscreteInstance<S>) -> MenuSolution<S> {
    let k = inst.unit_actions().len();
    search_shapes(inst, (1..k).map(|c| MenuShape::Intervals { x: 0, c }).collect())
}

fn search_shapes<S: Field>(inst: &DiscreteInstance<S>, shapes: Vec<MenuShape>) -> MenuSolution<S> {
    let unit = inst.unit_actions();
    let best = shapes
        .par_iter()
        .enumerate()
        .map(|(i, &shape)| Best { value: inst.menu_value(&structured_menu(&unit, shape)), key: i as u64, count: 1 })
        .reduce_with(merge)
        .expect("at least one shape");
    let shape = shapes[best.key as usize];
    MenuSolution::from_menu(inst, structured_menu(&unit, shape), best.value, best.count, shape)
}

/// Best of `samples` random subsets of `(0, 1)` grid actions (plus `1`),
/// reproducible from `seed`. Useful as a sanity bound when the grid is too
/// large for exhaustive search.
pub fn best_delegation_sampled<S: Field>(inst: &DiscreteInstance<S>, samples: usize, seed: u64) -> MenuSolution<S> {
    let inner = interior(inst);
    let one = inst.one_index();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let menus: Vec<Vec<usize>> = (0..samples.max(1))
        .map(|_| {
            let size = if inner.is_empty() { 0 } else { rng.gen_range(0..=inner.len()) };
            let mut menu: Vec<usize> = sample(&mut rng, inner.len(), size).into_iter().map(|b| inner[b]).collect();
            menu.push(one);
            menu.sort_unstable();
            menu
        })
        .collect();
    let best = menus
        .par_iter()
        .enumerate()
        .map(|(i, m)| Best { value: inst.menu_value(m), key: i as u64, count: 1 })
        .reduce_with(merge)
        .expect("at least one sample");
    let menu = menus[best.key as usize].clone();
    MenuSolution::from_menu(inst, menu, best.value, best.count, MenuShape::Unstructured)
}
