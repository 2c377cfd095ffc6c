//! Salp Swarm Algorithm.
//!
//! The chain's first salp is the leader and moves around the food source
//! (the best position found):
//!
//! ```text
//! x_j = F_j ± r1 * ((ub - lb) * r2 + lb)      + when r3 >= 0.5, - otherwise
//! r1  = 2 * exp(-(4 t / T)^2)
//! ```
//!
//! Each follower then moves to the midpoint between itself and its
//! predecessor, in chain order, so it sees the predecessor's new position.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::RandomSource;
use crate::search::{argmin, Bounds, Evaluator, Fitness, OptimizerOutcome};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SsaConfig {
    pub population: usize,
    pub iterations: usize,
    pub bounds: Bounds,
}

impl Default for SsaConfig {
    fn default() -> Self {
        Self {
            population: 30,
            iterations: 20,
            bounds: Bounds::default(),
        }
    }
}

impl SsaConfig {
    pub fn validate(&self) -> Result<()> {
        if self.population == 0 {
            return Err(Error::config("ssa.population must be at least 1"));
        }
        self.bounds.validate()
    }
}

/// `2 * exp(-(4 t / n_iter)^2)`.
pub fn r1_coefficient(t: usize, n_iter: usize) -> f64 {
    debug_assert!(n_iter >= 1 && t <= n_iter);
    let ratio = 4.0 * t as f64 / n_iter as f64;
    2.0 * (-(ratio * ratio)).exp()
}

/// Leader coordinate for pinned draws `r2` (step size) and `r3` (direction).
pub fn leader_coordinate(food: f64, r1: f64, r2: f64, r3: f64, bounds: Bounds) -> f64 {
    let step = r1 * (bounds.width() * r2 + bounds.lb);
    let v = if r3 >= 0.5 { food + step } else { food - step };
    bounds.clamp(v)
}

/// New leader position; draws `r2` then `r3` for each coordinate.
pub fn leader_update(food: &[f64], r1: f64, bounds: Bounds, rng: &mut RandomSource) -> Vec<f64> {
    food.iter()
        .map(|&f| {
            let r2 = rng.next_f64();
            let r3 = rng.next_f64();
            leader_coordinate(f, r1, r2, r3, bounds)
        })
        .collect()
}

/// Midpoint of a follower and its predecessor.
pub fn follower_update(current: &[f64], predecessor: &[f64], bounds: Bounds) -> Vec<f64> {
    current
        .iter()
        .zip(predecessor)
        .map(|(&c, &p)| bounds.clamp(0.5 * (c + p)))
        .collect()
}

/// Ordered salp population; index 0 is the leader.
#[derive(Debug, Clone, PartialEq)]
pub struct SalpChain {
    pub salps: Vec<Vec<f64>>,
    pub fitness: Vec<f64>,
    pub food: Vec<f64>,
    pub food_fitness: f64,
}

impl SalpChain {
    /// Chain in the given order; the food is the best member.
    pub fn from_evaluated(salps: Vec<Vec<f64>>, fitness: Vec<f64>) -> Result<Self> {
        if salps.is_empty() || salps.len() != fitness.len() {
            return Err(Error::argument(format!(
                "chain needs matching non-empty positions and fitness, got {} and {}",
                salps.len(),
                fitness.len()
            )));
        }
        let best = argmin(&fitness);
        Ok(Self {
            food: salps[best].clone(),
            food_fitness: fitness[best],
            salps,
            fitness,
        })
    }

    /// Chain reordered best-first (stable on ties), so the best member leads.
    pub fn best_first(salps: Vec<Vec<f64>>, fitness: Vec<f64>) -> Result<Self> {
        let mut order: Vec<usize> = (0..salps.len()).collect();
        order.sort_by(|&a, &b| fitness[a].total_cmp(&fitness[b]));
        let sorted_salps = order.iter().map(|&i| salps[i].clone()).collect();
        let sorted_fitness = order.iter().map(|&i| fitness[i]).collect();
        Self::from_evaluated(sorted_salps, sorted_fitness)
    }

    pub fn random(
        size: usize,
        bounds: Bounds,
        eval: &Evaluator<'_>,
        rng: &mut RandomSource,
    ) -> Result<Self> {
        let dim = eval.dimension();
        let salps: Vec<Vec<f64>> = (0..size).map(|_| bounds.random_point(dim, rng)).collect();
        let fitness = eval.evaluate_all(&salps);
        Self::from_evaluated(salps, fitness)
    }

    pub fn len(&self) -> usize {
        self.salps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.salps.is_empty()
    }
}

/// Moves the leader and then every follower in order; does not evaluate.
pub fn move_chain(chain: &mut SalpChain, r1: f64, bounds: Bounds, rng: &mut RandomSource) {
    chain.salps[0] = leader_update(&chain.food, r1, bounds, rng);
    for i in 1..chain.salps.len() {
        let next = follower_update(&chain.salps[i], &chain.salps[i - 1], bounds);
        chain.salps[i] = next;
    }
}

/// One SSA step at iteration `t` of `n_iter` (`1 <= t <= n_iter`).
pub fn ssa_step(
    chain: &mut SalpChain,
    t: usize,
    n_iter: usize,
    bounds: Bounds,
    eval: &Evaluator<'_>,
    rng: &mut RandomSource,
) {
    move_chain(chain, r1_coefficient(t, n_iter), bounds, rng);
    chain.fitness = eval.evaluate_all(&chain.salps);
    let best = argmin(&chain.fitness);
    if chain.fitness[best] < chain.food_fitness {
        chain.food = chain.salps[best].clone();
        chain.food_fitness = chain.fitness[best];
    }
}

/// Runs `n_iter` steps on an existing chain; returns the per-step best-so-far
/// values and evaluation counts.
pub(crate) fn run_chain(
    chain: &mut SalpChain,
    n_iter: usize,
    bounds: Bounds,
    eval: &Evaluator<'_>,
    rng: &mut RandomSource,
) -> (Vec<f64>, Vec<usize>) {
    let mut trace = Vec::with_capacity(n_iter);
    let mut per_iter = Vec::with_capacity(n_iter);
    for t in 1..=n_iter {
        let before = eval.count();
        ssa_step(chain, t, n_iter, bounds, eval, rng);
        per_iter.push(eval.count() - before);
        trace.push(chain.food_fitness);
    }
    (trace, per_iter)
}

/// Full SSA run. `initial`, when given, replaces the random initial chain
/// (its length overrides `config.population`).
pub fn ssa_run(
    config: &SsaConfig,
    objective: &dyn Fitness,
    rng: &mut RandomSource,
    initial: Option<Vec<Vec<f64>>>,
) -> Result<OptimizerOutcome> {
    config.validate()?;
    let dim = objective.dimension();
    if dim == 0 {
        return Err(Error::config("objective dimension must be at least 1"));
    }
    let eval = Evaluator::new(objective);
    let mut chain = match initial {
        Some(salps) => {
            if salps.iter().any(|s| s.len() != dim) {
                return Err(Error::argument(format!(
                    "injected positions must have {dim} coordinates"
                )));
            }
            let mut salps = salps;
            salps.iter_mut().for_each(|s| config.bounds.clamp_all(s));
            let fitness = eval.evaluate_all(&salps);
            SalpChain::from_evaluated(salps, fitness)?
        }
        None => SalpChain::random(config.population, config.bounds, &eval, rng)?,
    };
    let mut trace = vec![chain.food_fitness];
    let (steps, per_iter) = run_chain(&mut chain, config.iterations, config.bounds, &eval, rng);
    trace.extend(steps);
    Ok(OptimizerOutcome {
        best_position: chain.food,
        best_fitness: chain.food_fitness,
        trace,
        evaluations: eval.count(),
        evaluations_per_iteration: per_iter,
        refinements: Vec::new(),
    })
}
