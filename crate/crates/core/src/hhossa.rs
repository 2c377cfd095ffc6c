//! Hybrid optimizer: an HHO outer loop whose best solution is refined by a
//! short SSA search after every iteration.
//!
//! The inner chain starts from a copy of the current hawks ordered best
//! first, runs `ssa_iterations` steps, and reports its food source. If that
//! beats the rabbit, the rabbit moves there and the worst hawk is overwritten
//! with it so later random-hawk picks can sample it. Both optimizers share
//! one random stream.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hho::{hho_step, validate_beta, HawkPopulation, HhoConfig};
use crate::rng::RandomSource;
use crate::search::{Bounds, Evaluator, Fitness, OptimizerOutcome, Refinement};
use crate::ssa::{run_chain, SalpChain};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HybridConfig {
    pub population: usize,
    pub hho_iterations: usize,
    pub ssa_iterations: usize,
    pub beta: f64,
    pub bounds: Bounds,
}

impl Default for HybridConfig {
    fn default() -> Self {
        Self {
            population: 30,
            hho_iterations: 100,
            ssa_iterations: 20,
            beta: 1.5,
            bounds: Bounds::default(),
        }
    }
}

impl HybridConfig {
    pub fn validate(&self) -> Result<()> {
        if self.population == 0 {
            return Err(Error::config("population must be at least 1"));
        }
        validate_beta(self.beta)?;
        self.bounds.validate()
    }

    fn hho(&self) -> HhoConfig {
        HhoConfig {
            population: self.population,
            iterations: self.hho_iterations,
            beta: self.beta,
            bounds: self.bounds,
        }
    }
}

/// SSA refinement seeded from the current hawks. Leaves `pop` untouched.
pub fn hybrid_refine(
    pop: &HawkPopulation,
    ssa_iterations: usize,
    bounds: Bounds,
    eval: &Evaluator<'_>,
    rng: &mut RandomSource,
) -> (Vec<f64>, f64) {
    let mut chain = SalpChain::best_first(pop.hawks.clone(), pop.fitness.clone())
        .expect("population is non-empty");
    run_chain(&mut chain, ssa_iterations, bounds, eval, rng);
    (chain.food, chain.food_fitness)
}

pub fn hhossa_run(
    config: &HybridConfig,
    objective: &dyn Fitness,
    rng: &mut RandomSource,
) -> Result<OptimizerOutcome> {
    config.validate()?;
    if objective.dimension() == 0 {
        return Err(Error::config("objective dimension must be at least 1"));
    }
    let hho = config.hho();
    let eval = Evaluator::new(objective);
    let mut pop = HawkPopulation::random(config.population, config.bounds, &eval, rng)?;
    let mut trace = Vec::with_capacity(config.hho_iterations + 1);
    let mut per_iter = Vec::with_capacity(config.hho_iterations);
    let mut refinements = Vec::new();
    trace.push(pop.rabbit_fitness);

    for t in 0..config.hho_iterations {
        let before = eval.count();
        hho_step(&mut pop, t, config.hho_iterations, &hho, &eval, rng);
        let (best, best_fitness) =
            hybrid_refine(&pop, config.ssa_iterations, config.bounds, &eval, rng);
        if best_fitness < pop.rabbit_fitness {
            refinements.push(Refinement {
                iteration: t,
                previous_fitness: pop.rabbit_fitness,
                refined_fitness: best_fitness,
            });
            let worst = pop.worst_index();
            pop.hawks[worst] = best.clone();
            pop.fitness[worst] = best_fitness;
            pop.rabbit = best;
            pop.rabbit_fitness = best_fitness;
        }
        per_iter.push(eval.count() - before);
        trace.push(pop.rabbit_fitness);
    }

    Ok(OptimizerOutcome {
        best_position: pop.rabbit,
        best_fitness: pop.rabbit_fitness,
        trace,
        evaluations: eval.count(),
        evaluations_per_iteration: per_iter,
        refinements,
    })
}
