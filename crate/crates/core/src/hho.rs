//! Harris Hawks Optimization over a continuous box.
//!
//! Each iteration every hawk draws a fresh initial energy `E0 ~ U(-1, 1)` and
//! jump strength `J = 2(1 - r5)`, then moves according to the escaping energy
//! `E = 2 E0 (1 - t/T)`:
//!
//! | condition                    | move                                       |
//! |------------------------------|--------------------------------------------|
//! | `|E| >= 1`, `q >= 0.5`       | perch relative to a random hawk            |
//! | `|E| >= 1`, `q < 0.5`        | perch relative to the rabbit and the mean  |
//! | `r >= 0.5`, `|E| >= 0.5`     | soft besiege                               |
//! | `r >= 0.5`, `|E| < 0.5`      | hard besiege                               |
//! | `r < 0.5`, `|E| >= 0.5`      | soft besiege with progressive rapid dives  |
//! | `r < 0.5`, `|E| < 0.5`       | hard besiege with progressive rapid dives  |
//!
//! The random hawk and the population mean are taken from the positions at
//! the start of the iteration. Every proposed position is clamped to the
//! bounds before it is evaluated or stored.
//!
//! Per-hawk draw order: `E0`, `r5`, then either `q` followed by
//! (`index`, `r1`, `r2`) or (`r3`, `r4`), or `r` followed, for the dive
//! branches only when `Y` fails to improve, by `D` draws of `S` and the Levy
//! vector.

use serde::{Deserialize, Serialize};
use statrs::function::gamma::gamma;

use crate::error::{Error, Result};
use crate::rng::RandomSource;
use crate::search::{argmin, Bounds, Evaluator, Fitness, OptimizerOutcome};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HhoConfig {
    pub population: usize,
    pub iterations: usize,
    pub beta: f64,
    pub bounds: Bounds,
}

impl Default for HhoConfig {
    fn default() -> Self {
        Self {
            population: 30,
            iterations: 100,
            beta: 1.5,
            bounds: Bounds::default(),
        }
    }
}

impl HhoConfig {
    pub fn validate(&self) -> Result<()> {
        if self.population == 0 {
            return Err(Error::config("hho.population must be at least 1"));
        }
        validate_beta(self.beta)?;
        self.bounds.validate()
    }
}

pub(crate) fn validate_beta(beta: f64) -> Result<()> {
    if !(beta > 0.0 && beta <= 2.0) {
        return Err(Error::config(format!(
            "hho.beta must lie in (0, 2], got {beta}"
        )));
    }
    Ok(())
}

/// Escaping energy `2 * e0 * (1 - t / t_max)`.
pub fn energy(e0: f64, t: usize, t_max: usize) -> Result<f64> {
    if t_max == 0 || t > t_max {
        return Err(Error::argument(format!(
            "energy schedule needs 0 <= t <= t_max and t_max >= 1, got t = {t}, t_max = {t_max}"
        )));
    }
    Ok(2.0 * e0 * (1.0 - t as f64 / t_max as f64))
}

/// Energy draws for one hawk at one iteration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyState {
    pub e0: f64,
    /// Escaping energy.
    pub e: f64,
    /// Jump strength, in `[0, 2]`.
    pub j: f64,
    pub t: usize,
    pub t_max: usize,
}

impl EnergyState {
    /// Draws `E0 ~ U(-1, 1)` then `J = 2(1 - r5)`. Requires `t < t_max`.
    pub fn draw(t: usize, t_max: usize, rng: &mut RandomSource) -> Self {
        let e0 = 2.0 * rng.next_f64() - 1.0;
        let j = 2.0 * (1.0 - rng.next_f64());
        Self {
            e0,
            e: energy(e0, t, t_max).expect("iteration index below t_max"),
            j,
            t,
            t_max,
        }
    }
}

/// Mantegna's scale factor for a Levy-stable step with index `beta`.
pub fn levy_sigma(beta: f64) -> f64 {
    let num = gamma(1.0 + beta) * (std::f64::consts::PI * beta / 2.0).sin();
    let den = gamma((1.0 + beta) / 2.0) * beta * 2f64.powf((beta - 1.0) / 2.0);
    (num / den).powf(1.0 / beta)
}

/// Levy-flight step generator (Mantegna's algorithm, scaled by 0.01).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LevyStep {
    pub beta: f64,
    pub sigma: f64,
}

impl LevyStep {
    pub fn new(beta: f64) -> Result<Self> {
        validate_beta(beta)?;
        Ok(Self {
            beta,
            sigma: levy_sigma(beta),
        })
    }

    /// `0.01 * u * sigma / |v|^(1/beta)` per coordinate, drawing `u` then `v`.
    pub fn sample(&self, dim: usize, rng: &mut RandomSource) -> Vec<f64> {
        (0..dim)
            .map(|_| {
                let u = rng.next_normal() * self.sigma;
                let v = rng.next_normal();
                0.01 * u / v.abs().powf(1.0 / self.beta)
            })
            .collect()
    }
}

pub fn levy_flight(dim: usize, beta: f64, rng: &mut RandomSource) -> Result<Vec<f64>> {
    Ok(LevyStep::new(beta)?.sample(dim, rng))
}

// Position updates with every random quantity passed in. None of these clamp.

/// `X_rand - r1 |X_rand - 2 r2 X|`.
pub fn perch_on_random(x: &[f64], x_rand: &[f64], r1: f64, r2: f64) -> Vec<f64> {
    x.iter()
        .zip(x_rand)
        .map(|(&xi, &ri)| ri - r1 * (ri - 2.0 * r2 * xi).abs())
        .collect()
}

/// `(X_rabbit - X_m) - r3 (LB + r4 (UB - LB))`.
pub fn perch_near_family(
    rabbit: &[f64],
    mean: &[f64],
    r3: f64,
    r4: f64,
    bounds: Bounds,
) -> Vec<f64> {
    let shift = r3 * (bounds.lb + r4 * bounds.width());
    rabbit
        .iter()
        .zip(mean)
        .map(|(&b, &m)| (b - m) - shift)
        .collect()
}

/// Soft besiege: `ΔX - E |J X_rabbit - X|` with `ΔX = X_rabbit - X`.
pub fn soft_besiege(x: &[f64], rabbit: &[f64], e: f64, j: f64) -> Vec<f64> {
    x.iter()
        .zip(rabbit)
        .map(|(&xi, &b)| (b - xi) - e * (j * b - xi).abs())
        .collect()
}

/// Hard besiege: `X_rabbit - E |X_rabbit - X|`.
pub fn hard_besiege(x: &[f64], rabbit: &[f64], e: f64) -> Vec<f64> {
    x.iter()
        .zip(rabbit)
        .map(|(&xi, &b)| b - e * (b - xi).abs())
        .collect()
}

/// Dive candidate `Y = X_rabbit - E |J X_rabbit - anchor|`.
///
/// The anchor is the hawk itself for the soft dive and the population mean
/// for the hard dive.
pub fn dive_candidate(anchor: &[f64], rabbit: &[f64], e: f64, j: f64) -> Vec<f64> {
    anchor
        .iter()
        .zip(rabbit)
        .map(|(&a, &b)| b - e * (j * b - a).abs())
        .collect()
}

/// `Z = Y + S * LF`, element-wise.
pub fn levy_candidate(y: &[f64], s: &[f64], lf: &[f64]) -> Vec<f64> {
    y.iter()
        .zip(s.iter().zip(lf))
        .map(|(&yi, (&si, &li))| yi + si * li)
        .collect()
}

/// Greedy acceptance of the dive: `Y` if it beats the current fitness, else
/// `Z` if it does, else the current position.
pub fn dive_accept(
    current: (&[f64], f64),
    y: (&[f64], f64),
    z: Option<(&[f64], f64)>,
) -> (Vec<f64>, f64) {
    let (x, fx) = current;
    if y.1 < fx {
        return (y.0.to_vec(), y.1);
    }
    match z {
        Some((z, fz)) if fz < fx => (z.to_vec(), fz),
        _ => (x.to_vec(), fx),
    }
}

/// A proposed position, with its fitness when the move already evaluated it.
#[derive(Debug, Clone, PartialEq)]
pub struct Move {
    pub position: Vec<f64>,
    pub fitness: Option<f64>,
}

/// Hawk swarm with its cached fitness values and the best position seen.
#[derive(Debug, Clone, PartialEq)]
pub struct HawkPopulation {
    pub hawks: Vec<Vec<f64>>,
    pub fitness: Vec<f64>,
    pub rabbit: Vec<f64>,
    pub rabbit_fitness: f64,
}

impl HawkPopulation {
    /// Population from evaluated positions; the rabbit is the best of them.
    pub fn from_evaluated(hawks: Vec<Vec<f64>>, fitness: Vec<f64>) -> Result<Self> {
        if hawks.is_empty() || hawks.len() != fitness.len() {
            return Err(Error::argument(format!(
                "population needs matching non-empty positions and fitness, got {} and {}",
                hawks.len(),
                fitness.len()
            )));
        }
        let best = argmin(&fitness);
        Ok(Self {
            rabbit: hawks[best].clone(),
            rabbit_fitness: fitness[best],
            hawks,
            fitness,
        })
    }

    pub fn random(
        size: usize,
        bounds: Bounds,
        eval: &Evaluator<'_>,
        rng: &mut RandomSource,
    ) -> Result<Self> {
        let dim = eval.dimension();
        let hawks: Vec<Vec<f64>> = (0..size).map(|_| bounds.random_point(dim, rng)).collect();
        let fitness = eval.evaluate_all(&hawks);
        Self::from_evaluated(hawks, fitness)
    }

    pub fn len(&self) -> usize {
        self.hawks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.hawks.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.rabbit.len()
    }

    /// Coordinate-wise mean position.
    pub fn mean(&self) -> Vec<f64> {
        let n = self.hawks.len() as f64;
        let mut m = vec![0.0; self.dim()];
        for h in &self.hawks {
            for (acc, v) in m.iter_mut().zip(h) {
                *acc += v;
            }
        }
        m.iter_mut().for_each(|v| *v /= n);
        m
    }

    pub fn best_index(&self) -> usize {
        argmin(&self.fitness)
    }

    pub fn worst_index(&self) -> usize {
        crate::search::argmax(&self.fitness)
    }

    /// Moves the rabbit to the best current hawk if that hawk is strictly better.
    pub fn update_rabbit(&mut self) -> bool {
        let best = self.best_index();
        if self.fitness[best] < self.rabbit_fitness {
            self.rabbit = self.hawks[best].clone();
            self.rabbit_fitness = self.fitness[best];
            true
        } else {
            false
        }
    }
}

/// Exploration move (`|E| >= 1`), drawing `q` and the branch's random numbers.
pub fn exploration_update(
    x: &[f64],
    hawks: &[Vec<f64>],
    rabbit: &[f64],
    mean: &[f64],
    bounds: Bounds,
    rng: &mut RandomSource,
) -> Vec<f64> {
    let q = rng.next_f64();
    let mut next = if q >= 0.5 {
        let x_rand = &hawks[rng.next_index(hawks.len())];
        let r1 = rng.next_f64();
        let r2 = rng.next_f64();
        perch_on_random(x, x_rand, r1, r2)
    } else {
        let r3 = rng.next_f64();
        let r4 = rng.next_f64();
        perch_near_family(rabbit, mean, r3, r4, bounds)
    };
    bounds.clamp_all(&mut next);
    next
}

/// Exploitation move (`|E| < 1`) for escape probability `r`.
///
/// The dive branches evaluate `Y`, and `Z` only when `Y` does not improve on
/// `fx`; the returned [`Move`] then carries the accepted fitness.
#[allow(clippy::too_many_arguments)]
pub fn besiege_update(
    x: &[f64],
    fx: f64,
    rabbit: &[f64],
    mean: &[f64],
    energy: &EnergyState,
    r: f64,
    bounds: Bounds,
    levy: &LevyStep,
    eval: &Evaluator<'_>,
    rng: &mut RandomSource,
) -> Move {
    let e = energy.e;
    let soft = e.abs() >= 0.5;
    if r >= 0.5 {
        let mut next = if soft {
            soft_besiege(x, rabbit, e, energy.j)
        } else {
            hard_besiege(x, rabbit, e)
        };
        bounds.clamp_all(&mut next);
        return Move {
            position: next,
            fitness: None,
        };
    }

    let anchor = if soft { x } else { mean };
    let mut y = dive_candidate(anchor, rabbit, e, energy.j);
    bounds.clamp_all(&mut y);
    let fy = eval.evaluate(&y);
    if fy < fx {
        return Move {
            position: y,
            fitness: Some(fy),
        };
    }
    let s: Vec<f64> = (0..x.len()).map(|_| rng.next_f64()).collect();
    let lf = levy.sample(x.len(), rng);
    let mut z = levy_candidate(&y, &s, &lf);
    bounds.clamp_all(&mut z);
    let fz = eval.evaluate(&z);
    let (position, fitness) = dive_accept((x, fx), (&y, fy), Some((&z, fz)));
    Move {
        position,
        fitness: Some(fitness),
    }
}

/// One HHO iteration at index `t` (`0 <= t < t_max`).
///
/// Positions moved without an evaluation are evaluated together afterwards,
/// and the rabbit is replaced if any hawk improved on it.
pub fn hho_step(
    pop: &mut HawkPopulation,
    t: usize,
    t_max: usize,
    config: &HhoConfig,
    eval: &Evaluator<'_>,
    rng: &mut RandomSource,
) {
    let levy = LevyStep::new(config.beta).expect("validated beta");
    let bounds = config.bounds;
    let mean = pop.mean();
    let snapshot = pop.hawks.clone();

    let moves: Vec<Move> = (0..pop.len())
        .map(|i| {
            let x = &snapshot[i];
            let state = EnergyState::draw(t, t_max, rng);
            if state.e.abs() >= 1.0 {
                Move {
                    position: exploration_update(x, &snapshot, &pop.rabbit, &mean, bounds, rng),
                    fitness: None,
                }
            } else {
                let r = rng.next_f64();
                besiege_update(
                    x,
                    pop.fitness[i],
                    &pop.rabbit,
                    &mean,
                    &state,
                    r,
                    bounds,
                    &levy,
                    eval,
                    rng,
                )
            }
        })
        .collect();

    let pending: Vec<usize> = (0..moves.len())
        .filter(|&i| moves[i].fitness.is_none())
        .collect();
    let positions: Vec<Vec<f64>> = pending.iter().map(|&i| moves[i].position.clone()).collect();
    let scores = eval.evaluate_all(&positions);
    let mut fresh = pending.into_iter().zip(scores);

    let mut next_fitness = Vec::with_capacity(moves.len());
    let mut next_hawks = Vec::with_capacity(moves.len());
    for (i, m) in moves.into_iter().enumerate() {
        let f = match m.fitness {
            Some(f) => f,
            None => {
                let (j, f) = fresh.next().expect("one score per pending move");
                debug_assert_eq!(i, j);
                f
            }
        };
        next_hawks.push(m.position);
        next_fitness.push(f);
    }
    pop.hawks = next_hawks;
    pop.fitness = next_fitness;
    pop.update_rabbit();
}

/// Full HHO run: random initial population, then `config.iterations` steps.
pub fn hho_run(
    config: &HhoConfig,
    objective: &dyn Fitness,
    rng: &mut RandomSource,
) -> Result<OptimizerOutcome> {
    config.validate()?;
    if objective.dimension() == 0 {
        return Err(Error::config("objective dimension must be at least 1"));
    }
    let eval = Evaluator::new(objective);
    let mut pop = HawkPopulation::random(config.population, config.bounds, &eval, rng)?;
    let mut trace = Vec::with_capacity(config.iterations + 1);
    let mut per_iter = Vec::with_capacity(config.iterations);
    trace.push(pop.rabbit_fitness);
    for t in 0..config.iterations {
        let before = eval.count();
        hho_step(&mut pop, t, config.iterations, config, &eval, rng);
        per_iter.push(eval.count() - before);
        trace.push(pop.rabbit_fitness);
    }
    Ok(OptimizerOutcome {
        best_position: pop.rabbit,
        best_fitness: pop.rabbit_fitness,
        trace,
        evaluations: eval.count(),
        evaluations_per_iteration: per_iter,
        refinements: Vec::new(),
    })
}
