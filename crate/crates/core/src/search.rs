//! Plumbing shared by the optimizers: search bounds, the objective trait,
//! an evaluation counter and the run outcome.

use std::sync::atomic::{AtomicUsize, Ordering};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::RandomSource;

/// Box constraint applied identically to every coordinate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Bounds {
    pub lb: f64,
    pub ub: f64,
}

impl Default for Bounds {
    fn default() -> Self {
        Self { lb: 0.0, ub: 1.0 }
    }
}

impl Bounds {
    pub fn new(lb: f64, ub: f64) -> Result<Self> {
        let b = Self { lb, ub };
        b.validate()?;
        Ok(b)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.lb.is_finite() && self.ub.is_finite() && self.lb < self.ub) {
            return Err(Error::config(format!(
                "bounds must be finite with lb < ub, got [{}, {}]",
                self.lb, self.ub
            )));
        }
        Ok(())
    }

    pub fn width(&self) -> f64 {
        self.ub - self.lb
    }

    pub fn clamp(&self, v: f64) -> f64 {
        v.clamp(self.lb, self.ub)
    }

    pub fn clamp_all(&self, x: &mut [f64]) {
        for v in x {
            *v = self.clamp(*v);
        }
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        x.iter().all(|&v| v >= self.lb && v <= self.ub)
    }

    /// Uniform random point in the box, one draw per coordinate.
    pub fn random_point(&self, dim: usize, rng: &mut RandomSource) -> Vec<f64> {
        (0..dim)
            .map(|_| self.lb + self.width() * rng.next_f64())
            .collect()
    }
}

/// A minimization objective over continuous positions.
///
/// Implementations must be pure: the same position always yields the same
/// value. Populations are evaluated in parallel.
pub trait Fitness: Sync {
    fn dimension(&self) -> usize;
    fn fitness(&self, position: &[f64]) -> f64;
}

/// Adapts a closure into a [`Fitness`].
pub struct FnFitness<F> {
    dim: usize,
    f: F,
}

impl<F: Fn(&[f64]) -> f64 + Sync> FnFitness<F> {
    pub fn new(dim: usize, f: F) -> Self {
        Self { dim, f }
    }
}

impl<F: Fn(&[f64]) -> f64 + Sync> Fitness for FnFitness<F> {
    fn dimension(&self) -> usize {
        self.dim
    }

    fn fitness(&self, position: &[f64]) -> f64 {
        (self.f)(position)
    }
}

/// Counts every objective evaluation made through it.
pub struct Evaluator<'a> {
    objective: &'a dyn Fitness,
    count: AtomicUsize,
}

impl<'a> Evaluator<'a> {
    pub fn new(objective: &'a dyn Fitness) -> Self {
        Self {
            objective,
            count: AtomicUsize::new(0),
        }
    }

    pub fn dimension(&self) -> usize {
        self.objective.dimension()
    }

    pub fn evaluate(&self, x: &[f64]) -> f64 {
        self.count.fetch_add(1, Ordering::Relaxed);
        self.objective.fitness(x)
    }

    /// Evaluates positions in parallel; output order matches input order.
    pub fn evaluate_all(&self, xs: &[Vec<f64>]) -> Vec<f64> {
        self.count.fetch_add(xs.len(), Ordering::Relaxed);
        xs.par_iter().map(|x| self.objective.fitness(x)).collect()
    }

    pub fn count(&self) -> usize {
        self.count.load(Ordering::Relaxed)
    }
}

/// Result of one optimizer run over an arbitrary objective.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptimizerOutcome {
    pub best_position: Vec<f64>,
    pub best_fitness: f64,
    /// Best-so-far fitness: the initial population's best, then one entry per iteration.
    pub trace: Vec<f64>,
    pub evaluations: usize,
    /// Objective evaluations spent in each iteration (initialization excluded).
    pub evaluations_per_iteration: Vec<usize>,
    /// Iterations at which the inner refinement replaced the global best.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub refinements: Vec<Refinement>,
}

/// One accepted inner-search improvement of the hybrid optimizer.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Refinement {
    pub iteration: usize,
    pub previous_fitness: f64,
    pub refined_fitness: f64,
}

/// Index of the smallest value; ties go to the lower index.
pub(crate) fn argmin(values: &[f64]) -> usize {
    let mut best = 0;
    for (i, &v) in values.iter().enumerate().skip(1) {
        if v < values[best] {
            best = i;
        }
    }
    best
}

/// Index of the largest value; ties go to the lower index.
pub(crate) fn argmax(values: &[f64]) -> usize {
    let mut worst = 0;
    for (i, &v) in values.iter().enumerate().skip(1) {
        if v > values[worst] {
            worst = i;
        }
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bounds_validation() {
        assert!(Bounds::new(0.0, 1.0).is_ok());
        assert!(Bounds::new(1.0, 1.0).is_err());
        assert!(Bounds::new(0.0, f64::NAN).is_err());
    }

    #[test]
    fn evaluator_counts() {
        let f = FnFitness::new(2, |x: &[f64]| x[0] + x[1]);
        let ev = Evaluator::new(&f);
        assert_eq!(ev.evaluate(&[1.0, 2.0]), 3.0);
        let out = ev.evaluate_all(&[vec![0.0, 1.0], vec![2.0, 2.0]]);
        assert_eq!(out, vec![1.0, 4.0]);
        assert_eq!(ev.count(), 3);
    }

    #[test]
    fn arg_extremes_prefer_lower_index() {
        assert_eq!(argmin(&[2.0, 1.0, 1.0]), 1);
        assert_eq!(argmax(&[3.0, 1.0, 3.0]), 0);
    }
}
