//! End-to-end feature-selection experiment: split, scale, optimize, and
//! evaluate the selected subset on held-out data.
//!
//! Randomness comes from one seed. Independent child streams are derived for
//! the outer split, the fitness split and the optimizer, so changing one
//! stage's draw count never shifts another's.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::dataset::{stratified_split, MinMaxScaler, TabularDataset};
use crate::error::{Error, Result};
use crate::hho::{hho_run, validate_beta, HhoConfig};
use crate::hhossa::{hhossa_run, HybridConfig};
use crate::knn::KnnModel;
use crate::metrics::MetricReport;
use crate::objective::{FeatureMask, FitnessParams, WrapperFitness};
use crate::rng::RandomSource;
use crate::search::{Bounds, OptimizerOutcome, Refinement};
use crate::ssa::{ssa_run, SsaConfig};

/// Version of the serialized [`RunResult`] layout.
pub const SCHEMA_VERSION: u32 = 1;

const STREAM_SPLIT: u64 = 0;
const STREAM_FITNESS_SPLIT: u64 = 1;
const STREAM_OPTIMIZER: u64 = 2;

/// Passes over the test set when timing the final classifier; the median is kept.
const CLASSIFICATION_TIMING_PASSES: usize = 15;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    Hhossa,
    Hho,
    Ssa,
}

impl Algorithm {
    pub const ALL: [Algorithm; 3] = [Algorithm::Hhossa, Algorithm::Hho, Algorithm::Ssa];

    pub fn name(&self) -> &'static str {
        match self {
            Algorithm::Hhossa => "hhossa",
            Algorithm::Hho => "hho",
            Algorithm::Ssa => "ssa",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "hhossa" => Ok(Algorithm::Hhossa),
            "hho" => Ok(Algorithm::Hho),
            "ssa" => Ok(Algorithm::Ssa),
            other => Err(Error::config(format!(
                "unknown algorithm '{other}' (expected hhossa, hho or ssa)"
            ))),
        }
    }
}

/// Every knob of one experiment.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub seed: u64,
    /// Hawk count for HHO and HHOSSA; the hybrid's inner chain has the same size.
    pub population: usize,
    /// Chain length for standalone SSA.
    pub ssa_population: usize,
    /// Main-loop iterations: HHO and HHOSSA outer iterations, standalone SSA steps.
    pub iterations: usize,
    /// Inner SSA steps per HHOSSA iteration.
    pub ssa_iterations: usize,
    pub beta: f64,
    pub bounds: Bounds,
    pub fitness: FitnessParams,
    /// Share of the data used for training; the rest is the test set.
    pub train_fraction: f64,
    /// Share of the training portion held out to compute the fitness error.
    pub validation_fraction: f64,
    /// Min-max scale features (fitted on the training portion).
    pub scale: bool,
    /// Class id treated as positive by the metrics.
    pub positive_class: u8,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            population: 30,
            ssa_population: 30,
            iterations: 100,
            ssa_iterations: 20,
            beta: 1.5,
            bounds: Bounds::default(),
            fitness: FitnessParams::default(),
            train_fraction: 0.8,
            validation_fraction: 0.2,
            scale: true,
            positive_class: 1,
        }
    }
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        if self.population == 0 || self.ssa_population == 0 {
            return Err(Error::config("population sizes must be at least 1"));
        }
        validate_beta(self.beta)?;
        self.bounds.validate()?;
        self.fitness.validate()?;
        for (name, v) in [
            ("train_fraction", self.train_fraction),
            ("validation_fraction", self.validation_fraction),
        ] {
            if !(v > 0.0 && v < 1.0) {
                return Err(Error::config(format!("{name} must lie in (0, 1), got {v}")));
            }
        }
        if self.positive_class > 1 {
            return Err(Error::config("positive_class must be 0 or 1"));
        }
        Ok(())
    }

    pub fn hho(&self) -> HhoConfig {
        HhoConfig {
            population: self.population,
            iterations: self.iterations,
            beta: self.beta,
            bounds: self.bounds,
        }
    }

    pub fn ssa(&self) -> SsaConfig {
        SsaConfig {
            population: self.ssa_population,
            iterations: self.iterations,
            bounds: self.bounds,
        }
    }

    pub fn hybrid(&self) -> HybridConfig {
        HybridConfig {
            population: self.population,
            hho_iterations: self.iterations,
            ssa_iterations: self.ssa_iterations,
            beta: self.beta,
            bounds: self.bounds,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Timing {
    /// Whole experiment, from split to final metrics.
    pub wall_time_seconds: f64,
    /// Optimizer run only.
    pub optimization_seconds: f64,
    /// Classifying the test set with the selected features (median of
    /// repeated passes).
    pub classification_seconds: f64,
}

/// Outcome of one seeded experiment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunResult {
    pub schema_version: u32,
    pub algo: Algorithm,
    pub seed: u64,
    pub best_mask: FeatureMask,
    pub selected_features: Vec<String>,
    pub n_selected: usize,
    pub n_features: usize,
    pub best_fitness: f64,
    /// KNN error on the fitness validation split; absent for an empty mask.
    pub validation_error: Option<f64>,
    pub trace: Vec<f64>,
    pub evaluations: usize,
    pub evaluations_per_iteration: Vec<usize>,
    pub refinements: Vec<Refinement>,
    pub positive_class: String,
    pub n_train: usize,
    pub n_test: usize,
    pub test_metrics: MetricReport,
    pub config: ExperimentConfig,
    pub timing: Timing,
}

impl RunResult {
    /// JSON value without the timing block, for reproducibility comparisons.
    pub fn deterministic_json(&self) -> serde_json::Value {
        let mut v = serde_json::to_value(self).expect("RunResult serializes");
        v.as_object_mut()
            .expect("RunResult is a JSON object")
            .remove("timing");
        v
    }
}

/// Runs the named optimizer on an arbitrary objective.
pub fn optimize(
    algo: Algorithm,
    config: &ExperimentConfig,
    objective: &dyn crate::search::Fitness,
    rng: &mut RandomSource,
) -> Result<OptimizerOutcome> {
    match algo {
        Algorithm::Hho => hho_run(&config.hho(), objective, rng),
        Algorithm::Ssa => ssa_run(&config.ssa(), objective, rng, None),
        Algorithm::Hhossa => hhossa_run(&config.hybrid(), objective, rng),
    }
}

/// Train/test split plus the fitness objective built from the training side.
pub struct PreparedData {
    pub train: TabularDataset,
    pub test: TabularDataset,
    pub objective: WrapperFitness,
}

/// Splits, scales and builds the wrapper objective for `config.seed`.
pub fn prepare(ds: &TabularDataset, config: &ExperimentConfig) -> Result<PreparedData> {
    config.validate()?;
    let root = RandomSource::new(config.seed);
    let outer = stratified_split(ds, config.train_fraction, &mut root.split(STREAM_SPLIT))?;
    let (train, test) = if config.scale {
        let scaler = MinMaxScaler::fit(&outer.train);
        (
            scaler.transform(&outer.train)?,
            scaler.transform(&outer.test)?,
        )
    } else {
        (outer.train, outer.test)
    };
    let inner = stratified_split(
        &train,
        1.0 - config.validation_fraction,
        &mut root.split(STREAM_FITNESS_SPLIT),
    )?;
    let objective = WrapperFitness::new(inner.train, inner.test, config.fitness)?;
    Ok(PreparedData {
        train,
        test,
        objective,
    })
}

pub fn run_experiment(
    ds: &TabularDataset,
    algo: Algorithm,
    config: &ExperimentConfig,
) -> Result<RunResult> {
    let started = Instant::now();
    let data = prepare(ds, config)?;
    let root = RandomSource::new(config.seed);

    let opt_started = Instant::now();
    let outcome = optimize(
        algo,
        config,
        &data.objective,
        &mut root.split(STREAM_OPTIMIZER),
    )?;
    let optimization_seconds = opt_started.elapsed().as_secs_f64();

    let report = data.objective.evaluate(&outcome.best_position)?;
    let mask = report.mask.clone();
    let (predicted, classification_seconds) =
        classify_test_set(&data.train, &data.test, &mask, config.fitness.k)?;
    let test_metrics =
        MetricReport::evaluate(&predicted, data.test.labels(), config.positive_class)?;

    let names = ds.feature_names();
    Ok(RunResult {
        schema_version: SCHEMA_VERSION,
        algo,
        seed: config.seed,
        selected_features: mask
            .selected_indices()
            .iter()
            .map(|&j| names[j].clone())
            .collect(),
        n_selected: report.n_selected,
        n_features: mask.len(),
        best_mask: mask,
        best_fitness: outcome.best_fitness,
        validation_error: report.class_err,
        trace: outcome.trace,
        evaluations: outcome.evaluations,
        evaluations_per_iteration: outcome.evaluations_per_iteration,
        refinements: outcome.refinements,
        positive_class: ds.class_names()[config.positive_class as usize].clone(),
        n_train: data.train.n_samples(),
        n_test: data.test.n_samples(),
        test_metrics,
        config: *config,
        timing: Timing {
            wall_time_seconds: started.elapsed().as_secs_f64(),
            optimization_seconds,
            classification_seconds,
        },
    })
}

/// Runs seeds `config.seed .. config.seed + repeat`.
pub fn run_repeated(
    ds: &TabularDataset,
    algo: Algorithm,
    config: &ExperimentConfig,
    repeat: usize,
) -> Result<Vec<RunResult>> {
    if repeat == 0 {
        return Err(Error::config("repeat must be at least 1"));
    }
    (0..repeat as u64)
        .map(|i| {
            let cfg = ExperimentConfig {
                seed: config.seed.wrapping_add(i),
                ..*config
            };
            run_experiment(ds, algo, &cfg)
        })
        .collect()
}

/// Predicts the test labels with KNN on the masked columns and times it.
///
/// With an empty mask every training row is at distance zero, so the
/// neighbors are the first `k` training rows and every test row gets their
/// majority class.
fn classify_test_set(
    train: &TabularDataset,
    test: &TabularDataset,
    mask: &FeatureMask,
    k: usize,
) -> Result<(Vec<u8>, f64)> {
    if mask.n_selected() == 0 {
        let k = k.min(train.n_samples());
        let ones = train.labels()[..k].iter().filter(|&&l| l == 1).count();
        let class = u8::from(2 * ones > k);
        return Ok((vec![class; test.n_samples()], 0.0));
    }
    let train = train.project(mask)?;
    let test = test.project(mask)?;
    let model = KnnModel::new(&train, k)?;
    let mut predicted = Vec::new();
    let mut samples = Vec::with_capacity(CLASSIFICATION_TIMING_PASSES);
    for _ in 0..CLASSIFICATION_TIMING_PASSES {
        let t = Instant::now();
        predicted = model.predict_all(&test)?;
        samples.push(t.elapsed().as_secs_f64());
    }
    Ok((predicted, crate::report::median(&samples)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::synthetic::{generate, SyntheticSpec};

    fn small_config() -> ExperimentConfig {
        ExperimentConfig {
            population: 6,
            ssa_population: 6,
            iterations: 5,
            ssa_iterations: 2,
            ..Default::default()
        }
    }

    #[test]
    fn algorithm_names_round_trip() {
        for a in Algorithm::ALL {
            assert_eq!(a.name().parse::<Algorithm>().unwrap(), a);
        }
        assert!("woa".parse::<Algorithm>().is_err());
    }

    #[test]
    fn experiment_shapes() {
        let ds = generate(&SyntheticSpec {
            n_samples: 60,
            n_informative: 2,
            n_noise: 4,
            ..Default::default()
        })
        .unwrap()
        .dataset;
        for algo in Algorithm::ALL {
            let r = run_experiment(&ds, algo, &small_config()).unwrap();
            assert_eq!(r.trace.len(), 6);
            assert_eq!(r.n_train + r.n_test, 60);
            assert_eq!(r.n_test, 12);
            assert_eq!(r.n_features, 6);
            assert_eq!(r.test_metrics.counts.total(), 12);
            assert!(r.trace.windows(2).all(|w| w[1] <= w[0]));
        }
    }

    #[test]
    fn single_feature_single_iteration() {
        let ds = generate(&SyntheticSpec {
            n_samples: 40,
            n_informative: 1,
            n_noise: 0,
            ..Default::default()
        })
        .unwrap()
        .dataset;
        let cfg = ExperimentConfig {
            iterations: 1,
            ..small_config()
        };
        let r = run_experiment(&ds, Algorithm::Hhossa, &cfg).unwrap();
        assert_eq!(r.best_mask.len(), 1);
        if r.n_selected == 0 {
            assert_eq!(r.best_fitness, crate::objective::EMPTY_MASK_PENALTY);
        }
    }

    #[test]
    fn repeated_runs_use_consecutive_seeds() {
        let ds = generate(&SyntheticSpec {
            n_samples: 40,
            n_informative: 2,
            n_noise: 2,
            ..Default::default()
        })
        .unwrap()
        .dataset;
        let cfg = ExperimentConfig {
            seed: 10,
            ..small_config()
        };
        let rs = run_repeated(&ds, Algorithm::Hho, &cfg, 3).unwrap();
        assert_eq!(
            rs.iter().map(|r| r.seed).collect::<Vec<_>>(),
            vec![10, 11, 12]
        );
        assert!(run_repeated(&ds, Algorithm::Hho, &cfg, 0).is_err());
    }

    #[test]
    fn invalid_config_rejected() {
        let ds = generate(&SyntheticSpec::default()).unwrap().dataset;
        let cfg = ExperimentConfig {
            train_fraction: 1.0,
            ..small_config()
        };
        assert!(matches!(
            run_experiment(&ds, Algorithm::Hho, &cfg),
            Err(Error::Config(_))
        ));
    }
}
