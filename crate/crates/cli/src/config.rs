//! Settings resolution: built-in defaults, then a TOML config file, then
//! command-line flags.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use serde::Deserialize;
use swarmselect_core::{Algorithm, Bounds, ExperimentConfig, FitnessParams};

use crate::args::RunArgs;

/// Mirror of every run flag as a structured file.
///
/// ```toml
/// dataset = "features.csv"
/// label_column = "label"
/// algo = ["hhossa", "hho", "ssa"]
/// seed = 7
/// k = 5
/// train_fraction = 0.8
/// output = "results"
/// repeat = 10
///
/// [hho]
/// population = 30
/// iterations = 100
/// beta = 1.5
///
/// [ssa]
/// population = 30
/// iterations = 20
///
/// [fitness]
/// a = 0.9
/// b = 0.1
///
/// [binarize]
/// threshold = 0.5
///
/// [bounds]
/// lb = 0.0
/// ub = 1.0
/// ```
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub dataset: Option<PathBuf>,
    pub label_column: Option<String>,
    pub algo: Option<AlgoList>,
    pub seed: Option<u64>,
    pub k: Option<usize>,
    pub train_fraction: Option<f64>,
    pub validation_fraction: Option<f64>,
    pub output: Option<PathBuf>,
    pub repeat: Option<usize>,
    pub positive_label: Option<String>,
    pub scale: Option<bool>,
    #[serde(default)]
    pub hho: HhoSection,
    #[serde(default)]
    pub ssa: SsaSection,
    #[serde(default)]
    pub fitness: FitnessSection,
    #[serde(default)]
    pub binarize: BinarizeSection,
    #[serde(default)]
    pub bounds: BoundsSection,
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
pub enum AlgoList {
    One(String),
    Many(Vec<String>),
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HhoSection {
    pub population: Option<usize>,
    pub iterations: Option<usize>,
    pub beta: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SsaSection {
    pub population: Option<usize>,
    pub iterations: Option<usize>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FitnessSection {
    pub a: Option<f64>,
    pub b: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BinarizeSection {
    pub threshold: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoundsSection {
    pub lb: Option<f64>,
    pub ub: Option<f64>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading config file {}", path.display()))?;
        toml::from_str(&text).with_context(|| format!("parsing config file {}", path.display()))
    }
}

/// Fully resolved settings for one invocation.
#[derive(Debug, Clone)]
pub struct Settings {
    pub dataset: PathBuf,
    pub label_column: Option<String>,
    pub algos: Vec<Algorithm>,
    pub output: PathBuf,
    pub repeat: usize,
    pub positive_label: Option<String>,
    pub experiment: ExperimentConfig,
}

pub fn parse_algos(items: &[String]) -> Result<Vec<Algorithm>> {
    let mut algos = Vec::new();
    for item in items {
        for name in item.split(',').filter(|s| !s.trim().is_empty()) {
            let algo: Algorithm = name.parse()?;
            if !algos.contains(&algo) {
                algos.push(algo);
            }
        }
    }
    if algos.is_empty() {
        bail!("no algorithm selected");
    }
    Ok(algos)
}

pub fn resolve(args: &RunArgs) -> Result<Settings> {
    let file = match &args.config {
        Some(path) => FileConfig::load(path)?,
        None => FileConfig::default(),
    };
    let d = ExperimentConfig::default();

    let dataset = args
        .dataset
        .clone()
        .or(file.dataset)
        .context("no dataset given (use --dataset or the config key `dataset`)")?;

    let algos = if !args.algo.is_empty() {
        parse_algos(&args.algo)?
    } else {
        match file.algo {
            Some(AlgoList::One(s)) => parse_algos(&[s])?,
            Some(AlgoList::Many(v)) => parse_algos(&v)?,
            None => vec![Algorithm::Hhossa],
        }
    };

    let population = args
        .population
        .or(file.hho.population)
        .unwrap_or(d.population);
    let experiment = ExperimentConfig {
        seed: args.seed.or(file.seed).unwrap_or(d.seed),
        population,
        ssa_population: args
            .ssa_population
            .or(args.population)
            .or(file.ssa.population)
            .unwrap_or(population),
        iterations: args
            .iterations
            .or(file.hho.iterations)
            .unwrap_or(d.iterations),
        ssa_iterations: args
            .ssa_iterations
            .or(file.ssa.iterations)
            .unwrap_or(d.ssa_iterations),
        beta: args.beta.or(file.hho.beta).unwrap_or(d.beta),
        bounds: Bounds {
            lb: args.lb.or(file.bounds.lb).unwrap_or(d.bounds.lb),
            ub: args.ub.or(file.bounds.ub).unwrap_or(d.bounds.ub),
        },
        fitness: FitnessParams {
            a: args.fitness_a.or(file.fitness.a).unwrap_or(d.fitness.a),
            b: args.fitness_b.or(file.fitness.b).unwrap_or(d.fitness.b),
            threshold: args
                .threshold
                .or(file.binarize.threshold)
                .unwrap_or(d.fitness.threshold),
            k: args.k.or(file.k).unwrap_or(d.fitness.k),
        },
        train_fraction: args
            .train_fraction
            .or(file.train_fraction)
            .unwrap_or(d.train_fraction),
        validation_fraction: args
            .validation_fraction
            .or(file.validation_fraction)
            .unwrap_or(d.validation_fraction),
        scale: if args.no_scale {
            false
        } else {
            file.scale.unwrap_or(d.scale)
        },
        positive_class: d.positive_class,
    };
    experiment.validate()?;

    let repeat = args.repeat.or(file.repeat).unwrap_or(1);
    if repeat == 0 {
        bail!("--repeat must be at least 1");
    }

    Ok(Settings {
        dataset,
        label_column: args.label_column.clone().or(file.label_column),
        algos,
        output: args
            .output
            .clone()
            .or(file.output)
            .unwrap_or_else(|| PathBuf::from("results")),
        repeat,
        positive_label: args.positive_label.clone().or(file.positive_label),
        experiment,
    })
}
