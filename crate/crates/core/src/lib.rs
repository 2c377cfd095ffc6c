//! Wrapper feature selection with Harris Hawks Optimization, the Salp Swarm
//! Algorithm, and their hybrid (HHOSSA), scored by a KNN classifier.
//!
//! Optimizers search the continuous box `[lb, ub]^D`; a position becomes a
//! feature subset by thresholding each coordinate. The fitness of a subset
//! trades KNN validation error against subset size.
//!
//! ```no_run
//! use swarmselect_core::{load_csv, run_experiment, Algorithm, ExperimentConfig, LabelColumn};
//!
//! let ds = load_csv("features.csv", &LabelColumn::Name("label".into()))?;
//! let result = run_experiment(&ds, Algorithm::Hhossa, &ExperimentConfig::default())?;
//! println!("selected {:?}", result.selected_features);
//! # Ok::<(), swarmselect_core::Error>(())
//! ```

pub mod dataset;
pub mod error;
pub mod experiment;
pub mod hho;
pub mod hhossa;
pub mod knn;
pub mod metrics;
pub mod objective;
pub mod report;
pub mod rng;
pub mod search;
pub mod ssa;
pub mod synthetic;

pub use dataset::{
    load_csv, minmax_scale, stratified_split, write_csv, LabelColumn, MinMaxScaler, SplitPair,
    TabularDataset,
};
pub use error::{Error, Result};
pub use experiment::{
    run_experiment, run_repeated, Algorithm, ExperimentConfig, RunResult, Timing,
};
pub use hho::{hho_run, HawkPopulation, HhoConfig};
pub use hhossa::{hhossa_run, HybridConfig};
pub use knn::KnnModel;
pub use metrics::{ConfusionCounts, MetricReport};
pub use objective::{binarize, FeatureMask, FitnessParams, FitnessReport, WrapperFitness};
pub use report::{emit_timing, summarize, ResultsDocument, Summary, TimingTable};
pub use rng::RandomSource;
pub use search::{Bounds, Fitness, FnFitness, OptimizerOutcome};
pub use ssa::{ssa_run, SalpChain, SsaConfig};
pub use synthetic::{SyntheticDataset, SyntheticSpec};
