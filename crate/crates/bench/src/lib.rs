//! Fixtures shared by the criterion benchmarks.

use swarmselect_core::experiment::{prepare, ExperimentConfig, PreparedData};
use swarmselect_core::synthetic::{generate, SyntheticSpec};

/// Scaled train/test split and wrapper objective on the default synthetic
/// benchmark (200 samples, 5 informative and 15 noise features).
pub fn prepared(seed: u64) -> PreparedData {
    let ds = generate(&SyntheticSpec::default())
        .expect("default synthetic spec is valid")
        .dataset;
    prepare(
        &ds,
        &ExperimentConfig {
            seed,
            ..Default::default()
        },
    )
    .expect("default config is valid")
}

/// Small optimizer budget so a single run takes milliseconds.
pub fn small_config() -> ExperimentConfig {
    ExperimentConfig {
        population: 10,
        ssa_population: 10,
        iterations: 10,
        ssa_iterations: 5,
        ..Default::default()
    }
}
