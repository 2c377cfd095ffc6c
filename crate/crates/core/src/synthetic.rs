//! Synthetic binary classification benchmarks with known informative features.

use serde::{Deserialize, Serialize};

use crate::dataset::TabularDataset;
use crate::error::{Error, Result};
use crate::rng::RandomSource;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SyntheticSpec {
    pub n_samples: usize,
    pub n_informative: usize,
    pub n_noise: usize,
    /// Distance between the two class means of each informative feature, in
    /// units of its standard deviation.
    pub separation: f64,
    pub seed: u64,
}

impl Default for SyntheticSpec {
    fn default() -> Self {
        Self {
            n_samples: 200,
            n_informative: 5,
            n_noise: 15,
            separation: 2.0,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SyntheticDataset {
    pub dataset: TabularDataset,
    /// Column indices of the informative features.
    pub informative: Vec<usize>,
}

/// Balanced two-class data. Informative columns are `N(±separation/2, 1)`
/// by class; noise columns are `U(0, 1)` regardless of class. Informative
/// columns come first. Samples alternate between the classes.
pub fn generate(spec: &SyntheticSpec) -> Result<SyntheticDataset> {
    if spec.n_samples < 4 {
        return Err(Error::config("synthetic dataset needs at least 4 samples"));
    }
    if spec.n_informative + spec.n_noise == 0 {
        return Err(Error::config(
            "synthetic dataset needs at least one feature",
        ));
    }
    if !(spec.separation.is_finite() && spec.separation >= 0.0) {
        return Err(Error::config("separation must be finite and non-negative"));
    }
    let mut rng = RandomSource::new(spec.seed);
    let n_features = spec.n_informative + spec.n_noise;
    let half = spec.separation / 2.0;
    let mut features = Vec::with_capacity(spec.n_samples * n_features);
    let mut labels = Vec::with_capacity(spec.n_samples);
    for i in 0..spec.n_samples {
        let class = (i % 2) as u8;
        let mean = if class == 0 { -half } else { half };
        features.extend((0..spec.n_informative).map(|_| mean + rng.next_normal()));
        features.extend((0..spec.n_noise).map(|_| rng.next_f64()));
        labels.push(class);
    }
    Ok(SyntheticDataset {
        dataset: TabularDataset::from_flat(features, labels, n_features)?,
        informative: (0..spec.n_informative).collect(),
    })
}
