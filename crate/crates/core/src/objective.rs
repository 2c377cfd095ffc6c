//! Binarization of continuous positions into feature masks, and the wrapper
//! fitness that scores a mask with a KNN classifier.
//!
//! For a non-empty mask the fitness is
//! `a * class_err + b * (n_selected / n_features)`, where `class_err` is the
//! KNN error on the validation set using only the selected columns. An empty
//! mask scores [`EMPTY_MASK_PENALTY`] without touching the classifier.

use serde::{Deserialize, Serialize};

use crate::dataset::TabularDataset;
use crate::error::{Error, Result};
use crate::knn::KnnModel;
use crate::search::Fitness;

pub const DEFAULT_THRESHOLD: f64 = 0.5;
pub const DEFAULT_ERROR_WEIGHT: f64 = 0.9;
pub const DEFAULT_SIZE_WEIGHT: f64 = 0.1;
pub const EMPTY_MASK_PENALTY: f64 = 1.0;

/// Feature inclusion vector: `1` keeps the column, `0` drops it.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FeatureMask(Vec<u8>);

impl FeatureMask {
    /// Panics if any bit is not 0 or 1.
    pub fn from_bits(bits: Vec<u8>) -> Self {
        assert!(bits.iter().all(|&b| b <= 1), "mask bits must be 0 or 1");
        Self(bits)
    }

    pub fn ones(len: usize) -> Self {
        Self(vec![1; len])
    }

    pub fn bits(&self) -> &[u8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn n_selected(&self) -> usize {
        self.0.iter().filter(|&&b| b == 1).count()
    }

    pub fn selected_indices(&self) -> Vec<usize> {
        self.0
            .iter()
            .enumerate()
            .filter(|&(_, &b)| b == 1)
            .map(|(i, _)| i)
            .collect()
    }
}

/// `bit = 1` iff `coord > threshold`; a coordinate equal to the threshold maps to 0.
pub fn binarize(position: &[f64], threshold: f64) -> FeatureMask {
    FeatureMask(position.iter().map(|&x| u8::from(x > threshold)).collect())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitnessReport {
    pub fitness: f64,
    /// `None` for the empty mask, where no classifier is evaluated.
    pub class_err: Option<f64>,
    pub n_selected: usize,
    pub mask: FeatureMask,
}

/// Weights and threshold of the wrapper fitness.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FitnessParams {
    /// Weight on the classification error.
    pub a: f64,
    /// Weight on the selected-feature ratio.
    pub b: f64,
    pub threshold: f64,
    pub k: usize,
}

impl Default for FitnessParams {
    fn default() -> Self {
        Self {
            a: DEFAULT_ERROR_WEIGHT,
            b: DEFAULT_SIZE_WEIGHT,
            threshold: DEFAULT_THRESHOLD,
            k: 5,
        }
    }
}

impl FitnessParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.a > 0.0 && self.a <= 1.0) {
            return Err(Error::config(format!(
                "fitness.a must lie in (0, 1], got {}",
                self.a
            )));
        }
        if !(self.b >= 0.0 && self.b.is_finite()) {
            return Err(Error::config(format!(
                "fitness.b must be >= 0, got {}",
                self.b
            )));
        }
        if !(self.threshold > 0.0 && self.threshold < 1.0) {
            return Err(Error::config(format!(
                "binarize.threshold must lie in (0, 1), got {}",
                self.threshold
            )));
        }
        if self.k == 0 {
            return Err(Error::config("k must be at least 1"));
        }
        Ok(())
    }

    /// Combines a classification error and a subset size into one fitness value.
    pub fn combine(&self, class_err: f64, n_selected: usize, n_features: usize) -> f64 {
        self.a * class_err + self.b * (n_selected as f64 / n_features as f64)
    }
}

/// KNN wrapper objective over a fixed train/validation pair.
#[derive(Debug, Clone)]
pub struct WrapperFitness {
    train: TabularDataset,
    validation: TabularDataset,
    params: FitnessParams,
}

impl WrapperFitness {
    pub fn new(
        train: TabularDataset,
        validation: TabularDataset,
        params: FitnessParams,
    ) -> Result<Self> {
        params.validate()?;
        if train.n_features() != validation.n_features() {
            return Err(Error::argument(format!(
                "train has {} features, validation has {}",
                train.n_features(),
                validation.n_features()
            )));
        }
        // Surfaces a bad k now rather than on the first evaluation.
        KnnModel::new(&train, params.k)?;
        Ok(Self {
            train,
            validation,
            params,
        })
    }

    pub fn params(&self) -> &FitnessParams {
        &self.params
    }

    pub fn evaluate(&self, position: &[f64]) -> Result<FitnessReport> {
        if position.len() != self.train.n_features() {
            return Err(Error::argument(format!(
                "position has {} coordinates, dataset has {} features",
                position.len(),
                self.train.n_features()
            )));
        }
        self.evaluate_mask(binarize(position, self.params.threshold))
    }

    pub fn evaluate_mask(&self, mask: FeatureMask) -> Result<FitnessReport> {
        let n_selected = mask.n_selected();
        if n_selected == 0 {
            return Ok(FitnessReport {
                fitness: EMPTY_MASK_PENALTY,
                class_err: None,
                n_selected,
                mask,
            });
        }
        let train = self.train.project(&mask)?;
        let validation = self.validation.project(&mask)?;
        let class_err = KnnModel::new(&train, self.params.k)?.error_rate(&validation)?;
        Ok(FitnessReport {
            fitness: self.params.combine(class_err, n_selected, mask.len()),
            class_err: Some(class_err),
            n_selected,
            mask,
        })
    }
}

impl Fitness for WrapperFitness {
    fn dimension(&self) -> usize {
        self.train.n_features()
    }

    fn fitness(&self, position: &[f64]) -> f64 {
        self.evaluate(position)
            .expect("optimizer positions match the dataset dimension")
            .fitness
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binarize_examples() {
        assert_eq!(binarize(&[0.7, 0.3, 0.51], 0.5).bits(), &[1, 0, 1]);
        assert_eq!(binarize(&[0.5, 0.5], 0.5).bits(), &[0, 0]);
        assert_eq!(binarize(&[1.0; 4], 0.5), FeatureMask::ones(4));
    }

    #[test]
    fn combine_substitution() {
        let p = FitnessParams::default();
        assert!((p.combine(0.2, 63, 126) - 0.23).abs() < 1e-15);
    }

    #[test]
    fn params_validation() {
        assert!(FitnessParams::default().validate().is_ok());
        let bad = [
            FitnessParams {
                a: 0.0,
                ..Default::default()
            },
            FitnessParams {
                a: 1.5,
                ..Default::default()
            },
            FitnessParams {
                b: -0.1,
                ..Default::default()
            },
            FitnessParams {
                threshold: 1.0,
                ..Default::default()
            },
            FitnessParams {
                k: 0,
                ..Default::default()
            },
        ];
        for p in bad {
            assert!(p.validate().is_err(), "{p:?}");
        }
    }

    fn separable(n_per_class: usize, n_features: usize) -> TabularDataset {
        // Feature 0 is 0.1 for class 0 and 0.9 for class 1; the rest are a
        // deterministic class-independent pattern.
        let mut rows = Vec::new();
        let mut labels = Vec::new();
        for i in 0..2 * n_per_class {
            let class = (i % 2) as u8;
            let mut row = vec![if class == 0 { 0.1 } else { 0.9 }];
            row.extend((1..n_features).map(|j| ((i * 7 + j * 13) % 10) as f64 / 10.0));
            rows.push(row);
            labels.push(class);
        }
        TabularDataset::from_rows(rows, labels).unwrap()
    }

    #[test]
    fn empty_mask_is_penalized() {
        let ds = separable(5, 3);
        let w = WrapperFitness::new(ds.clone(), ds, FitnessParams::default()).unwrap();
        let r = w.evaluate(&[0.0, 0.0, 0.0]).unwrap();
        assert_eq!(r.fitness, EMPTY_MASK_PENALTY);
        assert_eq!(r.class_err, None);
        assert_eq!(r.n_selected, 0);
    }

    #[test]
    fn separating_feature_gives_zero_error() {
        let train = separable(10, 6);
        let validation = separable(4, 6);
        let w = WrapperFitness::new(train, validation, FitnessParams::default()).unwrap();
        let r = w.evaluate(&[0.9, 0.1, 0.2, 0.3, 0.0, 0.5]).unwrap();
        assert_eq!(r.mask.bits(), &[1, 0, 0, 0, 0, 0]);
        assert_eq!(r.class_err, Some(0.0));
        assert!((r.fitness - 0.1 / 6.0).abs() < 1e-15);
    }

    #[test]
    fn dimension_mismatch_rejected() {
        let ds = separable(5, 3);
        let w = WrapperFitness::new(ds.clone(), ds.clone(), FitnessParams::default()).unwrap();
        assert!(w.evaluate(&[1.0, 1.0]).is_err());
        let narrow = ds.project(&FeatureMask::from_bits(vec![1, 1, 0])).unwrap();
        assert!(WrapperFitness::new(ds, narrow, FitnessParams::default()).is_err());
    }

    #[test]
    fn evaluation_is_pure() {
        let train = separable(10, 5);
        let validation = separable(3, 5);
        let w = WrapperFitness::new(train, validation, FitnessParams::default()).unwrap();
        let x = [0.6, 0.7, 0.2, 0.9, 0.4];
        assert_eq!(w.evaluate(&x).unwrap(), w.evaluate(&x).unwrap());
    }
}
