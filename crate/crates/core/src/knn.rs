//! Brute-force k-nearest-neighbor classifier (Euclidean distance).

use crate::dataset::TabularDataset;
use crate::error::{Error, Result};

/// KNN model borrowing its training set.
///
/// Neighbors are ranked by squared Euclidean distance with ties going to the
/// lower training row index. The vote is a simple majority; a tied vote
/// (possible only with even `k`) goes to the lower class id.
#[derive(Debug, Clone, Copy)]
pub struct KnnModel<'a> {
    train: &'a TabularDataset,
    k: usize,
}

impl<'a> KnnModel<'a> {
    /// Requires `1 <= k <= n_samples` and `k` odd.
    pub fn new(train: &'a TabularDataset, k: usize) -> Result<Self> {
        if k % 2 == 0 {
            return Err(Error::argument(format!(
                "k = {k} is even; binary voting needs an odd k (use with_even_k to allow it)"
            )));
        }
        Self::with_even_k(train, k)
    }

    /// Like [`KnnModel::new`] but accepts even `k`.
    pub fn with_even_k(train: &'a TabularDataset, k: usize) -> Result<Self> {
        if k == 0 || k > train.n_samples() {
            return Err(Error::argument(format!(
                "k must lie in 1..={}, got {k}",
                train.n_samples()
            )));
        }
        Ok(Self { train, k })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn train(&self) -> &'a TabularDataset {
        self.train
    }

    /// Indices of the `k` nearest training rows, nearest first.
    pub fn neighbors(&self, query: &[f64]) -> Result<Vec<usize>> {
        self.check_dim(query.len())?;
        Ok(self.nearest(query))
    }

    pub fn predict(&self, query: &[f64]) -> Result<u8> {
        self.check_dim(query.len())?;
        Ok(self.vote(&self.nearest(query)))
    }

    pub fn predict_all(&self, eval: &TabularDataset) -> Result<Vec<u8>> {
        self.check_dim(eval.n_features())?;
        Ok(eval.rows().map(|q| self.vote(&self.nearest(q))).collect())
    }

    /// Fraction of `eval` rows whose prediction differs from the label.
    pub fn error_rate(&self, eval: &TabularDataset) -> Result<f64> {
        let predicted = self.predict_all(eval)?;
        let wrong = predicted
            .iter()
            .zip(eval.labels())
            .filter(|(p, a)| p != a)
            .count();
        Ok(wrong as f64 / eval.n_samples() as f64)
    }

    fn check_dim(&self, len: usize) -> Result<()> {
        if len != self.train.n_features() {
            return Err(Error::argument(format!(
                "query has {len} features, model was trained on {}",
                self.train.n_features()
            )));
        }
        Ok(())
    }

    // Bounded insertion into a sorted buffer of (distance, index). Rows are
    // visited in index order and only strictly closer rows displace, which
    // realizes the lower-index tie-break.
    fn nearest(&self, query: &[f64]) -> Vec<usize> {
        let mut best: Vec<(f64, usize)> = Vec::with_capacity(self.k + 1);
        for (i, row) in self.train.rows().enumerate() {
            let d = squared_distance(row, query);
            if best.len() == self.k && d >= best[self.k - 1].0 {
                continue;
            }
            let pos = best.partition_point(|&(bd, _)| bd <= d);
            best.insert(pos, (d, i));
            best.truncate(self.k);
        }
        best.into_iter().map(|(_, i)| i).collect()
    }

    fn vote(&self, neighbors: &[usize]) -> u8 {
        let ones = neighbors
            .iter()
            .filter(|&&i| self.train.label(i) == 1)
            .count();
        u8::from(2 * ones > neighbors.len())
    }
}

pub fn squared_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}
