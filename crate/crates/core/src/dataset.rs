//! Labeled tabular datasets: CSV loading, min-max scaling, stratified
//! splitting and column projection.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::objective::FeatureMask;
use crate::rng::RandomSource;

/// Binary-labeled feature matrix stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct TabularDataset {
    features: Vec<f64>,
    labels: Vec<u8>,
    n_features: usize,
    feature_names: Vec<String>,
    class_names: [String; 2],
}

impl TabularDataset {
    /// Builds a dataset from row vectors.
    ///
    /// Rows must share one length, every value must be finite, labels must be
    /// 0 or 1, and there must be at least two rows and one feature.
    pub fn from_rows(rows: Vec<Vec<f64>>, labels: Vec<u8>) -> Result<Self> {
        let n_features = rows.first().map_or(0, Vec::len);
        let mut features = Vec::with_capacity(rows.len() * n_features);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != n_features {
                return Err(Error::argument(format!(
                    "row {i} has {} features, expected {n_features}",
                    row.len()
                )));
            }
            features.extend(row);
        }
        Self::from_flat(features, labels, n_features)
    }

    /// Builds a dataset from a row-major buffer of `labels.len() * n_features` values.
    pub fn from_flat(features: Vec<f64>, labels: Vec<u8>, n_features: usize) -> Result<Self> {
        let names = (0..n_features).map(|j| format!("f{j}")).collect();
        Self::with_names(
            features,
            labels,
            n_features,
            names,
            ["0".into(), "1".into()],
        )
    }

    fn with_names(
        features: Vec<f64>,
        labels: Vec<u8>,
        n_features: usize,
        feature_names: Vec<String>,
        class_names: [String; 2],
    ) -> Result<Self> {
        if labels.len() < 2 {
            return Err(Error::argument(format!(
                "dataset needs at least 2 samples, got {}",
                labels.len()
            )));
        }
        if n_features == 0 {
            return Err(Error::argument("dataset needs at least 1 feature"));
        }
        if features.len() != labels.len() * n_features {
            return Err(Error::argument(format!(
                "feature buffer has {} values, expected {} x {}",
                features.len(),
                labels.len(),
                n_features
            )));
        }
        if let Some(pos) = features.iter().position(|v| !v.is_finite()) {
            return Err(Error::argument(format!(
                "non-finite value at row {}, column {}",
                pos / n_features,
                pos % n_features
            )));
        }
        if let Some(&bad) = labels.iter().find(|&&l| l > 1) {
            return Err(Error::argument(format!(
                "label {bad} is not a binary class id"
            )));
        }
        Ok(Self {
            features,
            labels,
            n_features,
            feature_names,
            class_names,
        })
    }

    pub fn n_samples(&self) -> usize {
        self.labels.len()
    }

    pub fn n_features(&self) -> usize {
        self.n_features
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.features[i * self.n_features..(i + 1) * self.n_features]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> + '_ {
        self.features.chunks_exact(self.n_features)
    }

    pub fn label(&self, i: usize) -> u8 {
        self.labels[i]
    }

    pub fn labels(&self) -> &[u8] {
        &self.labels
    }

    pub fn feature_names(&self) -> &[String] {
        &self.feature_names
    }

    /// Original label values; class id `c` corresponds to `class_names()[c]`.
    pub fn class_names(&self) -> &[String; 2] {
        &self.class_names
    }

    pub fn class_counts(&self) -> [usize; 2] {
        let ones = self.labels.iter().filter(|&&l| l == 1).count();
        [self.labels.len() - ones, ones]
    }

    /// New dataset made of the given rows, in the given order.
    pub fn select_rows(&self, indices: &[usize]) -> Result<Self> {
        let mut features = Vec::with_capacity(indices.len() * self.n_features);
        let mut labels = Vec::with_capacity(indices.len());
        for &i in indices {
            features.extend_from_slice(self.row(i));
            labels.push(self.labels[i]);
        }
        Self::with_names(
            features,
            labels,
            self.n_features,
            self.feature_names.clone(),
            self.class_names.clone(),
        )
    }

    /// Keeps only the columns selected by `mask`, preserving row order.
    pub fn project(&self, mask: &FeatureMask) -> Result<Self> {
        if mask.len() != self.n_features {
            return Err(Error::Projection(format!(
                "mask has {} bits but the dataset has {} features",
                mask.len(),
                self.n_features
            )));
        }
        let cols = mask.selected_indices();
        if cols.is_empty() {
            return Err(Error::Projection("mask selects no features".into()));
        }
        let mut features = Vec::with_capacity(self.n_samples() * cols.len());
        for row in self.rows() {
            features.extend(cols.iter().map(|&j| row[j]));
        }
        let names = cols
            .iter()
            .map(|&j| self.feature_names[j].clone())
            .collect();
        Self::with_names(
            features,
            self.labels.clone(),
            cols.len(),
            names,
            self.class_names.clone(),
        )
    }
}

/// Which CSV column holds the class label.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LabelColumn {
    Index(usize),
    Name(String),
    Last,
}

impl LabelColumn {
    /// Interprets `s` as a header name, or as a zero-based index when it is
    /// all digits and no header carries that exact name.
    pub fn parse(s: &str) -> Self {
        match s.parse::<usize>() {
            Ok(i) => LabelColumn::Index(i),
            Err(_) => LabelColumn::Name(s.to_string()),
        }
    }

    fn resolve(&self, headers: &[String]) -> Option<usize> {
        match self {
            LabelColumn::Last => headers.len().checked_sub(1),
            LabelColumn::Name(name) => headers.iter().position(|h| h == name),
            LabelColumn::Index(i) => {
                let as_name = i.to_string();
                headers
                    .iter()
                    .position(|h| *h == as_name)
                    .or_else(|| (*i < headers.len()).then_some(*i))
            }
        }
    }
}

/// Loads a comma-separated file with a header row.
///
/// The two distinct label values are mapped to class ids by sorted order:
/// numerically when both parse as numbers, lexicographically otherwise.
pub fn load_csv(path: impl AsRef<Path>, label_column: &LabelColumn) -> Result<TabularDataset> {
    let path = path.as_ref();
    let load_err = |message: String| Error::Load {
        path: path.to_path_buf(),
        message,
    };
    let file = std::fs::File::open(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_reader(file);
    let headers: Vec<String> = reader
        .headers()
        .map_err(|e| load_err(format!("cannot read header: {e}")))?
        .iter()
        .map(|h| h.trim().to_string())
        .collect();
    if headers.is_empty() || (headers.len() == 1 && headers[0].is_empty()) {
        return Err(load_err("file is empty".into()));
    }
    let label_idx = label_column
        .resolve(&headers)
        .ok_or_else(|| load_err(format!("label column {label_column:?} not found")))?;
    if headers.len() < 2 {
        return Err(load_err(
            "need at least one feature column besides the label".into(),
        ));
    }

    let n_features = headers.len() - 1;
    let mut features = Vec::new();
    let mut raw_labels = Vec::new();
    for (r, record) in reader.records().enumerate() {
        // Data rows are numbered from 1; line = row + 1 because of the header.
        let row = r + 1;
        let record = record.map_err(|e| load_err(format!("row {row}: {e}")))?;
        if record.len() != headers.len() {
            return Err(load_err(format!(
                "row {row} has {} cells, expected {}",
                record.len(),
                headers.len()
            )));
        }
        for (c, cell) in record.iter().enumerate() {
            let cell = cell.trim();
            if c == label_idx {
                raw_labels.push(cell.to_string());
                continue;
            }
            let value: f64 = cell.parse().map_err(|_| {
                load_err(format!(
                    "row {row}, column '{}': '{cell}' is not a number",
                    headers[c]
                ))
            })?;
            if !value.is_finite() {
                return Err(load_err(format!(
                    "row {row}, column '{}': non-finite value '{cell}'",
                    headers[c]
                )));
            }
            features.push(value);
        }
    }
    if raw_labels.is_empty() {
        return Err(load_err("file has no data rows".into()));
    }

    let mut classes: Vec<&str> = raw_labels.iter().map(String::as_str).collect();
    classes.sort_unstable();
    classes.dedup();
    if classes.len() != 2 {
        return Err(load_err(format!(
            "label column '{}' must have exactly 2 distinct values, found {}",
            headers[label_idx],
            classes.len()
        )));
    }
    if let (Ok(a), Ok(b)) = (classes[0].parse::<f64>(), classes[1].parse::<f64>()) {
        if b < a {
            classes.swap(0, 1);
        }
    }
    let class_names = [classes[0].to_string(), classes[1].to_string()];
    let labels = raw_labels
        .iter()
        .map(|l| u8::from(*l == class_names[1]))
        .collect();
    let feature_names = headers
        .iter()
        .enumerate()
        .filter(|&(c, _)| c != label_idx)
        .map(|(_, h)| h.clone())
        .collect();
    TabularDataset::with_names(features, labels, n_features, feature_names, class_names)
        .map_err(|e| load_err(e.to_string()))
}

/// Writes `ds` as CSV with its feature names and a trailing `label` column
/// holding the original class names.
pub fn write_csv(ds: &TabularDataset, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let io_err = |e: csv::Error| Error::Load {
        path: path.to_path_buf(),
        message: e.to_string(),
    };
    let mut w = csv::Writer::from_path(path).map_err(io_err)?;
    let mut header: Vec<&str> = ds.feature_names.iter().map(String::as_str).collect();
    header.push("label");
    w.write_record(&header).map_err(io_err)?;
    for (i, row) in ds.rows().enumerate() {
        let mut rec: Vec<String> = row.iter().map(|v| v.to_string()).collect();
        rec.push(ds.class_names[ds.labels[i] as usize].clone());
        w.write_record(&rec).map_err(io_err)?;
    }
    w.flush().map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Per-feature min-max transform onto `[0, 1]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MinMaxScaler {
    pub mins: Vec<f64>,
    pub maxs: Vec<f64>,
}

impl MinMaxScaler {
    pub fn fit(ds: &TabularDataset) -> Self {
        let mut mins = vec![f64::INFINITY; ds.n_features];
        let mut maxs = vec![f64::NEG_INFINITY; ds.n_features];
        for row in ds.rows() {
            for (j, &v) in row.iter().enumerate() {
                mins[j] = mins[j].min(v);
                maxs[j] = maxs[j].max(v);
            }
        }
        Self { mins, maxs }
    }

    /// Scales one value of feature `j`. Constant features map to 0 and values
    /// outside the fitted range are clamped.
    pub fn scale_value(&self, j: usize, v: f64) -> f64 {
        let span = self.maxs[j] - self.mins[j];
        if span <= 0.0 {
            0.0
        } else {
            ((v - self.mins[j]) / span).clamp(0.0, 1.0)
        }
    }

    pub fn transform(&self, ds: &TabularDataset) -> Result<TabularDataset> {
        if ds.n_features != self.mins.len() {
            return Err(Error::argument(format!(
                "scaler fitted on {} features, dataset has {}",
                self.mins.len(),
                ds.n_features
            )));
        }
        let n = ds.n_features;
        let features = ds
            .features
            .iter()
            .enumerate()
            .map(|(pos, &v)| self.scale_value(pos % n, v))
            .collect();
        Ok(TabularDataset {
            features,
            ..ds.clone()
        })
    }
}

/// Fits a scaler on `ds` and returns the scaled copy together with it.
pub fn minmax_scale(ds: &TabularDataset) -> (TabularDataset, MinMaxScaler) {
    let scaler = MinMaxScaler::fit(ds);
    let scaled = scaler
        .transform(ds)
        .expect("scaler was fitted on this dataset");
    (scaled, scaler)
}

/// Row-disjoint train/test partition, plus the original row indices of each side.
#[derive(Debug, Clone)]
pub struct SplitPair {
    pub train: TabularDataset,
    pub test: TabularDataset,
    pub train_rows: Vec<usize>,
    pub test_rows: Vec<usize>,
    pub split_seed: u64,
}

/// Stratified split: each class is shuffled independently and
/// `round(train_fraction * class_size)` of its rows go to train, kept within
/// `1..class_size` so both sides see every class. Rows keep their original
/// relative order on each side.
pub fn stratified_split(
    ds: &TabularDataset,
    train_fraction: f64,
    rng: &mut RandomSource,
) -> Result<SplitPair> {
    if !(train_fraction > 0.0 && train_fraction < 1.0) {
        return Err(Error::Split(format!(
            "train fraction must lie in (0, 1), got {train_fraction}"
        )));
    }
    let mut train_rows = Vec::new();
    let mut test_rows = Vec::new();
    for class in 0..=1u8 {
        let mut idx: Vec<usize> = (0..ds.n_samples())
            .filter(|&i| ds.labels[i] == class)
            .collect();
        if idx.len() < 2 {
            return Err(Error::Split(format!(
                "class {} ('{}') has {} sample(s); at least 2 are required",
                class,
                ds.class_names[class as usize],
                idx.len()
            )));
        }
        rng.shuffle(&mut idx);
        let n_train =
            ((train_fraction * idx.len() as f64).round() as usize).clamp(1, idx.len() - 1);
        train_rows.extend_from_slice(&idx[..n_train]);
        test_rows.extend_from_slice(&idx[n_train..]);
    }
    train_rows.sort_unstable();
    test_rows.sort_unstable();
    Ok(SplitPair {
        train: ds.select_rows(&train_rows)?,
        test: ds.select_rows(&test_rows)?,
        train_rows,
        test_rows,
        split_seed: rng.seed(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    fn write_tmp(contents: &str) -> tempfile::NamedTempFile {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        f.write_all(contents.as_bytes()).unwrap();
        f
    }

    fn balanced(n_per_class: usize, n_features: usize) -> TabularDataset {
        let n = 2 * n_per_class;
        let rows = (0..n)
            .map(|i| {
                (0..n_features)
                    .map(|j| (i * n_features + j) as f64)
                    .collect()
            })
            .collect();
        let labels = (0..n).map(|i| (i % 2) as u8).collect();
        TabularDataset::from_rows(rows, labels).unwrap()
    }

    #[test]
    fn loads_small_csv() {
        let f = write_tmp("f1,f2,label\n1,2,a\n3,4,b\n5,6,a\n");
        let ds = load_csv(f.path(), &LabelColumn::Name("label".into())).unwrap();
        assert_eq!(ds.n_samples(), 3);
        assert_eq!(ds.n_features(), 2);
        assert_eq!(ds.labels(), &[0, 1, 0]);
        assert_eq!(ds.row(1), &[3.0, 4.0]);
        assert_eq!(ds.feature_names(), &["f1".to_string(), "f2".to_string()]);
    }

    #[test]
    fn label_mapping_is_alphabetical() {
        let f = write_tmp("x,label\n1,normal\n2,covid\n3,normal\n");
        let ds = load_csv(f.path(), &LabelColumn::Last).unwrap();
        assert_eq!(
            ds.class_names(),
            &["covid".to_string(), "normal".to_string()]
        );
        assert_eq!(ds.labels(), &[1, 0, 1]);
    }

    #[test]
    fn numeric_labels_sort_numerically() {
        let f = write_tmp("x,y\n1,10\n2,9\n");
        let ds = load_csv(f.path(), &LabelColumn::Index(1)).unwrap();
        assert_eq!(ds.class_names(), &["9".to_string(), "10".to_string()]);
        assert_eq!(ds.labels(), &[1, 0]);
    }

    #[test]
    fn label_column_may_be_first() {
        let f = write_tmp("label,a,b\nx,1,2\ny,3,4\n");
        let ds = load_csv(f.path(), &LabelColumn::parse("0")).unwrap();
        assert_eq!(ds.row(0), &[1.0, 2.0]);
        assert_eq!(ds.feature_names(), &["a".to_string(), "b".to_string()]);
    }

    #[test]
    fn nan_cell_is_rejected_with_location() {
        let f = write_tmp("f1,f2,label\n1,2,a\n3,NaN,b\n");
        let err = load_csv(f.path(), &LabelColumn::Last)
            .unwrap_err()
            .to_string();
        assert!(err.contains("row 2"), "{err}");
        assert!(err.contains("f2"), "{err}");
    }

    #[test]
    fn non_numeric_cell_is_rejected() {
        let f = write_tmp("f1,label\nabc,a\n1,b\n");
        let err = load_csv(f.path(), &LabelColumn::Last)
            .unwrap_err()
            .to_string();
        assert!(err.contains("row 1") && err.contains("f1"), "{err}");
    }

    #[test]
    fn three_classes_rejected() {
        let f = write_tmp("f1,label\n1,a\n2,b\n3,c\n");
        assert!(load_csv(f.path(), &LabelColumn::Last).is_err());
    }

    #[test]
    fn empty_and_missing_files_rejected() {
        let f = write_tmp("");
        assert!(load_csv(f.path(), &LabelColumn::Last).is_err());
        let f = write_tmp("f1,label\n");
        assert!(load_csv(f.path(), &LabelColumn::Last).is_err());
        assert!(matches!(
            load_csv("/definitely/not/here.csv", &LabelColumn::Last),
            Err(Error::Io { .. })
        ));
    }

    #[test]
    fn csv_round_trip() {
        let ds = balanced(3, 2);
        let f = tempfile::NamedTempFile::new().unwrap();
        write_csv(&ds, f.path()).unwrap();
        let back = load_csv(f.path(), &LabelColumn::Name("label".into())).unwrap();
        assert_eq!(back, ds);
    }

    #[test]
    fn minmax_direct_formula() {
        let ds = TabularDataset::from_rows(
            vec![vec![2.0, 7.0], vec![4.0, 7.0], vec![6.0, 7.0]],
            vec![0, 1, 0],
        )
        .unwrap();
        let (scaled, scaler) = minmax_scale(&ds);
        let col0: Vec<f64> = scaled.rows().map(|r| r[0]).collect();
        let col1: Vec<f64> = scaled.rows().map(|r| r[1]).collect();
        assert_eq!(col0, vec![0.0, 0.5, 1.0]);
        assert_eq!(col1, vec![0.0, 0.0, 0.0]);

        let test =
            TabularDataset::from_rows(vec![vec![10.0, 1.0], vec![-3.0, 9.0]], vec![0, 1]).unwrap();
        let t = scaler.transform(&test).unwrap();
        assert_eq!(t.row(0)[0], 1.0);
        assert_eq!(t.row(1)[0], 0.0);
    }

    #[test]
    fn split_ten_samples() {
        let ds = balanced(5, 1);
        let split = stratified_split(&ds, 0.8, &mut RandomSource::new(1)).unwrap();
        assert_eq!(split.train.n_samples(), 8);
        assert_eq!(split.train.class_counts(), [4, 4]);
        assert_eq!(split.test.class_counts(), [1, 1]);
    }

    #[test]
    fn split_half_of_four() {
        let ds = balanced(2, 1);
        let split = stratified_split(&ds, 0.5, &mut RandomSource::new(3)).unwrap();
        assert_eq!(split.train.class_counts(), [1, 1]);
        assert_eq!(split.test.class_counts(), [1, 1]);
    }

    #[test]
    fn split_is_deterministic() {
        let ds = balanced(20, 2);
        let a = stratified_split(&ds, 0.8, &mut RandomSource::new(9)).unwrap();
        let b = stratified_split(&ds, 0.8, &mut RandomSource::new(9)).unwrap();
        assert_eq!(a.train_rows, b.train_rows);
        assert_eq!(a.test_rows, b.test_rows);
    }

    #[test]
    fn split_rejects_singleton_class() {
        let ds = TabularDataset::from_rows(vec![vec![0.0], vec![1.0], vec![2.0]], vec![0, 0, 1])
            .unwrap();
        assert!(matches!(
            stratified_split(&ds, 0.8, &mut RandomSource::new(0)),
            Err(Error::Split(_))
        ));
        assert!(stratified_split(&balanced(3, 1), 1.0, &mut RandomSource::new(0)).is_err());
    }

    #[test]
    fn projection() {
        let ds =
            TabularDataset::from_rows(vec![vec![1.0, 2.0, 3.0], vec![4.0, 5.0, 6.0]], vec![0, 1])
                .unwrap();
        let p = ds.project(&FeatureMask::from_bits(vec![1, 0, 1])).unwrap();
        assert_eq!(p.n_features(), 2);
        assert_eq!(p.row(0), &[1.0, 3.0]);
        assert_eq!(p.row(1), &[4.0, 6.0]);

        assert_eq!(
            ds.project(&FeatureMask::from_bits(vec![1, 1, 1])).unwrap(),
            ds
        );
        assert!(matches!(
            ds.project(&FeatureMask::from_bits(vec![0, 0, 0])),
            Err(Error::Projection(_))
        ));
        assert!(ds.project(&FeatureMask::from_bits(vec![1, 0])).is_err());
    }

    #[test]
    fn rejects_degenerate_shapes() {
        assert!(TabularDataset::from_rows(vec![vec![1.0]], vec![0]).is_err());
        assert!(TabularDataset::from_rows(vec![vec![], vec![]], vec![0, 1]).is_err());
        assert!(TabularDataset::from_rows(vec![vec![f64::NAN], vec![1.0]], vec![0, 1]).is_err());
        assert!(TabularDataset::from_rows(vec![vec![1.0], vec![1.0]], vec![0, 2]).is_err());
    }
}
