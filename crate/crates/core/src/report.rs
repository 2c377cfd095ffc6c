//! Result tables: per-run metrics, per-algorithm medians, convergence traces
//! and the processing-time comparison.
//!
//! Accuracy is printed as a percentage with full `f64` precision; the other
//! ratios use two decimals.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::experiment::{Algorithm, RunResult, SCHEMA_VERSION};

/// Median of `values`; the mean of the two middle values for even lengths.
/// Returns NaN for an empty slice.
pub fn median(values: &[f64]) -> f64 {
    if values.is_empty() {
        return f64::NAN;
    }
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let mid = v.len() / 2;
    if v.len() % 2 == 1 {
        v[mid]
    } else {
        0.5 * (v[mid - 1] + v[mid])
    }
}

/// Medians over the runs of one algorithm.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub algo: Algorithm,
    pub runs: usize,
    pub seeds: Vec<u64>,
    pub median_accuracy: f64,
    pub median_precision: f64,
    pub median_recall: f64,
    pub median_specificity: f64,
    pub median_f1: f64,
    pub median_best_fitness: f64,
    pub median_n_selected: f64,
    pub median_classification_seconds: f64,
    pub median_optimization_seconds: f64,
}

pub fn summarize(results: &[RunResult]) -> Result<Summary> {
    let first = results
        .first()
        .ok_or_else(|| Error::argument("cannot summarize zero runs"))?;
    if results.iter().any(|r| r.algo != first.algo) {
        return Err(Error::argument(
            "summary rows must come from a single algorithm",
        ));
    }
    let med = |f: &dyn Fn(&RunResult) -> f64| median(&results.iter().map(f).collect::<Vec<_>>());
    Ok(Summary {
        algo: first.algo,
        runs: results.len(),
        seeds: results.iter().map(|r| r.seed).collect(),
        median_accuracy: med(&|r| r.test_metrics.accuracy),
        median_precision: med(&|r| r.test_metrics.precision),
        median_recall: med(&|r| r.test_metrics.recall),
        median_specificity: med(&|r| r.test_metrics.specificity),
        median_f1: med(&|r| r.test_metrics.f1),
        median_best_fitness: med(&|r| r.best_fitness),
        median_n_selected: med(&|r| r.n_selected as f64),
        median_classification_seconds: med(&|r| r.timing.classification_seconds),
        median_optimization_seconds: med(&|r| r.timing.optimization_seconds),
    })
}

/// The JSON document written per algorithm.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultsDocument {
    pub schema_version: u32,
    pub algo: Algorithm,
    pub runs: Vec<RunResult>,
    pub summary: Summary,
}

impl ResultsDocument {
    pub fn new(runs: Vec<RunResult>) -> Result<Self> {
        let summary = summarize(&runs)?;
        Ok(Self {
            schema_version: SCHEMA_VERSION,
            algo: summary.algo,
            runs,
            summary,
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("results serialize")
    }
}

pub const METRICS_HEADER: &str =
    "algorithm,seed,accuracy,precision,recall,specificity,f1,n_selected,best_fitness";

/// One row per run.
pub fn metrics_csv(results: &[RunResult]) -> String {
    let mut out = String::from(METRICS_HEADER);
    out.push('\n');
    for r in results {
        let m = &r.test_metrics;
        let _ = writeln!(
            out,
            "{},{},{},{:.2},{:.2},{:.2},{:.2},{},{}",
            r.algo,
            r.seed,
            100.0 * m.accuracy,
            m.precision,
            m.recall,
            m.specificity,
            m.f1,
            r.n_selected,
            r.best_fitness
        );
    }
    out
}

/// One median row per algorithm.
pub fn summary_csv(summaries: &[Summary]) -> String {
    let mut out = String::from(
        "algorithm,runs,median_accuracy,median_precision,median_recall,median_specificity,median_f1,median_n_selected,median_best_fitness\n",
    );
    for s in summaries {
        let _ = writeln!(
            out,
            "{},{},{},{:.2},{:.2},{:.2},{:.2},{},{}",
            s.algo,
            s.runs,
            100.0 * s.median_accuracy,
            s.median_precision,
            s.median_recall,
            s.median_specificity,
            s.median_f1,
            s.median_n_selected,
            s.median_best_fitness
        );
    }
    out
}

/// Long-format convergence traces: `algorithm,seed,iteration,best_fitness`.
pub fn trace_csv(results: &[RunResult]) -> String {
    let mut out = String::from("algorithm,seed,iteration,best_fitness\n");
    for r in results {
        for (t, f) in r.trace.iter().enumerate() {
            let _ = writeln!(out, "{},{},{},{}", r.algo, r.seed, t, f);
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimingRow {
    pub algorithm: String,
    pub runs: usize,
    /// Median time to classify the test set with the selected features.
    pub classification_seconds: f64,
    /// Median optimizer run time.
    pub optimization_seconds: f64,
}

/// Processing-time table. When HHOSSA, HHO and SSA were all run, a row
/// `hho+ssa` holds the sum of the standalone times and
/// [`TimingComparison`] records whether the hybrid came in below it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimingTable {
    pub rows: Vec<TimingRow>,
    pub comparison: Option<TimingComparison>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TimingComparison {
    pub hybrid_classification_seconds: f64,
    pub sum_classification_seconds: f64,
    pub hybrid_below_sum_classification: bool,
    pub hybrid_optimization_seconds: f64,
    pub sum_optimization_seconds: f64,
    pub hybrid_below_sum_optimization: bool,
}

pub fn emit_timing(results: &[RunResult]) -> Result<TimingTable> {
    if results.is_empty() {
        return Err(Error::argument("timing table needs at least one run"));
    }
    let mut rows = Vec::new();
    for algo in Algorithm::ALL {
        let runs: Vec<&RunResult> = results.iter().filter(|r| r.algo == algo).collect();
        if runs.is_empty() {
            continue;
        }
        let cls: Vec<f64> = runs
            .iter()
            .map(|r| r.timing.classification_seconds)
            .collect();
        let opt: Vec<f64> = runs.iter().map(|r| r.timing.optimization_seconds).collect();
        rows.push(TimingRow {
            algorithm: algo.to_string(),
            runs: runs.len(),
            classification_seconds: median(&cls),
            optimization_seconds: median(&opt),
        });
    }
    let find = |name: &str| rows.iter().find(|r| r.algorithm == name).cloned();
    let comparison = match (find("hhossa"), find("hho"), find("ssa")) {
        (Some(hybrid), Some(hho), Some(ssa)) => {
            let sum_cls = hho.classification_seconds + ssa.classification_seconds;
            let sum_opt = hho.optimization_seconds + ssa.optimization_seconds;
            rows.push(TimingRow {
                algorithm: "hho+ssa".into(),
                runs: hho.runs.min(ssa.runs),
                classification_seconds: sum_cls,
                optimization_seconds: sum_opt,
            });
            Some(TimingComparison {
                hybrid_classification_seconds: hybrid.classification_seconds,
                sum_classification_seconds: sum_cls,
                hybrid_below_sum_classification: hybrid.classification_seconds < sum_cls,
                hybrid_optimization_seconds: hybrid.optimization_seconds,
                sum_optimization_seconds: sum_opt,
                hybrid_below_sum_optimization: hybrid.optimization_seconds < sum_opt,
            })
        }
        _ => None,
    };
    Ok(TimingTable { rows, comparison })
}

impl TimingTable {
    /// `algorithm,runs,classification_seconds,optimization_seconds`.
    ///
    /// `classification_seconds` is the time to classify the test set with
    /// the selected features; `optimization_seconds` covers the whole
    /// feature-selection search. Both are medians over runs and depend on
    /// the machine.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("algorithm,runs,classification_seconds,optimization_seconds\n");
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{},{},{},{}",
                r.algorithm, r.runs, r.classification_seconds, r.optimization_seconds
            );
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::experiment::{run_experiment, ExperimentConfig, Timing};
    use crate::synthetic::{generate, SyntheticSpec};

    fn run(algo: Algorithm, seed: u64) -> RunResult {
        let ds = generate(&SyntheticSpec {
            n_samples: 40,
            n_informative: 2,
            n_noise: 2,
            ..Default::default()
        })
        .unwrap()
        .dataset;
        let cfg = ExperimentConfig {
            seed,
            population: 4,
            ssa_population: 4,
            iterations: 3,
            ssa_iterations: 2,
            ..Default::default()
        };
        run_experiment(&ds, algo, &cfg).unwrap()
    }

    fn with_timing(mut r: RunResult, cls: f64, opt: f64) -> RunResult {
        r.timing = Timing {
            wall_time_seconds: opt + cls,
            optimization_seconds: opt,
            classification_seconds: cls,
        };
        r
    }

    #[test]
    fn median_odd_even_empty() {
        assert_eq!(median(&[3.0, 1.0, 2.0]), 2.0);
        assert_eq!(median(&[4.0, 1.0, 2.0, 3.0]), 2.5);
        assert!(median(&[]).is_nan());
    }

    #[test]
    fn metrics_csv_formats_accuracy_as_percentage() {
        let mut r = run(Algorithm::Hho, 1);
        r.test_metrics.accuracy = 55.0 / 56.0;
        let csv = metrics_csv(&[r]);
        let row = csv.lines().nth(1).unwrap();
        assert!(row.starts_with("hho,1,98.21428571428571,"), "{row}");
    }

    #[test]
    fn single_result_single_row() {
        let t = emit_timing(&[run(Algorithm::Ssa, 0)]).unwrap();
        assert_eq!(t.rows.len(), 1);
        assert!(t.comparison.is_none());
        assert_eq!(t.to_csv().lines().count(), 2);
    }

    #[test]
    fn comparison_row_when_all_three_ran() {
        let results = vec![
            with_timing(run(Algorithm::Hhossa, 0), 1.0661, 5.0),
            with_timing(run(Algorithm::Hho, 0), 0.9906, 2.0),
            with_timing(run(Algorithm::Ssa, 0), 1.1425, 1.0),
        ];
        let t = emit_timing(&results).unwrap();
        assert_eq!(t.rows.len(), 4);
        assert_eq!(t.rows[3].algorithm, "hho+ssa");
        let c = t.comparison.unwrap();
        assert!(c.hybrid_below_sum_classification);
        assert!(!c.hybrid_below_sum_optimization);
        assert!((c.sum_classification_seconds - 2.1331).abs() < 1e-12);
    }

    #[test]
    fn empty_timing_input_is_an_error() {
        assert!(emit_timing(&[]).is_err());
    }

    #[test]
    fn summary_takes_medians() {
        let rs: Vec<RunResult> = (0..3).map(|s| run(Algorithm::Hho, s)).collect();
        let s = summarize(&rs).unwrap();
        let mut acc: Vec<f64> = rs.iter().map(|r| r.test_metrics.accuracy).collect();
        acc.sort_by(f64::total_cmp);
        assert_eq!(s.median_accuracy, acc[1]);
        assert_eq!(s.runs, 3);
        assert!(summarize(&[]).is_err());
        assert!(summarize(&[run(Algorithm::Hho, 0), run(Algorithm::Ssa, 0)]).is_err());
    }
}
