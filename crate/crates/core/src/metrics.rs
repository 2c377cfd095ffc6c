//! Confusion-matrix metrics for binary classification.
//!
//! F1 is the harmonic mean of precision and recall. Any ratio whose
//! denominator is zero evaluates to 0 and is listed in
//! [`MetricReport::undefined`].

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfusionCounts {
    pub tp: usize,
    pub tn: usize,
    pub fp: usize,
    pub fn_: usize,
}

impl ConfusionCounts {
    pub fn total(&self) -> usize {
        self.tp + self.tn + self.fp + self.fn_
    }

    /// Counts as seen with the other class declared positive.
    pub fn swapped(&self) -> Self {
        Self {
            tp: self.tn,
            tn: self.tp,
            fp: self.fn_,
            fn_: self.fp,
        }
    }
}

pub fn confusion(predicted: &[u8], actual: &[u8], positive_class: u8) -> Result<ConfusionCounts> {
    if predicted.len() != actual.len() {
        return Err(Error::argument(format!(
            "predicted has {} entries, actual has {}",
            predicted.len(),
            actual.len()
        )));
    }
    if predicted.is_empty() {
        return Err(Error::argument("cannot tally an empty prediction vector"));
    }
    let mut c = ConfusionCounts::default();
    for (&p, &a) in predicted.iter().zip(actual) {
        match (p == positive_class, a == positive_class) {
            (true, true) => c.tp += 1,
            (false, false) => c.tn += 1,
            (true, false) => c.fp += 1,
            (false, true) => c.fn_ += 1,
        }
    }
    Ok(c)
}

fn ratio(num: usize, den: usize) -> Option<f64> {
    (den > 0).then(|| num as f64 / den as f64)
}

pub fn accuracy(c: &ConfusionCounts) -> f64 {
    ratio(c.tp + c.tn, c.total()).unwrap_or(0.0)
}

pub fn precision(c: &ConfusionCounts) -> f64 {
    ratio(c.tp, c.tp + c.fp).unwrap_or(0.0)
}

pub fn recall(c: &ConfusionCounts) -> f64 {
    ratio(c.tp, c.tp + c.fn_).unwrap_or(0.0)
}

pub fn specificity(c: &ConfusionCounts) -> f64 {
    ratio(c.tn, c.tn + c.fp).unwrap_or(0.0)
}

pub fn f1(c: &ConfusionCounts) -> f64 {
    f1_from(precision(c), recall(c))
}

/// Harmonic mean of precision and recall; 0 when both are 0.
pub fn f1_from(precision: f64, recall: f64) -> f64 {
    let s = precision + recall;
    if s > 0.0 {
        2.0 * precision * recall / s
    } else {
        0.0
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricReport {
    pub counts: ConfusionCounts,
    pub accuracy: f64,
    pub precision: f64,
    pub recall: f64,
    pub specificity: f64,
    pub f1: f64,
    /// Metrics whose denominator was zero.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub undefined: Vec<String>,
}

impl MetricReport {
    pub fn from_counts(counts: ConfusionCounts) -> Self {
        let mut undefined = Vec::new();
        let c = &counts;
        for (name, den) in [
            ("accuracy", c.total()),
            ("precision", c.tp + c.fp),
            ("recall", c.tp + c.fn_),
            ("specificity", c.tn + c.fp),
        ] {
            if den == 0 {
                undefined.push(name.to_string());
            }
        }
        if precision(c) + recall(c) == 0.0 {
            undefined.push("f1".to_string());
        }
        Self {
            counts,
            accuracy: accuracy(c),
            precision: precision(c),
            recall: recall(c),
            specificity: specificity(c),
            f1: f1(c),
            undefined,
        }
    }

    pub fn evaluate(predicted: &[u8], actual: &[u8], positive_class: u8) -> Result<Self> {
        Ok(Self::from_counts(confusion(
            predicted,
            actual,
            positive_class,
        )?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn perfect_prediction() {
        let c = confusion(&[1, 1, 0, 0], &[1, 1, 0, 0], 1).unwrap();
        assert_eq!(
            c,
            ConfusionCounts {
                tp: 2,
                tn: 2,
                fp: 0,
                fn_: 0
            }
        );
        let r = MetricReport::from_counts(c);
        assert_eq!(
            (r.accuracy, r.precision, r.recall, r.f1, r.specificity),
            (1.0, 1.0, 1.0, 1.0, 1.0)
        );
        assert!(r.undefined.is_empty());
    }

    #[test]
    fn constant_positive_predictor() {
        let c = confusion(&[1, 1, 1, 1], &[1, 0, 1, 0], 1).unwrap();
        assert_eq!(
            c,
            ConfusionCounts {
                tp: 2,
                tn: 0,
                fp: 2,
                fn_: 0
            }
        );
        let r = MetricReport::from_counts(c);
        assert_eq!(r.specificity, 0.0);
        assert!(r.undefined.is_empty());
    }

    #[test]
    fn hand_tally() {
        let c = ConfusionCounts {
            tp: 3,
            tn: 2,
            fp: 1,
            fn_: 2,
        };
        assert_eq!(accuracy(&c), 0.625);
        assert_eq!(precision(&c), 0.75);
        assert_eq!(recall(&c), 0.6);
        assert!((f1(&c) - 2.0 * 0.75 * 0.6 / 1.35).abs() < 1e-15);
        assert!((f1(&c) - 0.6667).abs() < 5e-5);
    }

    #[test]
    fn zero_denominators_flagged() {
        let c = ConfusionCounts {
            tp: 0,
            tn: 4,
            fp: 0,
            fn_: 0,
        };
        let r = MetricReport::from_counts(c);
        assert_eq!(r.precision, 0.0);
        assert_eq!(r.recall, 0.0);
        assert_eq!(r.f1, 0.0);
        assert_eq!(r.undefined, vec!["precision", "recall", "f1"]);
    }

    #[test]
    fn length_mismatch_and_empty() {
        assert!(confusion(&[1], &[1, 0], 1).is_err());
        assert!(confusion(&[], &[], 1).is_err());
    }

    #[test]
    fn swapping_positive_class_transposes() {
        let p = [1, 0, 0, 1, 1, 0, 1];
        let a = [1, 1, 0, 0, 1, 0, 0];
        let c1 = confusion(&p, &a, 1).unwrap();
        let c0 = confusion(&p, &a, 0).unwrap();
        assert_eq!(c0, c1.swapped());
        assert_eq!(precision(&c0), ratio(c1.tn, c1.tn + c1.fn_).unwrap());
    }
}
