//! Confusion matrices and per-class precision / recall / F1.
//!
//! Metrics are one-vs-rest: for class `c`, TP is the diagonal cell, FP the rest
//! of column `c`, FN the rest of row `c`. Any ratio with a zero denominator is
//! reported as 0.

mod grid;

pub use grid::{run_experiment_grid, CellResult, ExperimentReport, GridOptions, VOTING_NAME};

use serde::{Deserialize, Serialize};

use crate::data::ClassLabel;
use crate::error::{Error, Result};

/// Rows are true classes, columns predicted classes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfusionMatrix {
    pub classes: Vec<ClassLabel>,
    pub counts: Vec<Vec<u64>>,
}

impl ConfusionMatrix {
    /// Matrix over the report class order (Normal, Stunted, Stunting).
    pub fn from_counts(counts: [[u64; 3]; 3]) -> Self {
        Self {
            classes: ClassLabel::TABLE_ORDER.to_vec(),
            counts: counts.iter().map(|r| r.to_vec()).collect(),
        }
    }

    pub fn position(&self, class: ClassLabel) -> Option<usize> {
        self.classes.iter().position(|&c| c == class)
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().flatten().sum()
    }

    pub fn trace(&self) -> u64 {
        (0..self.classes.len()).map(|i| self.counts[i][i]).sum()
    }

    /// Row sum for `class`.
    pub fn support(&self, class: ClassLabel) -> u64 {
        self.position(class).map_or(0, |i| self.counts[i].iter().sum())
    }
}

pub fn confusion_matrix(y_true: &[ClassLabel], y_pred: &[ClassLabel]) -> Result<ConfusionMatrix> {
    if y_true.len() != y_pred.len() {
        return Err(Error::LengthMismatch(y_true.len(), y_pred.len()));
    }
    let mut cm = ConfusionMatrix::from_counts([[0; 3]; 3]);
    for (&t, &p) in y_true.iter().zip(y_pred) {
        let (i, j) = (
            cm.position(t).expect("known class"),
            cm.position(p).expect("known class"),
        );
        cm.counts[i][j] += 1;
    }
    Ok(cm)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClassMetrics {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub support: u64,
}

fn ratio(num: u64, den: u64) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

pub fn f1_score(precision: f64, recall: f64) -> f64 {
    if precision + recall > 0.0 {
        2.0 * precision * recall / (precision + recall)
    } else {
        0.0
    }
}

pub fn class_metrics(cm: &ConfusionMatrix, class: ClassLabel) -> ClassMetrics {
    let Some(c) = cm.position(class) else {
        return ClassMetrics {
            precision: 0.0,
            recall: 0.0,
            f1: 0.0,
            support: 0,
        };
    };
    let tp = cm.counts[c][c];
    let predicted: u64 = cm.counts.iter().map(|r| r[c]).sum();
    let actual: u64 = cm.counts[c].iter().sum();
    let precision = ratio(tp, predicted);
    let recall = ratio(tp, actual);
    ClassMetrics {
        precision,
        recall,
        f1: f1_score(precision, recall),
        support: actual,
    }
}

pub fn accuracy(cm: &ConfusionMatrix) -> Result<f64> {
    let total = cm.total();
    if total == 0 {
        return Err(Error::InvalidParameter("accuracy of an empty confusion matrix".into()));
    }
    Ok(cm.trace() as f64 / total as f64)
}

/// Pooled TP / (TP + FP) over all classes.
pub fn micro_precision(cm: &ConfusionMatrix) -> f64 {
    let k = cm.classes.len();
    let tp: u64 = (0..k).map(|c| cm.counts[c][c]).sum();
    let fp: u64 = (0..k)
        .map(|c| cm.counts.iter().map(|r| r[c]).sum::<u64>() - cm.counts[c][c])
        .sum();
    ratio(tp, tp + fp)
}

/// Pooled TP / (TP + FN) over all classes.
pub fn micro_recall(cm: &ConfusionMatrix) -> f64 {
    let k = cm.classes.len();
    let tp: u64 = (0..k).map(|c| cm.counts[c][c]).sum();
    let fneg: u64 = (0..k).map(|c| cm.counts[c].iter().sum::<u64>() - cm.counts[c][c]).sum();
    ratio(tp, tp + fneg)
}

/// Unweighted mean of per-class (precision, recall, F1) over `cm.classes`.
pub fn macro_average(cm: &ConfusionMatrix) -> (f64, f64, f64) {
    let k = cm.classes.len() as f64;
    let (mut p, mut r, mut f) = (0.0, 0.0, 0.0);
    for &c in &cm.classes {
        let m = class_metrics(cm, c);
        p += m.precision;
        r += m.recall;
        f += m.f1;
    }
    (p / k, r / k, f / k)
}
