//! Resampler x classifier experiment grid.

use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::data::{ClassLabel, Dataset};
use crate::ensemble::{fit_voting, ClassifierKind, ClassifierSpec, Model, VotingMode};
use crate::error::Result;
use crate::resampling::{resample, ResampleMethod, ResamplerConfig};
use crate::rng::{derive_seed, SeededRng};

use super::{accuracy, class_metrics, confusion_matrix, macro_average, ClassMetrics, ConfusionMatrix};

pub const VOTING_NAME: &str = "Voting";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellResult {
    pub classifier: String,
    pub method: ResampleMethod,
    pub confusion: ConfusionMatrix,
    /// Per-class metrics in table order (Normal, Stunted, Stunting).
    pub metrics: Vec<(ClassLabel, ClassMetrics)>,
    pub accuracy: f64,
    pub macro_precision: f64,
    pub macro_recall: f64,
    pub macro_f1: f64,
    /// Training rows after resampling.
    pub train_rows: usize,
}

impl CellResult {
    fn evaluate(
        classifier: &str,
        method: ResampleMethod,
        model: &Model,
        test: &Dataset,
        train_rows: usize,
    ) -> Result<Self> {
        let pred = model.predict_dataset(test)?;
        let confusion = confusion_matrix(test.labels(), &pred)?;
        let metrics = ClassLabel::TABLE_ORDER
            .iter()
            .map(|&c| (c, class_metrics(&confusion, c)))
            .collect();
        let (macro_precision, macro_recall, macro_f1) = macro_average(&confusion);
        Ok(Self {
            classifier: classifier.to_string(),
            method,
            accuracy: accuracy(&confusion).unwrap_or(0.0),
            confusion,
            metrics,
            macro_precision,
            macro_recall,
            macro_f1,
            train_rows,
        })
    }

    pub fn metric(&self, class: ClassLabel) -> ClassMetrics {
        self.metrics
            .iter()
            .find(|(c, _)| *c == class)
            .expect("all classes present")
            .1
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    /// Classifier display names in row order.
    pub classifiers: Vec<String>,
    pub methods: Vec<ResampleMethod>,
    pub cells: Vec<CellResult>,
    pub seed: u64,
}

#[derive(Debug, Clone, Default)]
pub struct GridOptions {
    /// Base resampler settings; each cell substitutes its own seed.
    pub resampler: ResamplerConfig,
    /// Add a hard-voting committee of the trained classifiers per method.
    pub voting: bool,
}

fn method_stream(m: ResampleMethod) -> u64 {
    ResampleMethod::ALL.iter().position(|&x| x == m).unwrap_or(0) as u64
}

fn classifier_stream(c: ClassifierKind) -> u64 {
    ClassifierKind::ALL.iter().position(|&x| x == c).unwrap_or(0) as u64
}

/// Resamples `train` once per method, fits every classifier on the result and
/// scores it on `test`. Seeds derive from `(rng seed, method, classifier)`, so
/// a cell gives the same numbers whether it runs alone or in a larger grid.
pub fn run_experiment_grid(
    train: &Dataset,
    test: &Dataset,
    methods: &[ResampleMethod],
    classifiers: &[ClassifierSpec],
    rng: &SeededRng,
    opts: &GridOptions,
) -> Result<ExperimentReport> {
    let per_method: Vec<Vec<CellResult>> = methods
        .par_iter()
        .map(|&method| {
            let method_seed = rng.child_seed(method_stream(method));
            let cfg = ResamplerConfig {
                seed: derive_seed(method_seed, 0),
                ..opts.resampler.clone()
            };
            let resampled = resample(train, method, &cfg)?;
            let fitted = classifiers
                .iter()
                .map(|spec| {
                    let mut fit_rng = SeededRng::new(derive_seed(method_seed, 1 + classifier_stream(spec.kind)));
                    spec.fit(&resampled.dataset, &mut fit_rng)
                })
                .collect::<Result<Vec<_>>>()?;
            let n = resampled.dataset.n_rows();
            let mut cells = classifiers
                .iter()
                .zip(&fitted)
                .map(|(spec, model)| CellResult::evaluate(spec.kind.display_name(), method, model, test, n))
                .collect::<Result<Vec<_>>>()?;
            if opts.voting && fitted.len() >= 2 {
                let committee = fit_voting(fitted, VotingMode::Hard)?;
                cells.push(CellResult::evaluate(VOTING_NAME, method, &committee, test, n)?);
            }
            Ok(cells)
        })
        .collect::<Result<_>>()?;

    let mut names: Vec<String> = classifiers.iter().map(|s| s.kind.display_name().to_string()).collect();
    if opts.voting && classifiers.len() >= 2 {
        names.push(VOTING_NAME.to_string());
    }
    // classifier-major order, methods inside
    let mut cells = Vec::new();
    for name in &names {
        for method_cells in &per_method {
            cells.extend(method_cells.iter().filter(|c| &c.classifier == name).cloned());
        }
    }
    Ok(ExperimentReport {
        classifiers: names,
        methods: methods.to_vec(),
        cells,
        seed: rng.seed(),
    })
}

impl ExperimentReport {
    pub fn cell(&self, classifier: &str, method: ResampleMethod) -> Option<&CellResult> {
        self.cells
            .iter()
            .find(|c| c.classifier == classifier && c.method == method)
    }

    /// Aligned text table: one row per (classifier, condition, method), values
    /// to two decimals, followed by per-cell accuracy and macro averages.
    pub fn render_text(&self) -> String {
        let mut out = String::new();
        let header = ["Classifier", "Condition", "Method", "Precision", "Recall", "F-1 Score"];
        let mut rows: Vec<[String; 6]> = Vec::new();
        for name in &self.classifiers {
            for (ci, class) in ClassLabel::TABLE_ORDER.iter().enumerate() {
                for (mi, method) in self.methods.iter().enumerate() {
                    let Some(cell) = self.cell(name, *method) else { continue };
                    let m = cell.metric(*class);
                    rows.push([
                        if ci == 0 && mi == 0 {
                            name.clone()
                        } else {
                            String::new()
                        },
                        if mi == 0 { class.to_string() } else { String::new() },
                        method.display_name().to_string(),
                        format!("{:.2}", m.precision),
                        format!("{:.2}", m.recall),
                        format!("{:.2}", m.f1),
                    ]);
                }
            }
        }
        let mut widths = header.map(str::len);
        for r in &rows {
            for (w, v) in widths.iter_mut().zip(r) {
                *w = (*w).max(v.len());
            }
        }
        let line = |cols: [&str; 6]| {
            let mut s = String::new();
            for (i, (c, w)) in cols.iter().zip(widths).enumerate() {
                if i > 0 {
                    s.push_str("  ");
                }
                if i >= 3 {
                    let _ = write!(s, "{c:>w$}");
                } else {
                    let _ = write!(s, "{c:<w$}");
                }
            }
            s.trim_end().to_string()
        };
        let rule = "-".repeat(widths.iter().sum::<usize>() + 2 * (widths.len() - 1));
        let _ = writeln!(out, "{}", line(header));
        let _ = writeln!(out, "{rule}");
        for (i, r) in rows.iter().enumerate() {
            if i > 0 && !r[0].is_empty() {
                let _ = writeln!(out, "{rule}");
            }
            let _ = writeln!(out, "{}", line([&r[0], &r[1], &r[2], &r[3], &r[4], &r[5]]));
        }
        let _ = writeln!(out, "{rule}");
        let _ = writeln!(out);
        let _ = writeln!(out, "seed {}", self.seed);
        for c in &self.cells {
            let _ = writeln!(
                out,
                "{} / {}: accuracy {:.2}, macro precision {:.2}, macro recall {:.2}, macro F-1 {:.2}",
                c.classifier,
                c.method.display_name(),
                c.accuracy,
                c.macro_precision,
                c.macro_recall,
                c.macro_f1
            );
        }
        out
    }

    /// Machine-readable rows in the same order as the text table, full precision.
    pub fn render_csv(&self) -> String {
        let mut out = String::from("classifier,condition,method,precision,recall,f1_score,support,accuracy,macro_f1\n");
        for name in &self.classifiers {
            for class in ClassLabel::TABLE_ORDER {
                for method in &self.methods {
                    let Some(cell) = self.cell(name, *method) else { continue };
                    let m = cell.metric(class);
                    let _ = writeln!(
                        out,
                        "{},{},{},{},{},{},{},{},{}",
                        name,
                        class,
                        method.display_name(),
                        m.precision,
                        m.recall,
                        m.f1,
                        m.support,
                        cell.accuracy,
                        cell.macro_f1
                    );
                }
            }
        }
        out
    }
}
