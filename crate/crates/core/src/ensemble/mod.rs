//! Tree ensembles behind a single [`Model`] type.
//!
//! Every model predicts by voting: a tree votes once, forest and bagging
//! members vote with weight 1, boosting members vote with their α, and a
//! voting committee counts its members' hard predictions. Ties always go to
//! the lowest class code (Normal, then Stunting, then Stunted).
//!
//! # Serialized form
//!
//! [`Model::to_json`] writes a JSON object
//! `{"format": "esds-model", "version": 1, "model": {...}}`. Floats are printed
//! with round-trip precision, so loading reproduces thresholds and weights
//! bit for bit. Only files of the same `version` are accepted.

mod adaboost;
mod forest;
mod tree;

pub use adaboost::{fit_adaboost, samme_alpha, EPSILON_FLOOR};
pub use forest::{bootstrap_indices, fit_bagging, fit_bagging_opts, fit_forest, fit_forest_opts};
pub use tree::{DecisionTree, FeatureSubsample, Node, TreeParams};

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::data::{ClassLabel, Dataset};
use crate::error::{Error, Result};
use crate::rng::SeededRng;

pub const MODEL_FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ModelKind {
    Tree,
    Forest,
    Bagging,
    AdaBoost,
    Voting,
}

/// Training diagnostics.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct FitReport {
    /// Ensemble training error after each boosting round, in `[0, 1]`.
    pub round_errors: Vec<f64>,
    /// Weighted error of each round's weak learner.
    pub weighted_errors: Vec<f64>,
    /// α computed for each round (kept or not).
    pub alphas: Vec<f64>,
    pub discarded: Vec<bool>,
    /// Sum of sample weights after each round's renormalization.
    pub weight_sums: Vec<f64>,
    /// True when members were fit on bootstrap samples, so out-of-bag rows exist.
    pub oob_available: bool,
    pub member_count: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Model {
    pub kind: ModelKind,
    /// Sub-models; empty for a single tree.
    pub members: Vec<Model>,
    /// Per-member vote weight (α for boosting, 1 otherwise).
    pub weights: Vec<f64>,
    /// Classes seen in training, code order.
    pub classes: Vec<ClassLabel>,
    pub n_features: usize,
    pub tree: Option<DecisionTree>,
    pub report: FitReport,
}

fn argmax_lowest(scores: &[f64; 3]) -> ClassLabel {
    tree::weighted_majority(scores)
}

impl Model {
    pub fn predict_row(&self, row: &[f64]) -> ClassLabel {
        match self.kind {
            ModelKind::Tree => self.tree.as_ref().expect("tree model").predict_row(row),
            _ => {
                let mut scores = [0.0; 3];
                for (m, w) in self.members.iter().zip(&self.weights) {
                    scores[m.predict_row(row).index()] += w;
                }
                argmax_lowest(&scores)
            }
        }
    }

    /// One label per row of a row-major buffer.
    pub fn predict(&self, rows: &[f64], n_features: usize) -> Result<Vec<ClassLabel>> {
        if n_features != self.n_features {
            return Err(Error::DimensionMismatch {
                expected: self.n_features,
                got: n_features,
            });
        }
        if n_features == 0 || !rows.len().is_multiple_of(n_features) {
            return Err(Error::InvalidParameter("ragged feature buffer".into()));
        }
        Ok(rows.chunks_exact(n_features).map(|r| self.predict_row(r)).collect())
    }

    pub fn predict_dataset(&self, ds: &Dataset) -> Result<Vec<ClassLabel>> {
        self.predict(ds.features_flat(), ds.n_features())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&ModelFile {
            format: FORMAT_TAG.into(),
            version: MODEL_FORMAT_VERSION,
            model: self.clone(),
        })
        .expect("model serializes")
    }

    pub fn from_json(s: &str) -> Result<Model> {
        let file: ModelFile = serde_json::from_str(s).map_err(|e| Error::ModelFormat(e.to_string()))?;
        if file.format != FORMAT_TAG || file.version != MODEL_FORMAT_VERSION {
            return Err(Error::ModelFormat(format!(
                "expected {FORMAT_TAG} v{MODEL_FORMAT_VERSION}, got {} v{}",
                file.format, file.version
            )));
        }
        Ok(file.model)
    }
}

const FORMAT_TAG: &str = "esds-model";

#[derive(Serialize, Deserialize)]
struct ModelFile {
    format: String,
    version: u32,
    model: Model,
}

/// Convenience wrapper for free-function style call sites.
pub fn predict(model: &Model, rows: &[f64], n_features: usize) -> Result<Vec<ClassLabel>> {
    model.predict(rows, n_features)
}

pub(crate) fn check_trainable(train: &Dataset) -> Result<()> {
    if train.is_empty() {
        return Err(Error::InvalidDataset("empty training set".into()));
    }
    Ok(())
}

pub fn fit_tree(train: &Dataset, params: TreeParams, rng: &mut SeededRng) -> Result<Model> {
    check_trainable(train)?;
    let weights = vec![1.0; train.n_rows()];
    let tree = tree::build_tree(train, (0..train.n_rows()).collect(), &weights, params, rng)?;
    Ok(Model::from_tree(tree, train, rng.seed()))
}

impl Model {
    pub(crate) fn from_tree(tree: DecisionTree, train: &Dataset, seed: u64) -> Model {
        Model {
            kind: ModelKind::Tree,
            members: Vec::new(),
            weights: Vec::new(),
            classes: train.present_classes(),
            n_features: train.n_features(),
            tree: Some(tree),
            report: FitReport {
                member_count: 1,
                seed,
                ..Default::default()
            },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum VotingMode {
    #[default]
    Hard,
}

/// Hard-vote committee over already trained models.
pub fn fit_voting(members: Vec<Model>, mode: VotingMode) -> Result<Model> {
    let VotingMode::Hard = mode;
    if members.len() < 2 {
        return Err(Error::InvalidParameter("voting needs at least two members".into()));
    }
    let classes = members[0].classes.clone();
    let n_features = members[0].n_features;
    if members.iter().any(|m| m.classes != classes) {
        return Err(Error::ClassSetMismatch);
    }
    if members.iter().any(|m| m.n_features != n_features) {
        return Err(Error::DimensionMismatch {
            expected: n_features,
            got: members
                .iter()
                .find(|m| m.n_features != n_features)
                .map_or(0, |m| m.n_features),
        });
    }
    let n = members.len();
    Ok(Model {
        kind: ModelKind::Voting,
        weights: vec![1.0; n],
        members,
        classes,
        n_features,
        tree: None,
        report: FitReport {
            member_count: n,
            ..Default::default()
        },
    })
}

/// The ensemble learners offered by the experiment grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ClassifierKind {
    Forest,
    AdaBoost,
    Bagging,
}

impl ClassifierKind {
    pub const ALL: [ClassifierKind; 3] = [
        ClassifierKind::Forest,
        ClassifierKind::AdaBoost,
        ClassifierKind::Bagging,
    ];

    pub fn id(self) -> &'static str {
        match self {
            ClassifierKind::Forest => "forest",
            ClassifierKind::AdaBoost => "adaboost",
            ClassifierKind::Bagging => "bagging",
        }
    }

    pub fn display_name(self) -> &'static str {
        match self {
            ClassifierKind::Forest => "Random Forest",
            ClassifierKind::AdaBoost => "AdaBoost",
            ClassifierKind::Bagging => "Bagging",
        }
    }
}

impl fmt::Display for ClassifierKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for ClassifierKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "forest" | "random-forest" | "rf" => Ok(ClassifierKind::Forest),
            "adaboost" | "ada" => Ok(ClassifierKind::AdaBoost),
            "bagging" => Ok(ClassifierKind::Bagging),
            other => Err(Error::InvalidParameter(format!(
                "unknown classifier `{other}` (valid: forest, adaboost, bagging)"
            ))),
        }
    }
}

/// A classifier with its size and base-learner settings.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassifierSpec {
    pub kind: ClassifierKind,
    /// Trees for forest/bagging, rounds for boosting.
    pub n_members: usize,
    pub tree: TreeParams,
}

impl ClassifierSpec {
    /// 100 trees for forest and bagging, 50 stumps for boosting.
    pub fn default_for(kind: ClassifierKind) -> Self {
        match kind {
            ClassifierKind::Forest => Self {
                kind,
                n_members: 100,
                tree: TreeParams::forest(),
            },
            ClassifierKind::Bagging => Self {
                kind,
                n_members: 100,
                tree: TreeParams::default(),
            },
            ClassifierKind::AdaBoost => Self {
                kind,
                n_members: 50,
                tree: TreeParams::stump(),
            },
        }
    }

    pub fn fit(&self, train: &Dataset, rng: &mut SeededRng) -> Result<Model> {
        match self.kind {
            ClassifierKind::Forest => fit_forest(train, self.n_members, self.tree, rng),
            ClassifierKind::Bagging => fit_bagging(train, self.n_members, self.tree, rng),
            ClassifierKind::AdaBoost => fit_adaboost(train, self.n_members, self.tree, rng),
        }
    }
}
