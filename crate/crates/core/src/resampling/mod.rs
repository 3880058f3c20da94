//! Oversampling and cleaning.
//!
//! | method                | what it does                                                        |
//! |-----------------------|---------------------------------------------------------------------|
//! | `smote`               | interpolates each minority class up to its target                   |
//! | `enn`                 | Wilson editing: drops rows outvoted by their k nearest neighbors     |
//! | `smote-tomek`         | drops majority members of Tomek links, then SMOTE                   |
//! | `radius-smote`        | SMOTE, then drops every row its 3 nearest neighbors misclassify      |
//! | `edited-radius-smote` | safe-radius SMOTE that keeps small disjuncts, then exempting ENN     |
//!
//! All resamplers are pure functions of `(dataset, config)`; the config carries
//! the seed. Original rows always come first in the output, in input order,
//! followed by synthetic rows.

mod clean;
mod radius;
mod report;
mod smote;

pub use clean::{enn_edit, enn_removals, tomek_links};
pub use radius::{edited_radius_smote, radius_smote, DisjunctKind};
pub use report::{generation_report, GenerationReport, REPORT_FORMAT_VERSION};
pub use smote::{smote, smote_all, smote_tomek};

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::data::{ClassLabel, Dataset};
use crate::error::{Error, Result};

/// How interpolation forms the step from parent to neighbor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum DifferenceMode {
    /// `x_new = x + (x' - x) * delta`: stays on the segment.
    #[default]
    Signed,
    /// `x_new = x + |x' - x| * delta`: the absolute-value form, can leave the segment.
    LiteralAbs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum EnnScope {
    #[default]
    AllClasses,
    MinorityOnly,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum SmallDisjunctPolicy {
    #[default]
    Preserve,
    Discard,
}

/// Desired final count per class.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum Targets {
    /// Every non-majority class grows to the majority count.
    #[default]
    MatchMajority,
    /// Explicit targets in code order; `None` leaves the class alone.
    Counts([Option<usize>; 3]),
}

impl fmt::Display for Targets {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Targets::MatchMajority => f.write_str("match-majority"),
            Targets::Counts(c) => {
                let parts: Vec<String> = ClassLabel::TABLE_ORDER
                    .iter()
                    .map(|l| match c[l.index()] {
                        Some(n) => format!("{l}:{n}"),
                        None => format!("{l}:-"),
                    })
                    .collect();
                f.write_str(&parts.join(","))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResamplerConfig {
    /// Neighbors considered when picking an interpolation partner.
    pub k_neighbors: usize,
    /// Neighbors consulted by the editing (cleaning) steps.
    pub edit_k: usize,
    pub targets: Targets,
    pub seed: u64,
    pub enn_scope: EnnScope,
    pub small_disjunct_policy: SmallDisjunctPolicy,
    pub difference: DifferenceMode,
}

impl Default for ResamplerConfig {
    fn default() -> Self {
        Self {
            k_neighbors: 5,
            edit_k: 3,
            targets: Targets::MatchMajority,
            seed: 0,
            enn_scope: EnnScope::AllClasses,
            small_disjunct_policy: SmallDisjunctPolicy::Preserve,
            difference: DifferenceMode::Signed,
        }
    }
}

impl ResamplerConfig {
    pub fn with_seed(seed: u64) -> Self {
        Self {
            seed,
            ..Self::default()
        }
    }

    pub(crate) fn validate(&self) -> Result<()> {
        if self.k_neighbors == 0 || self.edit_k == 0 {
            return Err(Error::InvalidParameter("neighbor counts must be >= 1".into()));
        }
        Ok(())
    }

    /// Target for `class` in `ds`, or `None` when the class is left as is.
    pub fn target_for(&self, ds: &Dataset, class: ClassLabel) -> Option<usize> {
        let counts = ds.class_counts();
        match &self.targets {
            Targets::MatchMajority => {
                let major = ds.majority_class()?;
                (major != class && counts[class.index()] > 0).then_some(counts[major.index()])
            }
            Targets::Counts(t) => t[class.index()],
        }
    }
}

/// Synthetic rows plus the provenance of each.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct SyntheticBatch {
    pub n_features: usize,
    /// Row-major generated features.
    pub rows: Vec<f64>,
    pub labels: Vec<ClassLabel>,
    /// Input row each synthetic row grew from.
    pub parent_index: Vec<usize>,
    /// Interpolation partner; `None` for rows sampled around a lone parent.
    pub neighbor_index: Vec<Option<usize>>,
    /// Interpolation fraction (or radius fraction for lone-parent rows).
    pub delta: Vec<f64>,
}

impl SyntheticBatch {
    pub fn new(n_features: usize) -> Self {
        Self {
            n_features,
            ..Default::default()
        }
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.rows[i * self.n_features..(i + 1) * self.n_features]
    }

    pub(crate) fn push(&mut self, row: &[f64], label: ClassLabel, parent: usize, neighbor: Option<usize>, delta: f64) {
        self.rows.extend_from_slice(row);
        self.labels.push(label);
        self.parent_index.push(parent);
        self.neighbor_index.push(neighbor);
        self.delta.push(delta);
    }

    pub(crate) fn append(&mut self, other: SyntheticBatch) {
        self.rows.extend(other.rows);
        self.labels.extend(other.labels);
        self.parent_index.extend(other.parent_index);
        self.neighbor_index.extend(other.neighbor_index);
        self.delta.extend(other.delta);
    }

    /// Per-class counts of generated rows, code order.
    pub fn added_counts(&self) -> [usize; 3] {
        let mut c = [0; 3];
        for l in &self.labels {
            c[l.index()] += 1;
        }
        c
    }

    /// `base` followed by the synthetic rows.
    pub fn appended_to(&self, base: &Dataset) -> Result<Dataset> {
        let mut out = base.clone();
        for i in 0..self.len() {
            out.push_row(self.row(i), self.labels[i])?;
        }
        Ok(out)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ResampleMethod {
    Smote,
    SmoteTomek,
    RadiusSmote,
    EditedRadiusSmote,
    Enn,
}

impl ResampleMethod {
    pub const ALL: [ResampleMethod; 5] = [
        ResampleMethod::Smote,
        ResampleMethod::SmoteTomek,
        ResampleMethod::RadiusSmote,
        ResampleMethod::EditedRadiusSmote,
        ResampleMethod::Enn,
    ];

    /// Command-line identifier.
    pub fn id(self) -> &'static str {
        match self {
            ResampleMethod::Smote => "smote",
            ResampleMethod::SmoteTomek => "smote-tomek",
            ResampleMethod::RadiusSmote => "radius-smote",
            ResampleMethod::EditedRadiusSmote => "edited-radius-smote",
            ResampleMethod::Enn => "enn",
        }
    }

    /// Name used in report tables.
    pub fn display_name(self) -> &'static str {
        match self {
            ResampleMethod::Smote => "SMOTE",
            ResampleMethod::SmoteTomek => "SMOTE-Tomek",
            ResampleMethod::RadiusSmote => "Radius-SMOTE",
            ResampleMethod::EditedRadiusSmote => "Edited Radius-SMOTE",
            ResampleMethod::Enn => "ENN",
        }
    }

    pub fn valid_ids() -> String {
        Self::ALL.map(Self::id).join(", ")
    }
}

impl fmt::Display for ResampleMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for ResampleMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "smote" => Ok(ResampleMethod::Smote),
            "smote-tomek" => Ok(ResampleMethod::SmoteTomek),
            "radius-smote" => Ok(ResampleMethod::RadiusSmote),
            "edited-radius-smote" => Ok(ResampleMethod::EditedRadiusSmote),
            "enn" => Ok(ResampleMethod::Enn),
            other => Err(Error::InvalidParameter(format!(
                "unknown method `{other}` (valid: {})",
                Self::valid_ids()
            ))),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Resampled {
    pub dataset: Dataset,
    pub batch: SyntheticBatch,
    pub report: GenerationReport,
}

/// Runs `method` on `ds`.
pub fn resample(ds: &Dataset, method: ResampleMethod, cfg: &ResamplerConfig) -> Result<Resampled> {
    cfg.validate()?;
    match method {
        ResampleMethod::Smote => {
            let (dataset, batch) = smote_all(ds, cfg)?;
            let report = GenerationReport::new(method, cfg, ds, &batch, Vec::new(), &dataset);
            Ok(Resampled { dataset, batch, report })
        }
        ResampleMethod::SmoteTomek => smote_tomek(ds, cfg),
        ResampleMethod::RadiusSmote => radius_smote(ds, cfg),
        ResampleMethod::EditedRadiusSmote => edited_radius_smote(ds, cfg),
        ResampleMethod::Enn => {
            let (dataset, removed) = enn_edit(ds, cfg.edit_k, cfg.enn_scope)?;
            let batch = SyntheticBatch::new(ds.n_features());
            let stages = vec![("enn".to_string(), label_counts(ds, &removed))];
            let report = GenerationReport::new(method, cfg, ds, &batch, stages, &dataset);
            Ok(Resampled { dataset, batch, report })
        }
    }
}

pub(crate) fn label_counts(ds: &Dataset, indices: &[usize]) -> [usize; 3] {
    let mut c = [0; 3];
    for &i in indices {
        c[ds.label(i).index()] += 1;
    }
    c
}
