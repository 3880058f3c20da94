//! Split, resample, fit, evaluate: the end-to-end experiment.

use crate::data::{stratified_split, Dataset};
use crate::ensemble::{ClassifierKind, ClassifierSpec};
use crate::error::{Error, Result};
use crate::evaluation::{run_experiment_grid, ExperimentReport, GridOptions};
use crate::resampling::{ResampleMethod, ResamplerConfig};
use crate::rng::SeededRng;

#[derive(Debug, Clone)]
pub struct PipelineConfig {
    pub methods: Vec<ResampleMethod>,
    pub classifiers: Vec<ClassifierSpec>,
    pub test_fraction: f64,
    pub seed: u64,
    pub resampler: ResamplerConfig,
    /// Add a voting committee when two or more classifiers are requested.
    pub voting: bool,
}

impl Default for PipelineConfig {
    /// SMOTE, Radius-SMOTE and Edited Radius-SMOTE crossed with random forest,
    /// AdaBoost and bagging, on an 80/20 split.
    fn default() -> Self {
        Self {
            methods: vec![
                ResampleMethod::Smote,
                ResampleMethod::RadiusSmote,
                ResampleMethod::EditedRadiusSmote,
            ],
            classifiers: ClassifierKind::ALL
                .iter()
                .map(|&k| ClassifierSpec::default_for(k))
                .collect(),
            test_fraction: 0.2,
            seed: 0,
            resampler: ResamplerConfig::default(),
            voting: true,
        }
    }
}

#[derive(Debug, Clone)]
pub struct PipelineOutput {
    pub train: Dataset,
    pub test: Dataset,
    pub report: ExperimentReport,
}

pub fn run_pipeline(ds: &Dataset, cfg: &PipelineConfig) -> Result<PipelineOutput> {
    if cfg.methods.is_empty() || cfg.classifiers.is_empty() {
        return Err(Error::InvalidParameter(
            "need at least one method and one classifier".into(),
        ));
    }
    let root = SeededRng::new(cfg.seed);
    let (train, test) = stratified_split(ds, cfg.test_fraction, &mut root.child(0))?;
    let opts = GridOptions {
        resampler: cfg.resampler.clone(),
        voting: cfg.voting,
    };
    let mut report = run_experiment_grid(&train, &test, &cfg.methods, &cfg.classifiers, &root.child(1), &opts)?;
    report.seed = cfg.seed;
    Ok(PipelineOutput { train, test, report })
}
