//! Python module `esds`: datasets, resampling, ensembles, metrics and the
//! anthropometric helpers from `esds-core`.

use std::collections::BTreeMap;

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use esds_core::anthropometry::{self as anthro, GrowthReference, Proportions, UltrasonicReading};
use esds_core::data::{self, LoadOptions};
use esds_core::ensemble::{ClassifierKind, ClassifierSpec, Model};
use esds_core::evaluation::{self as eval};
use esds_core::pipeline::{run_pipeline as core_pipeline, PipelineConfig};
use esds_core::resampling::{self, ResampleMethod, ResamplerConfig};
use esds_core::{ClassLabel, SeededRng};

fn err(e: esds_core::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn label(name: &str) -> PyResult<ClassLabel> {
    ClassLabel::from_name(name).ok_or_else(|| PyValueError::new_err(format!("unknown class `{name}`")))
}

fn labels(names: &[String]) -> PyResult<Vec<ClassLabel>> {
    names.iter().map(|n| label(n)).collect()
}

fn names(labels: &[ClassLabel]) -> Vec<String> {
    labels.iter().map(|l| l.name().to_string()).collect()
}

/// Labeled feature table.
#[pyclass(name = "Dataset", module = "esds", frozen)]
struct PyDataset(esds_core::Dataset);

#[pymethods]
impl PyDataset {
    /// Rows of age_months, gender, height_cm, weight_kg and class names.
    #[new]
    fn new(rows: Vec<Vec<f64>>, labels_: Vec<String>) -> PyResult<Self> {
        let ds = esds_core::Dataset::from_rows(data::standard_schema(), &rows, labels(&labels_)?).map_err(err)?;
        Ok(Self(ds))
    }

    #[staticmethod]
    fn load(path: &str) -> PyResult<Self> {
        data::load_dataset(path, &LoadOptions::default()).map(Self).map_err(err)
    }

    fn save(&self, path: &str) -> PyResult<()> {
        data::write_dataset_file(&self.0, path).map_err(err)
    }

    fn __len__(&self) -> usize {
        self.0.n_rows()
    }

    #[getter]
    fn schema(&self) -> Vec<String> {
        self.0.schema().to_vec()
    }

    fn rows(&self) -> Vec<Vec<f64>> {
        self.0.rows().map(<[f64]>::to_vec).collect()
    }

    fn labels(&self) -> Vec<String> {
        names(self.0.labels())
    }

    /// Class name -> row count.
    fn class_counts(&self) -> BTreeMap<String, usize> {
        let c = self.0.class_counts();
        ClassLabel::ALL
            .iter()
            .map(|l| (l.name().to_string(), c[l.index()]))
            .collect()
    }

    fn __repr__(&self) -> String {
        let c = self.0.class_counts();
        format!(
            "Dataset(rows={}, Normal={}, Stunted={}, Stunting={})",
            self.0.n_rows(),
            c[ClassLabel::Normal.index()],
            c[ClassLabel::Stunted.index()],
            c[ClassLabel::Stunting.index()]
        )
    }
}

/// Fitted classifier.
#[pyclass(name = "Model", module = "esds", frozen)]
struct PyModel(Model);

#[pymethods]
impl PyModel {
    /// `kind` is forest, adaboost or bagging; `n_members` defaults per kind.
    #[staticmethod]
    #[pyo3(signature = (train, kind, n_members=None, seed=0))]
    fn fit(train: &PyDataset, kind: &str, n_members: Option<usize>, seed: u64) -> PyResult<Self> {
        let kind: ClassifierKind = kind.parse().map_err(err)?;
        let mut spec = ClassifierSpec::default_for(kind);
        if let Some(n) = n_members {
            spec.n_members = n;
        }
        spec.fit(&train.0, &mut SeededRng::new(seed)).map(Self).map_err(err)
    }

    fn predict(&self, rows: Vec<Vec<f64>>) -> PyResult<Vec<String>> {
        let d = self.0.n_features;
        if let Some(bad) = rows.iter().find(|r| r.len() != d) {
            return Err(PyValueError::new_err(format!(
                "expected {d} features, got {}",
                bad.len()
            )));
        }
        Ok(rows.iter().map(|r| self.0.predict_row(r).name().to_string()).collect())
    }

    fn to_json(&self) -> String {
        self.0.to_json()
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Model::from_json(text).map(Self).map_err(err)
    }
}

/// Cohort of `n` rows labeled by the bundled growth reference.
#[pyfunction]
#[pyo3(signature = (n, proportions=(0.86, 0.12, 0.02), seed=0))]
fn synth_cohort(n: usize, proportions: (f64, f64, f64), seed: u64) -> PyResult<PyDataset> {
    let p = Proportions::from_table_order([proportions.0, proportions.1, proportions.2]);
    anthro::synth_cohort(n, p, &GrowthReference::bundled(), &mut SeededRng::new(seed))
        .map(PyDataset)
        .map_err(err)
}

/// Returns the resampled dataset and the generation report text.
#[pyfunction]
#[pyo3(signature = (ds, method, seed=0, k_neighbors=5, edit_k=3))]
fn resample(
    ds: &PyDataset,
    method: &str,
    seed: u64,
    k_neighbors: usize,
    edit_k: usize,
) -> PyResult<(PyDataset, String)> {
    let method: ResampleMethod = method.parse().map_err(err)?;
    let cfg = ResamplerConfig {
        k_neighbors,
        edit_k,
        ..ResamplerConfig::with_seed(seed)
    };
    let out = resampling::resample(&ds.0, method, &cfg).map_err(err)?;
    Ok((PyDataset(out.dataset), out.report.to_string()))
}

/// Class name -> (count, display percent).
#[pyfunction]
fn class_distribution(ds: &PyDataset) -> BTreeMap<String, (usize, u32)> {
    let d = data::class_distribution(&ds.0);
    ClassLabel::ALL
        .iter()
        .map(|&c| (c.name().to_string(), (d.count(c), d.percent(c))))
        .collect()
}

/// Height-for-age status against the bundled reference.
#[pyfunction]
fn haz_status(age_months: f64, sex: f64, height_cm: f64) -> PyResult<String> {
    anthro::haz_status(age_months, sex, height_cm, &GrowthReference::bundled())
        .map(|l| l.name().to_string())
        .map_err(err)
}

/// Least-squares fit of measured on reference values.
#[pyfunction]
fn fit_linear(pairs: Vec<(f64, f64)>) -> PyResult<BTreeMap<String, f64>> {
    let f = anthro::fit_linear(&pairs).map_err(err)?;
    Ok(BTreeMap::from([
        ("slope".to_string(), f.slope),
        ("intercept".to_string(), f.intercept),
        ("r_squared".to_string(), f.r_squared),
        ("slope_std_err".to_string(), f.slope_std_err),
    ]))
}

#[pyfunction]
fn length_from_ultrasonic(sensor_gap: f64, d1: f64, d2: f64) -> PyResult<f64> {
    anthro::length_from_ultrasonic(UltrasonicReading { sensor_gap, d1, d2 }).map_err(err)
}

/// Counts with rows true and columns predicted, in Normal, Stunted, Stunting order.
#[pyfunction]
fn confusion_matrix(y_true: Vec<String>, y_pred: Vec<String>) -> PyResult<Vec<Vec<u64>>> {
    eval::confusion_matrix(&labels(&y_true)?, &labels(&y_pred)?)
        .map(|cm| cm.counts)
        .map_err(err)
}

/// Per-class precision, recall, F1 and support plus overall accuracy.
#[pyfunction]
fn metrics(y_true: Vec<String>, y_pred: Vec<String>) -> PyResult<BTreeMap<String, BTreeMap<String, f64>>> {
    let cm = eval::confusion_matrix(&labels(&y_true)?, &labels(&y_pred)?).map_err(err)?;
    let mut out = BTreeMap::new();
    for c in ClassLabel::TABLE_ORDER {
        let m = eval::class_metrics(&cm, c);
        out.insert(
            c.name().to_string(),
            BTreeMap::from([
                ("precision".to_string(), m.precision),
                ("recall".to_string(), m.recall),
                ("f1".to_string(), m.f1),
                ("support".to_string(), m.support as f64),
            ]),
        );
    }
    let acc = eval::accuracy(&cm).map_err(err)?;
    out.insert("overall".to_string(), BTreeMap::from([("accuracy".to_string(), acc)]));
    Ok(out)
}

/// Split, resample, fit and evaluate; returns (text report, CSV report).
#[pyfunction]
#[pyo3(signature = (ds, methods=None, classifiers=None, seed=0, test_fraction=0.2, voting=true, n_members=None))]
fn run_pipeline(
    ds: &PyDataset,
    methods: Option<Vec<String>>,
    classifiers: Option<Vec<String>>,
    seed: u64,
    test_fraction: f64,
    voting: bool,
    n_members: Option<usize>,
) -> PyResult<(String, String)> {
    let mut cfg = PipelineConfig {
        seed,
        test_fraction,
        voting,
        ..PipelineConfig::default()
    };
    if let Some(m) = methods {
        cfg.methods = m.iter().map(|s| s.parse()).collect::<Result<_, _>>().map_err(err)?;
    }
    if let Some(c) = classifiers {
        let kinds: Vec<ClassifierKind> = c.iter().map(|s| s.parse()).collect::<Result<_, _>>().map_err(err)?;
        cfg.classifiers = kinds.into_iter().map(ClassifierSpec::default_for).collect();
    }
    if let Some(n) = n_members {
        for spec in &mut cfg.classifiers {
            spec.n_members = n;
        }
    }
    let out = core_pipeline(&ds.0, &cfg).map_err(err)?;
    Ok((out.report.render_text(), out.report.render_csv()))
}

#[pymodule]
fn esds(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyDataset>()?;
    m.add_class::<PyModel>()?;
    m.add_function(wrap_pyfunction!(synth_cohort, m)?)?;
    m.add_function(wrap_pyfunction!(resample, m)?)?;
    m.add_function(wrap_pyfunction!(class_distribution, m)?)?;
    m.add_function(wrap_pyfunction!(haz_status, m)?)?;
    m.add_function(wrap_pyfunction!(fit_linear, m)?)?;
    m.add_function(wrap_pyfunction!(length_from_ultrasonic, m)?)?;
    m.add_function(wrap_pyfunction!(confusion_matrix, m)?)?;
    m.add_function(wrap_pyfunction!(metrics, m)?)?;
    m.add_function(wrap_pyfunction!(run_pipeline, m)?)?;
    Ok(())
}
