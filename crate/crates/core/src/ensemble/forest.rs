use rayon::prelude::*;

use crate::data::Dataset;
use crate::error::{Error, Result};
use crate::rng::SeededRng;

use super::tree::{build_tree, FeatureSubsample, TreeParams};
use super::{check_trainable, FitReport, Model, ModelKind};

/// `n` row indices drawn uniformly with replacement.
pub fn bootstrap_indices(n: usize, rng: &mut SeededRng) -> Vec<usize> {
    (0..n).map(|_| rng.index(n)).collect()
}

fn fit_members(
    train: &Dataset,
    n_members: usize,
    params: TreeParams,
    bootstrap: bool,
    kind: ModelKind,
    rng: &mut SeededRng,
) -> Result<Model> {
    check_trainable(train)?;
    if n_members == 0 {
        return Err(Error::InvalidParameter("ensemble needs at least one member".into()));
    }
    let n = train.n_rows();
    let weights = vec![1.0; n];
    // Each member owns a child stream, so scheduling cannot change the result.
    let seeds: Vec<u64> = (0..n_members as u64).map(|i| rng.child_seed(i)).collect();
    let members = seeds
        .into_par_iter()
        .map(|seed| {
            let mut member_rng = SeededRng::new(seed);
            let idx = if bootstrap {
                bootstrap_indices(n, &mut member_rng)
            } else {
                (0..n).collect()
            };
            let tree = build_tree(train, idx, &weights, params, &mut member_rng)?;
            Ok(Model::from_tree(tree, train, seed))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Model {
        kind,
        weights: vec![1.0; n_members],
        members,
        classes: train.present_classes(),
        n_features: train.n_features(),
        tree: None,
        report: FitReport {
            oob_available: bootstrap,
            member_count: n_members,
            seed: rng.seed(),
            ..Default::default()
        },
    })
}

/// Random forest: bootstrap rows per tree, feature subsampling per split as
/// set in `params` (normally [`TreeParams::forest`]).
pub fn fit_forest(train: &Dataset, n_trees: usize, params: TreeParams, rng: &mut SeededRng) -> Result<Model> {
    fit_forest_opts(train, n_trees, params, true, rng)
}

/// [`fit_forest`] with bootstrapping switchable, for debugging.
pub fn fit_forest_opts(
    train: &Dataset,
    n_trees: usize,
    params: TreeParams,
    bootstrap: bool,
    rng: &mut SeededRng,
) -> Result<Model> {
    fit_members(train, n_trees, params, bootstrap, ModelKind::Forest, rng)
}

/// Bagging: bootstrap rows only; every split sees all features.
pub fn fit_bagging(train: &Dataset, n_members: usize, params: TreeParams, rng: &mut SeededRng) -> Result<Model> {
    fit_bagging_opts(train, n_members, params, true, rng)
}

pub fn fit_bagging_opts(
    train: &Dataset,
    n_members: usize,
    params: TreeParams,
    bootstrap: bool,
    rng: &mut SeededRng,
) -> Result<Model> {
    let params = TreeParams {
        feature_subsample: FeatureSubsample::All,
        ..params
    };
    fit_members(train, n_members, params, bootstrap, ModelKind::Bagging, rng)
}
