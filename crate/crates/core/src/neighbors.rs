//! Exact k-nearest-neighbor search by linear scan.
//!
//! Distance is plain Euclidean over every feature in natural units. Ordering
//! is by distance, then by row index, so results never depend on scan order.

use rayon::prelude::*;

use crate::data::Dataset;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Default)]
pub struct NeighborList {
    pub indices: Vec<usize>,
    pub distances: Vec<f64>,
}

impl NeighborList {
    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }
}

#[inline]
pub fn squared_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

#[inline]
pub fn euclidean(a: &[f64], b: &[f64]) -> f64 {
    squared_distance(a, b).sqrt()
}

/// k nearest rows of a row-major `points` buffer (`dim` columns) to `query`.
/// `exclude` drops one row index from consideration.
pub fn knn_flat(query: &[f64], points: &[f64], dim: usize, k: usize, exclude: Option<usize>) -> Result<NeighborList> {
    if query.len() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            got: query.len(),
        });
    }
    let n = points.len().checked_div(dim).unwrap_or(0);
    let eligible = n - usize::from(exclude.is_some_and(|e| e < n));
    if k == 0 {
        return Err(Error::InvalidParameter("k must be positive".into()));
    }
    if k > eligible {
        return Err(Error::TooFewRows { k, available: eligible });
    }
    let mut cand: Vec<(f64, usize)> = points
        .chunks_exact(dim)
        .enumerate()
        .filter(|(i, _)| Some(*i) != exclude)
        .map(|(i, p)| (squared_distance(query, p), i))
        .collect();
    let cmp = |a: &(f64, usize), b: &(f64, usize)| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1));
    if k < cand.len() {
        cand.select_nth_unstable_by(k - 1, cmp);
        cand.truncate(k);
    }
    cand.sort_unstable_by(cmp);
    Ok(NeighborList {
        indices: cand.iter().map(|c| c.1).collect(),
        distances: cand.iter().map(|c| c.0.sqrt()).collect(),
    })
}

/// k nearest rows of `data` to `query`, optionally skipping row `exclude`.
pub fn knn(query: &[f64], data: &Dataset, k: usize, exclude: Option<usize>) -> Result<NeighborList> {
    knn_flat(query, data.features_flat(), data.n_features(), k, exclude)
}

/// k nearest neighbors of every row of `data`, each excluding itself.
/// Queries run in parallel; output order is row order.
pub fn knn_all(data: &Dataset, k: usize) -> Result<Vec<NeighborList>> {
    (0..data.n_rows())
        .into_par_iter()
        .map(|i| knn(data.row(i), data, k, Some(i)))
        .collect()
}

/// Distance from row `index` to the closest row carrying a different label.
pub fn nearest_enemy_distance(index: usize, ds: &Dataset) -> Result<f64> {
    nearest_enemy(index, ds).map(|(_, d)| d)
}

/// Closest differently labeled row and its distance; ties go to the lower index.
pub fn nearest_enemy(index: usize, ds: &Dataset) -> Result<(usize, f64)> {
    let own = ds.label(index);
    let q = ds.row(index);
    let mut best: Option<(usize, f64)> = None;
    for j in 0..ds.n_rows() {
        if ds.label(j) == own {
            continue;
        }
        let d = squared_distance(q, ds.row(j));
        if best.is_none_or(|(_, b)| d < b) {
            best = Some((j, d));
        }
    }
    best.map(|(j, d)| (j, d.sqrt())).ok_or(Error::SingleClass)
}
