//! Slow, obviously-correct reference implementations used to check the
//! library. Nothing here calls into the code under test except for plain
//! accessors.

#![allow(dead_code)]

use esds_core::{ClassLabel, Dataset, SeededRng};

/// Small random dataset on an integer grid so that distance ties are common.
pub fn random_dataset(rng: &mut SeededRng, max_n: usize) -> Dataset {
    let n = 4 + rng.index(max_n - 3);
    let dim = 1 + rng.index(4);
    let spread = 2 + rng.index(6);
    let rows: Vec<Vec<f64>> = (0..n)
        .map(|_| (0..dim).map(|_| rng.index(spread) as f64).collect())
        .collect();
    let n_classes = 2 + rng.index(2);
    let labels = (0..n).map(|_| ClassLabel::ALL[rng.index(n_classes)]).collect();
    Dataset::with_generic_schema(&rows, labels).unwrap()
}

fn dist2(a: &[f64], b: &[f64]) -> f64 {
    let mut s = 0.0;
    for i in 0..a.len() {
        let d = a[i] - b[i];
        s += d * d;
    }
    s
}

/// Full sort of every candidate by (distance, index).
pub fn knn(ds: &Dataset, query: &[f64], k: usize, exclude: Option<usize>) -> Vec<usize> {
    let mut all: Vec<(f64, usize)> = Vec::new();
    for j in 0..ds.n_rows() {
        if Some(j) != exclude {
            all.push((dist2(query, ds.row(j)), j));
        }
    }
    all.sort_by(|a, b| a.partial_cmp(b).unwrap());
    all.into_iter().take(k).map(|(_, j)| j).collect()
}

/// Rows whose own label gets fewer votes than some other label among the
/// k nearest other rows.
pub fn enn_removed(ds: &Dataset, k: usize) -> Vec<usize> {
    let mut out = Vec::new();
    for i in 0..ds.n_rows() {
        let nbrs = knn(ds, ds.row(i), k, Some(i));
        let own = nbrs.iter().filter(|&&j| ds.label(j) == ds.label(i)).count();
        let beaten = ClassLabel::ALL
            .iter()
            .any(|&c| c != ds.label(i) && nbrs.iter().filter(|&&j| ds.label(j) == c).count() > own);
        if beaten {
            out.push(i);
        }
    }
    out
}

fn nearest(ds: &Dataset, i: usize) -> usize {
    let mut best = usize::MAX;
    let mut best_d = f64::INFINITY;
    for j in 0..ds.n_rows() {
        if j == i {
            continue;
        }
        let d = dist2(ds.row(i), ds.row(j));
        if d < best_d {
            best_d = d;
            best = j;
        }
    }
    best
}

pub fn tomek(ds: &Dataset) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for a in 0..ds.n_rows() {
        for b in a + 1..ds.n_rows() {
            if ds.label(a) != ds.label(b) && nearest(ds, a) == b && nearest(ds, b) == a {
                out.push((a, b));
            }
        }
    }
    out
}

/// Counts in table order (Normal, Stunted, Stunting), rows true, columns predicted.
pub fn confusion(y_true: &[ClassLabel], y_pred: &[ClassLabel]) -> [[u64; 3]; 3] {
    let pos = |c: ClassLabel| ClassLabel::TABLE_ORDER.iter().position(|&t| t == c).unwrap();
    let mut m = [[0u64; 3]; 3];
    for i in 0..y_true.len() {
        m[pos(y_true[i])][pos(y_pred[i])] += 1;
    }
    m
}

pub fn random_labels(rng: &mut SeededRng, n: usize) -> Vec<ClassLabel> {
    (0..n).map(|_| ClassLabel::ALL[rng.index(3)]).collect()
}
