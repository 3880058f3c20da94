use crate::data::Dataset;
use crate::error::{Error, Result};
use crate::neighbors::knn_all;

use super::EnnScope;

/// Rows whose own label is outvoted by some other label among their `k`
/// nearest neighbors (self excluded). All decisions are made against `ds` as
/// given; rows flagged in `exempt` are never returned.
pub fn enn_removals(ds: &Dataset, k: usize, scope: EnnScope, exempt: &[bool]) -> Result<Vec<usize>> {
    if k == 0 {
        return Err(Error::InvalidParameter("k must be positive".into()));
    }
    if k >= ds.n_rows() {
        return Err(Error::TooFewRows {
            k,
            available: ds.n_rows().saturating_sub(1),
        });
    }
    let major = ds.majority_class();
    let lists = knn_all(ds, k)?;
    Ok((0..ds.n_rows())
        .filter(|&i| !exempt.get(i).copied().unwrap_or(false))
        .filter(|&i| scope == EnnScope::AllClasses || Some(ds.label(i)) != major)
        .filter(|&i| {
            let mut votes = [0usize; 3];
            for &j in &lists[i].indices {
                votes[ds.label(j).index()] += 1;
            }
            let own = votes[ds.label(i).index()];
            votes.iter().any(|&v| v > own)
        })
        .collect())
}

/// Wilson's edited nearest neighbor rule, applied in one simultaneous pass.
/// Returns the kept rows (in order) and the removed input indices.
pub fn enn_edit(ds: &Dataset, k: usize, scope: EnnScope) -> Result<(Dataset, Vec<usize>)> {
    let removed = enn_removals(ds, k, scope, &[])?;
    Ok((ds.without(&removed), removed))
}

/// Cross-label pairs `(a, b)`, `a < b`, that are each other's nearest neighbor.
pub fn tomek_links(ds: &Dataset) -> Vec<(usize, usize)> {
    if ds.n_rows() < 2 || ds.present_classes().len() < 2 {
        return Vec::new();
    }
    let nn: Vec<usize> = knn_all(ds, 1)
        .expect("n >= 2 rows")
        .into_iter()
        .map(|l| l.indices[0])
        .collect();
    (0..ds.n_rows())
        .filter_map(|a| {
            let b = nn[a];
            (a < b && nn[b] == a && ds.label(a) != ds.label(b)).then_some((a, b))
        })
        .collect()
}
