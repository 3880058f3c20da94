//! Radius-bounded variants.
//!
//! `radius_smote` is plain SMOTE followed by 3-NN misclassification
//! cleanup over the augmented set.
//!
//! `edited_radius_smote` bounds generation by each parent's safe radius (the
//! distance to its nearest differently labeled row) and treats minority rows
//! whose whole neighborhood is foreign as small disjuncts rather than noise:
//!
//! 1. every minority row gets a safe radius `r`;
//! 2. a row is SAFE if at least one of its `k_neighbors` nearest rows shares
//!    its label, otherwise it is a SMALL DISJUNCT;
//! 3. SAFE parents interpolate toward a same-class neighbor, with the step
//!    length capped at `r`;
//! 4. small disjuncts (policy `Preserve`) sample uniformly inside the ball of
//!    radius `r / 2` around themselves; under `Discard` they are not parents;
//! 5. ENN (`edit_k`, all classes) cleans the combined set, except that small
//!    disjuncts and their generated mates are exempt.

use rand_distr::{Distribution, StandardNormal};

use crate::data::{ClassLabel, Dataset};
use crate::error::{Error, Result};
use crate::neighbors::{knn, nearest_enemy_distance};

use super::clean::enn_removals;
use super::smote::{class_neighbors, class_rng, interpolate, plan, smote_all, RoundRobin};
use super::{
    label_counts, EnnScope, GenerationReport, ResampleMethod, Resampled, ResamplerConfig, SmallDisjunctPolicy,
    SyntheticBatch,
};

/// SMOTE to the configured targets, then removal of every row (original or
/// synthetic) whose label loses the vote of its `edit_k` nearest neighbors in
/// the augmented set.
pub fn radius_smote(ds: &Dataset, cfg: &ResamplerConfig) -> Result<Resampled> {
    cfg.validate()?;
    let (augmented, batch) = smote_all(ds, cfg)?;
    let removed = enn_removals(&augmented, cfg.edit_k, EnnScope::AllClasses, &[])?;
    let dataset = augmented.without(&removed);
    let stages = vec![("knn-cleanup".to_string(), label_counts(&augmented, &removed))];
    let report = GenerationReport::new(ResampleMethod::RadiusSmote, cfg, ds, &batch, stages, &dataset);
    Ok(Resampled { dataset, batch, report })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DisjunctKind {
    Safe,
    SmallDisjunct,
}

/// SAFE / SMALL-DISJUNCT classification of row `i` against all of `ds`.
pub fn disjunct_kind(ds: &Dataset, i: usize, k: usize) -> Result<DisjunctKind> {
    let k = k.min(ds.n_rows() - 1);
    let nl = knn(ds.row(i), ds, k, Some(i))?;
    let own = ds.label(i);
    Ok(if nl.indices.iter().any(|&j| ds.label(j) == own) {
        DisjunctKind::Safe
    } else {
        DisjunctKind::SmallDisjunct
    })
}

struct ParentInfo {
    kind: DisjunctKind,
    radius: f64,
    neighbors: Vec<usize>,
}

pub fn edited_radius_smote(ds: &Dataset, cfg: &ResamplerConfig) -> Result<Resampled> {
    cfg.validate()?;
    if ds.present_classes().len() < 2 {
        return Err(Error::SingleClass);
    }
    let d = ds.n_features();
    let mut batch = SyntheticBatch::new(d);
    let mut small_disjuncts = Vec::new();
    let mut lone_rows = Vec::new();

    for class in ClassLabel::ALL {
        let Some(target) = cfg.target_for(ds, class) else {
            continue;
        };
        if target == ds.class_counts()[class.index()] {
            continue;
        }
        let (members, need) = plan(ds, class, cfg)?;
        let preserve = cfg.small_disjunct_policy == SmallDisjunctPolicy::Preserve;
        let mut info = Vec::with_capacity(members.len());
        for &i in &members {
            info.push(ParentInfo {
                kind: disjunct_kind(ds, i, cfg.k_neighbors)?,
                radius: nearest_enemy_distance(i, ds)?,
                neighbors: Vec::new(),
            });
        }
        // discarded small disjuncts take no part in generation, not even as partners
        let pool: Vec<usize> = (0..members.len())
            .filter(|&s| preserve || info[s].kind == DisjunctKind::Safe)
            .collect();
        if pool.len() >= 2 {
            let pool_rows: Vec<usize> = pool.iter().map(|&s| members[s]).collect();
            let same = class_neighbors(ds, &pool_rows, cfg.k_neighbors.min(pool.len() - 1))?;
            for (&s, neighbors) in pool.iter().zip(same) {
                info[s].neighbors = neighbors;
            }
        }
        for (slot, &i) in members.iter().enumerate() {
            if info[slot].kind == DisjunctKind::SmallDisjunct && preserve {
                small_disjuncts.push(i);
            }
        }
        let eligible: Vec<usize> = pool
            .into_iter()
            .filter(|&s| info[s].kind == DisjunctKind::SmallDisjunct || !info[s].neighbors.is_empty())
            .collect();
        if eligible.is_empty() || need == 0 {
            continue;
        }

        let mut rng = class_rng(cfg, class);
        let mut parents = RoundRobin::new(eligible, &mut rng);
        let mut buf = Vec::with_capacity(d);
        for _ in 0..need {
            let (slot, rng) = parents.next();
            let p = members[slot];
            let pi = &info[slot];
            match pi.kind {
                DisjunctKind::Safe => {
                    let q = pi.neighbors[rng.index(pi.neighbors.len())];
                    let delta = rng.unit_closed();
                    let span = crate::neighbors::euclidean(ds.row(p), ds.row(q));
                    let scale = if span > pi.radius { pi.radius / span } else { 1.0 };
                    interpolate(ds.row(p), ds.row(q), delta * scale, cfg.difference, &mut buf);
                    batch.push(&buf, class, p, Some(q), delta);
                }
                DisjunctKind::SmallDisjunct => {
                    let u = rng.unit_closed();
                    sample_ball(ds.row(p), pi.radius / 2.0, u, rng.inner_mut(), &mut buf);
                    lone_rows.push(batch.len());
                    batch.push(&buf, class, p, None, u);
                }
            }
        }
    }

    let combined = batch.appended_to(ds)?;
    let mut exempt = vec![false; combined.n_rows()];
    for &i in &small_disjuncts {
        exempt[i] = true;
    }
    for &b in &lone_rows {
        exempt[ds.n_rows() + b] = true;
    }
    let removed = enn_removals(&combined, cfg.edit_k, EnnScope::AllClasses, &exempt)?;
    let dataset = combined.without(&removed);
    let stages = vec![("enn".to_string(), label_counts(&combined, &removed))];
    let report = GenerationReport::new(ResampleMethod::EditedRadiusSmote, cfg, ds, &batch, stages, &dataset);
    Ok(Resampled { dataset, batch, report })
}

/// Point uniform in the ball of `radius` around `center`; `u` picks the
/// radial fraction (`u^(1/d)` gives uniform volume density).
fn sample_ball(center: &[f64], radius: f64, u: f64, rng: &mut impl rand::Rng, out: &mut Vec<f64>) {
    let d = center.len();
    let dir: Vec<f64> = loop {
        let v: Vec<f64> = (0..d).map(|_| StandardNormal.sample(rng)).collect();
        let n = v.iter().map(|x: &f64| x * x).sum::<f64>().sqrt();
        if n > 0.0 {
            break v.into_iter().map(|x| x / n).collect();
        }
    };
    let r = radius * u.powf(1.0 / d as f64);
    out.clear();
    out.extend(center.iter().zip(&dir).map(|(c, v)| c + r * v));
}
