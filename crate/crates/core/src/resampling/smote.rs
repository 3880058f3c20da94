use crate::data::{ClassLabel, Dataset};
use crate::error::{Error, Result};
use crate::neighbors::knn_flat;
use crate::rng::{derive_seed, SeededRng};

use super::clean::tomek_links;
use super::{
    label_counts, DifferenceMode, GenerationReport, ResampleMethod, Resampled, ResamplerConfig, SyntheticBatch, Targets,
};

/// Visits every parent once per epoch, reshuffling between epochs, so the
/// requested number of rows is hit exactly and parents are used evenly.
pub(crate) struct RoundRobin<'a> {
    order: Vec<usize>,
    pos: usize,
    rng: &'a mut SeededRng,
}

impl<'a> RoundRobin<'a> {
    pub(crate) fn new(items: Vec<usize>, rng: &'a mut SeededRng) -> Self {
        let mut rr = Self {
            order: items,
            pos: 0,
            rng,
        };
        rr.rng.shuffle(&mut rr.order);
        rr
    }

    pub(crate) fn next(&mut self) -> (usize, &mut SeededRng) {
        if self.pos == self.order.len() {
            self.rng.shuffle(&mut self.order);
            self.pos = 0;
        }
        let item = self.order[self.pos];
        self.pos += 1;
        (item, self.rng)
    }
}

/// Same-class k nearest neighbors for every member, as dataset indices.
pub(crate) fn class_neighbors(ds: &Dataset, members: &[usize], k: usize) -> Result<Vec<Vec<usize>>> {
    let d = ds.n_features();
    let mut flat = Vec::with_capacity(members.len() * d);
    for &i in members {
        flat.extend_from_slice(ds.row(i));
    }
    members
        .iter()
        .enumerate()
        .map(|(local, &i)| {
            let nl = knn_flat(ds.row(i), &flat, d, k, Some(local))?;
            Ok(nl.indices.into_iter().map(|l| members[l]).collect())
        })
        .collect()
}

pub(crate) fn interpolate(p: &[f64], q: &[f64], delta: f64, mode: DifferenceMode, out: &mut Vec<f64>) {
    out.clear();
    out.extend(p.iter().zip(q).map(|(a, b)| match mode {
        DifferenceMode::Signed => a + (b - a) * delta,
        DifferenceMode::LiteralAbs => a + (b - a).abs() * delta,
    }));
}

/// Checks the class and resolves how many rows it needs.
pub(crate) fn plan(ds: &Dataset, class: ClassLabel, cfg: &ResamplerConfig) -> Result<(Vec<usize>, usize)> {
    let members = ds.class_indices(class);
    if members.len() < 2 {
        return Err(Error::ClassTooSmall {
            class: class.to_string(),
            count: members.len(),
            needed: 2,
        });
    }
    let target = cfg.target_for(ds, class).unwrap_or(members.len());
    if target < members.len() {
        return Err(Error::TargetBelowCount {
            class: class.to_string(),
            target,
            current: members.len(),
        });
    }
    Ok((members.clone(), target - members.len()))
}

/// Per-class generator stream; independent of which other classes are resampled.
pub(crate) fn class_rng(cfg: &ResamplerConfig, class: ClassLabel) -> SeededRng {
    SeededRng::new(derive_seed(cfg.seed, class.index() as u64))
}

/// Grows `class` to its configured target by interpolating between a parent
/// and one of its `k_neighbors` nearest same-class rows. A class smaller than
/// `k_neighbors + 1` uses all of its other members as candidates.
pub fn smote(ds: &Dataset, class: ClassLabel, cfg: &ResamplerConfig) -> Result<(Dataset, SyntheticBatch)> {
    cfg.validate()?;
    let batch = smote_batch(ds, class, cfg)?;
    Ok((batch.appended_to(ds)?, batch))
}

fn smote_batch(ds: &Dataset, class: ClassLabel, cfg: &ResamplerConfig) -> Result<SyntheticBatch> {
    let (members, need) = plan(ds, class, cfg)?;
    let mut batch = SyntheticBatch::new(ds.n_features());
    if need == 0 {
        return Ok(batch);
    }
    let k = cfg.k_neighbors.min(members.len() - 1);
    let neighbors = class_neighbors(ds, &members, k)?;
    let slot: std::collections::HashMap<usize, usize> = members.iter().enumerate().map(|(l, &i)| (i, l)).collect();

    let mut rng = class_rng(cfg, class);
    let mut parents = RoundRobin::new(members.clone(), &mut rng);
    let mut buf = Vec::with_capacity(ds.n_features());
    for _ in 0..need {
        let (p, rng) = parents.next();
        let cands = &neighbors[slot[&p]];
        let q = cands[rng.index(cands.len())];
        let delta = rng.unit_closed();
        interpolate(ds.row(p), ds.row(q), delta, cfg.difference, &mut buf);
        batch.push(&buf, class, p, Some(q), delta);
    }
    Ok(batch)
}

/// SMOTE applied to every class that has a target above its count.
pub fn smote_all(ds: &Dataset, cfg: &ResamplerConfig) -> Result<(Dataset, SyntheticBatch)> {
    cfg.validate()?;
    let mut batch = SyntheticBatch::new(ds.n_features());
    for class in ClassLabel::ALL {
        match cfg.target_for(ds, class) {
            Some(t) if t > ds.class_counts()[class.index()] => batch.append(smote_batch(ds, class, cfg)?),
            Some(t) if t < ds.class_counts()[class.index()] => {
                return Err(Error::TargetBelowCount {
                    class: class.to_string(),
                    target: t,
                    current: ds.class_counts()[class.index()],
                })
            }
            _ => {}
        }
    }
    Ok((batch.appended_to(ds)?, batch))
}

/// Removes the majority-class member of every Tomek link, then runs SMOTE on
/// the cleaned data. Targets are resolved after cleaning; under
/// `MatchMajority` the original majority is never oversampled, and the other
/// classes grow to its cleaned count.
pub fn smote_tomek(ds: &Dataset, cfg: &ResamplerConfig) -> Result<Resampled> {
    cfg.validate()?;
    let major = ds.majority_class().ok_or(Error::SingleClass)?;
    let mut drop: Vec<usize> = tomek_links(ds)
        .into_iter()
        .flat_map(|(a, b)| [a, b])
        .filter(|&i| ds.label(i) == major)
        .collect();
    drop.sort_unstable();
    drop.dedup();
    let cleaned = ds.without(&drop);
    let cfg = match cfg.targets {
        Targets::MatchMajority => {
            let counts = cleaned.class_counts();
            let goal = counts[major.index()];
            let mut t = [None; 3];
            for c in ClassLabel::ALL {
                if c != major && counts[c.index()] > 0 {
                    t[c.index()] = Some(goal.max(counts[c.index()]));
                }
            }
            ResamplerConfig {
                targets: Targets::Counts(t),
                ..cfg.clone()
            }
        }
        Targets::Counts(_) => cfg.clone(),
    };
    let (dataset, batch) = smote_all(&cleaned, &cfg)?;
    let stages = vec![("tomek".to_string(), label_counts(ds, &drop))];
    let report = GenerationReport::new(ResampleMethod::SmoteTomek, &cfg, ds, &batch, stages, &dataset);
    Ok(Resampled { dataset, batch, report })
}
