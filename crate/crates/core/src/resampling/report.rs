//! Provenance sidecar for resampling runs.
//!
//! Plain-text `key=value` lines; per-class counts are written as
//! `Normal:645,Stunted:89,Stunting:18` (table order). Cleaning stages appear
//! as `removed.<stage>=...` lines in the order they ran.

use std::fmt;
use std::str::FromStr;

use crate::data::{ClassLabel, Dataset};
use crate::error::{Error, Result};

use super::{ResampleMethod, ResamplerConfig, SyntheticBatch};

pub const REPORT_FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct GenerationReport {
    pub method: String,
    pub seed: u64,
    pub k_neighbors: usize,
    pub edit_k: usize,
    pub targets: String,
    pub difference: String,
    pub enn_scope: String,
    pub small_disjunct_policy: String,
    /// Counts in code order.
    pub before: [usize; 3],
    pub added: [usize; 3],
    pub removed: Vec<(String, [usize; 3])>,
    pub after: [usize; 3],
}

impl GenerationReport {
    pub fn new(
        method: ResampleMethod,
        cfg: &ResamplerConfig,
        input: &Dataset,
        batch: &SyntheticBatch,
        removed: Vec<(String, [usize; 3])>,
        output: &Dataset,
    ) -> Self {
        Self {
            method: method.id().to_string(),
            seed: cfg.seed,
            k_neighbors: cfg.k_neighbors,
            edit_k: cfg.edit_k,
            targets: cfg.targets.to_string(),
            difference: format!("{:?}", cfg.difference).to_ascii_lowercase(),
            enn_scope: format!("{:?}", cfg.enn_scope).to_ascii_lowercase(),
            small_disjunct_policy: format!("{:?}", cfg.small_disjunct_policy).to_ascii_lowercase(),
            before: input.class_counts(),
            added: batch.added_counts(),
            removed,
            after: output.class_counts(),
        }
    }

    pub fn removed_total(&self) -> usize {
        self.removed.iter().map(|(_, c)| c.iter().sum::<usize>()).sum()
    }

    /// e.g. `added: 556 Stunted, 627 Stunting`.
    pub fn summary_line(&self) -> String {
        let parts: Vec<String> = ClassLabel::TABLE_ORDER
            .iter()
            .filter(|c| self.added[c.index()] > 0)
            .map(|c| format!("{} {}", self.added[c.index()], c))
            .collect();
        if parts.is_empty() {
            "added: none".to_string()
        } else {
            format!("added: {}", parts.join(", "))
        }
    }
}

/// Summary of a bare batch: only the added counts are known.
pub fn generation_report(batch: &SyntheticBatch) -> GenerationReport {
    GenerationReport {
        added: batch.added_counts(),
        ..Default::default()
    }
}

fn fmt_counts(c: &[usize; 3]) -> String {
    ClassLabel::TABLE_ORDER
        .iter()
        .map(|l| format!("{}:{}", l, c[l.index()]))
        .collect::<Vec<_>>()
        .join(",")
}

fn parse_counts(s: &str) -> Result<[usize; 3]> {
    let mut out = [0; 3];
    for part in s.split(',').filter(|p| !p.is_empty()) {
        let (name, n) = part
            .split_once(':')
            .ok_or_else(|| Error::ReportFormat(format!("bad count `{part}`")))?;
        let class = ClassLabel::from_name(name).ok_or_else(|| Error::ReportFormat(format!("bad class `{name}`")))?;
        out[class.index()] = n
            .parse()
            .map_err(|_| Error::ReportFormat(format!("bad count `{part}`")))?;
    }
    Ok(out)
}

impl fmt::Display for GenerationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "format_version={REPORT_FORMAT_VERSION}")?;
        writeln!(f, "method={}", self.method)?;
        writeln!(f, "seed={}", self.seed)?;
        writeln!(f, "k_neighbors={}", self.k_neighbors)?;
        writeln!(f, "edit_k={}", self.edit_k)?;
        writeln!(f, "targets={}", self.targets)?;
        writeln!(f, "difference={}", self.difference)?;
        writeln!(f, "enn_scope={}", self.enn_scope)?;
        writeln!(f, "small_disjunct_policy={}", self.small_disjunct_policy)?;
        writeln!(f, "before={}", fmt_counts(&self.before))?;
        writeln!(f, "added={}", fmt_counts(&self.added))?;
        for (stage, c) in &self.removed {
            writeln!(f, "removed.{stage}={}", fmt_counts(c))?;
        }
        writeln!(f, "after={}", fmt_counts(&self.after))
    }
}

impl FromStr for GenerationReport {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut r = GenerationReport::default();
        for line in s
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'))
        {
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::ReportFormat(format!("expected key=value, got `{line}`")))?;
            let num = |v: &str| {
                v.parse::<u64>()
                    .map_err(|_| Error::ReportFormat(format!("bad number for {key}")))
            };
            match key {
                "format_version" => {
                    if num(value)? != REPORT_FORMAT_VERSION as u64 {
                        return Err(Error::ReportFormat(format!("unsupported version {value}")));
                    }
                }
                "method" => r.method = value.to_string(),
                "seed" => r.seed = num(value)?,
                "k_neighbors" => r.k_neighbors = num(value)? as usize,
                "edit_k" => r.edit_k = num(value)? as usize,
                "targets" => r.targets = value.to_string(),
                "difference" => r.difference = value.to_string(),
                "enn_scope" => r.enn_scope = value.to_string(),
                "small_disjunct_policy" => r.small_disjunct_policy = value.to_string(),
                "before" => r.before = parse_counts(value)?,
                "added" => r.added = parse_counts(value)?,
                "after" => r.after = parse_counts(value)?,
                k if k.starts_with("removed.") => {
                    r.removed
                        .push((k["removed.".len()..].to_string(), parse_counts(value)?));
                }
                other => return Err(Error::ReportFormat(format!("unknown key `{other}`"))),
            }
        }
        Ok(r)
    }
}
