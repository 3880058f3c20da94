use rand_distr::{Distribution, Normal as Gaussian};

use crate::data::{largest_remainder, standard_schema, ClassLabel, Dataset};
use crate::error::{Error, Result};
use crate::rng::SeededRng;

use super::reference::{haz_status, GrowthReference};
use super::weight_model;

/// Class shares of a cohort.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Proportions {
    pub normal: f64,
    pub stunted: f64,
    pub stunting: f64,
}

impl Proportions {
    /// From `[normal, stunted, stunting]`, the table order.
    pub fn from_table_order(p: [f64; 3]) -> Self {
        Self {
            normal: p[0],
            stunted: p[1],
            stunting: p[2],
        }
    }

    pub fn table_order(&self) -> [f64; 3] {
        [self.normal, self.stunted, self.stunting]
    }

    pub fn validate(&self) -> Result<()> {
        let p = self.table_order();
        if p.iter().any(|v| !v.is_finite() || *v < 0.0) {
            return Err(Error::InvalidParameter("proportions must be non-negative".into()));
        }
        if (p.iter().sum::<f64>() - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidParameter(format!(
                "proportions sum to {}, not 1",
                p.iter().sum::<f64>()
            )));
        }
        Ok(())
    }

    /// Row count per class, largest-remainder apportionment, code order.
    pub fn counts(&self, n: usize) -> [usize; 3] {
        let alloc = largest_remainder(n, &self.table_order());
        let mut out = [0; 3];
        for (c, a) in ClassLabel::TABLE_ORDER.iter().zip(alloc) {
            out[c.index()] = a;
        }
        out
    }
}

fn round1(x: f64) -> f64 {
    (x * 10.0).round() / 10.0
}

/// Draws a target z-score for `class`: Normal from N(0, 1) truncated at -2,
/// Stunting uniform on [-3, -2), Stunted uniform on [-4.5, -3).
fn draw_z(class: ClassLabel, rng: &mut SeededRng, std_normal: &Gaussian<f64>) -> f64 {
    match class {
        ClassLabel::Normal => loop {
            let z = std_normal.sample(rng.inner_mut());
            if z >= -2.0 {
                break z;
            }
        },
        ClassLabel::Stunting => rng.uniform(-3.0, -2.0),
        ClassLabel::Stunted => rng.uniform(-4.5, -3.0),
    }
}

/// Synthetic cohort with the requested class mix.
///
/// Ages are whole months uniform over the reference range, sex is a fair coin,
/// height is `median + z * sd` rounded to 0.1 cm, and weight follows
/// [`weight_model`] rounded to 0.1 kg. Every row's label is recomputed with
/// [`haz_status`]; a draw that rounding pushes across a class boundary is
/// redrawn, so class counts are exact. Row order is shuffled.
pub fn synth_cohort(
    n: usize,
    proportions: Proportions,
    reference: &GrowthReference,
    rng: &mut SeededRng,
) -> Result<Dataset> {
    if n == 0 {
        return Err(Error::InvalidParameter("cohort size must be positive".into()));
    }
    proportions.validate()?;
    let (lo, hi) = match (reference.age_range(0), reference.age_range(1)) {
        (Some(a), Some(b)) => (a.0.max(b.0), a.1.min(b.1)),
        _ => return Err(Error::InvalidParameter("reference must cover both sexes".into())),
    };
    let counts = proportions.counts(n);
    let mut plan: Vec<ClassLabel> = ClassLabel::ALL
        .iter()
        .flat_map(|&c| std::iter::repeat_n(c, counts[c.index()]))
        .collect();
    rng.shuffle(&mut plan);

    let std_normal = Gaussian::new(0.0, 1.0).expect("valid normal");
    let noise = Gaussian::new(0.0, weight_model::NOISE_SD).expect("valid normal");
    let mut rows = Vec::with_capacity(n);
    for &class in &plan {
        let row = loop {
            let age = (lo + rng.index((hi - lo + 1) as usize) as u32) as f64;
            let sex = rng.index(2) as f64;
            let entry = reference.get(age, sex)?;
            let z = draw_z(class, rng, &std_normal);
            let height = round1(entry.median_cm + z * entry.sd_cm);
            if height <= 0.0 || haz_status(age, sex, height, reference)? != class {
                continue;
            }
            let weight = round1(
                (weight_model::expected_weight(height, age) + noise.sample(rng.inner_mut())).max(weight_model::MIN_KG),
            );
            break vec![age, sex, height, weight];
        };
        rows.push(row);
    }
    Dataset::from_rows(standard_schema(), &rows, plan)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_two_sizes() {
        let p = Proportions::from_table_order([0.86, 0.12, 0.02]);
        let ds = synth_cohort(752, p, &GrowthReference::bundled(), &mut SeededRng::new(7)).unwrap();
        let c = ds.class_counts();
        assert_eq!(c[ClassLabel::Normal.index()], 647);
        assert_eq!(c[ClassLabel::Stunted.index()], 90);
        assert_eq!(c[ClassLabel::Stunting.index()], 15);
        ds.validate_anthropometric().unwrap();
    }

    #[test]
    fn all_normal() {
        let p = Proportions::from_table_order([1.0, 0.0, 0.0]);
        let ds = synth_cohort(3, p, &GrowthReference::bundled(), &mut SeededRng::new(1)).unwrap();
        assert_eq!(ds.labels(), &[ClassLabel::Normal; 3]);
    }

    #[test]
    fn labels_are_a_fixed_point() {
        let r = GrowthReference::bundled();
        let p = Proportions::from_table_order([0.5, 0.3, 0.2]);
        let ds = synth_cohort(300, p, &r, &mut SeededRng::new(2)).unwrap();
        for (row, l) in ds.rows().zip(ds.labels()) {
            assert_eq!(haz_status(row[0], row[1], row[2], &r).unwrap(), *l);
        }
    }

    #[test]
    fn rejects_bad_proportions() {
        let r = GrowthReference::bundled();
        let mut rng = SeededRng::new(0);
        assert!(synth_cohort(10, Proportions::from_table_order([0.5, 0.6, -0.1]), &r, &mut rng).is_err());
        assert!(synth_cohort(10, Proportions::from_table_order([0.5, 0.2, 0.2]), &r, &mut rng).is_err());
        assert!(synth_cohort(0, Proportions::from_table_order([1.0, 0.0, 0.0]), &r, &mut rng).is_err());
    }
}
