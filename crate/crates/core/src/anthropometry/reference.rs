use std::collections::BTreeMap;
use std::path::Path;

use crate::data::ClassLabel;
use crate::error::{Error, Result};

/// Bundled table. Approximate curves for tests and demos; not for clinical use.
const BUNDLED: &str = include_str!("../../data/growth_reference.csv");

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReferenceEntry {
    pub median_cm: f64,
    pub sd_cm: f64,
}

/// Height-for-age median and SD keyed by (whole months, sex 0 = male / 1 = female).
#[derive(Debug, Clone, PartialEq)]
pub struct GrowthReference {
    entries: BTreeMap<(u32, u8), ReferenceEntry>,
}

impl GrowthReference {
    pub fn bundled() -> Self {
        Self::from_csv_str(BUNDLED).expect("bundled reference is valid")
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_csv_str(&text)
    }

    pub fn from_csv_str(text: &str) -> Result<Self> {
        let mut reader = csv::ReaderBuilder::new()
            .comment(Some(b'#'))
            .trim(csv::Trim::All)
            .from_reader(text.as_bytes());
        let headers: Vec<String> = reader.headers()?.iter().map(|h| h.to_ascii_lowercase()).collect();
        let col = |name: &str| {
            headers
                .iter()
                .position(|h| h == name)
                .ok_or_else(|| Error::Header(format!("reference is missing column `{name}`")))
        };
        let (ia, is, im, isd) = (col("age_months")?, col("sex")?, col("median_cm")?, col("sd_cm")?);
        let mut entries = BTreeMap::new();
        for (r, rec) in reader.records().enumerate() {
            let rec = rec?;
            let num = |j: usize, name: &str| -> Result<f64> {
                rec.get(j).unwrap_or("").parse::<f64>().map_err(|_| Error::Cell {
                    row: r + 1,
                    column: name.into(),
                    message: "not a number".into(),
                })
            };
            let age = num(ia, "age_months")?;
            let sex = num(is, "sex")?;
            let entry = ReferenceEntry {
                median_cm: num(im, "median_cm")?,
                sd_cm: num(isd, "sd_cm")?,
            };
            if age < 0.0 || age.fract() != 0.0 || !(sex == 0.0 || sex == 1.0) {
                return Err(Error::Cell {
                    row: r + 1,
                    column: "age_months/sex".into(),
                    message: "age must be whole months and sex 0 or 1".into(),
                });
            }
            if [entry.sd_cm, entry.median_cm].iter().any(|v| v.is_nan() || *v <= 0.0) {
                return Err(Error::Cell {
                    row: r + 1,
                    column: "sd_cm".into(),
                    message: "median and sd must be positive".into(),
                });
            }
            if entries.insert((age as u32, sex as u8), entry).is_some() {
                return Err(Error::InvalidDataset(format!(
                    "duplicate reference entry age {age}, sex {sex}"
                )));
            }
        }
        for sex in [0u8, 1] {
            let ages: Vec<u32> = entries.keys().filter(|k| k.1 == sex).map(|k| k.0).collect();
            if ages.windows(2).any(|w| w[1] != w[0] + 1) {
                return Err(Error::InvalidDataset(format!(
                    "reference ages for sex {sex} are not contiguous"
                )));
            }
        }
        Ok(Self { entries })
    }

    pub fn from_entries(entries: impl IntoIterator<Item = ((u32, u8), ReferenceEntry)>) -> Self {
        Self {
            entries: entries.into_iter().collect(),
        }
    }

    pub fn get(&self, age_months: f64, sex: f64) -> Result<ReferenceEntry> {
        let missing = || Error::MissingReference {
            age: age_months,
            sex: if sex == 1.0 { 1 } else { 0 },
        };
        if age_months < 0.0 || age_months.fract() != 0.0 || !(sex == 0.0 || sex == 1.0) {
            return Err(missing());
        }
        self.entries
            .get(&(age_months as u32, sex as u8))
            .copied()
            .ok_or_else(missing)
    }

    /// Inclusive age range covered for `sex`.
    pub fn age_range(&self, sex: u8) -> Option<(u32, u32)> {
        let mut ages = self.entries.keys().filter(|k| k.1 == sex).map(|k| k.0);
        let lo = ages.next()?;
        Some((lo, ages.next_back().unwrap_or(lo)))
    }

    pub fn z_score(&self, age_months: f64, sex: f64, height_cm: f64) -> Result<f64> {
        let e = self.get(age_months, sex)?;
        Ok((height_cm - e.median_cm) / e.sd_cm)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// z < -3: Stunted; -3 <= z < -2: Stunting; otherwise Normal.
pub fn status_for_z(z: f64) -> ClassLabel {
    if z < -3.0 {
        ClassLabel::Stunted
    } else if z < -2.0 {
        ClassLabel::Stunting
    } else {
        ClassLabel::Normal
    }
}

pub fn haz_status(age_months: f64, sex: f64, height_cm: f64, reference: &GrowthReference) -> Result<ClassLabel> {
    reference.z_score(age_months, sex, height_cm).map(status_for_z)
}
