//! Dataset representation, CSV I/O, category encoding and stratified splits.
//!
//! Records follow the screening table layout: `age_months, gender, height_cm,
//! weight_kg, status`. Gender and status may appear either as raw category
//! strings (`male`, `Stunting`, ...) or already encoded as numbers.

use std::collections::HashMap;
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::SeededRng;

pub const AGE: &str = "age_months";
pub const GENDER: &str = "gender";
pub const HEIGHT: &str = "height_cm";
pub const WEIGHT: &str = "weight_kg";
pub const STATUS: &str = "status";

/// Feature columns in storage order.
pub const FEATURE_COLUMNS: [&str; 4] = [AGE, GENDER, HEIGHT, WEIGHT];

/// Growth status. Variant order is code order, which is also the tie-break
/// order for every vote in the crate (Normal wins ties).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ClassLabel {
    Normal,
    Stunting,
    Stunted,
}

impl ClassLabel {
    /// Code order: 0, 0.5, 1.
    pub const ALL: [ClassLabel; 3] = [ClassLabel::Normal, ClassLabel::Stunting, ClassLabel::Stunted];
    /// Row/column order of confusion matrices and report tables.
    pub const TABLE_ORDER: [ClassLabel; 3] = [ClassLabel::Normal, ClassLabel::Stunted, ClassLabel::Stunting];

    pub fn code(self) -> f64 {
        match self {
            ClassLabel::Normal => 0.0,
            ClassLabel::Stunting => 0.5,
            ClassLabel::Stunted => 1.0,
        }
    }

    pub fn from_code(code: f64) -> Option<Self> {
        if code == 0.0 {
            Some(ClassLabel::Normal)
        } else if code == 0.5 {
            Some(ClassLabel::Stunting)
        } else if code == 1.0 {
            Some(ClassLabel::Stunted)
        } else {
            None
        }
    }

    /// Position in code order, usable as an array index.
    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Option<Self> {
        Self::ALL.get(i).copied()
    }

    pub fn name(self) -> &'static str {
        match self {
            ClassLabel::Normal => "Normal",
            ClassLabel::Stunting => "Stunting",
            ClassLabel::Stunted => "Stunted",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        match name.trim().to_ascii_lowercase().as_str() {
            "normal" => Some(ClassLabel::Normal),
            "stunting" => Some(ClassLabel::Stunting),
            "stunted" => Some(ClassLabel::Stunted),
            _ => None,
        }
    }
}

impl fmt::Display for ClassLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Encodes a raw category string of the `gender` or `status` column.
/// Matching ignores case and surrounding whitespace.
pub fn encode_value(column: &str, raw: &str) -> Result<f64> {
    let unknown = || Error::UnknownCategory {
        column: column.to_string(),
        raw: raw.to_string(),
    };
    match column {
        GENDER => match raw.trim().to_ascii_lowercase().as_str() {
            "male" => Ok(0.0),
            "female" => Ok(1.0),
            _ => Err(unknown()),
        },
        STATUS => ClassLabel::from_name(raw).map(ClassLabel::code).ok_or_else(unknown),
        _ => Err(unknown()),
    }
}

/// Inverse of [`encode_value`]; returns lowercase category names.
pub fn decode_value(column: &str, code: f64) -> Option<&'static str> {
    match column {
        GENDER if code == 0.0 => Some("male"),
        GENDER if code == 1.0 => Some("female"),
        STATUS => ClassLabel::from_code(code).map(|c| match c {
            ClassLabel::Normal => "normal",
            ClassLabel::Stunting => "stunting",
            ClassLabel::Stunted => "stunted",
        }),
        _ => None,
    }
}

/// Feature matrix (row-major) plus one label per row.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Dataset {
    schema: Vec<String>,
    features: Vec<f64>,
    labels: Vec<ClassLabel>,
}

impl Dataset {
    /// Builds a dataset from a flat row-major buffer. Checks shape and
    /// finiteness only; see [`Dataset::validate_anthropometric`] for the
    /// domain ranges.
    pub fn from_flat(schema: Vec<String>, features: Vec<f64>, labels: Vec<ClassLabel>) -> Result<Self> {
        if schema.is_empty() {
            return Err(Error::InvalidDataset("schema has no columns".into()));
        }
        if features.len() != schema.len() * labels.len() {
            return Err(Error::InvalidDataset(format!(
                "{} feature values for {} rows of {} columns",
                features.len(),
                labels.len(),
                schema.len()
            )));
        }
        if let Some(pos) = features.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidDataset(format!(
                "non-finite value in row {}, column `{}`",
                pos / schema.len(),
                schema[pos % schema.len()]
            )));
        }
        Ok(Self {
            schema,
            features,
            labels,
        })
    }

    pub fn from_rows(schema: Vec<String>, rows: &[Vec<f64>], labels: Vec<ClassLabel>) -> Result<Self> {
        let d = schema.len();
        if let Some(bad) = rows.iter().find(|r| r.len() != d) {
            return Err(Error::DimensionMismatch {
                expected: d,
                got: bad.len(),
            });
        }
        Self::from_flat(schema, rows.concat(), labels)
    }

    /// Empty dataset with the standard four feature columns.
    pub fn empty_standard() -> Self {
        Self {
            schema: standard_schema(),
            features: Vec::new(),
            labels: Vec::new(),
        }
    }

    /// Generic column names `x0, x1, ...`, handy for toy data.
    pub fn with_generic_schema(rows: &[Vec<f64>], labels: Vec<ClassLabel>) -> Result<Self> {
        let d = rows.first().map_or(1, Vec::len);
        Self::from_rows((0..d).map(|j| format!("x{j}")).collect(), rows, labels)
    }

    pub fn schema(&self) -> &[String] {
        &self.schema
    }

    pub fn n_rows(&self) -> usize {
        self.labels.len()
    }

    pub fn n_features(&self) -> usize {
        self.schema.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn row(&self, i: usize) -> &[f64] {
        let d = self.n_features();
        &self.features[i * d..(i + 1) * d]
    }

    pub fn rows(&self) -> impl ExactSizeIterator<Item = &[f64]> + '_ {
        self.features.chunks_exact(self.n_features())
    }

    pub fn features_flat(&self) -> &[f64] {
        &self.features
    }

    pub fn labels(&self) -> &[ClassLabel] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> ClassLabel {
        self.labels[i]
    }

    /// Counts per class in code order.
    pub fn class_counts(&self) -> [usize; 3] {
        let mut counts = [0; 3];
        for l in &self.labels {
            counts[l.index()] += 1;
        }
        counts
    }

    pub fn class_indices(&self, class: ClassLabel) -> Vec<usize> {
        (0..self.n_rows()).filter(|&i| self.labels[i] == class).collect()
    }

    /// Classes with at least one row, in code order.
    pub fn present_classes(&self) -> Vec<ClassLabel> {
        let counts = self.class_counts();
        ClassLabel::ALL.into_iter().filter(|c| counts[c.index()] > 0).collect()
    }

    /// Largest class; ties go to the lowest code.
    pub fn majority_class(&self) -> Option<ClassLabel> {
        let counts = self.class_counts();
        ClassLabel::ALL
            .into_iter()
            .filter(|c| counts[c.index()] > 0)
            .fold(None, |best: Option<ClassLabel>, c| match best {
                Some(b) if counts[b.index()] >= counts[c.index()] => Some(b),
                _ => Some(c),
            })
    }

    /// Rows at `indices`, in the given order.
    pub fn subset(&self, indices: &[usize]) -> Dataset {
        let mut features = Vec::with_capacity(indices.len() * self.n_features());
        let mut labels = Vec::with_capacity(indices.len());
        for &i in indices {
            features.extend_from_slice(self.row(i));
            labels.push(self.labels[i]);
        }
        Dataset {
            schema: self.schema.clone(),
            features,
            labels,
        }
    }

    /// All rows except those in `removed`.
    pub fn without(&self, removed: &[usize]) -> Dataset {
        let mut drop = vec![false; self.n_rows()];
        for &i in removed {
            drop[i] = true;
        }
        let keep: Vec<usize> = (0..self.n_rows()).filter(|&i| !drop[i]).collect();
        self.subset(&keep)
    }

    pub fn push_row(&mut self, row: &[f64], label: ClassLabel) -> Result<()> {
        if row.len() != self.n_features() {
            return Err(Error::DimensionMismatch {
                expected: self.n_features(),
                got: row.len(),
            });
        }
        if row.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidDataset("non-finite feature value".into()));
        }
        self.features.extend_from_slice(row);
        self.labels.push(label);
        Ok(())
    }

    /// Appends every row of `other`; schemas must match.
    pub fn extend(&mut self, other: &Dataset) -> Result<()> {
        if other.schema != self.schema {
            return Err(Error::InvalidDataset("schema mismatch on concatenation".into()));
        }
        self.features.extend_from_slice(&other.features);
        self.labels.extend_from_slice(&other.labels);
        Ok(())
    }

    /// Range checks for the standard layout: age >= 0, gender in {0, 1},
    /// height > 0, weight > 0. Columns missing from the schema are skipped.
    pub fn validate_anthropometric(&self) -> Result<()> {
        let col = |name: &str| self.schema.iter().position(|c| c == name);
        type Check<'a> = (Option<usize>, &'a str, fn(f64) -> bool);
        let checks: [Check; 4] = [
            (col(AGE), "must be >= 0", |v| v >= 0.0),
            (col(GENDER), "must be 0 or 1", |v| v == 0.0 || v == 1.0),
            (col(HEIGHT), "must be > 0", |v| v > 0.0),
            (col(WEIGHT), "must be > 0", |v| v > 0.0),
        ];
        for (i, row) in self.rows().enumerate() {
            for (j, msg, ok) in checks.iter() {
                if let Some(j) = *j {
                    if !ok(row[j]) {
                        return Err(Error::Cell {
                            row: i + 1,
                            column: self.schema[j].clone(),
                            message: format!("value {} {msg}", row[j]),
                        });
                    }
                }
            }
        }
        Ok(())
    }
}

pub fn standard_schema() -> Vec<String> {
    FEATURE_COLUMNS.iter().map(|s| s.to_string()).collect()
}

/// Exact class counts with display percentages.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassDistribution {
    /// Counts in code order.
    pub counts: [usize; 3],
    /// Integer percentages in code order, apportioned by largest remainder so
    /// they sum to exactly 100 (all zero for an empty dataset).
    pub percentages: [u32; 3],
}

impl ClassDistribution {
    pub fn count(&self, class: ClassLabel) -> usize {
        self.counts[class.index()]
    }

    pub fn percent(&self, class: ClassLabel) -> u32 {
        self.percentages[class.index()]
    }

    pub fn total(&self) -> usize {
        self.counts.iter().sum()
    }
}

impl fmt::Display for ClassDistribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (n, c) in ClassLabel::TABLE_ORDER.iter().enumerate() {
            if n > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{}: {} ({}%)", c, self.count(*c), self.percent(*c))?;
        }
        Ok(())
    }
}

pub fn class_distribution(ds: &Dataset) -> ClassDistribution {
    let counts = ds.class_counts();
    let total = ds.n_rows();
    let mut percentages = [0u32; 3];
    if total > 0 {
        let alloc = largest_remainder(100, &counts.map(|c| c as f64 / total as f64));
        for (p, a) in percentages.iter_mut().zip(alloc) {
            *p = a as u32;
        }
    }
    ClassDistribution { counts, percentages }
}

/// Splits `total` into integer parts proportional to `shares` (which must sum
/// to 1). Leftover units go to the largest fractional remainders, ties to the
/// earlier position.
pub fn largest_remainder(total: usize, shares: &[f64]) -> Vec<usize> {
    let exact: Vec<f64> = shares.iter().map(|s| s * total as f64).collect();
    let mut parts: Vec<usize> = exact.iter().map(|e| e.floor() as usize).collect();
    let assigned: usize = parts.iter().sum();
    let mut order: Vec<usize> = (0..shares.len()).collect();
    order.sort_by(|&a, &b| {
        let ra = exact[a] - exact[a].floor();
        let rb = exact[b] - exact[b].floor();
        rb.total_cmp(&ra).then(a.cmp(&b))
    });
    for &i in order.iter().take(total.saturating_sub(assigned)) {
        parts[i] += 1;
    }
    parts
}

fn round_half_up(x: f64) -> usize {
    (x + 0.5).floor().max(0.0) as usize
}

/// Stratified train/test partition.
///
/// Each class sends `round_half_up(count * test_fraction)` rows to the test
/// side, clamped so both sides keep at least one row. If the per-class counts
/// miss the rounded overall test size, the largest class absorbs the
/// difference. Both partitions keep the original row order.
pub fn stratified_split(ds: &Dataset, test_fraction: f64, rng: &mut SeededRng) -> Result<(Dataset, Dataset)> {
    if !(test_fraction > 0.0 && test_fraction < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "test fraction {test_fraction} outside (0, 1)"
        )));
    }
    let counts = ds.class_counts();
    let mut test_counts = [0usize; 3];
    for c in ClassLabel::ALL {
        let n = counts[c.index()];
        match n {
            0 => {}
            1 => {
                return Err(Error::ClassTooSmall {
                    class: c.to_string(),
                    count: 1,
                    needed: 2,
                })
            }
            _ => test_counts[c.index()] = round_half_up(n as f64 * test_fraction).clamp(1, n - 1),
        }
    }
    if let Some(major) = ds.majority_class() {
        let n = counts[major.index()];
        let want = round_half_up(ds.n_rows() as f64 * test_fraction) as i64;
        let have: i64 = test_counts.iter().sum::<usize>() as i64;
        let adjusted = test_counts[major.index()] as i64 + (want - have);
        if n >= 2 {
            test_counts[major.index()] = adjusted.clamp(1, n as i64 - 1) as usize;
        }
    }

    let mut is_test = vec![false; ds.n_rows()];
    for c in ClassLabel::ALL {
        let mut idx = ds.class_indices(c);
        rng.shuffle(&mut idx);
        for &i in idx.iter().take(test_counts[c.index()]) {
            is_test[i] = true;
        }
    }
    let (test_idx, train_idx): (Vec<usize>, Vec<usize>) = (0..ds.n_rows()).partition(|&i| is_test[i]);
    Ok((ds.subset(&train_idx), ds.subset(&test_idx)))
}

/// How the loader treats empty or `NA`/`NaN` cells.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MissingPolicy {
    /// Fail, listing every incomplete row.
    #[default]
    Reject,
    /// Skip incomplete rows.
    DropRows,
}

#[derive(Debug, Clone, Default)]
pub struct LoadOptions {
    /// Canonical column name -> header name in the file, for files whose
    /// headers differ from the standard names.
    pub rename: HashMap<String, String>,
    pub missing: MissingPolicy,
}

/// Feature rows read from a file without a status column.
#[derive(Debug, Clone, PartialEq)]
pub struct UnlabeledTable {
    pub schema: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

pub fn load_dataset(path: impl AsRef<Path>, opts: &LoadOptions) -> Result<Dataset> {
    let table = read_table(path.as_ref(), opts, true)?;
    let labels = table
        .statuses
        .into_iter()
        .map(|s| s.expect("status required"))
        .collect();
    let ds = Dataset::from_flat(standard_schema(), table.rows.concat(), labels)?;
    ds.validate_anthropometric()?;
    Ok(ds)
}

pub fn load_unlabeled(path: impl AsRef<Path>, opts: &LoadOptions) -> Result<UnlabeledTable> {
    let table = read_table(path.as_ref(), opts, false)?;
    Ok(UnlabeledTable {
        schema: standard_schema(),
        rows: table.rows,
    })
}

struct RawTable {
    rows: Vec<Vec<f64>>,
    statuses: Vec<Option<ClassLabel>>,
}

fn is_missing(cell: &str) -> bool {
    let c = cell.trim();
    c.is_empty() || c.eq_ignore_ascii_case("na") || c.eq_ignore_ascii_case("nan")
}

fn read_table(path: &Path, opts: &LoadOptions, need_status: bool) -> Result<RawTable> {
    let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_reader(file);
    let headers: Vec<String> = reader.headers()?.iter().map(|h| h.to_string()).collect();

    let mut seen = HashMap::new();
    for (i, h) in headers.iter().enumerate() {
        if seen.insert(h.to_ascii_lowercase(), i).is_some() {
            return Err(Error::Header(format!("duplicate column `{h}`")));
        }
    }
    let locate = |canonical: &str| -> Result<Option<usize>> {
        let name = opts.rename.get(canonical).map_or(canonical, String::as_str);
        Ok(seen.get(&name.to_ascii_lowercase()).copied())
    };
    let mut feature_cols = Vec::with_capacity(4);
    for name in FEATURE_COLUMNS {
        feature_cols.push(locate(name)?.ok_or_else(|| Error::Header(format!("missing column `{name}`")))?);
    }
    let status_col = locate(STATUS)?;
    if need_status && status_col.is_none() {
        return Err(Error::Header(format!("missing column `{STATUS}`")));
    }

    let mut rows = Vec::new();
    let mut statuses = Vec::new();
    let mut incomplete = Vec::new();
    for (r, record) in reader.records().enumerate() {
        let record = record?;
        let row_no = r + 1;
        let cell = |j: usize| record.get(j).unwrap_or("");
        let wanted = feature_cols.iter().copied().chain(status_col.filter(|_| need_status));
        if wanted.clone().any(|j| is_missing(cell(j))) {
            incomplete.push(row_no);
            continue;
        }
        let mut row = Vec::with_capacity(4);
        for (name, &j) in FEATURE_COLUMNS.iter().zip(&feature_cols) {
            row.push(parse_cell(name, cell(j), row_no)?);
        }
        let status = match status_col {
            Some(j) if need_status => {
                let code = parse_cell(STATUS, cell(j), row_no)?;
                Some(ClassLabel::from_code(code).ok_or_else(|| Error::Cell {
                    row: row_no,
                    column: STATUS.into(),
                    message: format!("{code} is not a status code (0, 0.5, 1)"),
                })?)
            }
            _ => None,
        };
        rows.push(row);
        statuses.push(status);
    }
    if !incomplete.is_empty() && opts.missing == MissingPolicy::Reject {
        let list: Vec<String> = incomplete.iter().map(usize::to_string).collect();
        return Err(Error::InvalidDataset(format!(
            "missing values in row(s) {}",
            list.join(", ")
        )));
    }
    Ok(RawTable { rows, statuses })
}

fn parse_cell(column: &str, raw: &str, row: usize) -> Result<f64> {
    if let Ok(v) = raw.parse::<f64>() {
        if v.is_finite() {
            return Ok(v);
        }
    }
    match column {
        GENDER | STATUS => encode_value(column, raw).map_err(|_| Error::Cell {
            row,
            column: column.to_string(),
            message: format!("unrecognized category `{raw}`"),
        }),
        _ => Err(Error::Cell {
            row,
            column: column.to_string(),
            message: format!("cannot parse `{raw}` as a number"),
        }),
    }
}

/// Writes the dataset as CSV with numeric codes. `f64` values use the
/// shortest representation that parses back to the same bits.
pub fn write_dataset<W: std::io::Write>(ds: &Dataset, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let mut header: Vec<&str> = ds.schema().iter().map(String::as_str).collect();
    header.push(STATUS);
    w.write_record(&header)?;
    for (row, label) in ds.rows().zip(ds.labels()) {
        let mut rec: Vec<String> = row.iter().map(|v| v.to_string()).collect();
        rec.push(label.code().to_string());
        w.write_record(&rec)?;
    }
    w.flush().map_err(|e| Error::io("<csv writer>", e))?;
    Ok(())
}

pub fn write_dataset_file(ds: &Dataset, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let file = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
    write_dataset(ds, std::io::BufWriter::new(file))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    fn write_tmp(contents: &str) -> tempfile::NamedTempFile {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        f.write_all(contents.as_bytes()).unwrap();
        f
    }

    fn ds_with_counts(n: usize, s: usize, t: usize) -> Dataset {
        let mut labels = vec![ClassLabel::Normal; n];
        labels.extend(vec![ClassLabel::Stunted; s]);
        labels.extend(vec![ClassLabel::Stunting; t]);
        let rows: Vec<Vec<f64>> = (0..labels.len()).map(|i| vec![i as f64]).collect();
        Dataset::with_generic_schema(&rows, labels).unwrap()
    }

    #[test]
    fn loads_table_rows() {
        let f = write_tmp("age_months,gender,height_cm,weight_kg,status\n56,0,110.0,22.7,0\n58,1,108.8,17.1,0\n");
        let ds = load_dataset(f.path(), &LoadOptions::default()).unwrap();
        assert_eq!(ds.n_rows(), 2);
        assert_eq!(ds.row(0), &[56.0, 0.0, 110.0, 22.7]);
        assert_eq!(ds.row(1), &[58.0, 1.0, 108.8, 17.1]);
        assert_eq!(ds.labels(), &[ClassLabel::Normal, ClassLabel::Normal]);
    }

    #[test]
    fn loads_category_strings() {
        let f = write_tmp(
            "status,weight_kg,height_cm,gender,age_months\n STUNTED ,9.1,70.2,Female,14\nstunting,10,80,male,30\n",
        );
        let ds = load_dataset(f.path(), &LoadOptions::default()).unwrap();
        assert_eq!(ds.row(0), &[14.0, 1.0, 70.2, 9.1]);
        assert_eq!(ds.labels(), &[ClassLabel::Stunted, ClassLabel::Stunting]);
    }

    #[test]
    fn header_only_is_empty_dataset() {
        let f = write_tmp("age_months,gender,height_cm,weight_kg,status\n");
        let ds = load_dataset(f.path(), &LoadOptions::default()).unwrap();
        assert_eq!(ds.n_rows(), 0);
        assert_eq!(ds.n_features(), 4);
    }

    #[test]
    fn loader_errors() {
        let bad_num = write_tmp("age_months,gender,height_cm,weight_kg,status\n5,0,abc,3,0\n");
        match load_dataset(bad_num.path(), &LoadOptions::default()) {
            Err(Error::Cell { row, column, .. }) => {
                assert_eq!(row, 1);
                assert_eq!(column, HEIGHT);
            }
            other => panic!("{other:?}"),
        }
        let bad_cat = write_tmp("age_months,gender,height_cm,weight_kg,status\n5,0,60,3,tall\n");
        assert!(matches!(
            load_dataset(bad_cat.path(), &LoadOptions::default()),
            Err(Error::Cell { .. })
        ));
        let dup = write_tmp("age_months,gender,height_cm,weight_kg,status,Gender\n");
        assert!(matches!(
            load_dataset(dup.path(), &LoadOptions::default()),
            Err(Error::Header(_))
        ));
        assert!(matches!(
            load_dataset("/nonexistent/x.csv", &LoadOptions::default()),
            Err(Error::Io { .. })
        ));
        let negative = write_tmp("age_months,gender,height_cm,weight_kg,status\n5,0,-60,3,0\n");
        assert!(load_dataset(negative.path(), &LoadOptions::default()).is_err());
    }

    #[test]
    fn missing_values_policy() {
        let f = write_tmp("age_months,gender,height_cm,weight_kg,status\n5,0,60,,0\n6,1,61,6,0\n7,1,NA,6,0\n");
        let err = load_dataset(f.path(), &LoadOptions::default()).unwrap_err();
        assert!(err.to_string().contains("1, 3"), "{err}");
        let opts = LoadOptions {
            missing: MissingPolicy::DropRows,
            ..Default::default()
        };
        let ds = load_dataset(f.path(), &opts).unwrap();
        assert_eq!(ds.n_rows(), 1);
        assert_eq!(ds.row(0)[0], 6.0);
    }

    #[test]
    fn renamed_headers() {
        let f = write_tmp("Age,Sex,Height,Weight,Label\n12,0,75,9,normal\n");
        let mut opts = LoadOptions::default();
        for (a, b) in [
            (AGE, "Age"),
            (GENDER, "Sex"),
            (HEIGHT, "Height"),
            (WEIGHT, "Weight"),
            (STATUS, "Label"),
        ] {
            opts.rename.insert(a.into(), b.into());
        }
        let ds = load_dataset(f.path(), &opts).unwrap();
        assert_eq!(ds.row(0), &[12.0, 0.0, 75.0, 9.0]);
    }

    #[test]
    fn encode_examples() {
        assert_eq!(encode_value(GENDER, "male").unwrap(), 0.0);
        assert_eq!(encode_value(GENDER, "Female").unwrap(), 1.0);
        assert_eq!(encode_value(STATUS, "stunting").unwrap(), 0.5);
        assert_eq!(encode_value(STATUS, "STUNTED").unwrap(), 1.0);
        assert_eq!(encode_value(STATUS, "  normal ").unwrap(), 0.0);
        assert!(encode_value(STATUS, "short").is_err());
        assert!(encode_value(HEIGHT, "male").is_err());
    }

    #[test]
    fn encode_decode_identity() {
        for (col, raw) in [
            (GENDER, "male"),
            (GENDER, "female"),
            (STATUS, "normal"),
            (STATUS, "stunting"),
            (STATUS, "stunted"),
        ] {
            let code = encode_value(col, raw).unwrap();
            assert_eq!(decode_value(col, code), Some(raw));
        }
    }

    #[test]
    fn distribution_examples() {
        let d = class_distribution(&ds_with_counts(645, 89, 18));
        assert_eq!(d.count(ClassLabel::Normal), 645);
        assert_eq!(
            [
                d.percent(ClassLabel::Normal),
                d.percent(ClassLabel::Stunted),
                d.percent(ClassLabel::Stunting)
            ],
            [86, 12, 2]
        );
        let d = class_distribution(&ds_with_counts(645, 641, 623));
        assert_eq!(
            [
                d.percent(ClassLabel::Normal),
                d.percent(ClassLabel::Stunted),
                d.percent(ClassLabel::Stunting)
            ],
            [34, 33, 33]
        );
        let d = class_distribution(&ds_with_counts(1, 0, 0));
        assert_eq!(d.counts, [1, 0, 0]);
        assert_eq!(d.percentages, [100, 0, 0]);
        let d = class_distribution(&ds_with_counts(0, 0, 0));
        assert_eq!(d.percentages, [0, 0, 0]);
    }

    #[test]
    fn split_counts() {
        let ds = ds_with_counts(645, 89, 18);
        let (train, test) = stratified_split(&ds, 0.2, &mut SeededRng::new(3)).unwrap();
        let tc = test.class_counts();
        assert!((128..=130).contains(&tc[ClassLabel::Normal.index()]));
        assert!((17..=19).contains(&tc[ClassLabel::Stunted.index()]));
        assert!((3..=5).contains(&tc[ClassLabel::Stunting.index()]));
        assert_eq!(train.n_rows() + test.n_rows(), 752);

        let ten = ds_with_counts(10, 0, 0);
        let (train, test) = stratified_split(&ten, 0.2, &mut SeededRng::new(0)).unwrap();
        assert_eq!((train.n_rows(), test.n_rows()), (8, 2));
    }

    #[test]
    fn split_is_deterministic_and_rejects_singletons() {
        let ds = ds_with_counts(40, 10, 5);
        let a = stratified_split(&ds, 0.25, &mut SeededRng::new(11)).unwrap();
        let b = stratified_split(&ds, 0.25, &mut SeededRng::new(11)).unwrap();
        assert_eq!(a, b);
        let single = ds_with_counts(10, 1, 0);
        assert!(matches!(
            stratified_split(&single, 0.2, &mut SeededRng::new(0)),
            Err(Error::ClassTooSmall { .. })
        ));
        assert!(stratified_split(&ds, 1.0, &mut SeededRng::new(0)).is_err());
    }

    #[test]
    fn write_then_load_is_exact() {
        let rows = vec![vec![12.0, 1.0, 0.1 + 0.2, 9.123456789012345], vec![0.0, 0.0, 49.9, 3.3]];
        let ds = Dataset::from_rows(
            standard_schema(),
            &rows,
            vec![ClassLabel::Stunting, ClassLabel::Stunted],
        )
        .unwrap();
        let f = tempfile::NamedTempFile::new().unwrap();
        write_dataset_file(&ds, f.path()).unwrap();
        let back = load_dataset(f.path(), &LoadOptions::default()).unwrap();
        assert_eq!(back, ds);
    }

    #[test]
    fn majority_tie_goes_to_lowest_code() {
        let ds = ds_with_counts(0, 3, 3);
        assert_eq!(ds.majority_class(), Some(ClassLabel::Stunting));
        assert_eq!(ds_with_counts(0, 0, 0).majority_class(), None);
    }

    #[test]
    fn largest_remainder_matches_cohort_sizes() {
        assert_eq!(largest_remainder(752, &[0.86, 0.12, 0.02]), vec![647, 90, 15]);
    }
}
