use std::path::PathBuf;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
    #[error("row {row}, column `{column}`: {message}")]
    Cell {
        row: usize,
        column: String,
        message: String,
    },
    #[error("header: {0}")]
    Header(String),
    #[error("unrecognized {column} value `{raw}`")]
    UnknownCategory { column: String, raw: String },
    #[error("invalid dataset: {0}")]
    InvalidDataset(String),
    #[error("dimension mismatch: expected {expected} features, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("k = {k} exceeds the {available} eligible rows")]
    TooFewRows { k: usize, available: usize },
    #[error("class {class} has {count} member(s); {needed} required")]
    ClassTooSmall { class: String, count: usize, needed: usize },
    #[error("dataset contains a single class")]
    SingleClass,
    #[error("target {target} for class {class} is below its current count {current}")]
    TargetBelowCount {
        class: String,
        target: usize,
        current: usize,
    },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("all boosting rounds were discarded")]
    AllRoundsDiscarded,
    #[error("model class sets differ")]
    ClassSetMismatch,
    #[error("label length mismatch: {0} true vs {1} predicted")]
    LengthMismatch(usize, usize),
    #[error("no growth reference entry for age {age} months, sex {sex}")]
    MissingReference { age: f64, sex: u8 },
    #[error("invalid reading: {0}")]
    InvalidReading(String),
    #[error("degenerate calibration input: {0}")]
    DegenerateFit(String),
    #[error("model format: {0}")]
    ModelFormat(String),
    #[error("report format: {0}")]
    ReportFormat(String),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
