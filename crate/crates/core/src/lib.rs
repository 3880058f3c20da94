//! Imbalanced-classification toolkit for child growth screening.
//!
//! The crate covers the whole screening workflow on tabular anthropometric
//! records (age, gender, height, weight):
//!
//! * [`data`]: the [`Dataset`] type, CSV I/O, category encoding and
//!   stratified splitting.
//! * [`neighbors`]: exact brute-force k-nearest-neighbor search.
//! * [`resampling`]: SMOTE, ENN, Tomek links, SMOTE-Tomek, the 3-NN cleaned
//!   Radius-SMOTE and Edited Radius-SMOTE.
//! * [`ensemble`]: CART trees, random forest, bagging, SAMME AdaBoost and
//!   hard voting.
//! * [`evaluation`]: confusion matrices, per-class precision/recall/F1 and the
//!   experiment grid report.
//! * [`anthropometry`]: height-for-age z-score labeling, ultrasonic length,
//!   linear sensor calibration and a synthetic cohort generator.
//!
//! Features are used in their natural units (months, cm, kg, 0/1); nothing is
//! standardized, so every distance mixes units.

pub mod anthropometry;
pub mod data;
pub mod ensemble;
pub mod error;
pub mod evaluation;
pub mod neighbors;
pub mod pipeline;
pub mod resampling;
pub mod rng;

pub use data::{ClassDistribution, ClassLabel, Dataset};
pub use error::{Error, Result};
pub use rng::SeededRng;
