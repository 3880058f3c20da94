//! Height-for-age labeling, sensor measurement helpers and synthetic cohorts.

mod calibration;
mod cohort;
mod reference;
pub mod weight_model;

pub use calibration::{fit_linear, length_from_ultrasonic, load_calibration_pairs, CalibrationFit, UltrasonicReading};
pub use cohort::{synth_cohort, Proportions};
pub use reference::{haz_status, status_for_z, GrowthReference, ReferenceEntry};
