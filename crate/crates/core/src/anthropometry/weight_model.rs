//! Synthetic weight model, version 1.
//!
//! `weight_kg = INTERCEPT + PER_CM * height_cm + PER_MONTH * age_months + N(0, NOISE_SD)`,
//! floored at `MIN_KG`. Roughly 3 kg at birth length and 18 kg at 110 cm /
//! 60 months. Weight never feeds the status label. Changing any constant
//! changes every generated cohort, so bump `VERSION` with it.

pub const VERSION: u32 = 1;
pub const INTERCEPT: f64 = -8.0;
pub const PER_CM: f64 = 0.22;
pub const PER_MONTH: f64 = 0.03;
pub const NOISE_SD: f64 = 0.8;
pub const MIN_KG: f64 = 1.5;

pub fn expected_weight(height_cm: f64, age_months: f64) -> f64 {
    INTERCEPT + PER_CM * height_cm + PER_MONTH * age_months
}
