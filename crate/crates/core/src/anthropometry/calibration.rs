use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Ordinary least-squares line `measured = slope * reference + intercept`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CalibrationFit {
    /// Sensitivity of the sensor.
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
    /// Standard error of the slope (0 for two points or a perfect fit).
    pub slope_std_err: f64,
    pub n: usize,
}

pub fn fit_linear(pairs: &[(f64, f64)]) -> Result<CalibrationFit> {
    if pairs.len() < 2 {
        return Err(Error::DegenerateFit(format!(
            "{} pair(s); need at least 2",
            pairs.len()
        )));
    }
    if pairs.iter().any(|(x, y)| !x.is_finite() || !y.is_finite()) {
        return Err(Error::DegenerateFit("non-finite value".into()));
    }
    let n = pairs.len() as f64;
    let mean_x = pairs.iter().map(|p| p.0).sum::<f64>() / n;
    let mean_y = pairs.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pairs.iter().map(|p| (p.0 - mean_x).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::DegenerateFit("all reference values are identical".into()));
    }
    let sxy: f64 = pairs.iter().map(|p| (p.0 - mean_x) * (p.1 - mean_y)).sum();
    let slope = sxy / sxx;
    let intercept = mean_y - slope * mean_x;
    let ss_res: f64 = pairs.iter().map(|p| (p.1 - slope * p.0 - intercept).powi(2)).sum();
    let ss_tot: f64 = pairs.iter().map(|p| (p.1 - mean_y).powi(2)).sum();
    let r_squared = if ss_tot == 0.0 {
        1.0
    } else {
        (1.0 - ss_res / ss_tot).clamp(0.0, 1.0)
    };
    let slope_std_err = if pairs.len() > 2 {
        (ss_res / (n - 2.0) / sxx).sqrt()
    } else {
        0.0
    };
    Ok(CalibrationFit {
        slope,
        intercept,
        r_squared,
        slope_std_err,
        n: pairs.len(),
    })
}

/// Reads `reference,measured` pairs.
pub fn load_calibration_pairs(path: impl AsRef<Path>) -> Result<Vec<(f64, f64)>> {
    let path = path.as_ref();
    let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_reader(file);
    let headers: Vec<String> = reader.headers()?.iter().map(|h| h.to_ascii_lowercase()).collect();
    let col = |name: &str| {
        headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| Error::Header(format!("missing column `{name}`")))
    };
    let (ir, im) = (col("reference")?, col("measured")?);
    let mut pairs = Vec::new();
    for (r, rec) in reader.records().enumerate() {
        let rec = rec?;
        let num = |j: usize, name: &str| -> Result<f64> {
            rec.get(j).unwrap_or("").parse::<f64>().map_err(|_| Error::Cell {
                row: r + 1,
                column: name.into(),
                message: "not a number".into(),
            })
        };
        pairs.push((num(ir, "reference")?, num(im, "measured")?));
    }
    Ok(pairs)
}

/// Two facing ultrasonic sensors `sensor_gap` apart, each reporting its
/// distance to the object between them.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UltrasonicReading {
    pub sensor_gap: f64,
    pub d1: f64,
    pub d2: f64,
}

/// Object length `sensor_gap - d1 - d2`.
pub fn length_from_ultrasonic(r: UltrasonicReading) -> Result<f64> {
    if r.sensor_gap.is_nan() || r.sensor_gap <= 0.0 {
        return Err(Error::InvalidReading("sensor gap must be positive".into()));
    }
    if !(r.d1 >= 0.0 && r.d2 >= 0.0) {
        return Err(Error::InvalidReading("distances must be non-negative".into()));
    }
    if r.d1 + r.d2 > r.sensor_gap {
        return Err(Error::InvalidReading(format!(
            "d1 + d2 = {} exceeds the sensor gap {}",
            r.d1 + r.d2,
            r.sensor_gap
        )));
    }
    Ok(r.sensor_gap - r.d1 - r.d2)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_line() {
        let pairs: Vec<(f64, f64)> = (0..10).map(|i| (i as f64, i as f64)).collect();
        let fit = fit_linear(&pairs).unwrap();
        assert_eq!(fit.slope, 1.0);
        assert_eq!(fit.intercept, 0.0);
        assert_eq!(fit.r_squared, 1.0);
    }

    #[test]
    fn known_sensitivity() {
        let pairs: Vec<(f64, f64)> = (1..=20).map(|i| (i as f64 * 0.5, 0.9919 * i as f64 * 0.5)).collect();
        let fit = fit_linear(&pairs).unwrap();
        assert!((fit.slope - 0.9919).abs() < 1e-12);
        assert_eq!(format!("{:.4}", fit.slope), "0.9919");
    }

    #[test]
    fn degenerate_inputs() {
        assert!(fit_linear(&[(1.0, 2.0)]).is_err());
        assert!(fit_linear(&[(1.0, 2.0), (1.0, 3.0), (1.0, 5.0)]).is_err());
    }

    #[test]
    fn ultrasonic_examples() {
        let r = |g, a, b| UltrasonicReading {
            sensor_gap: g,
            d1: a,
            d2: b,
        };
        assert_eq!(length_from_ultrasonic(r(180.0, 30.0, 40.0)).unwrap(), 110.0);
        assert_eq!(length_from_ultrasonic(r(180.0, 0.0, 0.0)).unwrap(), 180.0);
        assert!(length_from_ultrasonic(r(180.0, 100.0, 100.0)).is_err());
        assert!(length_from_ultrasonic(r(0.0, 0.0, 0.0)).is_err());
        assert!(length_from_ultrasonic(r(10.0, -1.0, 0.0)).is_err());
    }
}
