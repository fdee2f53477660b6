//! The seven experiment drivers. Each produces report rows; numerical
//! failures become flagged rows, configuration gaps are errors.

use std::time::Instant;

use crate::config::{ConfigError, Experiment, ExperimentConfig};
use crate::report::ReportRow;

pub mod decay;
pub mod geometry_check;
pub mod hadamard;
pub mod kernel_compare;
pub mod siciak;
pub mod weyl;
pub mod zeros;

pub fn run(cfg: &ExperimentConfig) -> Result<Vec<ReportRow>, ConfigError> {
    let mut rows = match cfg.experiment {
        Experiment::GeometryCheck => geometry_check::run(cfg)?,
        Experiment::Weyl => weyl::run(cfg)?,
        Experiment::Siciak => siciak::run(cfg)?,
        Experiment::KernelCompare => kernel_compare::run(cfg)?,
        Experiment::Hadamard => hadamard::run(cfg)?,
        Experiment::Zeros => zeros::run(cfg)?,
        Experiment::Decay => decay::run(cfg)?,
    };
    crate::report::sort_rows(&mut rows);
    Ok(rows)
}

/// Millisecond stopwatch for per-row runtimes.
pub struct Timer(Instant);

impl Timer {
    pub fn start() -> Self {
        Timer(Instant::now())
    }

    pub fn lap(&mut self) -> u128 {
        let t = self.0.elapsed().as_millis();
        self.0 = Instant::now();
        t
    }
}

/// Geometric grid of `count` points between `lo` and `hi` inclusive.
pub fn geometric_grid(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    if count <= 1 {
        return vec![lo];
    }
    (0..count)
        .map(|i| lo * (hi / lo).powf(i as f64 / (count - 1) as f64))
        .collect()
}

/// Linear grid of `count` points between `lo` and `hi` inclusive.
pub fn linear_grid(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    if count <= 1 {
        return vec![lo];
    }
    (0..count)
        .map(|i| lo + (hi - lo) * i as f64 / (count - 1) as f64)
        .collect()
}
