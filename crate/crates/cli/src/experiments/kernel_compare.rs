//! Kernel cross-checks: flat quadrature vs closed form, subordination
//! identities, and the sphere closed-form vs spectral-sum comparison after
//! one-point calibration.

use num_complex::Complex64;

use grauert_core::kernels::{
    calibrate_sphere_constant, heat_flat, poisson_flat, poisson_flat_complex,
    poisson_flat_complex_closed, poisson_sphere_closed_with, poisson_sphere_spectral, subordinate,
};

use crate::config::{ConfigError, ExperimentConfig};
use crate::report::{Metric, ReportRow};

use super::Timer;

pub fn run(cfg: &ExperimentConfig) -> Result<Vec<ReportRow>, ConfigError> {
    let name = cfg.experiment.as_str();
    let tol_flat = cfg.tol("flat", 1e-6);
    let tol_sub = cfg.tol("subordination", 1e-8);
    let tol_sphere = cfg.tol("sphere", 1e-6);

    let mut rows = Vec::new();
    let mut timer = Timer::start();

    // flat n = 1: quadrature against the continued closed form
    for (i, (t, tau, z, y)) in [
        (0.0, 1.0, Complex64::new(0.4, 0.0), 0.0),
        (0.0, 1.0, Complex64::new(0.0, 0.3), 0.0),
        (0.35, 0.9, Complex64::new(0.7, -0.42), 0.1),
    ]
    .into_iter()
    .enumerate()
    {
        let row = match poisson_flat_complex(t, tau, z, y) {
            Ok(q) => {
                let c = poisson_flat_complex_closed(t, tau, z, y);
                let rel = (q - c).norm() / c.norm();
                ReportRow::checked(
                    name,
                    "flat",
                    1,
                    "flat-quadrature-rel",
                    i as f64,
                    rel,
                    0.0,
                    tol_flat,
                    Metric::Abs,
                    timer.lap(),
                )
            }
            Err(_) => ReportRow::flagged(
                name,
                "flat",
                1,
                "flat-quadrature-rel",
                i as f64,
                timer.lap(),
            ),
        };
        rows.push(row);
    }

    // subordination scalar identity over a gamma grid
    for gamma in super::geometric_grid(0.1, 10.0, 7) {
        let row = match subordinate(|u| (-u * gamma * gamma).exp(), 1.0, 1e-11) {
            Ok(v) => {
                let rel = (v - (-gamma).exp()).abs() / (-gamma).exp();
                ReportRow::checked(
                    name,
                    "flat",
                    1,
                    "subordination-scalar-rel",
                    gamma,
                    rel,
                    0.0,
                    tol_sub,
                    Metric::Abs,
                    timer.lap(),
                )
            }
            Err(_) => ReportRow::flagged(
                name,
                "flat",
                1,
                "subordination-scalar-rel",
                gamma,
                timer.lap(),
            ),
        };
        rows.push(row);
    }

    // subordination of the flat heat kernel reproduces the Poisson kernel
    for (tau, d) in [(0.3, 0.0), (1.0, 1.0), (2.5, 0.4)] {
        let row = match subordinate(|u| heat_flat(1, u, &[0.0], &[d]), tau, 1e-11) {
            Ok(v) => {
                let p = poisson_flat(1, tau, &[0.0], &[d]).unwrap();
                ReportRow::checked(
                    name,
                    "flat",
                    1,
                    "subordination-heat-rel",
                    tau + d,
                    (v - p).abs() / p,
                    0.0,
                    tol_sub,
                    Metric::Abs,
                    timer.lap(),
                )
            }
            Err(_) => ReportRow::flagged(
                name,
                "flat",
                1,
                "subordination-heat-rel",
                tau + d,
                timer.lap(),
            ),
        };
        rows.push(row);
    }

    // sphere closed form vs spectral sum after one-point calibration
    let cal = calibrate_sphere_constant(2, 0.5, 1.2).map_err(|e| ConfigError(e.to_string()))?;
    let taus = match (cfg.params.tau_lo, cfg.params.tau_hi, cfg.params.tau_count) {
        (Some(lo), Some(hi), Some(n)) => super::linear_grid(lo, hi, n),
        _ => super::linear_grid(0.2, 1.0, 5),
    };
    let rs = match (cfg.params.r_lo, cfg.params.r_hi, cfg.params.r_count) {
        (Some(lo), Some(hi), Some(n)) => super::linear_grid(lo, hi, n),
        _ => super::linear_grid(0.2, std::f64::consts::PI - 0.2, 7),
    };
    for &tau in &taus {
        for &r in &rs {
            let l_trunc = ((60.0 / tau).ceil() as usize).max(64);
            let row = match (
                poisson_sphere_closed_with(
                    cal,
                    2,
                    Complex64::new(tau, 0.0),
                    Complex64::new(r, 0.0),
                ),
                poisson_sphere_spectral(2, tau, Complex64::new(r.cos(), 0.0), l_trunc, 1e-12),
            ) {
                (Ok(closed), Ok(spectral)) => {
                    let rel = (closed - spectral).norm() / spectral.norm();
                    ReportRow::checked(
                        name,
                        "sphere",
                        2,
                        &format!("sphere-closed-vs-spectral-rel[tau={tau:.3}]"),
                        r,
                        rel,
                        0.0,
                        tol_sphere,
                        Metric::Abs,
                        timer.lap(),
                    )
                }
                _ => ReportRow::flagged(
                    name,
                    "sphere",
                    2,
                    &format!("sphere-closed-vs-spectral-rel[tau={tau:.3}]"),
                    r,
                    timer.lap(),
                ),
            };
            rows.push(row);
        }
    }
    Ok(rows)
}
