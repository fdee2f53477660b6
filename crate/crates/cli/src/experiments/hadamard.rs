//! Transport-recursion verification: flat termination, the S^2 transport
//! identity residual for U_1, the conoid normalization of the sphere kernel
//! against U_0, and the convergence-radius truncation rule.

use num_complex::Complex64;

use grauert_core::kernels::{
    calibrate_sphere_constant, hadamard_coeffs, hadamard_u0, poisson_sphere_closed_with,
    rofc_truncation, ROFC_DEFAULT_K,
};
use grauert_core::ModelManifold;

use crate::config::{ConfigError, ExperimentConfig};
use crate::report::{Metric, ReportRow};

use super::Timer;

pub fn run(cfg: &ExperimentConfig) -> Result<Vec<ReportRow>, ConfigError> {
    let name = cfg.experiment.as_str();
    let tol_resid = cfg.tol("transport-residual", 1e-6);
    let tol_conoid = cfg.tol("conoid-normalization", 0.02);
    let j_max = cfg.params.j_max.unwrap_or(2);

    let mut rows = Vec::new();
    let mut timer = Timer::start();

    // flat termination is exact
    let flat = ModelManifold::flat_torus(2).map_err(|e| ConfigError(e.to_string()))?;
    let grid: Vec<f64> = (0..=40).map(|i| 0.01 * i as f64).collect();
    let series = hadamard_coeffs(&flat, &grid, j_max).map_err(|e| ConfigError(e.to_string()))?;
    let worst = series.coefficients[1..]
        .iter()
        .flat_map(|row| row.iter().map(|v| v.abs()))
        .fold(0.0f64, f64::max);
    rows.push(ReportRow::checked(
        name,
        "flat-torus",
        2,
        "flat-termination",
        j_max as f64,
        worst,
        0.0,
        0.0,
        Metric::Abs,
        timer.lap(),
    ));

    // S^2 transport identity residual for U_0, U_1 by finite differences
    let sphere = ModelManifold::sphere(2).map_err(|e| ConfigError(e.to_string()))?;
    let rs = match (cfg.params.r_lo, cfg.params.r_hi, cfg.params.r_count) {
        (Some(lo), Some(hi), Some(n)) => super::linear_grid(lo, hi, n),
        _ => super::linear_grid(0.1, 2.0, 8),
    };
    let h = 1e-4;
    for &r in &rs {
        let pts = [r - 2.0 * h, r - h, r, r + h, r + 2.0 * h];
        let row = match hadamard_coeffs(&sphere, &pts, 1) {
            Ok(s) => {
                let u0 = &s.coefficients[0];
                let u1 = &s.coefficients[1];
                let du1 = (u1[0] - 8.0 * u1[1] + 8.0 * u1[3] - u1[4]) / (12.0 * h);
                let du0 = (u0[0] - 8.0 * u0[1] + 8.0 * u0[3] - u0[4]) / (12.0 * h);
                let d2u0 =
                    (-u0[0] + 16.0 * u0[1] - 30.0 * u0[2] + 16.0 * u0[3] - u0[4]) / (12.0 * h * h);
                let lap_u0 = -(d2u0 + du0 / r.tan());
                let g1 = -lap_u0 / 2.0;
                let resid =
                    (r * du1 + (1.0 + 0.5 * r * (1.0 / r.tan() - 1.0 / r)) * u1[2] - g1).abs();
                ReportRow::checked(
                    name,
                    "sphere",
                    2,
                    "transport-residual",
                    r,
                    resid,
                    0.0,
                    tol_resid,
                    Metric::Abs,
                    timer.lap(),
                )
            }
            Err(_) => ReportRow::flagged(name, "sphere", 2, "transport-residual", r, timer.lap()),
        };
        rows.push(row);
    }

    // conoid normalization: lim |U (w^2+r^2)^{3/2}| / (r / 2 pi) = U_0(r)
    let cal = calibrate_sphere_constant(2, 0.5, 1.2).map_err(|e| ConfigError(e.to_string()))?;
    let eta = 1e-4;
    for r in [0.5, 1.0, 1.8, 2.5] {
        let w = Complex64::new(eta, r);
        let row = match poisson_sphere_closed_with(cal, 2, w, Complex64::new(r, 0.0)) {
            Ok(u) => {
                let gamma = w * w + r * r;
                let measured = (u * gamma.powf(1.5)).norm() / (r / std::f64::consts::TAU);
                let u0 = hadamard_u0(&sphere, r).unwrap();
                ReportRow::checked(
                    name,
                    "sphere",
                    2,
                    "conoid-normalization",
                    r,
                    measured / u0,
                    1.0,
                    tol_conoid,
                    Metric::Abs,
                    timer.lap(),
                )
            }
            Err(_) => ReportRow::flagged(name, "sphere", 2, "conoid-normalization", r, timer.lap()),
        };
        rows.push(row);
    }

    // truncation rule: cap at the conoid, zero outside, monotone in K
    let cap = rofc_truncation(2, 0.0, 0.5, 3.0, ROFC_DEFAULT_K);
    rows.push(ReportRow::checked(
        name,
        "sphere",
        2,
        "rofc-cap-at-conoid",
        0.0,
        cap.j as f64,
        grauert_core::kernels::TRUNCATION_J_CAP as f64,
        0.0,
        Metric::Abs,
        timer.lap(),
    ));
    let out = rofc_truncation(2, 100.0, 0.5, 3.0, ROFC_DEFAULT_K);
    rows.push(ReportRow::checked(
        name,
        "sphere",
        2,
        "rofc-outside-radius",
        100.0,
        out.j as f64,
        0.0,
        0.0,
        Metric::Abs,
        timer.lap(),
    ));
    let j1 = rofc_truncation(2, 0.01, 0.5, 3.0, ROFC_DEFAULT_K).j as f64;
    let j2 = rofc_truncation(2, 0.01, 0.5, 3.0, 2.0 * ROFC_DEFAULT_K).j as f64;
    rows.push(ReportRow::checked(
        name,
        "sphere",
        2,
        "rofc-monotone-in-k",
        0.01,
        (j2 - j1).max(0.0),
        0.0,
        0.0,
        Metric::Abs,
        timer.lap(),
    ));
    Ok(rows)
}
