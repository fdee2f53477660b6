//! Tube-geometry verification: the pullback identity E^* sqrt(rho) = |xi|,
//! the anti-diagonal conoid identity r^2(zeta, conj zeta) = -4 rho^2, and
//! invariance of the tube function along real-time geodesic orbits.

use num_complex::Complex64;

use grauert_core::geometry::{
    exp_imaginary, geodesic_flow_complex, grauert_rho, r2_complex, ComplexPoint, ModelKind,
    ModelManifold, PhasePoint,
};

use crate::config::{ConfigError, ExperimentConfig};
use crate::report::{Metric, ReportRow};

use super::Timer;

fn tube_points(model: &ModelManifold, s: f64) -> Vec<ComplexPoint> {
    match model.kind {
        ModelKind::Circle => (0..8)
            .map(|i| {
                let x = model.scale * i as f64 / 8.0;
                exp_imaginary(model, &[x], &[s]).unwrap()
            })
            .collect(),
        ModelKind::FlatTorus => (0..8)
            .map(|i| {
                let x = [
                    model.scale * i as f64 / 8.0,
                    model.scale * (i as f64 * 0.37).fract(),
                ];
                let ang = std::f64::consts::TAU * i as f64 / 8.0;
                exp_imaginary(model, &x, &[s * ang.cos(), s * ang.sin()]).unwrap()
            })
            .collect(),
        ModelKind::Sphere => (0..8)
            .map(|i| {
                let th = std::f64::consts::PI * (i as f64 + 0.5) / 8.0;
                let x = [th.sin(), 0.0, th.cos()];
                let v = [0.0, 1.0, 0.0];
                exp_imaginary(model, &x, &[s * v[0], s * v[1], s * v[2]]).unwrap()
            })
            .collect(),
        ModelKind::Hyperbolic => Vec::new(),
    }
}

pub fn run(cfg: &ExperimentConfig) -> Result<Vec<ReportRow>, ConfigError> {
    let model = cfg.model;
    if model.kind == ModelKind::Hyperbolic {
        return Err(ConfigError(
            "geometry-check requires a model with a tube function (circle, flat-torus, sphere)"
                .into(),
        ));
    }
    let name = cfg.experiment.as_str();
    let mname = model.kind.as_str();
    let depths = match (
        &cfg.params.rho_lo,
        &cfg.params.rho_hi,
        &cfg.params.rho_count,
    ) {
        (Some(lo), Some(hi), Some(n)) => super::linear_grid(*lo, *hi, *n),
        _ => vec![0.05, 0.15, 0.3, 0.45],
    };
    let tol_pullback = cfg.tol("pullback", 1e-10);
    let tol_conoid = cfg.tol("conoid", 1e-10);
    let tol_flow = cfg.tol("flow", 1e-8);

    let mut rows = Vec::new();
    let mut timer = Timer::start();
    for &s in &depths {
        // pullback identity
        let mut worst = 0.0f64;
        for p in tube_points(&model, s) {
            let rho = grauert_rho(&model, &p).map_err(|e| ConfigError(e.to_string()))?;
            worst = worst.max((rho - s).abs());
        }
        rows.push(ReportRow::checked(
            name,
            mname,
            model.dim,
            "pullback-deviation",
            s,
            worst,
            0.0,
            tol_pullback,
            Metric::Abs,
            timer.lap(),
        ));
        // anti-diagonal conoid identity
        let mut worst = 0.0f64;
        for p in tube_points(&model, s) {
            let r2 = r2_complex(&model, &p, &p.conj())
                .map_err(|e| ConfigError(e.to_string()))?
                .value;
            let rho = grauert_rho(&model, &p).map_err(|e| ConfigError(e.to_string()))?;
            worst = worst.max((r2 + 4.0 * rho * rho).norm());
        }
        rows.push(ReportRow::checked(
            name,
            mname,
            model.dim,
            "conoid-deviation",
            s,
            worst,
            0.0,
            tol_conoid,
            Metric::Abs,
            timer.lap(),
        ));
        // flow invariance of the tube function along a real-time orbit
        let worst = flow_invariance_deviation(&model, s);
        rows.push(ReportRow::checked(
            name,
            mname,
            model.dim,
            "flow-invariance-deviation",
            s,
            worst,
            0.0,
            tol_flow,
            Metric::Abs,
            timer.lap(),
        ));
    }
    Ok(rows)
}

fn flow_invariance_deviation(model: &ModelManifold, s: f64) -> f64 {
    let c = |re: f64, im: f64| Complex64::new(re, im);
    let p = match model.kind {
        ModelKind::Circle | ModelKind::FlatTorus => {
            let mut pos = vec![c(0.2, s); 1];
            let mut mom = vec![c(1.0, 0.0); 1];
            if model.dim == 2 {
                pos = vec![c(0.2, s), c(0.5, 0.0)];
                mom = vec![c(0.6, 0.0), c(0.8, 0.0)];
            }
            PhasePoint::new(pos, mom)
        }
        ModelKind::Sphere => {
            // complexified unit-speed orbit through E(x, s v)
            let x = [1.0, 0.0, 0.0];
            let v = [0.0, 1.0, 0.0];
            let pos = (0..3)
                .map(|i| c(s.cosh() * x[i], s.sinh() * v[i]))
                .collect();
            let mom = (0..3)
                .map(|i| c(s.cosh() * v[i], -s.sinh() * x[i]))
                .collect();
            PhasePoint::new(pos, mom)
        }
        ModelKind::Hyperbolic => unreachable!(),
    };
    let rho0 = grauert_rho(
        model,
        &ComplexPoint::from_coords(*model, p.position.clone()).unwrap(),
    )
    .unwrap();
    let mut worst = 0.0f64;
    for i in 1..=6 {
        let t = 0.7 * i as f64;
        let q = geodesic_flow_complex(model, &p, c(t, 0.0));
        if let Ok(pt) = ComplexPoint::from_coords(*model, q.position) {
            if let Ok(rho) = grauert_rho(model, &pt) {
                worst = worst.max((rho - rho0).abs());
                continue;
            }
        }
        worst = f64::INFINITY;
    }
    worst
}
