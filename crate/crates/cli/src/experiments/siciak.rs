//! Extremal-function experiment: compares (1/lambda) log Pi against
//! 2 sqrt(rho) over a tube-depth grid, and verifies the extremal identity
//! (random tuples bounded by Pi, the coherent state attaining it).

use grauert_core::eigenbasis::{enumerate_spectrum, EigenbasisSpec};
use grauert_core::geometry::{exp_imaginary, ModelKind};
use grauert_core::projector::{
    coherent_state, log_pi_complex, pi_complex, siciak_bruteforce, synthesize, SpectralWindow,
};

use crate::config::{ConfigError, ExperimentConfig};
use crate::report::{Metric, ReportRow};

use super::Timer;

pub fn run(cfg: &ExperimentConfig) -> Result<Vec<ReportRow>, ConfigError> {
    let model = cfg.model;
    if model.kind != ModelKind::Circle {
        return Err(ConfigError(
            "siciak runs on the circle model (log-domain safe range)".into(),
        ));
    }
    let name = cfg.experiment.as_str();
    let mname = model.kind.as_str();
    let lambda = cfg
        .params
        .lambda
        .ok_or_else(|| ConfigError("siciak requires params.lambda".into()))?;
    let rho_lo = cfg.params.rho_lo.unwrap_or(0.1);
    let rho_hi = cfg.params.rho_hi.unwrap_or(0.5);
    let count = cfg.params.rho_count.unwrap_or(9);
    let n_samples = cfg.params.n_samples.unwrap_or(2000);
    // the remainder bound of the two-sided log asymptotics
    let bound = cfg.tol("log-asymptote", 10.0 * lambda.ln() / lambda);
    let tol_extremal = cfg.tol("extremal", 1e-10);

    let mut timer = Timer::start();
    let basis = enumerate_spectrum(&EigenbasisSpec::new(model, lambda))
        .map_err(|e| ConfigError(e.to_string()))?;
    let window = SpectralWindow::long(lambda).map_err(|e| ConfigError(e.to_string()))?;

    let mut rows = Vec::new();
    for rho in super::linear_grid(rho_lo, rho_hi, count) {
        let zeta = exp_imaginary(&model, &[0.9], &[rho]).map_err(|e| ConfigError(e.to_string()))?;
        match log_pi_complex(&basis, &window, &zeta) {
            Ok(lp) => {
                rows.push(ReportRow::checked(
                    name,
                    mname,
                    model.dim,
                    "log-pi-over-lambda",
                    rho,
                    lp / lambda,
                    2.0 * rho,
                    bound,
                    Metric::Abs,
                    timer.lap(),
                ));
            }
            Err(_) => rows.push(ReportRow::flagged(
                name,
                mname,
                model.dim,
                "log-pi-over-lambda",
                rho,
                timer.lap(),
            )),
        }
    }

    // extremal identity at a moderate window (plain-arithmetic range)
    let ext_lambda = lambda.min(60.0);
    let ext_basis = enumerate_spectrum(&EigenbasisSpec::new(model, ext_lambda))
        .map_err(|e| ConfigError(e.to_string()))?;
    let ext_window = SpectralWindow::long(ext_lambda).map_err(|e| ConfigError(e.to_string()))?;
    for (i, rho) in [0.08, 0.2].into_iter().enumerate() {
        let zeta = exp_imaginary(&model, &[0.3 + i as f64], &[rho])
            .map_err(|e| ConfigError(e.to_string()))?;
        let pi = pi_complex(&ext_basis, &ext_window, &zeta)
            .map_err(|e| ConfigError(e.to_string()))?
            .value;
        let best = siciak_bruteforce(&ext_basis, &ext_window, &zeta, n_samples, cfg.seed)
            .map_err(|e| ConfigError(e.to_string()))?;
        // overshoot above the Cauchy-Schwarz bound, clipped at zero
        let overshoot = (best / pi - 1.0).max(0.0);
        rows.push(ReportRow::checked(
            name,
            mname,
            model.dim,
            "bruteforce-overshoot",
            rho,
            overshoot,
            0.0,
            tol_extremal,
            Metric::Abs,
            timer.lap(),
        ));
        let a = coherent_state(&ext_basis, &ext_window, &zeta)
            .map_err(|e| ConfigError(e.to_string()))?;
        let attained = synthesize(&ext_basis, &ext_window, &a, &zeta)
            .map_err(|e| ConfigError(e.to_string()))?
            .norm_sqr();
        rows.push(ReportRow::checked(
            name,
            mname,
            model.dim,
            "coherent-attainment",
            rho,
            attained / pi,
            1.0,
            tol_extremal,
            Metric::Abs,
            timer.lap(),
        ));
    }
    Ok(rows)
}
