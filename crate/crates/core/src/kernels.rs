//! Closed-form Poisson-wave kernels on the model spaces, spectral Poisson
//! sums, subordination against heat kernels, and the Hadamard transport
//! recursion with its convergence-radius truncation rule.
//!
//! Conventions: the sphere Poisson kernel uses the shifted frequency
//! A_l = l + (n-1)/2, under which the closed form
//! c_n sinh(tau) (cosh tau - cos r)^{-(n+1)/2} matches the spectral sum
//! exactly; normalization constants are fixed by unit mass (flat) and by
//! one-point spectral calibration (sphere) rather than read off the
//! literature.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::geometry::{sphere_volume, ModelKind, ModelManifold};
use crate::quad;

/// Frequency convention of a kernel query: plain sqrt(Delta) or the shifted
/// generator A with A_l = l + (n-1)/2 on the sphere.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ShiftConvention {
    PlainSqrtDelta,
    ShiftedA,
}

/// A kernel evaluation request (CLI-facing; the individual kernels are the
/// public functions below).
#[derive(Debug, Clone)]
pub struct KernelQuery {
    pub model: ModelManifold,
    pub tau: f64,
    pub t: f64,
    pub x: Vec<Complex64>,
    pub y: Vec<Complex64>,
    pub shift_convention: ShiftConvention,
}

impl KernelQuery {
    pub fn validate(&self) -> Result<()> {
        if self.tau <= 0.0 {
            return Err(Error::InvalidArgument("tau must be positive".into()));
        }
        Ok(())
    }
}

/// Flat Poisson kernel C_n tau (tau^2 + |x-y|^2)^{-(n+1)/2} with unit mass.
pub fn poisson_flat(n: usize, tau: f64, x: &[f64], y: &[f64]) -> Result<f64> {
    if tau <= 0.0 {
        return Err(Error::InvalidArgument("tau must be positive".into()));
    }
    if x.len() != n || y.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: x.len().max(y.len()),
        });
    }
    let r2: f64 = x.iter().zip(y).map(|(a, b)| (a - b) * (a - b)).sum();
    Ok(flat_constant(n) * tau * (tau * tau + r2).powf(-((n as f64 + 1.0) / 2.0)))
}

/// C_n = Gamma((n+1)/2) / pi^{(n+1)/2} = 2 / Vol(S^n); unit total mass.
pub fn flat_constant(n: usize) -> f64 {
    2.0 / sphere_volume(n)
}

/// Flat heat kernel (4 pi u)^{-n/2} e^{-|x-y|^2/(4u)}; the subordination
/// input for the flat cross-check.
pub fn heat_flat(n: usize, u: f64, x: &[f64], y: &[f64]) -> f64 {
    let r2: f64 = x.iter().zip(y).map(|(a, b)| (a - b) * (a - b)).sum();
    (4.0 * std::f64::consts::PI * u).powf(-(n as f64) / 2.0) * (-r2 / (4.0 * u)).exp()
}

/// Analytically continued flat Poisson-wave kernel in one space dimension,
/// computed by numerical quadrature of the Fourier representation
/// (2 pi)^{-1} int e^{i (t + i tau) |xi|} e^{i xi (zeta - y)} d xi.
///
/// Absolutely convergent only for |Im zeta| < tau.
pub fn poisson_flat_complex(t: f64, tau: f64, zeta: Complex64, y: f64) -> Result<Complex64> {
    if tau <= 0.0 {
        return Err(Error::InvalidArgument("tau must be positive".into()));
    }
    let u = zeta - y;
    let delta = tau - u.im.abs();
    if delta <= 0.0 {
        return Err(Error::DivergentRegion {
            im: u.im.abs(),
            tau,
        });
    }
    // exponents for xi > 0 and xi < 0 branches; both decay like e^{-delta xi}
    let z1 = Complex64::new(-tau, t) + Complex64::i() * u;
    let z2 = Complex64::new(-tau, t) - Complex64::i() * u;
    let cutoff = 42.0 / delta;
    let re = quad::integrate(
        |xi| ((z1 * xi).exp() + (z2 * xi).exp()).re,
        0.0,
        cutoff,
        1e-12,
        1e-14,
    )?;
    let im = quad::integrate(
        |xi| ((z1 * xi).exp() + (z2 * xi).exp()).im,
        0.0,
        cutoff,
        1e-12,
        1e-14,
    )?;
    Ok(Complex64::new(re, im) / std::f64::consts::TAU)
}

/// Meromorphic continuation of the closed form, the oracle for
/// `poisson_flat_complex`: (i/2 pi) (1/(t + i tau + u) + 1/(t + i tau - u)).
pub fn poisson_flat_complex_closed(t: f64, tau: f64, zeta: Complex64, y: f64) -> Complex64 {
    let u = zeta - y;
    let w = Complex64::new(t, tau);
    Complex64::i() / std::f64::consts::TAU * ((w + u).inv() + (w - u).inv())
}

/// Poisson kernel by subordination to a heat kernel:
/// (tau / 2 sqrt(pi)) int_0^inf e^{-tau^2/(4u)} heat(u) u^{-3/2} du.
pub fn subordinate<H>(heat: H, tau: f64, rtol: f64) -> Result<f64>
where
    H: Fn(f64) -> f64,
{
    if tau <= 0.0 {
        return Err(Error::InvalidArgument("tau must be positive".into()));
    }
    let integrand = |u: f64| (-tau * tau / (4.0 * u)).exp() * heat(u) * u.powf(-1.5);
    let v = quad::integrate_semi_infinite(integrand, rtol, 1e-300)?;
    Ok(tau / (2.0 * std::f64::consts::PI.sqrt()) * v)
}

/// Analytic normalization of the sphere Poisson kernel,
/// c_n = 2^{(1-n)/2} / Vol(S^n); `calibrate_sphere_constant` recovers it
/// from the spectral sum at a single reference point.
pub fn sphere_constant(n: usize) -> f64 {
    2.0f64.powf((1.0 - n as f64) / 2.0) / sphere_volume(n)
}

/// Closed-form sphere Poisson kernel at imaginary time tau (shifted
/// convention A_l = l + (n-1)/2): c sinh(tau) (cosh tau - cos r)^{-(n+1)/2}.
/// Accepts complexified distance r.
pub fn poisson_sphere_closed(n: usize, tau: f64, r: Complex64) -> Result<Complex64> {
    poisson_sphere_closed_with(sphere_constant(n), n, Complex64::new(tau, 0.0), r)
}

/// Closed form at complex time w = tau + i t, with an explicit constant
/// (used after calibration). Singular on the complex characteristic conoid
/// cosh(w) = cos(r).
pub fn poisson_sphere_closed_with(
    c: f64,
    n: usize,
    w: Complex64,
    r: Complex64,
) -> Result<Complex64> {
    let base = w.cosh() - r.cos();
    if base.norm() < 1e-14 {
        return Err(Error::OnConoid);
    }
    Ok(c * w.sinh() * base.powf(-((n as f64 + 1.0) / 2.0)))
}

/// Truncated spectral Poisson sum on S^2:
/// sum_{l <= L} e^{-tau (l + 1/2)} ((2l+1)/(4 pi)) P_l(w),
/// where w is x.y for real points or the complexified bilinear argument.
///
/// Fails with TailTooLarge when the geometric tail bound at L exceeds
/// `tol` (the terms grow like e^{(h - tau) l} with h = |Re arccosh w|).
pub fn poisson_sphere_spectral(
    n: usize,
    tau: f64,
    w: Complex64,
    l_trunc: usize,
    tol: f64,
) -> Result<Complex64> {
    if n != 2 {
        return Err(Error::ModelUnsupported(
            "spectral Poisson sum implemented for S^2".into(),
        ));
    }
    if tau <= 0.0 {
        return Err(Error::InvalidArgument("tau must be positive".into()));
    }
    // growth exponent of P_l(w); zero on the real segment [-1, 1]
    let h = if w.im == 0.0 && w.re.abs() <= 1.0 {
        0.0
    } else {
        w.acosh().re.abs()
    };
    let decay = tau - h;
    let lf = l_trunc as f64;
    let tail = if decay <= 0.0 {
        f64::INFINITY
    } else {
        // bound: sum_{l > L} (2l+1)/(4pi) e^{-decay l} <= (2L+3)/(4 pi) e^{-decay(L+1)} / (1 - e^{-decay})^2
        (2.0 * lf + 3.0) / (4.0 * std::f64::consts::PI) * (-decay * (lf + 1.0)).exp()
            / (1.0 - (-decay).exp()).powi(2)
    };
    if tail.is_nan() || tail > tol {
        return Err(Error::TailTooLarge { l: l_trunc, tail });
    }
    let mut acc = Complex64::new(0.0, 0.0);
    let mut pm = Complex64::new(1.0, 0.0);
    let mut pc = w;
    for l in 0..=l_trunc {
        let p = if l == 0 {
            Complex64::new(1.0, 0.0)
        } else if l == 1 {
            w
        } else {
            let lf = (l - 1) as f64;
            let pn = ((2.0 * lf + 1.0) * w * pc - lf * pm) / (lf + 1.0);
            pm = pc;
            pc = pn;
            pn
        };
        let weight = (-(tau) * (l as f64 + 0.5)).exp() * (2.0 * l as f64 + 1.0)
            / (4.0 * std::f64::consts::PI);
        acc += weight * p;
    }
    Ok(acc)
}

/// Recover the closed-form constant from the spectral sum at one reference
/// point (one-point calibration).
pub fn calibrate_sphere_constant(n: usize, tau_ref: f64, r_ref: f64) -> Result<f64> {
    let w = Complex64::new(r_ref.cos(), 0.0);
    let l_trunc = ((40.0 / tau_ref).ceil() as usize).max(64);
    let spectral = poisson_sphere_spectral(n, tau_ref, w, l_trunc, 1e-12)?;
    let shape = poisson_sphere_closed_with(
        1.0,
        n,
        Complex64::new(tau_ref, 0.0),
        Complex64::new(r_ref, 0.0),
    )?;
    Ok((spectral / shape).re)
}

/// Hyperbolic Poisson kernel evaluator at pure imaginary time:
/// c sinh(tau) (cosh tau - cosh r)^{-(n+1)/2} on the principal branch.
/// Positive real for real r < tau; no absolute normalization is asserted.
pub fn poisson_hyperbolic_closed(n: usize, tau: f64, r: Complex64) -> Result<Complex64> {
    if tau <= 0.0 {
        return Err(Error::InvalidArgument("tau must be positive".into()));
    }
    let base = Complex64::new(tau.cosh(), 0.0) - r.cosh();
    if base.norm() < 1e-14 {
        return Err(Error::OnConoid);
    }
    Ok(sphere_constant(n) * tau.sinh() * base.powf(-((n as f64 + 1.0) / 2.0)))
}

const SERIES_SWITCH: f64 = 1e-3;

/// cot(r) - 1/r, series-expanded near zero.
fn cot_minus_inv(r: f64) -> f64 {
    if r.abs() < SERIES_SWITCH {
        let r2 = r * r;
        -r / 3.0 * (1.0 + r2 / 15.0 + 2.0 * r2 * r2 / 315.0)
    } else {
        1.0 / r.tan() - 1.0 / r
    }
}

/// coth(r) - 1/r, series-expanded near zero.
fn coth_minus_inv(r: f64) -> f64 {
    if r.abs() < SERIES_SWITCH {
        let r2 = r * r;
        r / 3.0 * (1.0 - r2 / 15.0 + 2.0 * r2 * r2 / 315.0)
    } else {
        1.0 / r.tanh() - 1.0 / r
    }
}

/// csc^2(r) - 1/r^2, series-expanded near zero.
fn csc2_minus_inv2(r: f64) -> f64 {
    if r.abs() < SERIES_SWITCH {
        let r2 = r * r;
        1.0 / 3.0 + r2 / 15.0 + 2.0 * r2 * r2 / 189.0
    } else {
        let s = r.sin();
        1.0 / (s * s) - 1.0 / (r * r)
    }
}

/// csch^2(r) - 1/r^2, series-expanded near zero.
fn csch2_minus_inv2(r: f64) -> f64 {
    if r.abs() < SERIES_SWITCH {
        let r2 = r * r;
        -1.0 / 3.0 + r2 / 15.0 - 2.0 * r2 * r2 / 189.0
    } else {
        let s = r.sinh();
        1.0 / (s * s) - 1.0 / (r * r)
    }
}

fn injectivity_bound(model: &ModelManifold) -> f64 {
    match model.kind {
        ModelKind::Sphere => std::f64::consts::PI,
        ModelKind::Hyperbolic => f64::INFINITY,
        ModelKind::Circle | ModelKind::FlatTorus => model.scale / 2.0,
    }
}

/// Volume density Theta(r) = sqrt(det g) in geodesic normal coordinates:
/// 1 flat, (sin r / r)^{n-1} on S^n, (sinh r / r)^{n-1} on H^n;
/// Theta(0) = 1 by continuity.
pub fn theta_density(model: &ModelManifold, r: f64) -> Result<f64> {
    if r < 0.0 || r >= injectivity_bound(model) {
        return Err(Error::InvalidArgument(format!(
            "r = {r} outside [0, {})",
            injectivity_bound(model)
        )));
    }
    let p = model.dim as f64 - 1.0;
    Ok(match model.kind {
        ModelKind::Circle | ModelKind::FlatTorus => 1.0,
        ModelKind::Sphere => {
            if r < SERIES_SWITCH {
                (1.0 - r * r / 6.0 + r.powi(4) / 120.0).powf(p)
            } else {
                (r.sin() / r).powf(p)
            }
        }
        ModelKind::Hyperbolic => {
            if r < SERIES_SWITCH {
                (1.0 + r * r / 6.0 + r.powi(4) / 120.0).powf(p)
            } else {
                (r.sinh() / r).powf(p)
            }
        }
    })
}

/// Leading Hadamard coefficient U_0 = Theta^{-1/2}.
pub fn hadamard_u0(model: &ModelManifold, r: f64) -> Result<f64> {
    Ok(theta_density(model, r)?.powf(-0.5))
}

/// Log-derivative phi = U_0'/U_0 = -(1/2) Theta'/Theta, and its derivative,
/// both analytic (series-started near zero).
fn u0_log_deriv(model: &ModelManifold, r: f64) -> (f64, f64) {
    let p = (model.dim as f64 - 1.0) / 2.0;
    match model.kind {
        ModelKind::Circle | ModelKind::FlatTorus => (0.0, 0.0),
        // phi = p (1/r - cot r), phi' = p (csc^2 r - 1/r^2)
        ModelKind::Sphere => (-p * cot_minus_inv(r), p * csc2_minus_inv2(r)),
        // phi = p (1/r - coth r), phi' = p (csch^2 r - 1/r^2)
        ModelKind::Hyperbolic => (-p * coth_minus_inv(r), p * csch2_minus_inv2(r)),
    }
}

/// Radial Laplacian of U_0 with the nonnegative sign convention:
/// Delta U_0 = -(U_0'' + (J'/J) U_0'), J'/J = (n-1) cot r (sphere) etc.
fn lap_u0(model: &ModelManifold, r: f64) -> Result<f64> {
    let u0 = hadamard_u0(model, r)?;
    let (phi, dphi) = u0_log_deriv(model, r);
    let p = model.dim as f64 - 1.0;
    // (J'/J) phi = p cot(r) phi: split the 1/r pole against phi ~ O(r)
    let jlog_phi = match model.kind {
        ModelKind::Circle | ModelKind::FlatTorus => 0.0,
        ModelKind::Sphere => p * (cot_minus_inv(r) * phi + phi_over_r(model, r)),
        ModelKind::Hyperbolic => p * (coth_minus_inv(r) * phi + phi_over_r(model, r)),
    };
    Ok(-u0 * (phi * phi + dphi + jlog_phi))
}

/// phi(r)/r, regular at r = 0.
fn phi_over_r(model: &ModelManifold, r: f64) -> f64 {
    let p = (model.dim as f64 - 1.0) / 2.0;
    if r.abs() < SERIES_SWITCH {
        // phi = p (r/3 + r^3/45 + ...) on the sphere, sign flipped hyperbolic
        match model.kind {
            ModelKind::Sphere => p * (1.0 / 3.0 + r * r / 45.0),
            ModelKind::Hyperbolic => -p * (1.0 / 3.0 - r * r / 45.0),
            _ => 0.0,
        }
    } else {
        let (phi, _) = u0_log_deriv(model, r);
        phi / r
    }
}

/// Hadamard coefficient table U_0..U_J on a radial grid.
#[derive(Debug, Clone)]
pub struct ParametrixSeries {
    pub model: ModelManifold,
    pub radial_grid: Vec<f64>,
    /// coefficients[j][i] = U_j(radial_grid[i]).
    pub coefficients: Vec<Vec<f64>>,
    pub truncation: usize,
    /// Majorant convergence radius for |t^2 - r^2| at the grid's far end.
    pub rofc_bound: f64,
}

/// Default majorant constant for the truncation rule; not computable from
/// first principles here, calibrated so desk-scale grids keep J moderate.
pub const ROFC_DEFAULT_K: f64 = 4.0;

/// Solve the radial transport hierarchy on a constant-curvature model:
/// U_0 = Theta^{-1/2} and, for j >= 1,
///   r U_j' + (j + (r/2) Theta'/Theta) U_j = -(Delta U_{j-1}) / (2(2j+1-n)),
/// integrated as U_j(r) = r^{-j} Theta^{-1/2} int_0^r s^{j-1} Theta^{1/2} g_j ds.
/// Flat models terminate identically: U_j = 0 for j >= 1.
pub fn hadamard_coeffs(
    model: &ModelManifold,
    r_grid: &[f64],
    j_max: usize,
) -> Result<ParametrixSeries> {
    hadamard_coeffs_with_step(model, r_grid, j_max, 2.5e-4)
}

/// `hadamard_coeffs` with an explicit quadrature step for the internal
/// radial grid; exposed so convergence can be checked by step halving.
pub fn hadamard_coeffs_with_step(
    model: &ModelManifold,
    r_grid: &[f64],
    j_max: usize,
    h: f64,
) -> Result<ParametrixSeries> {
    let bound = injectivity_bound(model);
    let mut r_max: f64 = 0.0;
    for &r in r_grid {
        if r < 0.0 || r >= bound {
            return Err(Error::InvalidArgument(format!(
                "grid point {r} outside [0, {bound})"
            )));
        }
        r_max = r_max.max(r);
    }
    if !(h > 0.0 && h < 0.1) {
        return Err(Error::InvalidArgument("step must be in (0, 0.1)".into()));
    }
    let flat = matches!(model.kind, ModelKind::Circle | ModelKind::FlatTorus);
    if !flat && model.dim % 2 == 1 && 2 * j_max + 1 > model.dim {
        // the transport divisor 2(2j+1-n) vanishes at j = (n-1)/2 for odd n:
        // that is the even-spacetime log branch, out of scope here
        return Err(Error::ModelUnsupported(
            "transport order j >= (n-1)/2 on curved odd-dimensional models needs the log branch"
                .into(),
        ));
    }
    let mut coefficients = Vec::with_capacity(j_max + 1);
    // U_0 row
    let u0_row: Result<Vec<f64>> = r_grid.iter().map(|&r| hadamard_u0(model, r)).collect();
    coefficients.push(u0_row?);
    if flat {
        for _ in 1..=j_max {
            coefficients.push(vec![0.0; r_grid.len()]);
        }
        return Ok(ParametrixSeries {
            model: *model,
            radial_grid: r_grid.to_vec(),
            coefficients,
            truncation: j_max,
            rofc_bound: f64::INFINITY,
        });
    }

    // fine internal grid for the cumulative quadrature and FD Laplacians
    let nfine = (r_max / h).ceil() as usize + 9;
    let fine: Vec<f64> = (0..=nfine).map(|i| i as f64 * h).collect();
    let n = model.dim as f64;

    // g_1 from the analytic Delta U_0
    let mut g_prev: Vec<f64> = Vec::with_capacity(fine.len());
    for &s in &fine {
        g_prev.push(-lap_u0(model, s)? / (2.0 * (2.0 + 1.0 - n)));
    }
    let theta_half: Result<Vec<f64>> = fine
        .iter()
        .map(|&s| theta_density(model, s).map(|t| t.sqrt()))
        .collect();
    let theta_half = theta_half?;

    let mut u_rows_fine: Vec<Vec<f64>> = Vec::new();
    for j in 1..=j_max {
        let jf = j as f64;
        if j > 1 {
            // g_j = -(Delta U_{j-1})/(2(2j+1-n)) with FD Laplacian of the
            // previous fine-grid row
            let prev = &u_rows_fine[j - 2];
            g_prev = (0..fine.len())
                .map(|i| {
                    let lap = fd_radial_laplacian(model, &fine, prev, i, h);
                    -lap / (2.0 * (2.0 * jf + 1.0 - n))
                })
                .collect();
        }
        // cumulative integral int_0^r s^{j-1} Theta^{1/2} g_j ds
        let integrand: Vec<f64> = fine
            .iter()
            .zip(&theta_half)
            .zip(&g_prev)
            .map(|((&s, &th), &g)| s.powi(j as i32 - 1) * th * g)
            .collect();
        let cumulative = cumulative_simpson(&integrand, h);
        let mut row = vec![0.0; fine.len()];
        for i in 0..fine.len() {
            let r = fine[i];
            if r < SERIES_SWITCH {
                row[i] = g_prev[i] / jf;
            } else {
                row[i] = cumulative[i] / (r.powi(j as i32) * theta_half[i]);
            }
        }
        u_rows_fine.push(row);
    }

    // sample the fine rows at the requested grid
    for row in &u_rows_fine {
        let sampled: Vec<f64> = r_grid
            .iter()
            .map(|&r| interp_uniform(&fine, row, h, r))
            .collect();
        coefficients.push(sampled);
    }

    let rofc = rofc_truncation(model.dim, 0.0, r_max, bound.min(4.0), ROFC_DEFAULT_K);
    Ok(ParametrixSeries {
        model: *model,
        radial_grid: r_grid.to_vec(),
        coefficients,
        truncation: j_max,
        rofc_bound: rofc.majorant_radius,
    })
}

/// Five-point FD radial Laplacian -(f'' + (J'/J) f') on a uniform grid,
/// one-sided at the ends.
fn fd_radial_laplacian(model: &ModelManifold, grid: &[f64], f: &[f64], i: usize, h: f64) -> f64 {
    let nmax = grid.len() - 1;
    let ii = i.clamp(2, nmax - 2);
    let (f0, f1, f2, f3, f4) = (f[ii - 2], f[ii - 1], f[ii], f[ii + 1], f[ii + 2]);
    let d1 = (f0 - 8.0 * f1 + 8.0 * f3 - f4) / (12.0 * h);
    let d2 = (-f0 + 16.0 * f1 - 30.0 * f2 + 16.0 * f3 - f4) / (12.0 * h * h);
    let r = grid[ii];
    let p = model.dim as f64 - 1.0;
    let jlog = match model.kind {
        ModelKind::Sphere => {
            if r < SERIES_SWITCH {
                p / r.max(1e-12) // handled by the series start elsewhere
            } else {
                p / r.tan()
            }
        }
        ModelKind::Hyperbolic => {
            if r < SERIES_SWITCH {
                p / r.max(1e-12)
            } else {
                p / r.tanh()
            }
        }
        _ => p / r.max(1e-12),
    };
    -(d2 + jlog * d1)
}

/// Cumulative integral on a uniform grid by composite Simpson pairs with a
/// trapezoid closer on odd prefixes.
fn cumulative_simpson(f: &[f64], h: f64) -> Vec<f64> {
    let mut out = vec![0.0; f.len()];
    for i in 1..f.len() {
        if i >= 2 {
            out[i] = out[i - 2] + h / 3.0 * (f[i - 2] + 4.0 * f[i - 1] + f[i]);
        } else {
            out[i] = out[i - 1] + 0.5 * h * (f[i - 1] + f[i]);
        }
    }
    out
}

fn interp_uniform(grid: &[f64], f: &[f64], h: f64, r: f64) -> f64 {
    let i = ((r / h).floor() as usize).min(grid.len() - 2);
    let t = (r - grid[i]) / h;
    f[i] * (1.0 - t) + f[i + 1] * t
}

/// Outcome of the convergence-radius truncation rule.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Truncation {
    pub j: usize,
    /// Set when |t^2 - r^2| exceeds the majorant radius: the series is not
    /// summable there and J = 0 is returned.
    pub outside_radius: bool,
    /// The majorant radius itself.
    pub majorant_radius: f64,
    /// Whether the first-omitted-term bound e^{-J} meets the tail target.
    pub tail_met: bool,
}

/// Maximum series order the truncation rule will report.
pub const TRUNCATION_J_CAP: usize = 64;

/// Tail target for the majorant bound.
pub const TRUNCATION_TAIL: f64 = 1e-8;

/// Truncation order from the convergence-radius majorant. The radius is
/// R = (1 - r/eps)^2 / ((1 + m1/eps + m1^2/eps^2) K) with m1 = (m-2)/2 and
/// m = n+1 the spacetime dimension. The coefficients obey the analytic-symbol
/// bound |U_j| <= C^{j+1} j^j, so the usable realization sums j up to
/// J = R/(e |t^2 - r^2|) (terms bounded by e^{-j} there); beyond the radius
/// no order is usable and J = 0 is flagged.
pub fn rofc_truncation(n: usize, t2_minus_r2: f64, r: f64, eps: f64, k: f64) -> Truncation {
    let m1 = (n as f64 + 1.0 - 2.0) / 2.0;
    let frac = (1.0 - r / eps).max(0.0);
    let radius = frac * frac / ((1.0 + m1 / eps + m1 * m1 / (eps * eps)) * k);
    let gamma = t2_minus_r2.abs();
    if gamma == 0.0 {
        return Truncation {
            j: TRUNCATION_J_CAP,
            outside_radius: false,
            majorant_radius: radius,
            tail_met: true,
        };
    }
    if gamma >= radius {
        return Truncation {
            j: 0,
            outside_radius: true,
            majorant_radius: radius,
            tail_met: false,
        };
    }
    let j_opt = (radius / (std::f64::consts::E * gamma)).floor() as usize;
    let j = j_opt.min(TRUNCATION_J_CAP);
    Truncation {
        j,
        outside_radius: false,
        majorant_radius: radius,
        tail_met: (-(j as f64)).exp() <= TRUNCATION_TAIL,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    #[test]
    fn flat_kernel_reference_values() {
        // n = 1, tau = 1: 1/pi at coincidence, 1/(2 pi) at distance 1
        let v0 = poisson_flat(1, 1.0, &[0.0], &[0.0]).unwrap();
        assert_relative_eq!(v0, 1.0 / std::f64::consts::PI, epsilon = 1e-14);
        let v1 = poisson_flat(1, 1.0, &[0.0], &[1.0]).unwrap();
        assert_relative_eq!(v1, 0.5 / std::f64::consts::PI, epsilon = 1e-14);
    }

    #[test]
    fn flat_kernel_unit_mass() {
        // compactified quadrature y = tan(theta) captures the full line
        let tau = 0.7;
        let mass1 = quad::integrate(
            |th: f64| {
                let y = th.tan();
                poisson_flat(1, tau, &[0.0], &[y]).unwrap() / th.cos().powi(2)
            },
            -std::f64::consts::FRAC_PI_2 + 1e-12,
            std::f64::consts::FRAC_PI_2 - 1e-12,
            1e-10,
            1e-12,
        )
        .unwrap();
        assert_relative_eq!(mass1, 1.0, max_relative = 1e-6);
        // n = 2 radial reduction: int_0^inf C_2 tau (tau^2+s^2)^{-3/2} 2 pi s ds
        let mass2 = quad::integrate(
            |th: f64| {
                let s = th.tan();
                poisson_flat(2, tau, &[0.0, 0.0], &[s, 0.0]).unwrap() * std::f64::consts::TAU * s
                    / th.cos().powi(2)
            },
            0.0,
            std::f64::consts::FRAC_PI_2 - 1e-12,
            1e-10,
            1e-12,
        )
        .unwrap();
        assert_relative_eq!(mass2, 1.0, max_relative = 1e-6);
    }

    #[test]
    fn flat_complex_matches_real_kernel() {
        let v = poisson_flat_complex(0.0, 1.0, Complex64::new(0.4, 0.0), 0.0).unwrap();
        let r = poisson_flat(1, 1.0, &[0.4], &[0.0]).unwrap();
        assert_relative_eq!(v.re, r, max_relative = 1e-8);
        assert_abs_diff_eq!(v.im, 0.0, epsilon = 1e-10);
    }

    #[test]
    fn flat_complex_quadrature_vs_continuation() {
        // zeta = y + 0.3i, tau = 1, t = 0
        let z = Complex64::new(0.0, 0.3);
        let v = poisson_flat_complex(0.0, 1.0, z, 0.0).unwrap();
        let c = poisson_flat_complex_closed(0.0, 1.0, z, 0.0);
        assert!((v - c).norm() <= 1e-6 * c.norm());
        // and a genuinely complex offset with nonzero t
        let z2 = Complex64::new(0.7, -0.42);
        let v2 = poisson_flat_complex(0.35, 0.9, z2, 0.1).unwrap();
        let c2 = poisson_flat_complex_closed(0.35, 0.9, z2, 0.1);
        assert!((v2 - c2).norm() <= 1e-6 * c2.norm());
    }

    #[test]
    fn flat_complex_divergent_region() {
        assert!(matches!(
            poisson_flat_complex(0.0, 0.3, Complex64::new(0.0, 0.3), 0.0),
            Err(Error::DivergentRegion { .. })
        ));
        // magnitude grows as the boundary is approached
        let near = poisson_flat_complex(0.0, 0.3, Complex64::new(0.0, 0.295), 0.0)
            .unwrap()
            .norm();
        let far = poisson_flat_complex(0.0, 0.3, Complex64::new(0.0, 0.1), 0.0)
            .unwrap()
            .norm();
        assert!(near > 5.0 * far, "near {near} far {far}");
    }

    #[test]
    fn subordination_scalar_identity() {
        // (tau/2 sqrt(pi)) int e^{-tau^2/4u} e^{-u gamma^2} u^{-3/2} du = e^{-tau gamma}
        for gamma in [0.1, 0.5, 1.0, 3.0, 10.0] {
            let v = subordinate(|u| (-u * gamma * gamma).exp(), 1.0, 1e-11).unwrap();
            assert_relative_eq!(v, (-gamma).exp(), max_relative = 1e-8);
        }
    }

    #[test]
    fn subordination_gamma_zero_limit() {
        let v = subordinate(|_| 1.0, 1.0, 1e-11).unwrap();
        assert_relative_eq!(v, 1.0, max_relative = 1e-8);
    }

    #[test]
    fn subordination_of_flat_heat_is_poisson() {
        for (tau, d) in [(0.5, 0.0), (1.0, 1.3), (2.5, 0.4)] {
            let v = subordinate(|u| heat_flat(1, u, &[0.0], &[d]), tau, 1e-11).unwrap();
            let p = poisson_flat(1, tau, &[0.0], &[d]).unwrap();
            assert_relative_eq!(v, p, max_relative = 1e-8);
        }
    }

    #[test]
    fn sphere_closed_matches_spectral() {
        let tau = 0.3;
        let r = std::f64::consts::FRAC_PI_2;
        let closed = poisson_sphere_closed(2, tau, Complex64::new(r, 0.0)).unwrap();
        let spectral =
            poisson_sphere_spectral(2, tau, Complex64::new(r.cos(), 0.0), 240, 1e-10).unwrap();
        assert!((closed - spectral).norm() <= 1e-6 * spectral.norm());
    }

    #[test]
    fn sphere_spectral_truncation_stable() {
        let tau = 0.3;
        let w = Complex64::new(1.0f64.cos(), 0.0);
        let a = poisson_sphere_spectral(2, tau, w, 200, 1e-8).unwrap();
        let b = poisson_sphere_spectral(2, tau, w, 400, 1e-8).unwrap();
        assert!((a - b).norm() < 1e-8);
    }

    #[test]
    fn sphere_spectral_symmetry_in_r() {
        let tau = 0.4;
        for r in [0.3, 1.1] {
            let a = poisson_sphere_closed(2, tau, Complex64::new(r, 0.0)).unwrap();
            let b = poisson_sphere_closed(2, tau, Complex64::new(-r, 0.0)).unwrap();
            assert_relative_eq!(a.re, b.re, epsilon = 1e-14);
        }
    }

    #[test]
    fn sphere_spectral_tail_guard() {
        // one-variable continuation: argument cosh(s) with s = sqrt(rho)
        let conv = poisson_sphere_spectral(2, 0.3, Complex64::new(0.4f64.cosh(), 0.0), 400, 1e-8);
        assert!(matches!(conv, Err(Error::TailTooLarge { .. })));
        let ok = poisson_sphere_spectral(2, 0.3, Complex64::new(0.2f64.cosh(), 0.0), 400, 1e-8);
        assert!(ok.is_ok());
    }

    #[test]
    fn sphere_calibration_recovers_constant() {
        let c = calibrate_sphere_constant(2, 0.5, 1.2).unwrap();
        assert_relative_eq!(c, sphere_constant(2), max_relative = 1e-9);
    }

    #[test]
    fn hyperbolic_evaluator_positive_and_decaying() {
        let v0 = poisson_hyperbolic_closed(2, 1.0, Complex64::new(0.0, 0.0)).unwrap();
        assert!(v0.re > 0.0 && v0.im.abs() < 1e-15);
        let mut prev = f64::INFINITY;
        for r in [2.0, 4.0, 8.0, 16.0] {
            let v = poisson_hyperbolic_closed(2, 1.0, Complex64::new(r, 0.0))
                .unwrap()
                .norm();
            assert!(v < prev);
            prev = v;
        }
        assert!(matches!(
            poisson_hyperbolic_closed(2, 1.0, Complex64::new(1.0, 0.0)),
            Err(Error::OnConoid)
        ));
    }

    #[test]
    fn theta_values() {
        let s2 = ModelManifold::sphere(2).unwrap();
        assert_relative_eq!(
            theta_density(&s2, std::f64::consts::FRAC_PI_2).unwrap(),
            2.0 / std::f64::consts::PI,
            epsilon = 1e-14
        );
        assert_relative_eq!(theta_density(&s2, 1e-9).unwrap(), 1.0, epsilon = 1e-12);
        let flat = ModelManifold::flat_torus(2).unwrap();
        assert_eq!(theta_density(&flat, 0.2).unwrap(), 1.0);
        assert_relative_eq!(
            hadamard_u0(&s2, std::f64::consts::FRAC_PI_2).unwrap(),
            (std::f64::consts::PI / 2.0).sqrt(),
            epsilon = 1e-14
        );
    }

    #[test]
    fn flat_transport_terminates() {
        let m = ModelManifold::flat_torus(2).unwrap();
        let grid: Vec<f64> = (0..20).map(|i| 0.02 * i as f64).collect();
        let series = hadamard_coeffs(&m, &grid, 3).unwrap();
        assert_eq!(series.coefficients.len(), 4);
        for row in &series.coefficients[1..] {
            assert!(row.iter().all(|&v| v == 0.0));
        }
        assert!(series.coefficients[0].iter().all(|&v| v == 1.0));
    }

    #[test]
    fn sphere_u1_value_at_origin() {
        // U_1(0) = g_1(0)/1 = (1/6) on S^2 (curvature 2 over 12)
        let m = ModelManifold::sphere(2).unwrap();
        let series = hadamard_coeffs(&m, &[0.0, 0.5, 1.0, 2.0], 1).unwrap();
        assert_relative_eq!(series.coefficients[1][0], 1.0 / 6.0, max_relative = 1e-8);
        // frozen from the quadrature oracle
        assert_relative_eq!(series.coefficients[1][1], 0.170932, max_relative = 1e-4);
        assert_relative_eq!(series.coefficients[1][3], 0.274151, max_relative = 1e-4);
    }

    #[test]
    fn sphere_u1_transport_residual() {
        let m = ModelManifold::sphere(2).unwrap();
        let h = 1e-4;
        for r in [0.1, 0.5, 1.0, 1.6, 2.0] {
            let grid = [r - 2.0 * h, r - h, r, r + h, r + 2.0 * h];
            let series = hadamard_coeffs(&m, &grid, 1).unwrap();
            let u1 = &series.coefficients[1];
            let du1 = (u1[0] - 8.0 * u1[1] + 8.0 * u1[3] - u1[4]) / (12.0 * h);
            let (phi, _) = u0_log_deriv(&m, r);
            // r U' + (1 - r phi) U = g_1  with phi = U0'/U0 = -(1/2) Theta'/Theta
            let lhs = r * du1 + (1.0 - r * phi) * u1[2];
            let g1 = -lap_u0(&m, r).unwrap() / 2.0;
            assert!(
                (lhs - g1).abs() <= 1e-6,
                "residual {} at r = {r}",
                (lhs - g1).abs()
            );
        }
    }

    #[test]
    fn sphere_u1_richardson_consistency() {
        // halving the quadrature step moves U_1 by less than 1e-8
        let m = ModelManifold::sphere(2).unwrap();
        let grid = [0.3, 0.8, 1.5];
        let coarse = hadamard_coeffs_with_step(&m, &grid, 1, 5e-4).unwrap();
        let fine = hadamard_coeffs_with_step(&m, &grid, 1, 2.5e-4).unwrap();
        for (a, b) in coarse.coefficients[1].iter().zip(&fine.coefficients[1]) {
            assert!((a - b).abs() < 1e-8, "step sensitivity {}", (a - b).abs());
        }
    }

    #[test]
    fn truncation_rule_monotone_in_k() {
        let t = rofc_truncation(2, 0.01, 0.5, 3.0, ROFC_DEFAULT_K);
        let t2 = rofc_truncation(2, 0.01, 0.5, 3.0, 2.0 * ROFC_DEFAULT_K);
        assert!(t2.j <= t.j);
        assert!(!t.outside_radius);
    }

    #[test]
    fn truncation_rule_edges() {
        let zero = rofc_truncation(2, 0.0, 0.5, 3.0, ROFC_DEFAULT_K);
        assert_eq!(zero.j, TRUNCATION_J_CAP);
        let out = rofc_truncation(2, 100.0, 0.5, 3.0, ROFC_DEFAULT_K);
        assert_eq!(out.j, 0);
        assert!(out.outside_radius);
    }
}
