//! Quadrature kernels used across the crate: Gauss-Legendre panels,
//! an adaptive Gauss-Kronrod (G7, K15) rule, and a semi-infinite rule
//! based on the substitution u = e^s.

use crate::error::{Error, Result};

/// K15 abscissae on [-1, 1] (positive half; the rule is symmetric).
const XGK: [f64; 8] = [
    0.991455371120813,
    0.949107912342759,
    0.864864423359769,
    0.741531185599394,
    0.586087235467691,
    0.405845151377397,
    0.207784955007898,
    0.000000000000000,
];

/// K15 weights matching `XGK`.
const WGK: [f64; 8] = [
    0.022935322010529,
    0.063092092629979,
    0.104790010322250,
    0.140653259715525,
    0.169004726639267,
    0.190350578064785,
    0.204432940075298,
    0.209482141084728,
];

/// G7 weights for the embedded Gauss rule (abscissae are XGK[1], XGK[3], ...).
const WG: [f64; 4] = [
    0.129484966168870,
    0.279705391489277,
    0.381830050505119,
    0.417959183673469,
];

/// One Gauss-Kronrod 15-point evaluation on [a, b].
/// Returns (integral, error estimate).
fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut result_k = WGK[7] * fc;
    let mut result_g = WG[3] * fc;
    for j in 0..7 {
        let x = h * XGK[j];
        let f1 = f(c - x);
        let f2 = f(c + x);
        result_k += WGK[j] * (f1 + f2);
        if j % 2 == 1 {
            result_g += WG[j / 2] * (f1 + f2);
        }
    }
    let integral = result_k * h;
    let err = ((result_k - result_g) * h).abs();
    (integral, err)
}

/// Adaptive Gauss-Kronrod integration of `f` over [a, b].
///
/// Subdivides the worst interval until the summed error estimate meets
///`rtol * |integral| + atol` or the interval budget runs out.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, rtol: f64, atol: f64) -> Result<f64> {
    let max_intervals = 4096;
    // seed with 16 panels so narrow interior features are not missed;
    // a sorted Vec of (a, b, integral, err) is plenty at this size
    let seed = 16usize;
    let mut segs: Vec<(f64, f64, f64, f64)> = (0..seed)
        .map(|i| {
            let sa = a + (b - a) * i as f64 / seed as f64;
            let sb = a + (b - a) * (i + 1) as f64 / seed as f64;
            let (v, e) = gk15(&f, sa, sb);
            (sa, sb, v, e)
        })
        .collect();
    loop {
        let total: f64 = segs.iter().map(|s| s.2).sum();
        let toterr: f64 = segs.iter().map(|s| s.3).sum();
        if toterr <= rtol * total.abs() + atol {
            return Ok(total);
        }
        if segs.len() >= max_intervals {
            return Err(Error::QuadratureFailure {
                achieved: toterr,
                requested: rtol * total.abs() + atol,
            });
        }
        let (worst, _) = segs
            .iter()
            .enumerate()
            .max_by(|x, y| x.1 .3.partial_cmp(&y.1 .3).unwrap())
            .unwrap();
        let (sa, sb, _, _) = segs.swap_remove(worst);
        let mid = 0.5 * (sa + sb);
        let (il, el) = gk15(&f, sa, mid);
        let (ir, er) = gk15(&f, mid, sb);
        segs.push((sa, mid, il, el));
        segs.push((mid, sb, ir, er));
    }
}

/// Integrate `g(u)` over (0, inf) by the substitution u = e^s.
///
/// The window [s_lo, s_hi] is grown until both tail panels contribute less
/// than the tolerance, which handles integrands with exponential decay in s
/// at both ends (every subordination integrand in this crate does).
pub fn integrate_semi_infinite<F: Fn(f64) -> f64>(g: F, rtol: f64, atol: f64) -> Result<f64> {
    let h = |s: f64| {
        let u = s.exp();
        g(u) * u
    };
    let mut s_lo = -8.0;
    let mut s_hi = 8.0;
    let mut val = integrate(h, s_lo, s_hi, rtol, atol)?;
    for _ in 0..12 {
        let scale = val.abs().max(atol);
        let left = integrate(h, s_lo - 8.0, s_lo, rtol, atol)?;
        let right = integrate(h, s_hi, s_hi + 8.0, rtol, atol)?;
        let mut grew = false;
        if left.abs() > 0.25 * rtol * scale {
            s_lo -= 8.0;
            val += left;
            grew = true;
        }
        if right.abs() > 0.25 * rtol * scale {
            s_hi += 8.0;
            val += right;
            grew = true;
        }
        if !grew {
            return Ok(val);
        }
    }
    Ok(val)
}

/// Gauss-Legendre nodes and weights on [-1, 1], by Newton iteration on P_n.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        // Tricomi initial guess for the i-th positive root.
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_and_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

fn legendre_and_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 1..n {
        let p2 = ((2 * k + 1) as f64 * x * p1 - k as f64 * p0) / (k + 1) as f64;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Fixed-order Gauss-Legendre integral of `f` over [a, b].
pub fn gauss_panel<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, order: usize) -> f64 {
    let (xs, ws) = gauss_legendre(order);
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    xs.iter()
        .zip(&ws)
        .map(|(&x, &w)| w * f(c + h * x))
        .sum::<f64>()
        * h
}
