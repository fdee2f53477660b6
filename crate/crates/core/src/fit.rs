//! Shared least-squares fits for growth exponents and decay rates.

use crate::error::{Error, Result};

/// Result of a straight-line fit y = slope * x + intercept.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LineFit {
    pub slope: f64,
    pub intercept: f64,
    /// Root-mean-square residual of the fit.
    pub residual: f64,
}

/// Ordinary least squares on raw (x, y) pairs.
pub fn linear_fit(xs: &[f64], ys: &[f64]) -> Result<LineFit> {
    if xs.len() != ys.len() || xs.len() < 2 {
        return Err(Error::InsufficientRange { need: 2, span: 1.0 });
    }
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    if sxx == 0.0 {
        return Err(Error::InvalidArgument("degenerate abscissae in fit".into()));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let rms = (xs
        .iter()
        .zip(ys)
        .map(|(x, y)| {
            let r = y - (slope * x + intercept);
            r * r
        })
        .sum::<f64>()
        / n)
        .sqrt();
    Ok(LineFit {
        slope,
        intercept,
        residual: rms,
    })
}

/// Least squares on (log lambda, log value). All values must be positive;
/// needs at least 3 samples.
pub fn fit_loglog(samples: &[(f64, f64)]) -> Result<LineFit> {
    if samples.len() < 3 {
        return Err(Error::InsufficientRange { need: 3, span: 1.0 });
    }
    let mut xs = Vec::with_capacity(samples.len());
    let mut ys = Vec::with_capacity(samples.len());
    for &(lam, v) in samples {
        if v <= 0.0 {
            return Err(Error::NonPositiveValue(v));
        }
        if lam <= 0.0 {
            return Err(Error::NonPositiveValue(lam));
        }
        xs.push(lam.ln());
        ys.push(v.ln());
    }
    linear_fit(&xs, &ys)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn exact_power_law() {
        let samples: Vec<(f64, f64)> = [1.0, 2.0, 5.0, 10.0, 40.0]
            .iter()
            .map(|&l: &f64| (l, 2.0 * l.powf(1.5)))
            .collect();
        let fit = fit_loglog(&samples).unwrap();
        assert_relative_eq!(fit.slope, 1.5, epsilon = 1e-12);
        assert_relative_eq!(fit.intercept, 2.0f64.ln(), epsilon = 1e-12);
        assert!(fit.residual < 1e-12);
    }

    #[test]
    fn two_points_exact_line() {
        let fit = linear_fit(&[1.0, 3.0], &[2.0, 8.0]).unwrap();
        assert_relative_eq!(fit.slope, 3.0, epsilon = 1e-14);
        assert!(fit.residual < 1e-14);
    }

    #[test]
    fn noisy_power_law_recovers_slope() {
        // deterministic +-1% noise around v = l^2
        let mut samples = Vec::new();
        for i in 0..24 {
            let l = 10.0 * 1.3f64.powi(i);
            let eps = if i % 2 == 0 { 0.01 } else { -0.01 };
            samples.push((l, l * l * (1.0 + eps)));
        }
        let fit = fit_loglog(&samples).unwrap();
        assert!((fit.slope - 2.0).abs() < 0.05, "slope {}", fit.slope);
    }

    #[test]
    fn rejects_nonpositive() {
        assert!(matches!(
            fit_loglog(&[(1.0, 1.0), (2.0, -1.0), (3.0, 2.0)]),
            Err(Error::NonPositiveValue(_))
        ));
    }
}
