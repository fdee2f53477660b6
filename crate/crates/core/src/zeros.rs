//! Complex zeros of trigonometric polynomials on the cylinder, zero-current
//! pairings against test functions, the ddbar-quadrature route through the
//! Poincare-Lelong formula, and random-wave ensembles.
//!
//! The circle model is the zero-current arena: a degree-N trigonometric
//! polynomial with admissible leading coefficients has exactly 2N zeros per
//! period cylinder, found by substituting z = e^{i zeta}, solving the
//! degree-2N algebraic polynomial with an Aberth-Ehrlich sweep, mapping back
//! and polishing with Newton on the trigonometric form.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::eigenbasis::{enumerate_spectrum, EigenbasisSpec, Eigenmode, Parity, Quantum};
use crate::error::{Error, Result};
use crate::geometry::ModelManifold;
use crate::par;
use crate::projector::{split_seed, SpectralWindow};

/// Zeros of one trigonometric polynomial on the period cylinder, with
/// per-zero residuals of the trigonometric form.
#[derive(Debug, Clone)]
pub struct ZeroSet {
    /// Cylinder coordinates zeta = x + i xi, x reduced mod 2 pi.
    pub zeros: Vec<Complex64>,
    /// Trigonometric degree N.
    pub degree: usize,
    /// |p(zeta_k)| after refinement.
    pub residuals: Vec<f64>,
    /// Multiplicity assigned by clustering roots closer than 1e-8.
    pub multiplicities: Vec<usize>,
    /// Count of roots whose Newton polish did not converge (they are still
    /// reported, never dropped).
    pub unconverged: usize,
}

/// A trigonometric polynomial a0 + sum_k (a_k cos k zeta + b_k sin k zeta)
/// with complex coefficients; b[0] is ignored.
#[derive(Debug, Clone)]
pub struct TrigPolynomial {
    pub a: Vec<Complex64>,
    pub b: Vec<Complex64>,
}

impl TrigPolynomial {
    pub fn new(a: Vec<Complex64>, b: Vec<Complex64>) -> Result<Self> {
        if a.is_empty() || a.len() != b.len() {
            return Err(Error::InvalidArgument(
                "coefficient arrays must be nonempty and of equal length".into(),
            ));
        }
        Ok(TrigPolynomial { a, b })
    }

    pub fn from_real(a: &[f64], b: &[f64]) -> Result<Self> {
        Self::new(
            a.iter().map(|&x| Complex64::new(x, 0.0)).collect(),
            b.iter().map(|&x| Complex64::new(x, 0.0)).collect(),
        )
    }

    pub fn degree(&self) -> usize {
        self.a.len() - 1
    }

    pub fn eval(&self, zeta: Complex64) -> Complex64 {
        let mut acc = self.a[0];
        for k in 1..self.a.len() {
            let kz = zeta * k as f64;
            acc += self.a[k] * kz.cos() + self.b[k] * kz.sin();
        }
        acc
    }

    pub fn eval_deriv(&self, zeta: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for k in 1..self.a.len() {
            let kf = k as f64;
            let kz = zeta * kf;
            acc += kf * (-self.a[k] * kz.sin() + self.b[k] * kz.cos());
        }
        acc
    }

    /// Coefficients of z^N p(zeta) under z = e^{i zeta}: a Laurent-to-plain
    /// polynomial of degree 2N with c_{N+k} = (a_k - i b_k)/2 and
    /// c_{N-k} = (a_k + i b_k)/2.
    pub fn algebraic_coefficients(&self) -> Vec<Complex64> {
        let n = self.degree();
        let mut c = vec![Complex64::new(0.0, 0.0); 2 * n + 1];
        c[n] = self.a[0];
        let half = Complex64::new(0.5, 0.0);
        let half_i = Complex64::new(0.0, 0.5);
        for k in 1..=n {
            c[n + k] += half * self.a[k] - half_i * self.b[k];
            c[n - k] += half * self.a[k] + half_i * self.b[k];
        }
        c
    }
}

/// Newton ratio p/p' evaluated overflow-free: plain Horner inside the unit
/// disc, and through the reversed polynomial q(w) = w^d p(1/w) outside, where
/// p/p' = z q / (d q - w q') stays bounded.
fn newton_ratio(c: &[Complex64], z: Complex64) -> Option<Complex64> {
    let d = c.len() - 1;
    if z.norm() <= 1.0 {
        let mut p = Complex64::new(0.0, 0.0);
        let mut dp = Complex64::new(0.0, 0.0);
        for &ck in c.iter().rev() {
            dp = dp * z + p;
            p = p * z + ck;
        }
        if p.norm() == 0.0 {
            return Some(Complex64::new(0.0, 0.0));
        }
        if dp.norm() == 0.0 || !dp.is_finite() || !p.is_finite() {
            return None;
        }
        Some(p / dp)
    } else {
        let w = z.inv();
        let mut q = Complex64::new(0.0, 0.0);
        let mut dq = Complex64::new(0.0, 0.0);
        for &ck in c.iter() {
            dq = dq * w + q;
            q = q * w + ck;
        }
        if q.norm() == 0.0 {
            return Some(Complex64::new(0.0, 0.0));
        }
        let denom = (d as f64) * q - w * dq;
        if denom.norm() == 0.0 || !denom.is_finite() || !q.is_finite() {
            return None;
        }
        Some(z * q / denom)
    }
}

/// All roots of a complex polynomial sum c_k z^k by the Aberth-Ehrlich
/// simultaneous iteration. Returns unpolished roots.
pub fn aberth_roots(coeffs: &[Complex64]) -> Result<Vec<Complex64>> {
    // strip exact zero leading terms
    let mut hi = coeffs.len();
    while hi > 0 && coeffs[hi - 1].norm() == 0.0 {
        hi -= 1;
    }
    if hi <= 1 {
        return Ok(Vec::new());
    }
    let c = &coeffs[..hi];
    let deg = c.len() - 1;

    // geometric-mean root radius |c_0 / c_d|^{1/d}, clamped
    let radius = if c[0].norm() > 0.0 {
        (c[0].norm() / c[deg].norm()).powf(1.0 / deg as f64)
    } else {
        1.0
    }
    .clamp(1e-3, 1e3);

    // initial guesses on a slightly irrational spiral around that radius
    let golden = 2.0 * std::f64::consts::PI * 0.381966011250105;
    let mut z: Vec<Complex64> = (0..deg)
        .map(|i| {
            let ang = golden * i as f64 + 0.7;
            let r = radius * (0.8 + 0.4 * (i as f64 + 1.0) / deg as f64);
            Complex64::new(r * ang.cos(), r * ang.sin())
        })
        .collect();

    let mut converged = vec![false; deg];
    for _ in 0..300 {
        let mut moved: f64 = 0.0;
        for i in 0..deg {
            if converged[i] {
                continue;
            }
            let newton = match newton_ratio(c, z[i]) {
                Some(n) => n,
                None => {
                    // degenerate configuration: rotate slightly, retry next sweep
                    z[i] *= Complex64::new(0.0, 1e-3).exp() * 0.999;
                    continue;
                }
            };
            if newton.norm() == 0.0 {
                converged[i] = true;
                continue;
            }
            let mut repel = Complex64::new(0.0, 0.0);
            for (j, &zj) in z.iter().enumerate() {
                if j != i {
                    let d = z[i] - zj;
                    if d.norm() > 1e-300 {
                        repel += d.inv();
                    }
                }
            }
            let denom = Complex64::new(1.0, 0.0) - newton * repel;
            let step = if denom.norm() > 1e-300 {
                newton / denom
            } else {
                newton
            };
            z[i] -= step;
            if !z[i].is_finite() {
                // runaway iterate: restart on the estimate circle
                z[i] = Complex64::new(
                    radius * (0.3 + i as f64).cos(),
                    radius * (0.7 + i as f64).sin(),
                );
                continue;
            }
            let rel = step.norm() / (1.0 + z[i].norm());
            moved = moved.max(rel);
            if rel < 1e-14 {
                converged[i] = true;
            }
        }
        if moved < 1e-14 {
            break;
        }
    }
    Ok(z)
}

/// Residual tolerance after Newton refinement.
pub const ZERO_RESIDUAL_TOL: f64 = 1e-8;
/// Roots closer than this are clustered into one zero with multiplicity.
pub const CLUSTER_TOL: f64 = 1e-8;

/// Find all zeros of the trigonometric polynomial on one period cylinder.
pub fn complex_zeros(p: &TrigPolynomial) -> Result<ZeroSet> {
    let n = p.degree();
    let top_zero = p.a[n].norm() == 0.0 && p.b[n].norm() == 0.0;
    if n == 0 || top_zero {
        return Err(Error::DegenerateLeadingCoefficient);
    }
    let c = p.algebraic_coefficients();
    // roots at z = 0 correspond to xi -> +inf: not cylinder zeros
    let trailing = c.iter().take_while(|v| v.norm() == 0.0).count();
    let alg = aberth_roots(&c[trailing..])?;

    let mut zeros = Vec::with_capacity(alg.len());
    let mut residuals = Vec::with_capacity(alg.len());
    let mut unconverged = 0usize;
    // scale for the residual test: polynomial coefficients at tube height
    let coeff_scale: f64 =
        p.a.iter()
            .zip(&p.b)
            .map(|(x, y)| x.norm() + y.norm())
            .sum::<f64>()
            .max(1.0);
    // beyond this height the trigonometric evaluation overflows; roots there
    // are spurious stragglers of the algebraic solve
    let height_guard = 600.0 / n as f64;
    for zr in alg {
        if zr.norm() < 1e-300 || !zr.is_finite() {
            unconverged += 1;
            continue;
        }
        // zeta = -i log z, x reduced to [0, 2 pi)
        let mut zeta = Complex64::new(zr.arg(), -zr.norm().ln());
        // Newton polish on the trigonometric form, step cap 1e-12
        if zeta.im.abs() <= height_guard {
            for _ in 0..50 {
                let f = p.eval(zeta);
                let df = p.eval_deriv(zeta);
                if df.norm() < 1e-300 || !f.is_finite() || !df.is_finite() {
                    break;
                }
                let step = f / df;
                if !(zeta - step).is_finite() {
                    break;
                }
                zeta -= step;
                if step.norm() < 1e-12 * (1.0 + zeta.norm()) {
                    break;
                }
            }
        }
        zeta.re = zeta.re.rem_euclid(std::f64::consts::TAU);
        // residual relative to the local scale of the polynomial at this height
        let local = coeff_scale * (p.degree() as f64 * zeta.im.abs()).exp();
        let res = if zeta.is_finite() {
            p.eval(zeta).norm() / local
        } else {
            f64::INFINITY
        };
        if res.is_nan() || res > ZERO_RESIDUAL_TOL {
            unconverged += 1;
        }
        zeros.push(zeta);
        residuals.push(res);
    }
    // sort for determinism and cluster multiplicities
    let mut idx: Vec<usize> = (0..zeros.len()).collect();
    idx.sort_by(|&i, &j| {
        zeros[i]
            .re
            .total_cmp(&zeros[j].re)
            .then(zeros[i].im.total_cmp(&zeros[j].im))
    });
    let zeros: Vec<Complex64> = idx.iter().map(|&i| zeros[i]).collect();
    let residuals: Vec<f64> = idx.iter().map(|&i| residuals[i]).collect();
    let mut multiplicities = vec![1usize; zeros.len()];
    for i in 0..zeros.len() {
        let mut mult = 1;
        for (j, zj) in zeros.iter().enumerate() {
            if j != i && (zeros[i] - zj).norm() < CLUSTER_TOL {
                mult += 1;
            }
        }
        multiplicities[i] = mult;
    }
    Ok(ZeroSet {
        zeros,
        degree: n,
        residuals,
        multiplicities,
        unconverged,
    })
}

/// Named C^2 test functions on the cylinder annulus |xi| <= xi0, product
/// form g(x) h(xi) with periodic g and a compactly supported quartic bump h,
/// so the Laplacian is available in closed form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TestFunction {
    /// g = 1, h = (1 - (xi/xi0)^2)^4.
    Bump { xi0: f64 },
    /// g = 1 + cos_amp cos x, same bump in xi.
    CosineBump { xi0: f64, cos_amp: f64 },
}

impl TestFunction {
    pub fn xi0(&self) -> f64 {
        match *self {
            TestFunction::Bump { xi0 } => xi0,
            TestFunction::CosineBump { xi0, .. } => xi0,
        }
    }

    fn g(&self, x: f64) -> f64 {
        match *self {
            TestFunction::Bump { .. } => 1.0,
            TestFunction::CosineBump { cos_amp, .. } => 1.0 + cos_amp * x.cos(),
        }
    }

    fn gpp(&self, x: f64) -> f64 {
        match *self {
            TestFunction::Bump { .. } => 0.0,
            TestFunction::CosineBump { cos_amp, .. } => -cos_amp * x.cos(),
        }
    }

    fn h(&self, xi: f64) -> f64 {
        let u = xi / self.xi0();
        if u.abs() >= 1.0 {
            0.0
        } else {
            (1.0 - u * u).powi(4)
        }
    }

    fn hpp(&self, xi: f64) -> f64 {
        let xi0 = self.xi0();
        let u = xi / xi0;
        if u.abs() >= 1.0 {
            0.0
        } else {
            let w = 1.0 - u * u;
            w * w * (-8.0 * w + 48.0 * u * u) / (xi0 * xi0)
        }
    }

    pub fn value(&self, x: f64, xi: f64) -> f64 {
        self.g(x) * self.h(xi)
    }

    pub fn laplacian(&self, x: f64, xi: f64) -> f64 {
        self.gpp(x) * self.h(xi) + self.g(x) * self.hpp(xi)
    }

    /// Exact pairing of this test function against the limit current
    /// (i/pi) ddbar |xi|: (1/pi) int f(x, 0) dx.
    pub fn limit_current_pairing(&self) -> f64 {
        match *self {
            TestFunction::Bump { .. } => 2.0,
            // int (1 + c cos x) dx / pi = 2
            TestFunction::CosineBump { .. } => 2.0,
        }
    }
}

/// Root-sum pairing (1/lambda) sum_k f(zeta_k) of the normalized zero
/// current against a test function. Non-finite (unconverged) roots cannot
/// lie in the compactly supported test function and are skipped.
pub fn zero_current_pairing(zs: &ZeroSet, lambda: f64, f: &TestFunction) -> f64 {
    zs.zeros
        .iter()
        .filter(|z| z.is_finite())
        .map(|z| f.value(z.re, z.im))
        .sum::<f64>()
        / lambda
}

/// ddbar-quadrature pairing through the Poincare-Lelong identity: the
/// Laplacian is moved onto the test function,
/// (1/(4 pi lambda)) int log |phi|^2 Delta f dx dxi over the annulus.
pub fn ddbar_log_pairing<F>(phi: F, lambda: f64, f: &TestFunction, nx: usize, nxi: usize) -> f64
where
    F: Fn(Complex64) -> Complex64 + Sync,
{
    let xi0 = f.xi0();
    let hx = std::f64::consts::TAU / nx as f64;
    let hxi = 2.0 * xi0 / nxi as f64;
    let rows = par::map_indexed(nxi + 1, |j| {
        let xi = -xi0 + j as f64 * hxi;
        let wxi = if j == 0 || j == nxi { 0.5 } else { 1.0 };
        let mut acc = 0.0;
        for i in 0..nx {
            let x = i as f64 * hx;
            let lap = f.laplacian(x, xi);
            if lap == 0.0 {
                continue;
            }
            let v = phi(Complex64::new(x, xi));
            let m = v.norm_sqr();
            if m > 0.0 {
                acc += m.ln() * lap;
            }
        }
        acc * wxi
    });
    let integral: f64 = rows.iter().sum::<f64>() * hx * hxi;
    integral / (4.0 * std::f64::consts::PI * lambda)
}

/// A unit-norm Gaussian random combination of basis modes over a window.
#[derive(Debug, Clone)]
pub struct RandomWave {
    pub coefficients: Vec<f64>,
    modes: Vec<Eigenmode>,
}

impl RandomWave {
    pub fn eval_complex(&self, zeta: Complex64) -> Complex64 {
        self.trig().eval(zeta)
    }

    /// Present the wave as a trigonometric polynomial on the circle.
    pub fn trig(&self) -> TrigPolynomial {
        let n = self
            .modes
            .iter()
            .map(|m| m.frequency.round() as usize)
            .max()
            .unwrap_or(0);
        let mut a = vec![Complex64::new(0.0, 0.0); n + 1];
        let mut b = vec![Complex64::new(0.0, 0.0); n + 1];
        for (c, m) in self.coefficients.iter().zip(&self.modes) {
            let w = c * m.norm_constant();
            match &m.quantum {
                Quantum::Constant => a[0] += w,
                Quantum::Torus { k, parity } => {
                    let kk = k[0].unsigned_abs() as usize;
                    match parity {
                        Parity::Cosine => a[kk] += w,
                        Parity::Sine => b[kk] += w,
                        Parity::Constant => a[0] += w,
                    }
                }
                Quantum::Sphere { .. } => unreachable!("random waves are circle-model"),
            }
        }
        TrigPolynomial { a, b }
    }
}

/// Draw a random wave on the circle over the window: unit-norm real
/// Gaussian coefficients, deterministic per seed.
pub fn random_wave(basis: &[Eigenmode], window: &SpectralWindow, seed: u64) -> Result<RandomWave> {
    let sel: Vec<Eigenmode> = basis
        .iter()
        .filter(|m| window.contains(m.frequency))
        .cloned()
        .collect();
    if sel.is_empty() {
        return Err(Error::EmptyWindow {
            lo: window.lo,
            hi: window.hi,
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut coeffs: Vec<f64> = (0..sel.len()).map(|_| standard_normal(&mut rng)).collect();
    let norm = coeffs.iter().map(|c| c * c).sum::<f64>().sqrt();
    for c in coeffs.iter_mut() {
        *c /= norm;
    }
    Ok(RandomWave {
        coefficients: coeffs,
        modes: sel,
    })
}

fn standard_normal(rng: &mut ChaCha8Rng) -> f64 {
    use rand::Rng;
    loop {
        let u1: f64 = rng.gen();
        let u2: f64 = rng.gen();
        if u1 > f64::MIN_POSITIVE {
            return (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos();
        }
    }
}

/// Random-wave zero statistics over a seed ensemble: mean over seeds of the
/// normalized pairing and of tail-robust |Im zeta| scale measures.
#[derive(Debug, Clone)]
pub struct EnsembleStats {
    pub degree: usize,
    pub seeds: usize,
    /// mean over seeds of (1/N) sum_k f(zeta_k).
    pub mean_pairing: f64,
    /// mean over seeds of (1/N) sum_k |Im zeta_k| (raw, log-corrected tail).
    pub mean_abs_im: f64,
    /// mean over seeds of the 10%-trimmed version (drops the largest decile),
    /// which tracks the bulk concentration scale c/N.
    pub mean_abs_im_trimmed: f64,
}

/// Run a seed ensemble of random circle waves of trig degree `n` and collect
/// zero statistics. Seeds are derived from `master_seed` by a fixed split.
pub fn random_wave_ensemble(
    n: usize,
    n_seeds: usize,
    master_seed: u64,
    f: &TestFunction,
) -> Result<EnsembleStats> {
    let model = ModelManifold::circle();
    let basis = enumerate_spectrum(&EigenbasisSpec::new(model, n as f64 + 0.5))?;
    let window = SpectralWindow::long(n as f64 + 0.5)?;
    let stats = par::map_indexed(n_seeds, |s| {
        let wave = random_wave(&basis, &window, split_seed(master_seed, s as u64))?;
        let zs = complex_zeros(&wave.trig())?;
        if zs.unconverged > 0 || zs.zeros.len() != 2 * n {
            return Err(Error::NonConvergence {
                unconverged: zs.unconverged.max(1),
            });
        }
        let pairing = zero_current_pairing(&zs, n as f64, f);
        let mut ims: Vec<f64> = zs.zeros.iter().map(|z| z.im.abs()).collect();
        ims.sort_by(|a, b| a.total_cmp(b));
        let total: f64 = ims.iter().sum();
        let keep = (ims.len() * 9) / 10;
        let trimmed: f64 = ims[..keep].iter().sum();
        Ok::<_, Error>((pairing, total / n as f64, trimmed / n as f64))
    });
    let mut mp = 0.0;
    let mut mi = 0.0;
    let mut mt = 0.0;
    for s in &stats {
        let (p, i, t) = s.clone()?;
        mp += p;
        mi += i;
        mt += t;
    }
    let k = n_seeds as f64;
    Ok(EnsembleStats {
        degree: n,
        seeds: n_seeds,
        mean_pairing: mp / k,
        mean_abs_im: mi / k,
        mean_abs_im_trimmed: mt / k,
    })
}
