//! Orthonormal eigenbases on the circle, flat tori and the 2-sphere, and
//! their analytic continuations to the Grauert tube.
//!
//! Tori use real cosine/sine modes; the sphere uses real spherical
//! harmonics evaluated as solid harmonic polynomials restricted to the
//! quadric, which keeps the continuation exactly holomorphic. The
//! associated-Legendre three-term recurrence is used at the evaluation
//! point, never as a stored coefficient table.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::geometry::{ComplexPoint, ModelKind, ModelManifold};

/// Parity tag for torus modes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Parity {
    Constant,
    Cosine,
    Sine,
}

/// Quantum numbers of one mode.
#[derive(Debug, Clone, PartialEq)]
pub enum Quantum {
    /// Constant mode (any model).
    Constant,
    /// Torus/circle lattice mode: frequency 2 pi |k| / period.
    Torus { k: Vec<i64>, parity: Parity },
    /// Real spherical harmonic of degree l; m >= 0 is cosine type,
    /// m < 0 is sine type of order |m|.
    Sphere { l: u32, m: i32 },
}

/// One orthonormal-basis eigenfunction with its analytic continuation.
#[derive(Debug, Clone, PartialEq)]
pub struct Eigenmode {
    pub model: ModelManifold,
    /// Frequency lambda_j, the square root of the Delta-eigenvalue.
    pub frequency: f64,
    pub quantum: Quantum,
    norm: f64,
}

/// Enumeration request: every mode with frequency <= lambda_max, in
/// nondecreasing frequency order with lexicographic tie-break.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenbasisSpec {
    pub model: ModelManifold,
    pub lambda_max: f64,
}

impl EigenbasisSpec {
    pub fn new(model: ModelManifold, lambda_max: f64) -> Self {
        EigenbasisSpec { model, lambda_max }
    }
}

fn ln_factorial(n: u64) -> f64 {
    (2..=n).map(|k| (k as f64).ln()).sum()
}

/// Enumerate the full orthonormal basis up to `lambda_max`.
pub fn enumerate_spectrum(spec: &EigenbasisSpec) -> Result<Vec<Eigenmode>> {
    if spec.lambda_max <= 0.0 {
        return Err(Error::InvalidArgument("lambda_max must be positive".into()));
    }
    let model = spec.model;
    let mut modes = Vec::new();
    match model.kind {
        ModelKind::Circle | ModelKind::FlatTorus => {
            let d = model.dim;
            let period = model.scale;
            let omega = std::f64::consts::TAU / period;
            let vol = period.powi(d as i32);
            modes.push(Eigenmode {
                model,
                frequency: 0.0,
                quantum: Quantum::Constant,
                norm: 1.0 / vol.sqrt(),
            });
            let kmax = (spec.lambda_max / omega).floor() as i64;
            let mut lattice: Vec<Vec<i64>> = Vec::new();
            let mut k = vec![-kmax; d];
            'outer: loop {
                let norm2: i64 = k.iter().map(|&a| a * a).sum();
                let freq = omega * (norm2 as f64).sqrt();
                if norm2 > 0 && freq <= spec.lambda_max && lex_positive(&k) {
                    lattice.push(k.clone());
                }
                for i in (0..d).rev() {
                    k[i] += 1;
                    if k[i] <= kmax {
                        continue 'outer;
                    }
                    k[i] = -kmax;
                }
                break;
            }
            let norm = (2.0 / vol).sqrt();
            for k in lattice {
                let freq = omega * (k.iter().map(|&a| (a * a) as f64).sum::<f64>()).sqrt();
                for parity in [Parity::Cosine, Parity::Sine] {
                    modes.push(Eigenmode {
                        model,
                        frequency: freq,
                        quantum: Quantum::Torus {
                            k: k.clone(),
                            parity,
                        },
                        norm,
                    });
                }
            }
        }
        ModelKind::Sphere => {
            if model.dim != 2 {
                return Err(Error::ModelUnsupported(
                    "explicit eigenbasis implemented for S^2 only".into(),
                ));
            }
            let mut l: u32 = 0;
            loop {
                let freq = (l as f64 * (l as f64 + 1.0)).sqrt();
                if freq > spec.lambda_max {
                    break;
                }
                for m in -(l as i32)..=(l as i32) {
                    modes.push(Eigenmode {
                        model,
                        frequency: freq,
                        quantum: Quantum::Sphere { l, m },
                        norm: sphere_norm(l, m),
                    });
                }
                l += 1;
            }
        }
        ModelKind::Hyperbolic => {
            return Err(Error::ModelUnsupported(
                "no explicit compact eigenbasis on the hyperbolic model".into(),
            ));
        }
    }
    modes.sort_by(|a, b| {
        a.frequency
            .partial_cmp(&b.frequency)
            .unwrap()
            .then_with(|| quantum_key(&a.quantum).cmp(&quantum_key(&b.quantum)))
    });
    Ok(modes)
}

fn lex_positive(k: &[i64]) -> bool {
    for &a in k {
        if a > 0 {
            return true;
        }
        if a < 0 {
            return false;
        }
    }
    false
}

fn quantum_key(q: &Quantum) -> (Vec<i64>, u8) {
    match q {
        Quantum::Constant => (vec![], 0),
        Quantum::Torus { k, parity } => (
            k.clone(),
            match parity {
                Parity::Constant => 0,
                Parity::Cosine => 1,
                Parity::Sine => 2,
            },
        ),
        Quantum::Sphere { l, m } => (vec![*l as i64, *m as i64], 0),
    }
}

/// Normalization constant of the real spherical harmonic (l, m) in the
/// convention Y = N * Re/Im((x+iy)^|m|) * d^|m| P_l(z), including the
/// sectoral double factorial so the recurrence can start at 1.
fn sphere_norm(l: u32, m: i32) -> f64 {
    let ma = m.unsigned_abs() as u64;
    let l = l as u64;
    // ln N^2 = ln(2l+1) - ln(4 pi) + ln (l-m)! - ln (l+m)! [+ ln 2 for m != 0]
    let mut ln_n2 = ((2 * l + 1) as f64).ln() - (4.0 * std::f64::consts::PI).ln()
        + ln_factorial(l - ma)
        - ln_factorial(l + ma);
    if ma > 0 {
        ln_n2 += std::f64::consts::LN_2;
    }
    // double factorial (2m-1)!! absorbed from the recurrence seed
    let ln_dfact = ln_factorial(2 * ma) - ma as f64 * std::f64::consts::LN_2 - ln_factorial(ma);
    (0.5 * ln_n2 + ln_dfact).exp()
}

/// Legendre polynomial P_l at a complex argument by forward three-term
/// recurrence; exact polynomial identity, entire in w.
pub fn legendre_complex(l: u32, w: Complex64) -> Complex64 {
    let one = Complex64::new(1.0, 0.0);
    if l == 0 {
        return one;
    }
    let mut pm = one;
    let mut pc = w;
    for k in 1..l as u64 {
        let kf = k as f64;
        let pn = ((2.0 * kf + 1.0) * w * pc - kf * pm) / (kf + 1.0);
        pm = pc;
        pc = pn;
    }
    pc
}

/// Scaled derivative-Legendre recurrence: returns d^m P_l / dw^m at w,
/// divided by (2m-1)!!, as (mantissa, binary exponent). The recurrence
/// (l-m+1) D_{l+1} = (2l+1) w D_l - (l+m) D_{l-1} is seeded with
/// D_{m,m}/(2m-1)!! = 1 and rescaled to avoid overflow.
fn legendre_deriv_scaled(l: u32, m: u32, w: Complex64) -> (Complex64, i64) {
    debug_assert!(m <= l);
    let mut exp: i64 = 0;
    let mut prev = Complex64::new(0.0, 0.0);
    let mut curr = Complex64::new(1.0, 0.0);
    let mf = m as f64;
    for j in m..l {
        let jf = j as f64;
        let next = ((2.0 * jf + 1.0) * w * curr - (jf + mf) * prev) / (jf - mf + 1.0);
        prev = curr;
        curr = next;
        let a = curr.norm().max(prev.norm());
        if a > 1e200 {
            curr *= 1e-200;
            prev *= 1e-200;
            exp += 1;
        }
    }
    (curr, exp)
}

const SCALE_LN: f64 = 460.51701859880916_f64; // ln(1e200)

impl Eigenmode {
    pub fn norm_constant(&self) -> f64 {
        self.norm
    }

    /// Evaluate the mode at a real point of the model. `x` holds model
    /// coordinates (torus coordinates, or ambient coordinates on the quadric).
    pub fn eval_real(&self, x: &[f64]) -> f64 {
        match &self.quantum {
            Quantum::Constant => self.norm,
            Quantum::Torus { k, parity } => {
                let omega = std::f64::consts::TAU / self.model.scale;
                let phase: f64 = omega * k.iter().zip(x).map(|(&a, &b)| a as f64 * b).sum::<f64>();
                match parity {
                    Parity::Cosine => self.norm * phase.cos(),
                    Parity::Sine => self.norm * phase.sin(),
                    Parity::Constant => self.norm,
                }
            }
            Quantum::Sphere { .. } => {
                let coords: Vec<Complex64> = x.iter().map(|&a| Complex64::new(a, 0.0)).collect();
                self.eval_coords(&coords, 0.0).re
            }
        }
    }

    /// Analytic continuation phi^C(zeta).
    pub fn eval_complex(&self, zeta: &ComplexPoint) -> Result<Complex64> {
        self.check_point(zeta)?;
        Ok(self.eval_coords(&zeta.coords, 0.0))
    }

    /// Damped continuation e^{-tau lambda} phi^C(zeta), evaluated without
    /// forming the two overflowing factors separately. This is the stable
    /// path for tempered sums with tau >= sqrt(rho)(zeta).
    pub fn eval_damped(&self, zeta: &ComplexPoint, tau: f64) -> Result<Complex64> {
        self.check_point(zeta)?;
        Ok(self.eval_coords(&zeta.coords, tau))
    }

    /// log |phi^C(zeta)|^2, computed in the log domain so it stays finite
    /// where the plain evaluation would overflow.
    pub fn log_abs2(&self, zeta: &ComplexPoint) -> Result<f64> {
        self.check_point(zeta)?;
        match &self.quantum {
            Quantum::Constant => Ok(2.0 * self.norm.ln()),
            Quantum::Torus { k, parity } => {
                let omega = std::f64::consts::TAU / self.model.scale;
                let theta: Complex64 = omega
                    * k.iter()
                        .zip(&zeta.coords)
                        .map(|(&a, b)| a as f64 * b)
                        .sum::<Complex64>();
                let (a2, b) = (2.0 * theta.re, theta.im.abs());
                // |cos theta|^2 = (cosh 2b + cos 2a)/2, factored at e^{2b}
                let sign = match parity {
                    Parity::Sine => -1.0,
                    _ => 1.0,
                };
                let inner =
                    0.25 * (1.0 + (-4.0 * b).exp()) + 0.5 * sign * (-2.0 * b).exp() * a2.cos();
                Ok(2.0 * b + inner.ln() + 2.0 * self.norm.ln())
            }
            Quantum::Sphere { l, m } => {
                let (val, ln_shift) = self.sphere_value_scaled(&zeta.coords, *l, *m, 0.0);
                Ok(2.0 * (val.norm().ln() + ln_shift))
            }
        }
    }

    fn check_point(&self, zeta: &ComplexPoint) -> Result<()> {
        if zeta.model != self.model {
            return Err(Error::InvalidArgument(
                "point belongs to a different model".into(),
            ));
        }
        Ok(())
    }

    fn eval_coords(&self, coords: &[Complex64], tau: f64) -> Complex64 {
        match &self.quantum {
            Quantum::Constant => Complex64::new(self.norm * (-tau * self.frequency).exp(), 0.0),
            Quantum::Torus { k, parity } => {
                let omega = std::f64::consts::TAU / self.model.scale;
                let theta: Complex64 = omega
                    * k.iter()
                        .zip(coords)
                        .map(|(&a, b)| a as f64 * b)
                        .sum::<Complex64>();
                let damp = tau * self.frequency;
                let i = Complex64::i();
                // e^{-tau lambda} cos/sin via the exponential split: both
                // exponents have nonpositive real part on-shell.
                let ep = (i * theta - damp).exp();
                let em = (-i * theta - damp).exp();
                match parity {
                    Parity::Cosine => self.norm * 0.5 * (ep + em),
                    Parity::Sine => self.norm * 0.5 * (ep - em) * -i,
                    Parity::Constant => Complex64::new(self.norm * (-damp).exp(), 0.0),
                }
            }
            Quantum::Sphere { l, m } => {
                let (val, ln_shift) = self.sphere_value_scaled(coords, *l, *m, tau);
                val * ln_shift.exp()
            }
        }
    }

    /// Sphere harmonic as (value, ln scale): result = value * e^{ln_shift}.
    fn sphere_value_scaled(
        &self,
        coords: &[Complex64],
        l: u32,
        m: i32,
        tau: f64,
    ) -> (Complex64, f64) {
        let ma = m.unsigned_abs();
        let (d, dexp) = legendre_deriv_scaled(l, ma, coords[2]);
        let ln_norm = self.norm.ln() - tau * self.frequency + dexp as f64 * SCALE_LN;
        if ma == 0 {
            return (d, ln_norm);
        }
        let wp = coords[0] + Complex64::i() * coords[1];
        let wm = coords[0] - Complex64::i() * coords[1];
        // (wp^m +- wm^m)/2 with the magnitude pulled into the exponent
        let lp = if wp.norm() > 0.0 {
            ma as f64 * wp.ln()
        } else {
            Complex64::new(f64::NEG_INFINITY, 0.0)
        };
        let lm = if wm.norm() > 0.0 {
            ma as f64 * wm.ln()
        } else {
            Complex64::new(f64::NEG_INFINITY, 0.0)
        };
        let shift = lp.re.max(lm.re);
        let ep = if lp.re.is_finite() {
            (lp - shift).exp()
        } else {
            Complex64::new(0.0, 0.0)
        };
        let em = if lm.re.is_finite() {
            (lm - shift).exp()
        } else {
            Complex64::new(0.0, 0.0)
        };
        let ang = if m > 0 {
            0.5 * (ep + em)
        } else {
            -Complex64::i() * 0.5 * (ep - em)
        };
        (ang * d, ln_norm + shift)
    }
}
