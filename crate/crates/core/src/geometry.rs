//! Model manifolds, complexified distance, the Grauert tube function,
//! the imaginary-time exponential map and complexified geodesic flow.
//!
//! Models are the explicitly solvable geometries: the circle (period 2*pi),
//! flat tori (period `scale` per coordinate), the round sphere as the
//! quadric z.z = 1 in C^{n+1}, and the hyperboloid <z,z>_L = -1. All
//! operations are closed-form and pure; branch choices follow principal
//! branches throughout, with the square root of r^2_C(zeta, conj zeta)
//! taken so that sqrt(rho) >= 0.

use num_complex::Complex64;

use crate::error::{Error, Result};

const QUADRIC_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModelKind {
    Circle,
    FlatTorus,
    Sphere,
    Hyperbolic,
}

impl ModelKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            ModelKind::Circle => "circle",
            ModelKind::FlatTorus => "flat-torus",
            ModelKind::Sphere => "sphere",
            ModelKind::Hyperbolic => "hyperbolic",
        }
    }
}

/// A solvable model geometry: kind, space dimension n, and scale
/// (circumference for the circle, period for flat tori; spheres and
/// hyperboloids are fixed at unit radius).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelManifold {
    pub kind: ModelKind,
    pub dim: usize,
    pub scale: f64,
}

impl ModelManifold {
    /// The unit circle with circumference 2*pi.
    pub fn circle() -> Self {
        ModelManifold {
            kind: ModelKind::Circle,
            dim: 1,
            scale: std::f64::consts::TAU,
        }
    }

    /// Flat torus R^dim / (period Z)^dim, period 1 by convention.
    pub fn flat_torus(dim: usize) -> Result<Self> {
        Self::flat_torus_with_period(dim, 1.0)
    }

    pub fn flat_torus_with_period(dim: usize, period: f64) -> Result<Self> {
        if dim < 1 {
            return Err(Error::InvalidArgument(
                "torus dimension must be >= 1".into(),
            ));
        }
        if period <= 0.0 {
            return Err(Error::InvalidArgument(
                "torus period must be positive".into(),
            ));
        }
        Ok(ModelManifold {
            kind: ModelKind::FlatTorus,
            dim,
            scale: period,
        })
    }

    /// Round unit sphere S^dim embedded as the quadric z.z = 1 in C^{dim+1}.
    pub fn sphere(dim: usize) -> Result<Self> {
        if dim < 1 {
            return Err(Error::InvalidArgument(
                "sphere dimension must be >= 1".into(),
            ));
        }
        Ok(ModelManifold {
            kind: ModelKind::Sphere,
            dim,
            scale: 1.0,
        })
    }

    /// Hyperbolic space H^dim as the Lorentz quadric <z,z>_L = -1.
    pub fn hyperbolic(dim: usize) -> Result<Self> {
        if dim < 1 {
            return Err(Error::InvalidArgument(
                "hyperbolic dimension must be >= 1".into(),
            ));
        }
        Ok(ModelManifold {
            kind: ModelKind::Hyperbolic,
            dim,
            scale: 1.0,
        })
    }

    /// Number of ambient coordinates a point of this model carries.
    pub fn ambient_dim(&self) -> usize {
        match self.kind {
            ModelKind::Circle | ModelKind::FlatTorus => self.dim,
            ModelKind::Sphere | ModelKind::Hyperbolic => self.dim + 1,
        }
    }

    /// Riemannian volume of the model (used for L^2 normalization).
    pub fn volume(&self) -> f64 {
        match self.kind {
            ModelKind::Circle => self.scale,
            ModelKind::FlatTorus => self.scale.powi(self.dim as i32),
            ModelKind::Sphere => sphere_volume(self.dim),
            ModelKind::Hyperbolic => f64::INFINITY,
        }
    }

    /// Injectivity-type bound on the imaginary fiber |xi|_g for exp_imaginary.
    pub fn fiber_bound(&self) -> f64 {
        match self.kind {
            ModelKind::Circle | ModelKind::FlatTorus => f64::INFINITY,
            ModelKind::Sphere => std::f64::consts::PI,
            // cos(s) x + i sin(s) v leaves the physical sheet at s = pi/2
            ModelKind::Hyperbolic => std::f64::consts::FRAC_PI_2,
        }
    }
}

/// Surface volume of the round unit n-sphere.
pub fn sphere_volume(n: usize) -> f64 {
    // Vol(S^n) = 2 pi^{(n+1)/2} / Gamma((n+1)/2); avoid a gamma dependency
    // with the integer/half-integer recursion.
    let mut g = if n % 2 == 1 {
        // (n+1)/2 integer
        let k = n.div_ceil(2);
        (1..k).map(|j| j as f64).product::<f64>()
    } else {
        // Gamma(1/2 + k) = (2k-1)!!/2^k sqrt(pi), k = n/2
        let k = n.div_ceil(2);
        let mut v = std::f64::consts::PI.sqrt();
        for j in 0..k {
            v *= j as f64 + 0.5;
        }
        v
    };
    if g == 0.0 {
        g = 1.0;
    }
    2.0 * std::f64::consts::PI.powf((n as f64 + 1.0) / 2.0) / g
}

/// Tube coordinates (x, xi) of a complexified point: base point and
/// cotangent fiber with |xi|_g in length units.
#[derive(Debug, Clone, PartialEq)]
pub struct TubeCoords {
    pub base: Vec<f64>,
    pub fiber: Vec<f64>,
}

/// A point of the complexified model in ambient/model coordinates,
/// optionally carrying the tube coordinates it came from.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexPoint {
    pub model: ModelManifold,
    pub coords: Vec<Complex64>,
    pub tube: Option<TubeCoords>,
}

impl ComplexPoint {
    /// Wrap raw model coordinates, reducing torus real parts mod the lattice.
    pub fn from_coords(model: ModelManifold, mut coords: Vec<Complex64>) -> Result<Self> {
        if coords.len() != model.ambient_dim() {
            return Err(Error::DimensionMismatch {
                expected: model.ambient_dim(),
                got: coords.len(),
            });
        }
        match model.kind {
            ModelKind::Circle | ModelKind::FlatTorus => {
                for c in coords.iter_mut() {
                    c.re = c.re.rem_euclid(model.scale);
                }
            }
            ModelKind::Sphere => {
                let r = (dot(&coords, &coords) - 1.0).norm();
                if r > QUADRIC_TOL {
                    return Err(Error::OutsideTube {
                        reason: format!("quadric residual |z.z - 1| = {r:.3e}"),
                    });
                }
            }
            ModelKind::Hyperbolic => {
                let r = (lorentz_dot(&coords, &coords) + 1.0).norm();
                if r > QUADRIC_TOL {
                    return Err(Error::OutsideTube {
                        reason: format!("Lorentz quadric residual = {r:.3e}"),
                    });
                }
            }
        }
        Ok(ComplexPoint {
            model,
            coords,
            tube: None,
        })
    }

    /// A real point of the model.
    pub fn real_point(model: ModelManifold, x: &[f64]) -> Result<Self> {
        let coords = x.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        let mut p = Self::from_coords(model, coords)?;
        p.tube = Some(TubeCoords {
            base: x.to_vec(),
            fiber: vec![0.0; x.len()],
        });
        Ok(p)
    }

    /// Complex conjugate point (conjugates every coordinate).
    pub fn conj(&self) -> Self {
        ComplexPoint {
            model: self.model,
            coords: self.coords.iter().map(|c| c.conj()).collect(),
            tube: None,
        }
    }

    /// Single-coordinate cylinder value x + i xi for the circle model.
    pub fn cylinder(&self) -> Complex64 {
        self.coords[0]
    }
}

/// A point of the complexified cotangent bundle.
#[derive(Debug, Clone, PartialEq)]
pub struct PhasePoint {
    pub position: Vec<Complex64>,
    pub momentum: Vec<Complex64>,
}

impl PhasePoint {
    pub fn new(position: Vec<Complex64>, momentum: Vec<Complex64>) -> Self {
        PhasePoint { position, momentum }
    }

    /// Residual of the sphere phase-space constraints Z.Z = 1, Z.W = 0.
    pub fn sphere_constraint_residual(&self) -> f64 {
        let zz = (dot(&self.position, &self.position) - 1.0).norm();
        let zw = dot(&self.position, &self.momentum).norm();
        zz.max(zw)
    }
}

/// Bilinear (not Hermitian) dot product.
pub fn dot(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Bilinear Lorentz product of signature (n, 1): the last coordinate is time-like.
pub fn lorentz_dot(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    let n = a.len() - 1;
    let spatial: Complex64 = a[..n].iter().zip(&b[..n]).map(|(x, y)| x * y).sum();
    spatial - a[n] * b[n]
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Imaginary time exponential map E(x, xi) = exp_x(i xi) in model coordinates.
///
/// The tube fields of the result are populated with (x, xi).
pub fn exp_imaginary(model: &ModelManifold, x: &[f64], xi: &[f64]) -> Result<ComplexPoint> {
    let s = norm(xi);
    let bound = model.fiber_bound();
    if s >= bound {
        return Err(Error::FiberTooLarge { norm: s, bound });
    }
    let coords: Vec<Complex64> = match model.kind {
        ModelKind::Circle | ModelKind::FlatTorus => {
            if x.len() != model.dim || xi.len() != model.dim {
                return Err(Error::DimensionMismatch {
                    expected: model.dim,
                    got: x.len().max(xi.len()),
                });
            }
            x.iter()
                .zip(xi)
                .map(|(&a, &b)| Complex64::new(a, b))
                .collect()
        }
        ModelKind::Sphere => {
            check_sphere_frame(model, x, xi)?;
            if s == 0.0 {
                x.iter().map(|&a| Complex64::new(a, 0.0)).collect()
            } else {
                // analytic continuation of exp_x(t v) = cos(t) x + sin(t) v at t = i s
                let (ch, sh) = (s.cosh(), s.sinh());
                x.iter()
                    .zip(xi)
                    .map(|(&a, &b)| Complex64::new(ch * a, sh * b / s))
                    .collect()
            }
        }
        ModelKind::Hyperbolic => {
            check_hyperbolic_frame(model, x, xi)?;
            if s == 0.0 {
                x.iter().map(|&a| Complex64::new(a, 0.0)).collect()
            } else {
                // continuation of exp_x(t v) = cosh(t) x + sinh(t) v at t = i s
                let (c, sn) = (s.cos(), s.sin());
                x.iter()
                    .zip(xi)
                    .map(|(&a, &b)| Complex64::new(c * a, sn * b / s))
                    .collect()
            }
        }
    };
    let mut p = ComplexPoint::from_coords(*model, coords)?;
    p.tube = Some(TubeCoords {
        base: x.to_vec(),
        fiber: xi.to_vec(),
    });
    Ok(p)
}

fn check_sphere_frame(model: &ModelManifold, x: &[f64], xi: &[f64]) -> Result<()> {
    if x.len() != model.ambient_dim() || xi.len() != model.ambient_dim() {
        return Err(Error::DimensionMismatch {
            expected: model.ambient_dim(),
            got: x.len().max(xi.len()),
        });
    }
    let xx: f64 = x.iter().map(|a| a * a).sum();
    let xv: f64 = x.iter().zip(xi).map(|(a, b)| a * b).sum();
    if (xx - 1.0).abs() > QUADRIC_TOL || xv.abs() > QUADRIC_TOL * (1.0 + norm(xi)) {
        return Err(Error::InvalidArgument(
            "sphere frame requires |x| = 1 and x.xi = 0".into(),
        ));
    }
    Ok(())
}

fn check_hyperbolic_frame(model: &ModelManifold, x: &[f64], xi: &[f64]) -> Result<()> {
    if x.len() != model.ambient_dim() || xi.len() != model.ambient_dim() {
        return Err(Error::DimensionMismatch {
            expected: model.ambient_dim(),
            got: x.len().max(xi.len()),
        });
    }
    let n = x.len() - 1;
    let xx: f64 = x[..n].iter().map(|a| a * a).sum::<f64>() - x[n] * x[n];
    let xv: f64 = x[..n].iter().zip(&xi[..n]).map(|(a, b)| a * b).sum::<f64>() - x[n] * xi[n];
    if (xx + 1.0).abs() > QUADRIC_TOL || xv.abs() > QUADRIC_TOL * (1.0 + norm(xi)) {
        return Err(Error::InvalidArgument(
            "hyperboloid frame requires <x,x>_L = -1 and <x,xi>_L = 0".into(),
        ));
    }
    Ok(())
}

/// Value of the holomorphically extended squared distance, with a flag for
/// torus arguments that sit on the cut locus (equidistant lattice
/// representatives), where r^2 is continuous but not smooth.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct R2Value {
    pub value: Complex64,
    pub cut_locus: bool,
}

/// Holomorphic extension r^2_C(zeta, w) of the squared distance function.
pub fn r2_complex(model: &ModelManifold, zeta: &ComplexPoint, w: &ComplexPoint) -> Result<R2Value> {
    if zeta.model != *model || w.model != *model {
        return Err(Error::InvalidArgument(
            "both points must belong to the given model".into(),
        ));
    }
    match model.kind {
        ModelKind::Circle | ModelKind::FlatTorus => {
            let period = model.scale;
            let mut acc = Complex64::new(0.0, 0.0);
            let mut cut = false;
            for (a, b) in zeta.coords.iter().zip(&w.coords) {
                let mut d = a - b;
                // nearest lattice representative of the real part
                let mut re = d.re.rem_euclid(period);
                if re > period / 2.0 {
                    re -= period;
                }
                if (re.abs() - period / 2.0).abs() < 1e-12 {
                    cut = true;
                }
                d.re = re;
                acc += d * d;
            }
            Ok(R2Value {
                value: acc,
                cut_locus: cut,
            })
        }
        ModelKind::Sphere => {
            let c = dot(&zeta.coords, &w.coords);
            // principal arccos has its cuts on (-inf, -1] and [1, inf);
            // the square (arccos)^2 is single valued across [1, inf) but
            // genuinely two valued on (-inf, -1].
            if c.im.abs() < 1e-14 && c.re <= -1.0 {
                return Err(Error::BranchAmbiguity {
                    arg: format!("zeta.w = {c}"),
                });
            }
            let r = c.acos();
            Ok(R2Value {
                value: r * r,
                cut_locus: false,
            })
        }
        ModelKind::Hyperbolic => {
            let c = -lorentz_dot(&zeta.coords, &w.coords);
            // real distance: cosh r = -<x,y>_L; acosh branch point at c = 1,
            // cut on (-inf, 1]; the square is single valued across [1, inf).
            if c.im.abs() < 1e-14 && c.re <= -1.0 {
                return Err(Error::BranchAmbiguity {
                    arg: format!("-<zeta,w>_L = {c}"),
                });
            }
            let r = c.acosh();
            Ok(R2Value {
                value: r * r,
                cut_locus: false,
            })
        }
    }
}

/// Grauert tube function sqrt(rho)(zeta) = (1/2i) sqrt(r^2_C(zeta, conj zeta)),
/// with the branch that makes it nonnegative; zero exactly on the real locus.
pub fn grauert_rho(model: &ModelManifold, zeta: &ComplexPoint) -> Result<f64> {
    if model.kind == ModelKind::Hyperbolic {
        // The paper's hyperbolic tube-function formula is garbled; the model
        // supports distances, flows and kernels but not sqrt(rho).
        return Err(Error::ModelUnsupported(
            "grauert_rho on the hyperbolic model".into(),
        ));
    }
    let r2 = r2_complex(model, zeta, &zeta.conj())?.value;
    // r^2_C(zeta, conj zeta) is real and <= 0 on the tube; tolerate roundoff.
    let scale = 1.0 + r2.norm();
    if r2.im.abs() > 1e-9 * scale || r2.re > 1e-9 * scale {
        return Err(Error::OutsideTube {
            reason: format!("r^2_C(zeta, conj zeta) = {r2} is not <= 0"),
        });
    }
    Ok(0.5 * (-r2.re).max(0.0).sqrt())
}

/// Complexified geodesic flow G^t in closed form.
///
/// Torus: translation (zeta + t p, p). Sphere: rotation by cos/sin of
/// t sqrt(W.W); hyperboloid: cosh/sinh of t sqrt(<W,W>_L). The combinations
/// cos(t mu), sin(t mu)/mu and mu sin(t mu) are even in mu = sqrt(W.W), so
/// the flow is single valued and entire despite the square root.
pub fn geodesic_flow_complex(model: &ModelManifold, p: &PhasePoint, t: Complex64) -> PhasePoint {
    match model.kind {
        ModelKind::Circle | ModelKind::FlatTorus => {
            let position = p
                .position
                .iter()
                .zip(&p.momentum)
                .map(|(z, w)| z + t * w)
                .collect();
            PhasePoint::new(position, p.momentum.clone())
        }
        ModelKind::Sphere => {
            let q = dot(&p.momentum, &p.momentum);
            let (c, s_over_mu, mu_s) = rotation_coeffs(t, q);
            let position: Vec<Complex64> = p
                .position
                .iter()
                .zip(&p.momentum)
                .map(|(z, w)| c * z + s_over_mu * w)
                .collect();
            let momentum: Vec<Complex64> = p
                .position
                .iter()
                .zip(&p.momentum)
                .map(|(z, w)| -mu_s * z + c * w)
                .collect();
            PhasePoint::new(position, momentum)
        }
        ModelKind::Hyperbolic => {
            let q = lorentz_dot(&p.momentum, &p.momentum);
            // cosh(t mu) = cos(i t mu): reuse the even rotation coefficients
            let (c, s_over_mu, mu_s) = hyperbolic_coeffs(t, q);
            let position: Vec<Complex64> = p
                .position
                .iter()
                .zip(&p.momentum)
                .map(|(z, w)| c * z + s_over_mu * w)
                .collect();
            let momentum: Vec<Complex64> = p
                .position
                .iter()
                .zip(&p.momentum)
                .map(|(z, w)| mu_s * z + c * w)
                .collect();
            PhasePoint::new(position, momentum)
        }
    }
}

/// (cos(t mu), sin(t mu)/mu, mu sin(t mu)) for mu = sqrt(q), all even in mu.
fn rotation_coeffs(t: Complex64, q: Complex64) -> (Complex64, Complex64, Complex64) {
    let one = Complex64::new(1.0, 0.0);
    if q.norm() < 1e-24 {
        // series in q: cos(t sqrt q) = 1 - t^2 q/2, sin(t mu)/mu = t(1 - t^2 q/6)
        let c = one - 0.5 * t * t * q;
        let s_over = t * (one - t * t * q / 6.0);
        let mu_s = t * q * (one - t * t * q / 6.0);
        (c, s_over, mu_s)
    } else {
        let mu = q.sqrt();
        let c = (t * mu).cos();
        let s = (t * mu).sin();
        (c, s / mu, mu * s)
    }
}

/// (cosh(t mu), sinh(t mu)/mu, mu sinh(t mu)) for mu = sqrt(q).
fn hyperbolic_coeffs(t: Complex64, q: Complex64) -> (Complex64, Complex64, Complex64) {
    let one = Complex64::new(1.0, 0.0);
    if q.norm() < 1e-24 {
        let c = one + 0.5 * t * t * q;
        let s_over = t * (one + t * t * q / 6.0);
        let mu_s = t * q * (one + t * t * q / 6.0);
        (c, s_over, mu_s)
    } else {
        let mu = q.sqrt();
        let c = (t * mu).cosh();
        let s = (t * mu).sinh();
        (c, s / mu, mu * s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn exp_imaginary_torus_is_x_plus_i_xi() {
        let m = ModelManifold::flat_torus(2).unwrap();
        let p = exp_imaginary(&m, &[0.25, 0.5], &[0.1, -0.2]).unwrap();
        assert_eq!(p.coords, vec![c(0.25, 0.1), c(0.5, -0.2)]);
    }

    #[test]
    fn exp_imaginary_zero_fiber_is_real_point() {
        let m = ModelManifold::sphere(2).unwrap();
        let p = exp_imaginary(&m, &[0.0, 0.0, 1.0], &[0.0; 3]).unwrap();
        assert_eq!(p.coords, vec![c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]);
    }

    #[test]
    fn exp_imaginary_sphere_cosh_sinh() {
        // x = e3, v = e1, xi = s v -> cosh(s) x + i sinh(s) v
        let m = ModelManifold::sphere(2).unwrap();
        let s = 0.7;
        let p = exp_imaginary(&m, &[0.0, 0.0, 1.0], &[s, 0.0, 0.0]).unwrap();
        assert_relative_eq!(p.coords[0].im, s.sinh(), epsilon = 1e-14);
        assert_relative_eq!(p.coords[2].re, s.cosh(), epsilon = 1e-14);
        // quadric residual
        let res = (dot(&p.coords, &p.coords) - 1.0).norm();
        assert!(res < 1e-12, "residual {res}");
    }

    #[test]
    fn exp_imaginary_rejects_large_fiber() {
        let m = ModelManifold::sphere(2).unwrap();
        let r = exp_imaginary(&m, &[0.0, 0.0, 1.0], &[3.2, 0.0, 0.0]);
        assert!(matches!(r, Err(Error::FiberTooLarge { .. })));
    }

    #[test]
    fn r2_torus_real_restriction() {
        let m = ModelManifold::flat_torus(1).unwrap();
        let a = ComplexPoint::real_point(m, &[0.1]).unwrap();
        let b = ComplexPoint::real_point(m, &[0.4]).unwrap();
        let v = r2_complex(&m, &a, &b).unwrap();
        assert_relative_eq!(v.value.re, 0.09, epsilon = 1e-14);
        assert!(!v.cut_locus);
        // wrap-around distance: 0.9 - 0.1 = 0.8 -> nearest representative -0.2
        let bb = ComplexPoint::real_point(m, &[0.9]).unwrap();
        let w = r2_complex(&m, &a, &bb).unwrap();
        assert_relative_eq!(w.value.re, 0.04, epsilon = 1e-14);
    }

    #[test]
    fn r2_torus_cut_locus_flagged() {
        let m = ModelManifold::flat_torus(1).unwrap();
        let a = ComplexPoint::real_point(m, &[0.0]).unwrap();
        let b = ComplexPoint::real_point(m, &[0.5]).unwrap();
        let v = r2_complex(&m, &a, &b).unwrap();
        assert!(v.cut_locus);
    }

    #[test]
    fn r2_circle_antidiagonal() {
        // circle, zeta = 0.3 + 0.25i, w = conj zeta -> (0.5i)^2 = -0.25
        let m = ModelManifold::circle();
        let z = ComplexPoint::from_coords(m, vec![c(0.3, 0.25)]).unwrap();
        let v = r2_complex(&m, &z, &z.conj()).unwrap().value;
        assert_relative_eq!(v.re, -0.25, epsilon = 1e-14);
        assert_abs_diff_eq!(v.im, 0.0, epsilon = 1e-15);
    }

    #[test]
    fn r2_sphere_antidiagonal_is_minus_4_tau_sq() {
        let m = ModelManifold::sphere(2).unwrap();
        let tau = 0.4;
        let z = exp_imaginary(&m, &[1.0, 0.0, 0.0], &[0.0, tau, 0.0]).unwrap();
        let v = r2_complex(&m, &z, &z.conj()).unwrap().value;
        assert_relative_eq!(v.re, -4.0 * tau * tau, epsilon = 1e-12);
        assert_abs_diff_eq!(v.im, 0.0, epsilon = 1e-12);
    }

    #[test]
    fn r2_sphere_branch_cut_rejected() {
        let m = ModelManifold::sphere(2).unwrap();
        // antipodal pair: zeta.w = -1 exactly on the cut
        let a = ComplexPoint::real_point(m, &[0.0, 0.0, 1.0]).unwrap();
        let b = ComplexPoint::real_point(m, &[0.0, 0.0, -1.0]).unwrap();
        assert!(matches!(
            r2_complex(&m, &a, &b),
            Err(Error::BranchAmbiguity { .. })
        ));
    }

    #[test]
    fn grauert_rho_circle_is_abs_im() {
        let m = ModelManifold::circle();
        let z = ComplexPoint::from_coords(m, vec![c(0.3, 0.25)]).unwrap();
        assert_relative_eq!(grauert_rho(&m, &z).unwrap(), 0.25, epsilon = 1e-14);
    }

    #[test]
    fn grauert_rho_vanishes_on_real_locus() {
        for m in [
            ModelManifold::circle(),
            ModelManifold::flat_torus(2).unwrap(),
            ModelManifold::sphere(2).unwrap(),
        ] {
            let x = match m.kind {
                ModelKind::Circle => vec![1.2],
                ModelKind::FlatTorus => vec![0.3, 0.7],
                _ => vec![0.0, 0.0, 1.0],
            };
            let p = ComplexPoint::real_point(m, &x).unwrap();
            assert_abs_diff_eq!(grauert_rho(&m, &p).unwrap(), 0.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn grauert_rho_sphere_matches_arccosh_formula() {
        let m = ModelManifold::sphere(2).unwrap();
        let s = 0.4;
        let z = exp_imaginary(&m, &[1.0, 0.0, 0.0], &[0.0, s, 0.0]).unwrap();
        // 0.5 arccosh(|z|^2) with |z|^2 = cosh(2s)
        let z2: f64 = z.coords.iter().map(|w| w.norm_sqr()).sum();
        assert_relative_eq!(z2, (2.0 * s).cosh(), epsilon = 1e-12);
        assert_relative_eq!(grauert_rho(&m, &z).unwrap(), s, epsilon = 1e-12);
    }

    #[test]
    fn grauert_rho_hyperbolic_unsupported() {
        let m = ModelManifold::hyperbolic(2).unwrap();
        let p = ComplexPoint::real_point(m, &[0.0, 0.0, 1.0]).unwrap();
        assert!(matches!(
            grauert_rho(&m, &p),
            Err(Error::ModelUnsupported(_))
        ));
    }

    #[test]
    fn flow_torus_translates() {
        let m = ModelManifold::flat_torus(2).unwrap();
        let p = PhasePoint::new(
            vec![c(0.1, 0.0), c(0.2, 0.1)],
            vec![c(1.0, 0.5), c(0.0, 1.0)],
        );
        let q = geodesic_flow_complex(&m, &p, c(2.0, -1.0));
        assert_eq!(q.momentum, p.momentum);
        assert_eq!(q.position[0], p.position[0] + c(2.0, -1.0) * p.momentum[0]);
    }

    #[test]
    fn flow_sphere_quarter_rotation() {
        // real (x, xi), |xi| = 1, t = pi/2 -> position xi, momentum -x
        let m = ModelManifold::sphere(2).unwrap();
        let x = [1.0, 0.0, 0.0];
        let v = [0.0, 1.0, 0.0];
        let p = PhasePoint::new(
            x.iter().map(|&a| c(a, 0.0)).collect(),
            v.iter().map(|&a| c(a, 0.0)).collect(),
        );
        let q = geodesic_flow_complex(&m, &p, c(std::f64::consts::FRAC_PI_2, 0.0));
        for i in 0..3 {
            assert_abs_diff_eq!(q.position[i].re, v[i], epsilon = 1e-14);
            assert_abs_diff_eq!(q.momentum[i].re, -x[i], epsilon = 1e-14);
        }
    }

    #[test]
    fn flow_sphere_preserves_quadric_constraints() {
        let m = ModelManifold::sphere(2).unwrap();
        // complex phase point built by flowing a real one into the tube first
        let p0 = PhasePoint::new(
            vec![c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)],
            vec![c(0.0, 0.0), c(0.7, 0.0), c(0.3, 0.0)],
        );
        let p1 = geodesic_flow_complex(&m, &p0, c(0.3, 0.55));
        assert!(p1.sphere_constraint_residual() < 1e-10);
        for t in [c(1.0, 0.0), c(0.0, 1.0), c(-2.0, 0.4)] {
            let q = geodesic_flow_complex(&m, &p1, t);
            assert!(
                q.sphere_constraint_residual() < 1e-10,
                "residual {} at t = {t}",
                q.sphere_constraint_residual()
            );
        }
    }

    #[test]
    fn flow_hyperbolic_preserves_lorentz_constraints() {
        let m = ModelManifold::hyperbolic(2).unwrap();
        let p0 = PhasePoint::new(
            vec![c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)],
            vec![c(0.5, 0.0), c(0.2, 0.0), c(0.0, 0.0)],
        );
        for t in [c(0.7, 0.0), c(0.1, 0.4)] {
            let q = geodesic_flow_complex(&m, &p0, t);
            let zz = (lorentz_dot(&q.position, &q.position) + 1.0).norm();
            let zw = lorentz_dot(&q.position, &q.momentum).norm();
            assert!(zz < 1e-12 && zw < 1e-12, "zz {zz} zw {zw}");
        }
    }

    #[test]
    fn pullback_identity_exp_then_rho() {
        // E^* sqrt(rho) = |xi| on every model that has a tube function
        let m = ModelManifold::sphere(2).unwrap();
        for s in [1e-3, 0.1, 0.45, 1.2] {
            let z = exp_imaginary(
                &m,
                &[0.0, 1.0, 0.0],
                &[s / 2f64.sqrt(), 0.0, s / 2f64.sqrt()],
            )
            .unwrap();
            assert_relative_eq!(grauert_rho(&m, &z).unwrap(), s, epsilon = 1e-10);
        }
        let t = ModelManifold::flat_torus(3).unwrap();
        let z = exp_imaginary(&t, &[0.1, 0.2, 0.3], &[0.05, -0.02, 0.01]).unwrap();
        let expect = (0.05f64 * 0.05 + 0.02 * 0.02 + 0.01 * 0.01).sqrt();
        assert_relative_eq!(grauert_rho(&t, &z).unwrap(), expect, epsilon = 1e-12);
    }
}
