//! Numerical laboratory for pluri-potential theory on Grauert tubes of
//! explicitly solvable model manifolds.
//!
//! The crate provides, on the circle, flat tori, round spheres and the
//! hyperboloid model:
//!
//! - tube geometry: complexified distances, the tube function sqrt(rho),
//!   the imaginary-time exponential map and complexified geodesic flow
//!   ([`geometry`]);
//! - orthonormal eigenbases and their holomorphic continuations
//!   ([`eigenbasis`]);
//! - complexified and tempered spectral projections, coherent states,
//!   extremal-function experiments, Weyl-exponent fits, sup-norm and
//!   analytic-decay scans ([`projector`]);
//! - Poisson-wave kernels in closed form and as spectral sums,
//!   subordination to heat kernels, and the Hadamard transport recursion
//!   with its convergence-radius truncation rule ([`kernels`]);
//! - complex zeros of trigonometric waves and zero-current pairings
//!   against the Poincare-Lelong quadrature route ([`zeros`]).
//!
//! Everything is a pure function of its inputs; grid sweeps and seed
//! ensembles run in parallel when the `parallel` feature (default) is
//! enabled, with deterministic reductions either way.

pub mod eigenbasis;
pub mod error;
pub mod fit;
pub mod geometry;
pub mod kernels;
pub mod par;
pub mod projector;
pub mod quad;
pub mod zeros;

pub use error::{Error, Result};
pub use geometry::{ComplexPoint, ModelKind, ModelManifold, PhasePoint};
