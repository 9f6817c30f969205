//! Holomorphic Morse inequalities on compact complex manifolds with
//! boundary, evaluated numerically.
//!
//! The asymptotic bound for `h^q(X, L^k) / k^n` is the sum of a bulk term,
//! the integral of the curvature determinant over the points where the
//! curvature has index `q`, and a boundary term, an integral over the
//! boundary of `∫ det(Θ + tℒ) dt` taken over the `t > 0` where the pencil
//! `Θ + tℒ` has index `q`. Geometry enters only through quadrature samples
//! ([`Scene`]), so the crate stays independent of any mesh.
//!
//! Modules:
//! - [`pencil`]: inertia and index regions `T(q)` of Hermitian pencils.
//! - [`integrals`]: bulk and boundary terms, weak and strong bounds and the
//!   volume identities they satisfy.
//! - [`bergman`]: closed-form model Bergman densities.
//! - [`torus`]: exact cohomology dimensions of disc bundles over tori.
//! - [`io`] and [`cli`]: scene files, CSV reports and the `morse` binary.

pub mod bergman;
pub mod check;
pub mod cli;
pub mod error;
pub mod hermitian;
pub mod integrals;
pub mod io;
pub mod pencil;
pub mod poly;
pub mod quadrature;
pub mod scene;
pub mod sum;
pub mod torus;

pub use error::{Error, Result};
pub use hermitian::{HermitianMatrix, Inertia};
pub use pencil::{condition_z, pencil_breakpoints, t_region, TRegion};
pub use poly::{det_polynomial, Polynomial};
pub use scene::{BoundarySample, BulkSample, Scene, Units};

/// Numerical tolerances shared by the pencil and integral routines.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Eigenvalues within `zero_rel * (1 + spectral radius)` of zero count
    /// as zero.
    pub zero_rel: f64,
    /// Generalized eigenvalues with `|im| > imag_tol * (1 + |re|)` are not
    /// real breakpoints.
    pub imag_tol: f64,
    /// Relative accuracy requested from adaptive quadrature.
    pub rel_tol: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            zero_rel: hermitian::DEFAULT_ZERO_REL,
            imag_tol: 1e-8,
            rel_tol: 1e-10,
        }
    }
}
