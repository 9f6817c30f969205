//! Model Bergman densities.
//!
//! Near a boundary point the manifold is modelled by a domain in `C^n` with
//! quadratic defining function and a normal metric with profile `a(ρ)`.
//! Its Bergman density on the diagonal at height `v ≤ 0` is a `t`-integral
//! over `T(q)` weighted by `e^{vt} / b(t)`, where
//! `b(t) = ∫_{ρ<0} e^{ρt} a(ρ)^{-1} dρ`. Integrating the density against
//! `a(v)^{-1} dv` cancels `b(t)` and returns the boundary fiber integral.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::hermitian::HermitianMatrix;
use crate::integrals::BoundaryPencil;
use crate::pencil::TRegion;
use crate::quadrature::{integrate, integrate_pieces, QuadratureOptions};
use crate::scene::Units;
use crate::Tolerances;

/// Normal-metric profile `a(ρ)` on `ρ ≤ 0`.
#[derive(Debug, Clone, PartialEq, Default)]
pub enum ProfileFunction {
    /// `a(ρ) = (1 - ρ)²`.
    #[default]
    InverseSquare,
    /// Piecewise linear through `(ρ_k, a_k)`, with `ρ` increasing to `0`.
    /// The normal direction ends at the first node: `a^{-1} = 0` below it.
    Tabulated(Vec<(f64, f64)>),
}

impl ProfileFunction {
    pub fn tabulated(nodes: Vec<(f64, f64)>) -> Result<Self> {
        if nodes.len() < 2 {
            return Err(Error::InvalidProfile("need at least two nodes".into()));
        }
        if nodes.last().map(|n| n.0) != Some(0.0) {
            return Err(Error::InvalidProfile("last node must be at rho = 0".into()));
        }
        for w in nodes.windows(2) {
            if !(w[0].0 < w[1].0) {
                return Err(Error::InvalidProfile("nodes must be strictly increasing".into()));
            }
        }
        if nodes.iter().any(|&(r, a)| !(a > 0.0) || !a.is_finite() || !r.is_finite()) {
            return Err(Error::InvalidProfile("values must be finite and positive".into()));
        }
        Ok(ProfileFunction::Tabulated(nodes))
    }

    /// Constant `a = 1` on `[-depth, 0]`.
    pub fn constant(depth: f64) -> Result<Self> {
        Self::tabulated(vec![(-depth, 1.0), (0.0, 1.0)])
    }

    /// `a(ρ)`, or `None` outside the support of `a^{-1}`.
    pub fn value(&self, rho: f64) -> Option<f64> {
        match self {
            ProfileFunction::InverseSquare => (rho <= 0.0).then(|| (1.0 - rho).powi(2)),
            ProfileFunction::Tabulated(nodes) => {
                if rho < nodes[0].0 || rho > 0.0 {
                    return None;
                }
                let k = nodes.partition_point(|&(r, _)| r <= rho).clamp(1, nodes.len() - 1);
                let (r0, a0) = nodes[k - 1];
                let (r1, a1) = nodes[k];
                Some(a0 + (a1 - a0) * (rho - r0) / (r1 - r0))
            }
        }
    }

    pub fn inverse(&self, rho: f64) -> f64 {
        self.value(rho).map_or(0.0, |a| 1.0 / a)
    }

    /// `∫_{ρ<0} g(ρ) a(ρ)^{-1} dρ` for a bounded `g`.
    ///
    /// For the default profile the half-line is mapped onto `(0, 1]` by
    /// `ρ = 1 - 1/x`, which turns `a(ρ)^{-1} dρ` into `dx`.
    fn integrate_against_inverse<G: Fn(f64) -> f64>(
        &self,
        g: G,
        opts: &QuadratureOptions,
    ) -> Result<f64> {
        match self {
            ProfileFunction::InverseSquare => {
                let f = |x: f64| g(1.0 - 1.0 / x);
                Ok(integrate(f, 0.0, 1.0, opts)?.value)
            }
            ProfileFunction::Tabulated(nodes) => {
                let pieces: Vec<(f64, f64)> = nodes.windows(2).map(|w| (w[0].0, w[1].0)).collect();
                let f = |rho: f64| g(rho) * self.inverse(rho);
                Ok(integrate_pieces(&f, &pieces, opts)?.value)
            }
        }
    }
}

/// `b(t) = ∫_{ρ<0} e^{ρt} a(ρ)^{-1} dρ`.
pub fn profile_b(t: f64, profile: &ProfileFunction, rel_tol: f64) -> Result<f64> {
    if !(t >= 0.0) || !t.is_finite() {
        return Err(Error::InvalidArgument(format!("b(t) needs finite t >= 0, got {t}")));
    }
    let opts = QuadratureOptions::with_rel_tol(rel_tol);
    profile.integrate_against_inverse(|rho| if t == 0.0 { 1.0 } else { (rho * t).exp() }, &opts)
}

/// Quadratic model at a boundary point.
#[derive(Debug, Clone)]
pub struct ModelBoundaryData {
    phi0: HermitianMatrix,
    rho0_levi: HermitianMatrix,
    profile: ProfileFunction,
    q: usize,
    pencil: BoundaryPencil,
    region: TRegion,
}

impl ModelBoundaryData {
    /// Fails unless `T(q)` of the pencil `phi0 + t rho0_levi` is bounded.
    pub fn new(
        phi0: HermitianMatrix,
        rho0_levi: HermitianMatrix,
        profile: ProfileFunction,
        q: usize,
    ) -> Result<Self> {
        let pencil = BoundaryPencil::new(&phi0, &rho0_levi, &Tolerances::default())?;
        let region = pencil.region(q);
        if region.is_unbounded() {
            return Err(Error::DivergentBoundaryTerm {
                grade: q,
                sample: None,
            });
        }
        Ok(Self {
            phi0,
            rho0_levi,
            profile,
            q,
            pencil,
            region,
        })
    }

    pub fn phi0(&self) -> &HermitianMatrix {
        &self.phi0
    }

    pub fn rho0_levi(&self) -> &HermitianMatrix {
        &self.rho0_levi
    }

    pub fn profile(&self) -> &ProfileFunction {
        &self.profile
    }

    pub fn q(&self) -> usize {
        self.q
    }

    /// Complex dimension `n` of the model domain.
    pub fn n(&self) -> usize {
        self.phi0.dim() + 1
    }

    pub fn region(&self) -> &TRegion {
        &self.region
    }

    /// The fiber integral `(-1)^q ∫_{T(q)} det(phi0 + t ℒ) dt`.
    pub fn boundary_term(&self) -> f64 {
        self.pencil.term(self.q).expect("region checked bounded")
    }
}

/// `1/(4π) · π^{-(n-1)}` in raw units, `1` in Chern units.
pub fn model_constant(n: usize, units: Units) -> f64 {
    match units {
        Units::Chern => 1.0,
        Units::Raw => 1.0 / (4.0 * PI) / PI.powi(n as i32 - 1),
    }
}

/// Bergman density of the model domain at `(0, u + iv)`; independent of
/// `u`.
pub fn model_density(data: &ModelBoundaryData, v: f64, rel_tol: f64, units: Units) -> Result<f64> {
    if v > 0.0 || v.is_nan() {
        return Err(Error::InvalidArgument(format!("model density needs v <= 0, got {v}")));
    }
    Ok(model_constant(data.n(), units) * chern_density(data, v, rel_tol)?)
}

fn chern_density(data: &ModelBoundaryData, v: f64, rel_tol: f64) -> Result<f64> {
    if data.region.is_empty() {
        return Ok(0.0);
    }
    let inner_tol = rel_tol * 1e-2;
    let sign = if data.q.is_multiple_of(2) { 1.0 } else { -1.0 };
    let failure = std::cell::Cell::new(None);
    let f = |t: f64| {
        let weight = (v * t).exp();
        if weight == 0.0 {
            return 0.0;
        }
        match profile_b(t, &data.profile, inner_tol) {
            Ok(b) => sign * data.phi0.add_scaled(&data.rho0_levi, t).det() * weight / b,
            Err(e) => {
                failure.set(Some(e));
                0.0
            }
        }
    };
    let est = integrate_pieces(&f, data.region.intervals(), &QuadratureOptions::with_rel_tol(rel_tol))?;
    if let Some(e) = failure.take() {
        return Err(e);
    }
    Ok(est.value)
}

/// `∫_{v<0} density(v) a(v)^{-1} dv` minus the boundary fiber integral, in
/// Chern units. Zero up to quadrature error.
pub fn fiber_integral_residual(data: &ModelBoundaryData, rel_tol: f64) -> Result<f64> {
    let mid_tol = rel_tol * 1e-2;
    let failure = std::cell::Cell::new(None);
    let g = |v: f64| match chern_density(data, v, mid_tol) {
        Ok(x) => x,
        Err(e) => {
            failure.set(Some(e));
            0.0
        }
    };
    let total = data
        .profile
        .integrate_against_inverse(g, &QuadratureOptions::with_rel_tol(rel_tol * 0.1))?;
    if let Some(e) = failure.take() {
        return Err(e);
    }
    Ok(total - data.boundary_term())
}

/// Bergman density of `C^m` with constant curvature `theta`:
/// `|det θ| / π^m` (raw) or `|det θ|` (Chern) when the index is `q`, else 0.
pub fn flat_density(theta: &HermitianMatrix, q: usize, units: Units) -> Result<f64> {
    let inertia = theta.inertia_default();
    if inertia.zeros > 0 {
        return Err(Error::DegenerateCurvature);
    }
    if inertia.negatives != q {
        return Ok(0.0);
    }
    let det = theta.det().abs();
    Ok(match units {
        Units::Chern => det,
        Units::Raw => det / PI.powi(theta.dim() as i32),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(v: &[f64]) -> HermitianMatrix {
        HermitianMatrix::diagonal(v)
    }

    #[test]
    fn b_at_zero_and_bounds() {
        let p = ProfileFunction::InverseSquare;
        assert!((profile_b(0.0, &p, 1e-12).unwrap() - 1.0).abs() < 1e-12);
        let b100 = profile_b(100.0, &p, 1e-12).unwrap();
        assert!(b100 < 0.01 && b100 > 0.0);
        assert!(profile_b(-1.0, &p, 1e-8).is_err());
    }

    #[test]
    fn constant_profile_has_closed_form() {
        // a = 1 on [-M, 0]: b(t) = (1 - e^{-Mt}) / t.
        let p = ProfileFunction::constant(5.0).unwrap();
        for t in [0.1f64, 1.0, 3.0] {
            let exact = (1.0 - (-5.0 * t).exp()) / t;
            assert!((profile_b(t, &p, 1e-12).unwrap() - exact).abs() < 1e-11);
        }
        assert!((profile_b(0.0, &p, 1e-12).unwrap() - 5.0).abs() < 1e-11);
    }

    #[test]
    fn profile_validation() {
        assert!(ProfileFunction::tabulated(vec![(-1.0, 1.0)]).is_err());
        assert!(ProfileFunction::tabulated(vec![(-1.0, 1.0), (-0.5, 1.0)]).is_err());
        assert!(ProfileFunction::tabulated(vec![(-1.0, 0.0), (0.0, 1.0)]).is_err());
        let p = ProfileFunction::tabulated(vec![(-2.0, 3.0), (0.0, 1.0)]).unwrap();
        assert_eq!(p.value(-1.0), Some(2.0));
        assert_eq!(p.value(-3.0), None);
        assert_eq!(ProfileFunction::InverseSquare.value(-1.0), Some(4.0));
    }

    #[test]
    fn density_vanishes_far_from_the_boundary() {
        let data = ModelBoundaryData::new(d(&[3.0]), d(&[-2.0]), Default::default(), 0).unwrap();
        let far = model_density(&data, -1e6, 1e-8, Units::Chern).unwrap();
        assert!(far < 1e-5);
        assert_eq!(model_density(&data, f64::NEG_INFINITY, 1e-8, Units::Chern).unwrap(), 0.0);
        assert!(model_density(&data, 0.5, 1e-8, Units::Chern).is_err());
    }

    #[test]
    fn empty_region_gives_zero_density() {
        let data = ModelBoundaryData::new(d(&[1.0]), d(&[-2.0]), Default::default(), 2).unwrap();
        assert_eq!(model_density(&data, 0.0, 1e-8, Units::Chern).unwrap(), 0.0);
    }

    #[test]
    fn unbounded_model_is_rejected() {
        let err = ModelBoundaryData::new(d(&[3.0]), d(&[-2.0]), Default::default(), 1).unwrap_err();
        assert!(matches!(err, Error::DivergentBoundaryTerm { grade: 1, .. }));
    }

    #[test]
    fn flat_density_examples() {
        let pi2 = PI * PI;
        let v = flat_density(&d(&[1.0, -1.0]), 1, Units::Raw).unwrap();
        assert!((v - 1.0 / pi2).abs() < 1e-15);
        assert_eq!(flat_density(&d(&[1.0, -1.0]), 0, Units::Raw).unwrap(), 0.0);
        let v = flat_density(&d(&[2.0, 3.0]), 0, Units::Raw).unwrap();
        assert!((v - 6.0 / pi2).abs() < 1e-14);
        assert_eq!(flat_density(&d(&[2.0, 3.0]), 0, Units::Chern).unwrap(), 6.0);
        assert_eq!(
            flat_density(&d(&[2.0, 0.0]), 0, Units::Raw),
            Err(Error::DegenerateCurvature)
        );
    }
}
