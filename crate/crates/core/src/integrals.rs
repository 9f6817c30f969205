//! Bulk and boundary curvature terms and the bounds assembled from them.
//!
//! All sample loops evaluate per-sample terms in parallel, collect them in
//! sample order, and reduce sequentially with compensated summation, so the
//! results do not depend on the thread count.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::hermitian::{inertia_of_eigenvalues, zero_tol_for, HermitianMatrix};
use crate::pencil::{pencil_segments, region_from_segments, Segment, TRegion};
use crate::poly::{det_polynomial, Polynomial};
use crate::quadrature::{integrate_pieces, QuadratureOptions};
use crate::scene::{BoundarySample, BulkSample, Scene};
use crate::sum::compensated_sum;
use crate::Tolerances;

/// Entrywise tolerance for `levi == -theta_tan` in [`holefill_check`].
pub const CONFORMAL_TOL: f64 = 1e-9;

fn sign(q: usize) -> f64 {
    if q.is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

/// Index regions and determinant polynomial of one boundary pencil,
/// computed once and reused for every grade.
#[derive(Debug, Clone)]
pub struct BoundaryPencil {
    segments: Vec<Segment>,
    poly: Polynomial,
}

impl BoundaryPencil {
    pub fn new(a: &HermitianMatrix, b: &HermitianMatrix, tol: &Tolerances) -> Result<Self> {
        Ok(Self {
            segments: pencil_segments(a, b, tol)?,
            poly: det_polynomial(a, b)?,
        })
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    pub fn polynomial(&self) -> &Polynomial {
        &self.poly
    }

    pub fn region(&self, q: usize) -> TRegion {
        region_from_segments(&self.segments, |i| i == q)
    }

    /// `(-1)^q ∫_{T(q)} det(A + tB) dt` by the exact antiderivative.
    pub fn term(&self, q: usize) -> Result<f64> {
        let region = self.region(q);
        if region.is_unbounded() {
            return Err(Error::DivergentBoundaryTerm {
                grade: q,
                sample: None,
            });
        }
        let integral = compensated_sum(
            region
                .intervals()
                .iter()
                .map(|&(lo, hi)| self.poly.integrate(lo, hi)),
        );
        Ok(sign(q) * integral)
    }
}

/// `(-1)^q ∫_{T(q)} det(A + tB) dt`, integrated exactly.
///
/// Fails with [`Error::DivergentBoundaryTerm`] when `T(q)` is unbounded.
pub fn boundary_term_point(a: &HermitianMatrix, b: &HermitianMatrix, q: usize) -> Result<f64> {
    boundary_term_point_with(a, b, q, &Tolerances::default())
}

pub fn boundary_term_point_with(
    a: &HermitianMatrix,
    b: &HermitianMatrix,
    q: usize,
    tol: &Tolerances,
) -> Result<f64> {
    BoundaryPencil::new(a, b, tol)?.term(q)
}

/// The same fiber integral as [`boundary_term_point`], computed by adaptive
/// quadrature of `|det(A + tB)|` over `T(q)` with direct determinant
/// evaluations.
pub fn boundary_term_quadrature(
    a: &HermitianMatrix,
    b: &HermitianMatrix,
    q: usize,
    rel_tol: f64,
) -> Result<f64> {
    let tol = Tolerances {
        rel_tol,
        ..Tolerances::default()
    };
    let region = region_from_segments(&pencil_segments(a, b, &tol)?, |i| i == q);
    if region.is_unbounded() {
        return Err(Error::DivergentBoundaryTerm {
            grade: q,
            sample: None,
        });
    }
    let f = |t: f64| a.add_scaled(b, t).det().abs();
    let est = integrate_pieces(&f, region.intervals(), &QuadratureOptions::with_rel_tol(rel_tol))?;
    Ok(est.value)
}

/// Bulk contribution at one grade.
#[derive(Debug, Clone, PartialEq)]
pub struct BulkTerm {
    pub value: f64,
    /// Samples whose curvature has index `q`.
    pub contributing: usize,
    /// Samples skipped because the curvature has a zero eigenvalue.
    pub degenerate: Vec<usize>,
}

struct BulkEval {
    index: usize,
    degenerate: bool,
    det: f64,
}

fn eval_bulk(samples: &[BulkSample], tol: &Tolerances) -> Vec<BulkEval> {
    samples
        .par_iter()
        .map(|s| {
            let ev = s.theta.eigenvalues();
            let inertia = inertia_of_eigenvalues(&ev, zero_tol_for(&ev, tol.zero_rel));
            BulkEval {
                index: inertia.negatives,
                degenerate: inertia.zeros > 0,
                det: ev.iter().product(),
            }
        })
        .collect()
}

fn bulk_from_evals(samples: &[BulkSample], evals: &[BulkEval], q: usize) -> BulkTerm {
    let mut contributing = 0;
    let mut degenerate = Vec::new();
    let mut terms = Vec::with_capacity(samples.len());
    for (i, (s, e)) in samples.iter().zip(evals).enumerate() {
        if e.degenerate {
            degenerate.push(i);
        } else if e.index == q {
            contributing += 1;
            terms.push(s.weight * e.det);
        }
    }
    BulkTerm {
        value: sign(q) * compensated_sum(terms),
        contributing,
        degenerate,
    }
}

/// `(-1)^q Σ w det(Θ)` over bulk samples of index `q`.
pub fn bulk_term(scene: &Scene, q: usize) -> BulkTerm {
    bulk_term_with(scene, q, &Tolerances::default())
}

pub fn bulk_term_with(scene: &Scene, q: usize, tol: &Tolerances) -> BulkTerm {
    bulk_samples_term(scene.bulk(), q, tol)
}

pub fn bulk_samples_term(samples: &[BulkSample], q: usize, tol: &Tolerances) -> BulkTerm {
    bulk_from_evals(samples, &eval_bulk(samples, tol), q)
}

fn boundary_pencils(samples: &[BoundarySample], tol: &Tolerances) -> Result<Vec<BoundaryPencil>> {
    samples
        .par_iter()
        .map(|s| BoundaryPencil::new(&s.theta_tan, &s.levi, tol))
        .collect::<Vec<_>>()
        .into_iter()
        .collect()
}

fn boundary_sum(
    samples: &[BoundarySample],
    pencils: &[BoundaryPencil],
    q: usize,
) -> Result<f64> {
    let mut terms = Vec::with_capacity(samples.len());
    for (i, (s, p)) in samples.iter().zip(pencils).enumerate() {
        let term = p.term(q).map_err(|e| with_sample(e, i))?;
        terms.push(s.weight * term);
    }
    Ok(compensated_sum(terms))
}

fn with_sample(err: Error, sample: usize) -> Error {
    match err {
        Error::DivergentBoundaryTerm { grade, .. } => Error::DivergentBoundaryTerm {
            grade,
            sample: Some(sample),
        },
        other => other,
    }
}

/// `Σ w (-1)^q ∫_{T(q)} det(Θ_tan + tℒ) dt` over boundary samples.
pub fn boundary_samples_term(
    samples: &[BoundarySample],
    q: usize,
    tol: &Tolerances,
) -> Result<f64> {
    let pencils = boundary_pencils(samples, tol)?;
    boundary_sum(samples, &pencils, q)
}

/// Bulk and boundary parts of a bound.
#[derive(Debug, Clone, PartialEq)]
pub struct MorseBound {
    pub grade: usize,
    pub bulk: f64,
    pub boundary: f64,
    pub total: f64,
    pub degenerate_bulk: Vec<usize>,
}

/// The weak Morse bound at grade `q`: bulk term plus boundary terms.
pub fn weak_bound(scene: &Scene, q: usize) -> Result<MorseBound> {
    weak_bound_with(scene, q, &Tolerances::default())
}

pub fn weak_bound_with(scene: &Scene, q: usize, tol: &Tolerances) -> Result<MorseBound> {
    let bulk = bulk_term_with(scene, q, tol);
    let boundary = boundary_samples_term(scene.boundary(), q, tol)?;
    Ok(MorseBound {
        grade: q,
        bulk: bulk.value,
        boundary,
        total: bulk.value + boundary,
        degenerate_bulk: bulk.degenerate,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Convexity {
    /// Levi form with at least `n - q` positive eigenvalues; bounds the
    /// alternating sum over grades `q..=n`.
    Convex,
    /// Levi form with at least `n - q` negative eigenvalues; bounds the
    /// alternating sum over grades `0..=n-1-q`.
    Concave,
}

impl Convexity {
    pub fn as_str(&self) -> &'static str {
        match self {
            Convexity::Convex => "convex",
            Convexity::Concave => "concave",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StrongBound {
    pub mode: Convexity,
    pub q: usize,
    /// Grade carrying the `+` sign in the alternating sum.
    pub leading_grade: usize,
    /// Per-grade `(bulk, boundary)` terms, each `≥ 0` up to rounding.
    pub grades: Vec<MorseBound>,
    /// `Σ (-1)^(leading - i) (bulk_i + boundary_i)`.
    pub total: f64,
}

/// `I(≥q)` for a convex boundary or `I(≤n-1-q)` for a concave one.
pub fn strong_bounds(scene: &Scene, q: usize, mode: Convexity) -> Result<StrongBound> {
    strong_bounds_with(scene, q, mode, &Tolerances::default())
}

pub fn strong_bounds_with(
    scene: &Scene,
    q: usize,
    mode: Convexity,
    tol: &Tolerances,
) -> Result<StrongBound> {
    let n = scene.n();
    let required = n.saturating_sub(q);
    for (i, s) in scene.boundary().iter().enumerate() {
        let ev = s.levi.eigenvalues();
        let inertia = inertia_of_eigenvalues(&ev, zero_tol_for(&ev, tol.zero_rel));
        let count = match mode {
            Convexity::Convex => inertia.positives,
            Convexity::Concave => inertia.negatives,
        };
        if count < required {
            return Err(Error::ConvexityViolation {
                sample: i,
                grade: q,
                mode: mode.as_str(),
            });
        }
    }
    let (grades, leading): (Vec<usize>, usize) = match mode {
        Convexity::Convex => ((q..=n).collect(), q),
        Convexity::Concave => match (n - 1).checked_sub(q) {
            Some(top) => ((0..=top).collect(), top),
            None => (Vec::new(), 0),
        },
    };

    let bulk_evals = eval_bulk(scene.bulk(), tol);
    let pencils = boundary_pencils(scene.boundary(), tol)?;
    let mut per_grade = Vec::with_capacity(grades.len());
    let mut signed = Vec::with_capacity(grades.len());
    for &g in &grades {
        let bulk = bulk_from_evals(scene.bulk(), &bulk_evals, g);
        let boundary = boundary_sum(scene.boundary(), &pencils, g)?;
        let total = bulk.value + boundary;
        signed.push(sign(leading.abs_diff(g)) * total);
        per_grade.push(MorseBound {
            grade: g,
            bulk: bulk.value,
            boundary,
            total,
            degenerate_bulk: bulk.degenerate,
        });
    }
    Ok(StrongBound {
        mode,
        q,
        leading_grade: leading,
        grades: per_grade,
        total: compensated_sum(signed),
    })
}

/// Terms of the volume identity `Vol(L) = Vol(X) + Vol(∂X) / n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HoleFill {
    pub vol_bundle: f64,
    pub vol_x: f64,
    pub vol_boundary_over_n: f64,
    pub residual: f64,
}

/// Checks the volume identity on a scene whose boundary Levi form equals
/// minus the tangential curvature at every sample.
pub fn holefill_check(scene: &Scene) -> Result<HoleFill> {
    for (i, s) in scene.boundary().iter().enumerate() {
        if s.levi.max_abs_diff(&s.theta_tan.neg()) > CONFORMAL_TOL {
            return Err(Error::NotConformal { sample: i });
        }
    }
    let bound = weak_bound(scene, 0)?;
    let n = scene.n() as f64;
    let vol_boundary_over_n =
        compensated_sum(scene.boundary().iter().map(|s| s.weight * s.theta_tan.det())) / n;
    Ok(HoleFill {
        vol_bundle: bound.total,
        vol_x: bound.bulk,
        vol_boundary_over_n,
        residual: bound.total - bound.bulk - vol_boundary_over_n,
    })
}

/// `[boundary term at c] - [bulk term over the shell] - [boundary term at c']`
/// at grade `i`. Vanishes when the form `(Θ + dα)_n` is integrated
/// consistently over the cobordism between the two level sets.
pub fn level_invariance_residual(
    shell_bulk: &[BulkSample],
    boundary_c: &[BoundarySample],
    boundary_cprime: &[BoundarySample],
    i: usize,
    n: usize,
) -> Result<f64> {
    let tol = Tolerances::default();
    for s in shell_bulk {
        if s.theta.dim() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: s.theta.dim(),
            });
        }
    }
    for s in boundary_c.iter().chain(boundary_cprime) {
        if s.levi.dim() + 1 != n || s.theta_tan.dim() + 1 != n {
            return Err(Error::DimensionMismatch {
                expected: n.saturating_sub(1),
                found: s.levi.dim(),
            });
        }
    }
    let at_c = boundary_samples_term(boundary_c, i, &tol)?;
    let at_cprime = boundary_samples_term(boundary_cprime, i, &tol)?;
    let shell = bulk_samples_term(shell_bulk, i, &tol).value;
    Ok(at_c - shell - at_cprime)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scene::Units;

    fn d(v: &[f64]) -> HermitianMatrix {
        HermitianMatrix::diagonal(v)
    }

    fn boundary(w: f64, a: &[f64], b: &[f64]) -> BoundarySample {
        BoundarySample {
            weight: w,
            theta_tan: d(a),
            levi: d(b),
        }
    }

    fn bulk(w: f64, theta: &[f64]) -> BulkSample {
        BulkSample {
            weight: w,
            theta: d(theta),
        }
    }

    fn close(a: f64, b: f64, rel: f64) -> bool {
        (a - b).abs() <= rel * b.abs().max(1e-300)
    }

    #[test]
    fn boundary_term_examples() {
        let v = boundary_term_point(&d(&[3.0]), &d(&[-2.0]), 0).unwrap();
        assert!(close(v, 2.25, 1e-13));
        let v = boundary_term_point(&d(&[2.0, 3.0]), &d(&[-2.0, -3.0]), 0).unwrap();
        assert!(close(v, 2.0, 1e-13));
        assert_eq!(
            boundary_term_point(&d(&[3.0]), &d(&[-2.0]), 1),
            Err(Error::DivergentBoundaryTerm {
                grade: 1,
                sample: None
            })
        );
    }

    #[test]
    fn quadrature_path_examples() {
        let v = boundary_term_quadrature(&d(&[3.0]), &d(&[-2.0]), 0, 1e-8).unwrap();
        assert!(close(v, 2.25, 1e-8));
        let v = boundary_term_quadrature(&d(&[1.0, 2.0]), &d(&[-1.0, -1.0]), 1, 1e-8).unwrap();
        assert!(close(v, 1.0 / 6.0, 1e-8));
        let v = boundary_term_quadrature(&d(&[2.0, 3.0]), &d(&[-2.0, -3.0]), 0, 1e-8).unwrap();
        assert!(close(v, 2.0, 1e-8));
    }

    #[test]
    fn bulk_term_examples() {
        let scene = Scene::new(2, Units::Chern, vec![bulk(1.0, &[1.0, 1.0])], vec![]).unwrap();
        assert_eq!(bulk_term(&scene, 0).value, 1.0);
        assert_eq!(bulk_term(&scene, 1).value, 0.0);
        let scene = Scene::new(2, Units::Chern, vec![bulk(1.0, &[1.0, -1.0])], vec![]).unwrap();
        assert_eq!(bulk_term(&scene, 1).value, 1.0);
    }

    #[test]
    fn degenerate_bulk_samples_are_reported() {
        let scene = Scene::new(
            2,
            Units::Chern,
            vec![bulk(1.0, &[1.0, 0.0]), bulk(2.0, &[1.0, 1.0])],
            vec![],
        )
        .unwrap();
        let t = bulk_term(&scene, 0);
        assert_eq!(t.value, 2.0);
        assert_eq!(t.degenerate, vec![0]);
        assert_eq!(t.contributing, 1);
    }

    #[test]
    fn weak_bound_examples() {
        let scene =
            Scene::new(2, Units::Chern, vec![], vec![boundary(1.0, &[3.0], &[-2.0])]).unwrap();
        assert!(close(weak_bound(&scene, 0).unwrap().total, 2.25, 1e-13));
        for q in 0..3 {
            assert_eq!(weak_bound(&Scene::empty(3), q).unwrap().total, 0.0);
        }
        let demailly = Scene::new(
            2,
            Units::Chern,
            vec![bulk(0.5, &[2.0, 3.0]), bulk(0.25, &[1.0, -4.0])],
            vec![],
        )
        .unwrap();
        for q in 0..3 {
            assert_eq!(
                weak_bound(&demailly, q).unwrap().total,
                bulk_term(&demailly, q).value
            );
        }
    }

    #[test]
    fn weak_bound_names_the_divergent_sample() {
        let scene = Scene::new(
            2,
            Units::Chern,
            vec![],
            vec![
                boundary(1.0, &[3.0], &[-2.0]),
                boundary(1.0, &[3.0], &[2.0]),
            ],
        )
        .unwrap();
        assert_eq!(
            weak_bound(&scene, 0).unwrap_err(),
            Error::DivergentBoundaryTerm {
                grade: 0,
                sample: Some(1)
            }
        );
    }

    #[test]
    fn strong_bound_examples() {
        let convex =
            Scene::new(2, Units::Chern, vec![], vec![boundary(1.0, &[3.0], &[2.0])]).unwrap();
        assert_eq!(strong_bounds(&convex, 1, Convexity::Convex).unwrap().total, 0.0);

        let concave =
            Scene::new(2, Units::Chern, vec![], vec![boundary(1.0, &[3.0], &[-2.0])]).unwrap();
        let s = strong_bounds(&concave, 1, Convexity::Concave).unwrap();
        assert!(close(s.total, 2.25, 1e-13));
        assert_eq!(s.leading_grade, 0);

        assert_eq!(
            strong_bounds(&Scene::empty(3), 1, Convexity::Convex).unwrap().total,
            0.0
        );
        assert!(matches!(
            strong_bounds(&concave, 1, Convexity::Convex),
            Err(Error::ConvexityViolation { sample: 0, .. })
        ));
    }

    #[test]
    fn strong_bound_alternates_signs() {
        // n = 2, bulk only: grades 0, 1, 2 with values 6, 2, 1.
        let scene = Scene::new(
            2,
            Units::Chern,
            vec![
                bulk(1.0, &[2.0, 3.0]),
                bulk(1.0, &[1.0, -2.0]),
                bulk(1.0, &[-1.0, -1.0]),
            ],
            vec![],
        )
        .unwrap();
        let s = strong_bounds(&scene, 0, Convexity::Convex).unwrap();
        assert_eq!(s.total, 6.0 - 2.0 + 1.0);
        let s = strong_bounds(&scene, 1, Convexity::Convex).unwrap();
        assert_eq!(s.total, 2.0 - 1.0);
    }

    #[test]
    fn holefill_examples() {
        let a = d(&[2.0, 3.0]);
        let scene = Scene::new(
            3,
            Units::Chern,
            vec![],
            vec![BoundarySample {
                weight: 1.0,
                theta_tan: a.clone(),
                levi: a.neg(),
            }],
        )
        .unwrap();
        let h = holefill_check(&scene).unwrap();
        assert!(close(h.vol_bundle, 2.0, 1e-13));
        assert_eq!(h.vol_x, 0.0);
        assert!(close(h.vol_boundary_over_n, 2.0, 1e-15));
        assert!(h.residual.abs() < 1e-13);

        let only_bulk =
            Scene::new(2, Units::Chern, vec![bulk(5.0, &[1.0, 1.0])], vec![]).unwrap();
        let h = holefill_check(&only_bulk).unwrap();
        assert_eq!((h.vol_bundle, h.vol_x, h.vol_boundary_over_n, h.residual), (5.0, 5.0, 0.0, 0.0));

        let bad = Scene::new(2, Units::Chern, vec![], vec![boundary(1.0, &[3.0], &[-2.0])]).unwrap();
        assert_eq!(holefill_check(&bad), Err(Error::NotConformal { sample: 0 }));
    }

    #[test]
    fn holefill_arithmetic() {
        // bulk total 5, boundary Σ w det(A) = 3, n = 3.
        let a = d(&[1.0, 2.0]);
        let scene = Scene::new(
            3,
            Units::Chern,
            vec![bulk(5.0, &[1.0, 1.0, 1.0])],
            vec![
                BoundarySample {
                    weight: 1.0,
                    theta_tan: a.clone(),
                    levi: a.neg(),
                },
                BoundarySample {
                    weight: 0.5,
                    theta_tan: a.clone(),
                    levi: a.neg(),
                },
            ],
        )
        .unwrap();
        let h = holefill_check(&scene).unwrap();
        assert!(close(h.vol_bundle, 6.0, 1e-13));
        assert_eq!(h.vol_x, 5.0);
        assert!(close(h.vol_boundary_over_n, 1.0, 1e-15));
        assert!(h.residual.abs() < 1e-12);
    }

    #[test]
    fn level_invariance_trivial_cases() {
        let b = vec![boundary(2.0, &[1.0, 2.0], &[-1.0, -3.0])];
        assert_eq!(level_invariance_residual(&[], &b, &b, 0, 3).unwrap(), 0.0);

        // Disc bundle: fiber-flat curvature has zero determinant in the
        // bulk and the Levi form does not depend on the radius.
        let shell = vec![bulk(1.0, &[3.0, 0.0])];
        let b = vec![boundary(1.0, &[3.0], &[-2.0])];
        assert_eq!(level_invariance_residual(&shell, &b, &b, 0, 2).unwrap(), 0.0);
    }
}
