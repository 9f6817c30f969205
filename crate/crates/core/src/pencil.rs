//! Index regions of Hermitian pencils `A + tB`, `t > 0`.
//!
//! For a boundary point, `A` is the tangential curvature and `B` the Levi
//! form. The index of `A + tB` is piecewise constant in `t` and can only
//! jump where `det(A + tB) = 0`, so the pencil is cut at those roots and
//! the index is read off once per segment.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::hermitian::{inertia_of_eigenvalues, zero_tol_for, HermitianMatrix, Inertia};
use crate::Tolerances;

/// Relative gap below which two breakpoints are treated as one.
pub const MERGE_REL_GAP: f64 = 1e-9;

/// A finite union of disjoint open intervals in `(0, ∞)`.
///
/// When `unbounded` is set the last interval has `hi == f64::INFINITY`.
#[derive(Debug, Clone, PartialEq)]
pub struct TRegion {
    intervals: Vec<(f64, f64)>,
    unbounded: bool,
}

impl TRegion {
    /// Builds a region from sorted, disjoint `(lo, hi)` pairs.
    pub fn new(intervals: Vec<(f64, f64)>) -> Result<Self> {
        let mut prev_hi = 0.0_f64;
        for (k, &(lo, hi)) in intervals.iter().enumerate() {
            if !(lo >= 0.0 && lo < hi && lo >= prev_hi) || lo.is_nan() || hi.is_nan() {
                return Err(Error::InvalidMatrix(format!(
                    "interval {k} = ({lo}, {hi}) is not ordered, disjoint and nonnegative"
                )));
            }
            if hi.is_infinite() && k + 1 != intervals.len() {
                return Err(Error::InvalidMatrix(
                    "only the last interval may be unbounded".into(),
                ));
            }
            prev_hi = hi;
        }
        let unbounded = intervals.last().is_some_and(|&(_, hi)| hi.is_infinite());
        Ok(Self {
            intervals,
            unbounded,
        })
    }

    pub fn empty() -> Self {
        Self {
            intervals: Vec::new(),
            unbounded: false,
        }
    }

    pub fn intervals(&self) -> &[(f64, f64)] {
        &self.intervals
    }

    pub fn is_unbounded(&self) -> bool {
        self.unbounded
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    pub fn contains(&self, t: f64) -> bool {
        self.intervals.iter().any(|&(lo, hi)| lo < t && t < hi)
    }

    /// Total length; infinite for an unbounded region.
    pub fn measure(&self) -> f64 {
        self.intervals.iter().map(|&(lo, hi)| hi - lo).sum()
    }

    /// The image of the region under `t -> f t`, `f > 0`.
    pub fn scaled(&self, f: f64) -> TRegion {
        assert!(f > 0.0, "scale factor must be positive");
        TRegion {
            intervals: self
                .intervals
                .iter()
                .map(|&(lo, hi)| (lo * f, hi * f))
                .collect(),
            unbounded: self.unbounded,
        }
    }
}

/// One segment between consecutive breakpoints, with the constant index of
/// the pencil on it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Segment {
    pub lo: f64,
    pub hi: f64,
    pub index: usize,
}

fn check_pencil(a: &HermitianMatrix, b: &HermitianMatrix, zero_rel: f64) -> Result<Inertia> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            found: b.dim(),
        });
    }
    let ev = b.eigenvalues();
    let inertia_b = inertia_of_eigenvalues(&ev, zero_tol_for(&ev, zero_rel));
    if inertia_b.zeros > 0 {
        return Err(Error::DegenerateLevi);
    }
    Ok(inertia_b)
}

/// All `t > 0` with `det(A + tB) = 0`, sorted and with near-duplicates
/// merged.
///
/// The roots are the negatives of the eigenvalues of `B⁻¹A`. A definite `B`
/// is handled through its Cholesky factor, which keeps the problem
/// Hermitian; an indefinite `B` goes through a general eigensolver and
/// eigenvalues whose imaginary part exceeds `imag_tol * (1 + |re|)` are
/// dropped.
pub fn pencil_breakpoints(
    a: &HermitianMatrix,
    b: &HermitianMatrix,
    imag_tol: f64,
) -> Result<Vec<f64>> {
    breakpoints_with(a, b, imag_tol, crate::hermitian::DEFAULT_ZERO_REL)
}

fn breakpoints_with(
    a: &HermitianMatrix,
    b: &HermitianMatrix,
    imag_tol: f64,
    zero_rel: f64,
) -> Result<Vec<f64>> {
    let inertia_b = check_pencil(a, b, zero_rel)?;
    let m = a.dim();

    let mut roots: Vec<f64> = if inertia_b.negatives == 0 || inertia_b.positives == 0 {
        let sign = if inertia_b.negatives == 0 { 1.0 } else { -1.0 };
        definite_roots(a, b, sign, imag_tol)
    } else {
        indefinite_roots(a, b, imag_tol)
    };

    let floor = f64::EPSILON * a.norm() / b.norm();
    roots.retain(|&t| t > floor && t.is_finite());
    roots.sort_by(f64::total_cmp);

    let mut merged: Vec<f64> = Vec::with_capacity(m);
    let mut cluster: Vec<f64> = Vec::new();
    for t in roots {
        if let Some(&last) = cluster.last() {
            if (t - last) > MERGE_REL_GAP * t.abs().max(last.abs()) {
                merged.push(cluster.iter().sum::<f64>() / cluster.len() as f64);
                cluster.clear();
            }
        }
        cluster.push(t);
    }
    if !cluster.is_empty() {
        merged.push(cluster.iter().sum::<f64>() / cluster.len() as f64);
    }
    Ok(merged)
}

// sign * B = L L^H; det(A + tB) = |det L|^2 det(C + sign t I), C = L^-1 A L^-H.
fn definite_roots(a: &HermitianMatrix, b: &HermitianMatrix, sign: f64, imag_tol: f64) -> Vec<f64> {
    let sb = b.as_matrix().scale(sign);
    let Some(chol) = sb.cholesky() else {
        return indefinite_roots(a, b, imag_tol);
    };
    let l = chol.l();
    let Some(x) = l.solve_lower_triangular(a.as_matrix()) else {
        return indefinite_roots(a, b, imag_tol);
    };
    let Some(c) = l.solve_lower_triangular(&x.adjoint()) else {
        return indefinite_roots(a, b, imag_tol);
    };
    let Ok(c) = hermitian_part(&c) else {
        return indefinite_roots(a, b, imag_tol);
    };
    c.eigenvalues().into_iter().map(|ev| -sign * ev).collect()
}

fn hermitian_part(m: &DMatrix<Complex64>) -> Result<HermitianMatrix> {
    HermitianMatrix::from_matrix((m + m.adjoint()).scale(0.5))
}

fn indefinite_roots(a: &HermitianMatrix, b: &HermitianMatrix, imag_tol: f64) -> Vec<f64> {
    let m = a.dim();
    let lu = b.as_matrix().clone().lu();
    let Some(mat) = lu.solve(a.as_matrix()) else {
        return Vec::new();
    };
    let is_real = mat.iter().all(|z| z.im == 0.0);
    let eig: Vec<Complex64> = if is_real {
        let real = DMatrix::from_fn(m, m, |i, j| mat[(i, j)].re);
        real.complex_eigenvalues().iter().copied().collect()
    } else {
        // [[Re, -Im], [Im, Re]] carries every eigenvalue of `mat` together
        // with its conjugate.
        let real = DMatrix::from_fn(2 * m, 2 * m, |i, j| {
            let z = mat[(i % m, j % m)];
            match (i < m, j < m) {
                (true, true) | (false, false) => z.re,
                (true, false) => -z.im,
                (false, true) => z.im,
            }
        });
        real.complex_eigenvalues().iter().copied().collect()
    };
    eig.into_iter()
        .filter(|z| z.im.abs() <= imag_tol * (1.0 + z.re.abs()))
        .map(|z| -z.re)
        .collect()
}

fn index_at(a: &HermitianMatrix, b: &HermitianMatrix, t: f64, zero_rel: f64) -> Inertia {
    let ev = a.add_scaled(b, t).eigenvalues();
    inertia_of_eigenvalues(&ev, zero_tol_for(&ev, zero_rel))
}

/// Index on the segment `(lo, hi)`; re-evaluates at perturbed interior
/// points when the midpoint is numerically degenerate.
fn segment_index(
    a: &HermitianMatrix,
    b: &HermitianMatrix,
    lo: f64,
    hi: f64,
    zero_rel: f64,
) -> usize {
    let probes: Vec<f64> = if hi.is_finite() {
        [0.5, 0.3, 0.7, 0.15, 0.85]
            .iter()
            .map(|f| lo + f * (hi - lo))
            .collect()
    } else {
        [1.0, 2.0, 0.5, 10.0]
            .iter()
            .map(|d| lo + d * (1.0 + lo))
            .collect()
    };
    let mut fallback = None;
    for &t in &probes {
        let inertia = index_at(a, b, t, zero_rel);
        if inertia.zeros == 0 {
            return inertia.negatives;
        }
        fallback.get_or_insert(inertia.negatives);
    }
    fallback.unwrap_or(0)
}

/// Splits `(0, ∞)` at the breakpoints and records the index of `A + tB`
/// on every segment. The last segment is the unbounded ray.
pub fn pencil_segments(
    a: &HermitianMatrix,
    b: &HermitianMatrix,
    tol: &Tolerances,
) -> Result<Vec<Segment>> {
    let bps = breakpoints_with(a, b, tol.imag_tol, tol.zero_rel)?;
    let mut edges = Vec::with_capacity(bps.len() + 2);
    edges.push(0.0);
    edges.extend_from_slice(&bps);
    edges.push(f64::INFINITY);
    Ok(edges
        .windows(2)
        .map(|w| Segment {
            lo: w[0],
            hi: w[1],
            index: segment_index(a, b, w[0], w[1], tol.zero_rel),
        })
        .collect())
}

/// `T(q) = { t > 0 : index(A + tB) = q }` with default tolerances.
pub fn t_region(a: &HermitianMatrix, b: &HermitianMatrix, q: usize) -> Result<TRegion> {
    t_region_with(a, b, q, &Tolerances::default())
}

pub fn t_region_with(
    a: &HermitianMatrix,
    b: &HermitianMatrix,
    q: usize,
    tol: &Tolerances,
) -> Result<TRegion> {
    let segments = pencil_segments(a, b, tol)?;
    Ok(region_from_segments(&segments, |i| i == q))
}

pub(crate) fn region_from_segments(segments: &[Segment], keep: impl Fn(usize) -> bool) -> TRegion {
    let intervals: Vec<(f64, f64)> = segments
        .iter()
        .filter(|s| keep(s.index))
        .map(|s| (s.lo, s.hi))
        .collect();
    let unbounded = intervals.last().is_some_and(|&(_, hi)| hi.is_infinite());
    TRegion {
        intervals,
        unbounded,
    }
}

/// Condition `Z(q)` at one boundary point: the Levi form has at least
/// `q + 1` negative or at least `n - q` positive eigenvalues.
pub fn condition_z(levi: &HermitianMatrix, n: usize, q: usize) -> Result<bool> {
    if n == 0 || levi.dim() != n - 1 {
        return Err(Error::DimensionMismatch {
            expected: n.saturating_sub(1),
            found: levi.dim(),
        });
    }
    let inertia = levi.inertia_default();
    Ok(inertia.negatives > q || inertia.positives + q >= n)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(v: &[f64]) -> HermitianMatrix {
        HermitianMatrix::diagonal(v)
    }

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() <= 1e-12 * (1.0 + b.abs())
    }

    #[test]
    fn breakpoints_of_diagonal_pencils() {
        let bp = pencil_breakpoints(&d(&[3.0]), &d(&[-2.0]), 1e-8).unwrap();
        assert_eq!(bp.len(), 1);
        assert!(close(bp[0], 1.5));

        let bp = pencil_breakpoints(&d(&[1.0, 2.0]), &d(&[-1.0, -1.0]), 1e-8).unwrap();
        assert_eq!(bp.len(), 2);
        assert!(close(bp[0], 1.0) && close(bp[1], 2.0));

        // t = -1 is a root but not a positive one.
        let bp = pencil_breakpoints(&d(&[1.0, -1.0]), &d(&[1.0, 1.0]), 1e-8).unwrap();
        assert_eq!(bp.len(), 1);
        assert!(close(bp[0], 1.0));
    }

    #[test]
    fn repeated_roots_are_merged() {
        let bp = pencil_breakpoints(&d(&[2.0, 2.0, 2.0]), &d(&[-1.0, -1.0, -1.0]), 1e-8).unwrap();
        assert_eq!(bp.len(), 1);
        assert!(close(bp[0], 2.0));
    }

    #[test]
    fn indefinite_levi_with_complex_roots() {
        // det([[1, t], [t, -1]]-ish): A = I, B = [[0,1],[1,0]] gives 1 - t^2.
        let a = HermitianMatrix::identity(2);
        let b = HermitianMatrix::from_real_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        let bp = pencil_breakpoints(&a, &b, 1e-8).unwrap();
        assert_eq!(bp.len(), 1);
        assert!(close(bp[0], 1.0));

        // A = diag(1,-1), B = [[0,1],[1,0]]: det = -1 - t^2 has no real root.
        let a = d(&[1.0, -1.0]);
        assert!(pencil_breakpoints(&a, &b, 1e-8).unwrap().is_empty());
    }

    #[test]
    fn degenerate_levi_is_rejected() {
        assert_eq!(
            pencil_breakpoints(&d(&[1.0, 1.0]), &d(&[1.0, 0.0]), 1e-8),
            Err(Error::DegenerateLevi)
        );
        assert_eq!(t_region(&d(&[1.0]), &d(&[1e-14]), 0), Err(Error::DegenerateLevi));
    }

    #[test]
    fn t_regions_of_small_pencils() {
        let r = t_region(&d(&[3.0]), &d(&[-2.0]), 0).unwrap();
        assert!(!r.is_unbounded());
        assert_eq!(r.intervals().len(), 1);
        assert!(close(r.intervals()[0].0, 0.0) && close(r.intervals()[0].1, 1.5));

        let r = t_region(&d(&[3.0]), &d(&[-2.0]), 1).unwrap();
        assert!(r.is_unbounded());
        assert!(close(r.intervals()[0].0, 1.5));

        let r = t_region(&d(&[1.0, 2.0]), &d(&[-1.0, -1.0]), 1).unwrap();
        assert!(!r.is_unbounded());
        assert_eq!(r.intervals().len(), 1);
        assert!(close(r.intervals()[0].0, 1.0) && close(r.intervals()[0].1, 2.0));

        assert!(t_region(&d(&[3.0]), &d(&[2.0]), 1).unwrap().is_empty());
    }

    #[test]
    fn complex_hermitian_pencil_region() {
        // A = [[2, i], [-i, 2]] (eigenvalues 1, 3), B = -I: roots at 1 and 3.
        let a = HermitianMatrix::from_rows(&[
            vec![Complex64::new(2.0, 0.0), Complex64::new(0.0, 1.0)],
            vec![Complex64::new(0.0, -1.0), Complex64::new(2.0, 0.0)],
        ])
        .unwrap();
        let b = d(&[-1.0, -1.0]);
        let r = t_region(&a, &b, 1).unwrap();
        assert_eq!(r.intervals().len(), 1);
        assert!(close(r.intervals()[0].0, 1.0) && close(r.intervals()[0].1, 3.0));

        // Indefinite complex B exercises the real embedding.
        let b = HermitianMatrix::from_rows(&[
            vec![Complex64::new(1.0, 0.0), Complex64::new(0.0, 2.0)],
            vec![Complex64::new(0.0, -2.0), Complex64::new(-1.0, 0.0)],
        ])
        .unwrap();
        for t in pencil_breakpoints(&a, &b, 1e-8).unwrap() {
            assert!(a.add_scaled(&b, t).det().abs() < 1e-9 * (1.0 + t * t));
        }
    }

    #[test]
    fn condition_z_examples() {
        assert!(condition_z(&d(&[-2.0]), 2, 0).unwrap());
        assert!(!condition_z(&d(&[-2.0]), 2, 1).unwrap());
        assert!(condition_z(&d(&[1.0, 1.0, -1.0]), 4, 3).unwrap());
        assert_eq!(
            condition_z(&d(&[1.0, 1.0]), 2, 0),
            Err(Error::DimensionMismatch {
                expected: 1,
                found: 2
            })
        );
    }

    #[test]
    fn region_constructor_validates() {
        assert!(TRegion::new(vec![(0.0, 1.0), (2.0, f64::INFINITY)]).unwrap().is_unbounded());
        assert!(TRegion::new(vec![(1.0, 0.5)]).is_err());
        assert!(TRegion::new(vec![(0.0, 2.0), (1.0, 3.0)]).is_err());
        assert!(TRegion::new(vec![(0.0, f64::INFINITY), (1.0, 3.0)]).is_err());
    }
}
