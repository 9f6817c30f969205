//! Dense Hermitian matrices and their inertia.
//!
//! Curvature forms, Levi forms and the pencils built from them are all
//! represented in a frame that is orthonormal for the ambient metric, so
//! every geometric quantity reduces to the eigenvalues of a small Hermitian
//! matrix.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Entrywise tolerance for the Hermitian check on construction.
pub const HERMITIAN_TOL: f64 = 1e-12;

/// Relative factor of the default zero threshold, see [`default_zero_tol`].
pub const DEFAULT_ZERO_REL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct HermitianMatrix {
    data: DMatrix<Complex64>,
}

/// Counts of negative, zero and positive eigenvalues.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Inertia {
    pub negatives: usize,
    pub zeros: usize,
    pub positives: usize,
}

impl Inertia {
    pub fn dim(&self) -> usize {
        self.negatives + self.zeros + self.positives
    }

    pub fn is_nondegenerate(&self) -> bool {
        self.zeros == 0
    }
}

impl HermitianMatrix {
    /// Builds a matrix from a dense complex matrix, checking the Hermitian
    /// symmetry to [`HERMITIAN_TOL`] (scaled by the largest entry when it
    /// exceeds one). The stored matrix is the exact Hermitian part.
    pub fn from_matrix(m: DMatrix<Complex64>) -> Result<Self> {
        let n = m.nrows();
        if n == 0 {
            return Err(Error::InvalidMatrix("dimension must be at least 1".into()));
        }
        if m.ncols() != n {
            return Err(Error::InvalidMatrix(format!(
                "matrix is {}x{}, expected square",
                n,
                m.ncols()
            )));
        }
        if m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidMatrix("non-finite entry".into()));
        }
        let scale = m.iter().map(|z| z.norm()).fold(1.0_f64, f64::max);
        let tol = HERMITIAN_TOL * scale;
        for i in 0..n {
            for j in i..n {
                if (m[(i, j)] - m[(j, i)].conj()).norm() > tol {
                    return Err(Error::NonHermitian { row: i, col: j });
                }
            }
        }
        let mut data = m;
        for i in 0..n {
            data[(i, i)] = Complex64::new(data[(i, i)].re, 0.0);
            for j in (i + 1)..n {
                let avg = (data[(i, j)] + data[(j, i)].conj()) * 0.5;
                data[(i, j)] = avg;
                data[(j, i)] = avg.conj();
            }
        }
        Ok(Self { data })
    }

    /// Builds a matrix from row-major rows of complex entries.
    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        let n = rows.len();
        if let Some(bad) = rows.iter().find(|r| r.len() != n) {
            return Err(Error::InvalidMatrix(format!(
                "row of length {} in a matrix with {} rows",
                bad.len(),
                n
            )));
        }
        Self::from_matrix(DMatrix::from_fn(n, n, |i, j| rows[i][j]))
    }

    /// Real symmetric matrix from row-major rows.
    pub fn from_real_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let rows: Vec<Vec<Complex64>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| Complex64::new(x, 0.0)).collect())
            .collect();
        Self::from_rows(&rows)
    }

    /// Diagonal matrix with the given real entries.
    ///
    /// Panics if `values` is empty.
    pub fn diagonal(values: &[f64]) -> Self {
        assert!(!values.is_empty(), "diagonal matrix needs at least one entry");
        let n = values.len();
        let data = DMatrix::from_fn(n, n, |i, j| {
            if i == j {
                Complex64::new(values[i], 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        });
        Self { data }
    }

    pub fn identity(dim: usize) -> Self {
        Self::diagonal(&vec![1.0; dim])
    }

    pub fn dim(&self) -> usize {
        self.data.nrows()
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.data[(row, col)]
    }

    pub fn as_matrix(&self) -> &DMatrix<Complex64> {
        &self.data
    }

    /// Row-major copy of the entries.
    pub fn rows(&self) -> Vec<Vec<Complex64>> {
        (0..self.dim())
            .map(|i| (0..self.dim()).map(|j| self.data[(i, j)]).collect())
            .collect()
    }

    /// `self + t * other`. Panics on a dimension mismatch.
    pub fn add_scaled(&self, other: &HermitianMatrix, t: f64) -> HermitianMatrix {
        assert_eq!(self.dim(), other.dim(), "pencil dimensions differ");
        Self {
            data: &self.data + other.data.scale(t),
        }
    }

    pub fn scaled(&self, f: f64) -> HermitianMatrix {
        Self {
            data: self.data.scale(f),
        }
    }

    pub fn neg(&self) -> HermitianMatrix {
        self.scaled(-1.0)
    }

    pub fn is_diagonal(&self) -> bool {
        let n = self.dim();
        (0..n).all(|i| (0..n).all(|j| i == j || self.data[(i, j)].norm() == 0.0))
    }

    /// Largest entrywise distance to `other`; `f64::INFINITY` for a
    /// dimension mismatch.
    pub fn max_abs_diff(&self, other: &HermitianMatrix) -> f64 {
        if self.dim() != other.dim() {
            return f64::INFINITY;
        }
        self.data
            .iter()
            .zip(other.data.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut ev: Vec<f64> = if self.dim() == 1 {
            vec![self.data[(0, 0)].re]
        } else {
            self.data.clone().symmetric_eigenvalues().iter().copied().collect()
        };
        ev.sort_by(f64::total_cmp);
        ev
    }

    /// Real determinant (the product of the eigenvalues).
    pub fn det(&self) -> f64 {
        match self.dim() {
            1 => self.data[(0, 0)].re,
            2 => {
                let a = self.data[(0, 0)].re;
                let d = self.data[(1, 1)].re;
                a * d - self.data[(0, 1)].norm_sqr()
            }
            _ => self.data.clone().lu().determinant().re,
        }
    }

    /// Frobenius norm, used as a cheap scale for relative tolerances.
    pub fn norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn inertia(&self, zero_tol: f64) -> Inertia {
        inertia_of_eigenvalues(&self.eigenvalues(), zero_tol)
    }

    /// Inertia with the default zero threshold.
    pub fn inertia_default(&self) -> Inertia {
        let ev = self.eigenvalues();
        let tol = zero_tol_for(&ev, DEFAULT_ZERO_REL);
        inertia_of_eigenvalues(&ev, tol)
    }
}

/// Counts eigenvalues below `-zero_tol`, within `±zero_tol`, and above
/// `+zero_tol`.
pub fn inertia(h: &HermitianMatrix, zero_tol: f64) -> Inertia {
    h.inertia(zero_tol)
}

/// `1e-10 * (1 + spectral radius)`.
pub fn default_zero_tol(h: &HermitianMatrix) -> f64 {
    zero_tol_for(&h.eigenvalues(), DEFAULT_ZERO_REL)
}

pub(crate) fn zero_tol_for(eigenvalues: &[f64], rel: f64) -> f64 {
    let radius = eigenvalues.iter().fold(0.0_f64, |m, x| m.max(x.abs()));
    rel * (1.0 + radius)
}

pub(crate) fn inertia_of_eigenvalues(eigenvalues: &[f64], zero_tol: f64) -> Inertia {
    let mut out = Inertia {
        negatives: 0,
        zeros: 0,
        positives: 0,
    };
    for &x in eigenvalues {
        if x < -zero_tol {
            out.negatives += 1;
        } else if x > zero_tol {
            out.positives += 1;
        } else {
            out.zeros += 1;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn inertia_of_small_examples() {
        let tol = 1e-10;
        let i = HermitianMatrix::diagonal(&[1.0, 1.0]).inertia(tol);
        assert_eq!((i.negatives, i.zeros, i.positives), (0, 0, 2));
        let i = HermitianMatrix::diagonal(&[-2.0, 3.0, -5.0]).inertia(tol);
        assert_eq!((i.negatives, i.zeros, i.positives), (2, 0, 1));
        let swap = HermitianMatrix::from_real_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        let i = swap.inertia(tol);
        assert_eq!((i.negatives, i.zeros, i.positives), (1, 0, 1));
    }

    #[test]
    fn zero_band_counts_near_zero_eigenvalues() {
        let h = HermitianMatrix::diagonal(&[1e-12, -3.0]);
        assert_eq!(h.inertia_default().zeros, 1);
        assert_eq!(h.inertia(1e-13).positives, 1);
    }

    #[test]
    fn rejects_non_hermitian() {
        let rows = vec![vec![c(1.0, 0.0), c(0.0, 1.0)], vec![c(0.0, 1.0), c(2.0, 0.0)]];
        assert_eq!(
            HermitianMatrix::from_rows(&rows),
            Err(Error::NonHermitian { row: 0, col: 1 })
        );
        let rows = vec![vec![c(1.0, 0.5)]];
        assert!(matches!(
            HermitianMatrix::from_rows(&rows),
            Err(Error::NonHermitian { .. })
        ));
    }

    #[test]
    fn rejects_empty_and_ragged() {
        assert!(HermitianMatrix::from_rows(&[]).is_err());
        let rows = vec![vec![c(1.0, 0.0), c(0.0, 0.0)], vec![c(0.0, 0.0)]];
        assert!(matches!(
            HermitianMatrix::from_rows(&rows),
            Err(Error::InvalidMatrix(_))
        ));
    }

    #[test]
    fn complex_hermitian_eigenvalues() {
        // [[2, i], [-i, 2]] has eigenvalues 1 and 3.
        let h = HermitianMatrix::from_rows(&[
            vec![c(2.0, 0.0), c(0.0, 1.0)],
            vec![c(0.0, -1.0), c(2.0, 0.0)],
        ])
        .unwrap();
        let ev = h.eigenvalues();
        assert!((ev[0] - 1.0).abs() < 1e-14 && (ev[1] - 3.0).abs() < 1e-14);
        assert!((h.det() - 3.0).abs() < 1e-14);
    }

    #[test]
    fn det_matches_eigen_product_in_dim_three() {
        let h = HermitianMatrix::from_rows(&[
            vec![c(1.0, 0.0), c(0.5, 0.2), c(0.0, -1.0)],
            vec![c(0.5, -0.2), c(-2.0, 0.0), c(0.3, 0.0)],
            vec![c(0.0, 1.0), c(0.3, 0.0), c(0.7, 0.0)],
        ])
        .unwrap();
        let prod: f64 = h.eigenvalues().iter().product();
        assert!((h.det() - prod).abs() < 1e-12);
    }
}
