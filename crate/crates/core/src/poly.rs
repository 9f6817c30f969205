//! Real polynomials in `t` and the determinant polynomial of a pencil.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::hermitian::HermitianMatrix;

/// `c[0] + c[1] t + ... + c[m] t^m`.
#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial {
    coefficients: Vec<f64>,
}

impl Polynomial {
    pub fn new(coefficients: Vec<f64>) -> Self {
        Self { coefficients }
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.coefficients
    }

    pub fn degree(&self) -> usize {
        self.coefficients.len().saturating_sub(1)
    }

    pub fn eval(&self, t: f64) -> f64 {
        self.coefficients.iter().rev().fold(0.0, |acc, &c| acc * t + c)
    }

    /// Value at `t` of the antiderivative vanishing at zero.
    pub fn antiderivative_at(&self, t: f64) -> f64 {
        let acc = self
            .coefficients
            .iter()
            .enumerate()
            .rev()
            .fold(0.0, |acc, (j, &c)| acc * t + c / (j + 1) as f64);
        acc * t
    }

    /// Exact integral over `[lo, hi]`.
    pub fn integrate(&self, lo: f64, hi: f64) -> f64 {
        self.antiderivative_at(hi) - self.antiderivative_at(lo)
    }
}

/// Coefficients of `p(t) = det(A + tB)`.
///
/// The determinant is sampled at `m + 1` Chebyshev points on `[-s, s]`,
/// where `s` is the ratio of the Frobenius norms of `A` and `B` (the scale
/// of the roots), and the interpolation system is solved in the rescaled
/// variable `t / s`.
pub fn det_polynomial(a: &HermitianMatrix, b: &HermitianMatrix) -> Result<Polynomial> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            found: b.dim(),
        });
    }
    let m = a.dim();
    let (na, nb) = (a.norm(), b.norm());
    let scale = if na > 0.0 && nb > 0.0 { na / nb } else { 1.0 };

    let nodes: Vec<f64> = (0..=m)
        .map(|k| ((k as f64 + 0.5) * PI / (m + 1) as f64).cos())
        .collect();
    let vandermonde = DMatrix::from_fn(m + 1, m + 1, |i, j| nodes[i].powi(j as i32));
    let values = DVector::from_iterator(m + 1, nodes.iter().map(|&u| a.add_scaled(b, u * scale).det()));
    let scaled = vandermonde
        .lu()
        .solve(&values)
        .ok_or_else(|| Error::InvalidMatrix("singular interpolation system".into()))?;
    let coefficients = scaled
        .iter()
        .enumerate()
        .map(|(j, &c)| c / scale.powi(j as i32))
        .collect();
    Ok(Polynomial::new(coefficients))
}
