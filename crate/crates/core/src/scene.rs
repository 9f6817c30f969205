//! Quadrature-sampled geometry: bulk and boundary samples of a complex
//! manifold with boundary, in a frame orthonormal for its metric.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::hermitian::HermitianMatrix;

/// Normalization of weights and densities.
///
/// In `Chern` units no `2π` or factorial prefactors appear anywhere and the
/// torus examples produce integer dimensions. `Raw` leaves caller weights
/// untouched and applies the literal prefactors of the model densities.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Units {
    #[default]
    Chern,
    Raw,
}

impl Units {
    pub fn as_str(&self) -> &'static str {
        match self {
            Units::Chern => "chern",
            Units::Raw => "raw",
        }
    }
}

impl fmt::Display for Units {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Units {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "chern" => Ok(Units::Chern),
            "raw" => Ok(Units::Raw),
            other => Err(Error::Parse {
                location: "units".into(),
                message: format!("unknown units {other:?} (expected \"chern\" or \"raw\")"),
            }),
        }
    }
}

/// Interior sample: volume weight and curvature.
#[derive(Debug, Clone, PartialEq)]
pub struct BulkSample {
    pub weight: f64,
    pub theta: HermitianMatrix,
}

/// Boundary sample: area weight, tangential curvature and Levi form (the
/// latter for a defining function with unit-norm differential).
#[derive(Debug, Clone, PartialEq)]
pub struct BoundarySample {
    pub weight: f64,
    pub theta_tan: HermitianMatrix,
    pub levi: HermitianMatrix,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scene {
    n: usize,
    units: Units,
    bulk: Vec<BulkSample>,
    boundary: Vec<BoundarySample>,
}

impl Scene {
    /// Validates weights and dimensions. Bulk and boundary samples are
    /// indexed separately in errors.
    pub fn new(
        n: usize,
        units: Units,
        bulk: Vec<BulkSample>,
        boundary: Vec<BoundarySample>,
    ) -> Result<Self> {
        if n == 0 {
            return Err(Error::DimensionMismatch {
                expected: 1,
                found: 0,
            });
        }
        for (i, s) in bulk.iter().enumerate() {
            check_weight(s.weight, i)?;
            check_dim(&s.theta, n)?;
        }
        for (i, s) in boundary.iter().enumerate() {
            check_weight(s.weight, i)?;
            check_dim(&s.theta_tan, n - 1)?;
            check_dim(&s.levi, n - 1)?;
        }
        if n == 1 && !boundary.is_empty() {
            return Err(Error::DimensionMismatch {
                expected: 2,
                found: 1,
            });
        }
        Ok(Self {
            n,
            units,
            bulk,
            boundary,
        })
    }

    pub fn empty(n: usize) -> Self {
        Self::new(n, Units::Chern, Vec::new(), Vec::new()).expect("n >= 1")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn units(&self) -> Units {
        self.units
    }

    pub fn bulk(&self) -> &[BulkSample] {
        &self.bulk
    }

    pub fn boundary(&self) -> &[BoundarySample] {
        &self.boundary
    }
}

fn check_weight(w: f64, index: usize) -> Result<()> {
    if w.is_nan() || w < 0.0 || w.is_infinite() {
        return Err(Error::NegativeWeight(index));
    }
    Ok(())
}

fn check_dim(h: &HermitianMatrix, expected: usize) -> Result<()> {
    if h.dim() != expected {
        return Err(Error::DimensionMismatch {
            expected,
            found: h.dim(),
        });
    }
    Ok(())
}
