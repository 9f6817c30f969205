//! Exactly solvable examples: line bundles over flat tori and over disc
//! bundles on tori.
//!
//! On the torus `T^m` with constant curvature eigenvalues `λ`, the
//! cohomology in degree `q` has dimension `Π|λ_i|` when exactly `q` of the
//! `λ_i` are negative and vanishes otherwise. Over the unit disc bundle of
//! `L_μ^*` the sections split by their order `j` along the fiber, so the
//! dimension in degree `q` is `Σ_{j∈J(q)} Π_i |λ_i + j μ_i|`. Replacing `λ`
//! by `kλ` turns this sum into a Riemann sum for the boundary integral.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::hermitian::HermitianMatrix;
use crate::integrals::boundary_term_point;
use crate::scene::{BoundarySample, Scene, Units};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TorusBundleSpec {
    lambda: Vec<i64>,
    mu: Vec<i64>,
}

impl TorusBundleSpec {
    pub fn new(lambda: Vec<i64>, mu: Vec<i64>) -> Result<Self> {
        if lambda.is_empty() || lambda.len() != mu.len() {
            return Err(Error::DimensionMismatch {
                expected: lambda.len().max(1),
                found: mu.len(),
            });
        }
        if let Some(i) = lambda.iter().position(|&x| x == 0) {
            return Err(Error::DegenerateEigenvalue(i));
        }
        if let Some(i) = mu.iter().position(|&x| x == 0) {
            return Err(Error::DegenerateEigenvalue(lambda.len() + i));
        }
        Ok(Self { lambda, mu })
    }

    pub fn lambda(&self) -> &[i64] {
        &self.lambda
    }

    pub fn mu(&self) -> &[i64] {
        &self.mu
    }

    /// Complex dimension of the disc bundle.
    pub fn n(&self) -> usize {
        self.lambda.len() + 1
    }

    /// The same bundle with `λ` replaced by `kλ`.
    pub fn scaled(&self, k: i64) -> Result<Self> {
        let lambda = self
            .lambda
            .iter()
            .map(|&x| x.checked_mul(k).ok_or_else(overflow))
            .collect::<Result<Vec<_>>>()?;
        Self::new(lambda, self.mu.clone())
    }
}

fn overflow() -> Error {
    Error::InvalidArgument("integer overflow".into())
}

/// `Π|λ_i|` if exactly `q` entries are negative, else `0`.
pub fn torus_dim(lambda: &[i64], q: usize) -> Result<u128> {
    if let Some(i) = lambda.iter().position(|&x| x == 0) {
        return Err(Error::DegenerateEigenvalue(i));
    }
    let negatives = lambda.iter().filter(|&&x| x < 0).count();
    if negatives != q {
        return Ok(0);
    }
    lambda.iter().try_fold(1u128, |acc, &x| {
        acc.checked_mul(x.unsigned_abs() as u128).ok_or_else(overflow)
    })
}

/// The fiber orders `j ≥ 0` at which `λ + jμ` has exactly `q` negative
/// entries.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JSet {
    pub members: Vec<i64>,
    /// Orders where some `λ_i + jμ_i` vanishes; excluded from `members`.
    pub degenerate_skipped: Vec<i64>,
}

/// Enumerates `J(q)`.
///
/// Past `j = ceil(max |λ_i / μ_i|)` every entry has the sign of `μ_i`, so
/// the enumeration stops there; when `μ` itself has `q` negative entries
/// the set is infinite.
pub fn j_set(spec: &TorusBundleSpec, q: usize) -> Result<JSet> {
    let mu_index = spec.mu.iter().filter(|&&x| x < 0).count();
    if mu_index == q {
        return Err(Error::UnboundedJSet { grade: q });
    }
    let cutoff = spec
        .lambda
        .iter()
        .zip(&spec.mu)
        .map(|(&l, &m)| l.unsigned_abs().div_ceil(m.unsigned_abs()))
        .max()
        .unwrap_or(0) as i64
        + 1;
    let mut members = Vec::new();
    let mut degenerate_skipped = Vec::new();
    for j in 0..=cutoff {
        let mut negatives = 0;
        let mut degenerate = false;
        for (&l, &m) in spec.lambda.iter().zip(&spec.mu) {
            let e = l + j * m;
            if e == 0 {
                degenerate = true;
            } else if e < 0 {
                negatives += 1;
            }
        }
        if degenerate {
            degenerate_skipped.push(j);
        } else if negatives == q {
            members.push(j);
        }
    }
    Ok(JSet {
        members,
        degenerate_skipped,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BundleDimension {
    pub dim: u128,
    pub degenerate_skipped: Vec<i64>,
}

/// `h^q` of the `k`-th power of the pulled-back bundle over the disc bundle.
pub fn disc_bundle_dim(spec: &TorusBundleSpec, q: usize, k: i64) -> Result<BundleDimension> {
    if k < 1 {
        return Err(Error::InvalidArgument(format!("k must be positive, got {k}")));
    }
    let scaled = spec.scaled(k)?;
    let js = j_set(&scaled, q)?;
    let mut dim = 0u128;
    for &j in &js.members {
        let term = scaled
            .lambda
            .iter()
            .zip(&scaled.mu)
            .try_fold(1u128, |acc, (&l, &m)| {
                acc.checked_mul((l + j * m).unsigned_abs() as u128)
            })
            .ok_or_else(overflow)?;
        dim = dim.checked_add(term).ok_or_else(overflow)?;
    }
    Ok(BundleDimension {
        dim,
        degenerate_skipped: js.degenerate_skipped,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvergenceRow {
    pub k: i64,
    pub dim: u128,
    /// `k^{-n} · dim`.
    pub normalized: f64,
    pub limit: f64,
    pub abs_error: f64,
}

/// Normalized dimensions against their `k → ∞` limit, the boundary term of
/// the pencil `diag(λ) + t diag(μ)`.
pub fn convergence_table(
    spec: &TorusBundleSpec,
    q: usize,
    k_list: &[i64],
) -> Result<Vec<ConvergenceRow>> {
    let a = diag(&spec.lambda);
    let b = diag(&spec.mu);
    let limit = match boundary_term_point(&a, &b, q) {
        Ok(v) => v,
        Err(Error::DivergentBoundaryTerm { .. }) => {
            debug_assert!(matches!(j_set(spec, q), Err(Error::UnboundedJSet { .. })));
            return Err(Error::UnboundedJSet { grade: q });
        }
        Err(e) => return Err(e),
    };
    let n = spec.n() as i32;
    k_list
        .par_iter()
        .map(|&k| {
            let dim = disc_bundle_dim(spec, q, k)?.dim;
            let normalized = dim as f64 / (k as f64).powi(n);
            Ok(ConvergenceRow {
                k,
                dim,
                normalized,
                limit,
                abs_error: (normalized - limit).abs(),
            })
        })
        .collect::<Vec<_>>()
        .into_iter()
        .collect()
}

fn diag(v: &[i64]) -> HermitianMatrix {
    HermitianMatrix::diagonal(&v.iter().map(|&x| x as f64).collect::<Vec<_>>())
}

/// One unit-weight boundary sample with `Θ_tan = diag(λ)` and
/// `ℒ = diag(μ)`; no bulk, since the pulled-back curvature is flat along
/// the fibers.
pub fn scene_from_spec(spec: &TorusBundleSpec) -> Scene {
    Scene::new(
        spec.n(),
        Units::Chern,
        Vec::new(),
        vec![BoundarySample {
            weight: 1.0,
            theta_tan: diag(&spec.lambda),
            levi: diag(&spec.mu),
        }],
    )
    .expect("dimensions agree by construction")
}
