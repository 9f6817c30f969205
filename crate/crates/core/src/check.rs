//! Built-in self-check suites run by `morse check --suite <name>`.
//!
//! Every suite draws its inputs from a fixed-seed generator, so a suite
//! produces the same report on every run.

use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bergman::{fiber_integral_residual, ModelBoundaryData, ProfileFunction};
use crate::error::{Error, Result};
use crate::hermitian::HermitianMatrix;
use crate::integrals::{boundary_term_point, holefill_check};
use crate::pencil::{condition_z, t_region};
use crate::scene::{BoundarySample, BulkSample, Scene, Units};
use crate::torus::{convergence_table, disc_bundle_dim, TorusBundleSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Holefill,
    Fubini,
    Zq,
    Convergence,
}

impl Suite {
    pub const ALL: [Suite; 4] = [Suite::Holefill, Suite::Fubini, Suite::Zq, Suite::Convergence];

    pub fn as_str(&self) -> &'static str {
        match self {
            Suite::Holefill => "holefill",
            Suite::Fubini => "fubini",
            Suite::Zq => "zq",
            Suite::Convergence => "convergence",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|x| x.as_str() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown suite {s:?}")))
    }
}

/// One checked quantity: `|value| <= tolerance` (or a boolean stored as
/// `0`/`1` with tolerance `0`).
#[derive(Debug, Clone, PartialEq)]
pub struct CheckCase {
    pub case: String,
    pub value: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl CheckCase {
    fn bound(case: String, value: f64, tolerance: f64) -> Self {
        Self {
            passed: value.abs() <= tolerance,
            case,
            value,
            tolerance,
        }
    }

    fn flag(case: String, ok: bool) -> Self {
        Self {
            case,
            value: if ok { 0.0 } else { 1.0 },
            tolerance: 0.0,
            passed: ok,
        }
    }
}

pub fn run_suite(suite: Suite) -> Result<Vec<CheckCase>> {
    match suite {
        Suite::Holefill => holefill_suite(),
        Suite::Fubini => fubini_suite(),
        Suite::Zq => zq_suite(),
        Suite::Convergence => convergence_suite(),
    }
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Hermitian matrix with real and imaginary parts uniform in `[-1, 1)`.
pub fn random_hermitian<R: Rng>(rng: &mut R, dim: usize, complex: bool) -> HermitianMatrix {
    let mut m = DMatrix::from_element(dim, dim, Complex64::new(0.0, 0.0));
    for i in 0..dim {
        m[(i, i)] = Complex64::new(rng.gen_range(-1.0..1.0), 0.0);
        for j in (i + 1)..dim {
            let im = if complex { rng.gen_range(-1.0..1.0) } else { 0.0 };
            let z = Complex64::new(rng.gen_range(-1.0..1.0), im);
            m[(i, j)] = z;
            m[(j, i)] = z.conj();
        }
    }
    HermitianMatrix::from_matrix(m).expect("constructed Hermitian")
}

/// `X Xᴴ + shift I` for a random `X`.
pub fn random_positive<R: Rng>(rng: &mut R, dim: usize, shift: f64) -> HermitianMatrix {
    let x = DMatrix::from_fn(dim, dim, |_, _| {
        Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
    });
    let m = &x * x.adjoint() + DMatrix::from_diagonal_element(dim, dim, Complex64::new(shift, 0.0));
    HermitianMatrix::from_matrix((&m + m.adjoint()).scale(0.5)).expect("constructed Hermitian")
}

fn holefill_suite() -> Result<Vec<CheckCase>> {
    let mut r = rng(0x401e_f111);
    let mut out = Vec::new();
    for k in 0..25 {
        let m = r.gen_range(1..=3);
        let n = m + 1;
        let bulk = (0..r.gen_range(0..4))
            .map(|_| BulkSample {
                weight: r.gen_range(0.0..2.0),
                theta: random_positive(&mut r, n, 0.1),
            })
            .collect();
        let boundary: Vec<BoundarySample> = (0..r.gen_range(1..4))
            .map(|_| {
                let a = random_positive(&mut r, m, 0.1);
                BoundarySample {
                    weight: r.gen_range(0.0..2.0),
                    levi: a.neg(),
                    theta_tan: a,
                }
            })
            .collect();
        let first = boundary[0].theta_tan.clone();
        let scene = Scene::new(n, Units::Chern, bulk, boundary)?;
        let h = holefill_check(&scene)?;
        let scale = h.vol_bundle.abs().max(f64::MIN_POSITIVE);
        out.push(CheckCase::bound(format!("scene{k}.residual"), h.residual / scale, 1e-10));
        let term = boundary_term_point(&first, &first.neg(), 0)?;
        let det = first.det() / n as f64;
        out.push(CheckCase::bound(format!("scene{k}.det_over_n"), (term - det) / det, 1e-12));
    }
    Ok(out)
}

fn fubini_suite() -> Result<Vec<CheckCase>> {
    let mut r = rng(0xf0b1);
    let mut out = Vec::new();
    let fixed = ModelBoundaryData::new(
        HermitianMatrix::diagonal(&[3.0]),
        HermitianMatrix::diagonal(&[-2.0]),
        ProfileFunction::InverseSquare,
        0,
    )?;
    let mut cases = vec![("diag3_levi-2".to_string(), fixed)];
    let constant = ModelBoundaryData::new(
        HermitianMatrix::diagonal(&[3.0]),
        HermitianMatrix::diagonal(&[-2.0]),
        ProfileFunction::constant(1e3)?,
        0,
    )?;
    cases.push(("constant_profile".to_string(), constant));
    for k in 0..4 {
        let m = r.gen_range(1..=2);
        let phi0 = random_hermitian(&mut r, m, true);
        let levi = random_hermitian(&mut r, m, true);
        let Some(q) = bounded_grade(&phi0, &levi) else {
            continue;
        };
        cases.push((format!("random{k}"), ModelBoundaryData::new(phi0, levi, Default::default(), q)?));
    }
    for (name, data) in cases {
        let term = data.boundary_term();
        let res = fiber_integral_residual(&data, 1e-6)?;
        out.push(CheckCase::bound(name, res, 1e-6 * term));
    }
    Ok(out)
}

/// A grade with a nonempty bounded region, if any.
fn bounded_grade(a: &HermitianMatrix, b: &HermitianMatrix) -> Option<usize> {
    (0..=a.dim()).find(|&q| {
        t_region(a, b, q).is_ok_and(|reg| !reg.is_unbounded() && !reg.is_empty())
    })
}

fn zq_suite() -> Result<Vec<CheckCase>> {
    let mut r = rng(0x2e7a);
    let mut mismatches = 0usize;
    let mut checked = 0usize;
    for _ in 0..1000 {
        let m = r.gen_range(1..=5);
        let n = m + 1;
        let levi = random_hermitian(&mut r, m, true);
        let a = random_hermitian(&mut r, m, true);
        let negatives = levi.inertia_default().negatives;
        for q in 0..=n {
            let z = condition_z(&levi, n, q)?;
            let unbounded = match t_region(&a, &levi, q) {
                Ok(reg) => reg.is_unbounded(),
                Err(Error::DegenerateLevi) => continue,
                Err(e) => return Err(e),
            };
            checked += 1;
            if z == (negatives == q) || unbounded != (negatives == q) {
                mismatches += 1;
            }
        }
    }
    Ok(vec![
        CheckCase::flag(format!("equivalence_over_{checked}_cases"), mismatches == 0),
        CheckCase::bound("mismatches".into(), mismatches as f64, 0.0),
    ])
}

fn convergence_suite() -> Result<Vec<CheckCase>> {
    let mut out = Vec::new();
    let spec = TorusBundleSpec::new(vec![3], vec![-2])?;
    for (k, expected) in [(1, 4u128), (2, 12), (10, 240), (100, 22650)] {
        let dim = disc_bundle_dim(&spec, 0, k)?.dim;
        out.push(CheckCase::flag(format!("dim_k{k}={expected}"), dim == expected));
    }
    let ks: Vec<i64> = (10..=200).collect();
    let worst = convergence_table(&spec, 0, &ks)?
        .iter()
        .map(|row| row.abs_error * row.k as f64)
        .fold(0.0, f64::max);
    out.push(CheckCase::bound("max_k_times_error".into(), worst, 2.0));

    let spec = TorusBundleSpec::new(vec![2, 3], vec![-1, -1])?;
    let rows = convergence_table(&spec, 1, &[10, 100])?;
    out.push(CheckCase::flag(
        "nonconformal_limit_positive".into(),
        rows[0].limit > 0.0,
    ));
    out.push(CheckCase::bound(
        "nonconformal_k100_error".into(),
        rows[1].abs_error,
        rows[0].abs_error,
    ));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::ALL {
            assert_eq!(s.as_str().parse::<Suite>().unwrap(), s);
        }
        assert!("nope".parse::<Suite>().is_err());
    }

    #[test]
    fn random_generators_are_hermitian_and_definite() {
        let mut r = rng(1);
        let p = random_positive(&mut r, 4, 0.1);
        assert_eq!(p.inertia_default().positives, 4);
        let h = random_hermitian(&mut r, 3, true);
        assert_eq!(h.dim(), 3);
    }

    #[test]
    fn convergence_suite_passes() {
        assert!(run_suite(Suite::Convergence).unwrap().iter().all(|c| c.passed));
    }
}
