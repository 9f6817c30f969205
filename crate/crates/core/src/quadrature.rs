//! Globally adaptive Gauss–Kronrod (7/15) quadrature on finite intervals.
//!
//! The panel with the largest error estimate is bisected until the summed
//! estimate meets the tolerance. A panel that would be split beyond
//! `max_depth` halvings ends the run with
//! [`Error::QuadratureNonConvergence`].

#![allow(clippy::excessive_precision)]

use crate::error::{Error, Result};
use crate::sum::compensated_sum;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

// Gauss weights at XGK[1], XGK[3], XGK[5], XGK[7].
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureOptions {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_depth: usize,
}

impl Default for QuadratureOptions {
    fn default() -> Self {
        Self {
            rel_tol: 1e-10,
            abs_tol: 0.0,
            max_depth: 40,
        }
    }
}

impl QuadratureOptions {
    pub fn with_rel_tol(rel_tol: f64) -> Self {
        Self {
            rel_tol,
            ..Self::default()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
    pub panels: usize,
}

#[derive(Debug, Clone, Copy)]
struct Panel {
    lo: f64,
    hi: f64,
    depth: usize,
    value: f64,
    error: f64,
    abs_value: f64,
}

fn kronrod<F: Fn(f64) -> f64>(f: &F, lo: f64, hi: f64, depth: usize) -> Panel {
    let center = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);
    let fc = f(center);
    let mut gauss = fc * WG[3];
    let mut kron = fc * WGK[7];
    let mut abs = fc.abs() * WGK[7];
    for j in 0..7 {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        kron += WGK[j] * (f1 + f2);
        abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            gauss += WG[j / 2] * (f1 + f2);
        }
    }
    Panel {
        lo,
        hi,
        depth,
        value: kron * half,
        error: ((kron - gauss) * half).abs(),
        abs_value: abs * half.abs(),
    }
}

/// Integrates `f` over `[lo, hi]`.
pub fn integrate<F: Fn(f64) -> f64>(
    f: F,
    lo: f64,
    hi: f64,
    opts: &QuadratureOptions,
) -> Result<Estimate> {
    integrate_pieces(&f, &[(lo, hi)], opts)
}

/// Integrates `f` over a union of finite intervals, refining all of them
/// against one shared tolerance.
pub fn integrate_pieces<F: Fn(f64) -> f64>(
    f: &F,
    pieces: &[(f64, f64)],
    opts: &QuadratureOptions,
) -> Result<Estimate> {
    let mut panels: Vec<Panel> = pieces
        .iter()
        .filter(|(lo, hi)| hi > lo)
        .map(|&(lo, hi)| kronrod(f, lo, hi, 0))
        .collect();
    if panels.is_empty() {
        return Ok(Estimate {
            value: 0.0,
            error: 0.0,
            panels: 0,
        });
    }
    loop {
        let value = compensated_sum(panels.iter().map(|p| p.value));
        let error: f64 = panels.iter().map(|p| p.error).sum();
        let abs_value: f64 = panels.iter().map(|p| p.abs_value).sum();
        let target = opts
            .abs_tol
            .max(opts.rel_tol * value.abs())
            .max(50.0 * f64::EPSILON * abs_value);
        if !value.is_finite() {
            return Err(Error::QuadratureNonConvergence {
                max_depth: opts.max_depth,
                error_estimate: error,
            });
        }
        if error <= target {
            return Ok(Estimate {
                value,
                error,
                panels: panels.len(),
            });
        }
        let (worst, _) = panels
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.error.total_cmp(&b.1.error))
            .expect("nonempty");
        let p = panels[worst];
        if p.depth >= opts.max_depth {
            return Err(Error::QuadratureNonConvergence {
                max_depth: opts.max_depth,
                error_estimate: error,
            });
        }
        let mid = 0.5 * (p.lo + p.hi);
        panels[worst] = kronrod(f, p.lo, mid, p.depth + 1);
        panels.insert(worst + 1, kronrod(f, mid, p.hi, p.depth + 1));
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_for_polynomials_of_low_degree() {
        let est = integrate(|x| x.powi(13) + 3.0 * x * x, 0.0, 2.0, &Default::default()).unwrap();
        let exact = 2f64.powi(14) / 14.0 + 8.0;
        assert!((est.value - exact).abs() < 1e-12 * exact);
        assert_eq!(est.panels, 1);
    }

    #[test]
    fn resolves_a_sharp_peak() {
        let opts = QuadratureOptions::with_rel_tol(1e-10);
        let est = integrate(|x| 1.0 / (1e-4 + (x - 0.3).powi(2)), 0.0, 1.0, &opts).unwrap();
        let exact = 100.0 * ((0.7f64 / 1e-2).atan() + (0.3f64 / 1e-2).atan());
        assert!((est.value - exact).abs() < 1e-9 * exact, "{} vs {exact}", est.value);
    }

    #[test]
    fn integrable_endpoint_singularity() {
        let opts = QuadratureOptions::with_rel_tol(1e-8);
        let est = integrate(|x: f64| x.ln(), 0.0, 1.0, &opts).unwrap();
        assert!((est.value + 1.0).abs() < 1e-7);
    }

    #[test]
    fn depth_limit_reports_non_convergence() {
        let opts = QuadratureOptions {
            rel_tol: 1e-14,
            abs_tol: 0.0,
            max_depth: 3,
        };
        let err = integrate(|x: f64| (1.0 / x).sin(), 1e-6, 1.0, &opts).unwrap_err();
        assert!(matches!(err, Error::QuadratureNonConvergence { max_depth: 3, .. }));
    }

    #[test]
    fn empty_pieces_integrate_to_zero() {
        let est = integrate_pieces(&|x| x, &[], &Default::default()).unwrap();
        assert_eq!(est.value, 0.0);
    }
}
