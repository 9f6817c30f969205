//! Independent reference computations shared by the integration tests.
#![allow(dead_code)]

use holomorphic_morse::HermitianMatrix;
use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;

pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// Exponential integral `E₁(x)` for `x > 0`: power series below 1,
/// continued fraction (modified Lentz) above.
pub fn e1(x: f64) -> f64 {
    assert!(x > 0.0);
    if x <= 1.0 {
        let mut sum = 0.0;
        let mut term = 1.0;
        for k in 1..60 {
            term *= -x / k as f64;
            sum += term / k as f64;
        }
        -EULER_GAMMA - x.ln() - sum
    } else {
        let tiny = 1e-300;
        let mut b = x + 1.0;
        let mut c = 1.0 / tiny;
        let mut d = 1.0 / b;
        let mut h = d;
        for i in 1..500 {
            let a = -((i * i) as f64);
            b += 2.0;
            d = 1.0 / (a * d + b);
            c = b + a / c;
            let del = c * d;
            h *= del;
            if (del - 1.0).abs() < 1e-16 {
                break;
            }
        }
        h * (-x).exp()
    }
}

/// `b(t) = 1 - t eᵗ E₁(t)` for the profile `a(ρ) = (1 - ρ)²`.
pub fn b_closed_form(t: f64) -> f64 {
    if t == 0.0 {
        1.0
    } else {
        1.0 - t * t.exp() * e1(t)
    }
}

/// Number of negative eigenvalues of a Hermitian matrix via `LDLᴴ`
/// without pivoting (Sylvester's law of inertia). Returns `None` if a
/// pivot is too small to trust.
pub fn ldl_negatives(m: &DMatrix<Complex64>) -> Option<usize> {
    let n = m.nrows();
    let mut a = m.clone();
    let scale = m.iter().map(|z| z.norm()).fold(0.0, f64::max).max(1e-300);
    let mut negatives = 0;
    for k in 0..n {
        let d = a[(k, k)].re;
        if d.abs() < 1e-9 * scale {
            return None;
        }
        if d < 0.0 {
            negatives += 1;
        }
        for i in (k + 1)..n {
            let l = a[(i, k)] / d;
            for j in (k + 1)..n {
                let u = a[(k, j)];
                a[(i, j)] -= l * u;
            }
        }
    }
    Some(negatives)
}

/// Index of `A + tB` by `LDLᴴ`, falling back to a dense eigensolve.
pub fn index_at(a: &HermitianMatrix, b: &HermitianMatrix, t: f64) -> usize {
    let m = a.as_matrix() + b.as_matrix().scale(t);
    if let Some(k) = ldl_negatives(&m) {
        return k;
    }
    m.symmetric_eigenvalues().iter().filter(|&&x| x < 0.0).count()
}

pub fn random_hermitian<R: Rng>(rng: &mut R, dim: usize) -> HermitianMatrix {
    let mut m = DMatrix::from_element(dim, dim, Complex64::new(0.0, 0.0));
    for i in 0..dim {
        m[(i, i)] = Complex64::new(rng.gen_range(-1.0..1.0), 0.0);
        for j in (i + 1)..dim {
            let z = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            m[(i, j)] = z;
            m[(j, i)] = z.conj();
        }
    }
    HermitianMatrix::from_matrix(m).unwrap()
}

/// `X Xᴴ + shift I`.
pub fn random_positive<R: Rng>(rng: &mut R, dim: usize, shift: f64) -> HermitianMatrix {
    let x = DMatrix::from_fn(dim, dim, |_, _| {
        Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
    });
    let m = &x * x.adjoint() + DMatrix::from_diagonal_element(dim, dim, Complex64::new(shift, 0.0));
    HermitianMatrix::from_matrix((&m + m.adjoint()).scale(0.5)).unwrap()
}

/// Smallest absolute eigenvalue; used to reject nearly singular draws.
pub fn min_abs_eigenvalue(h: &HermitianMatrix) -> f64 {
    h.as_matrix()
        .symmetric_eigenvalues()
        .iter()
        .map(|x| x.abs())
        .fold(f64::INFINITY, f64::min)
}

/// `h^q` over the disc bundle by enumerating fiber orders up to a generous
/// fixed bound, with no cutoff reasoning.
pub fn brute_disc_dim(lambda: &[i64], mu: &[i64], q: usize, k: i64) -> u128 {
    let bound = 4 * k * lambda.iter().map(|x| x.abs()).max().unwrap() + 16;
    let mut total = 0u128;
    for j in 0..=bound {
        let entries: Vec<i64> = lambda.iter().zip(mu).map(|(&l, &m)| k * l + j * m).collect();
        if entries.contains(&0) {
            continue;
        }
        if entries.iter().filter(|&&e| e < 0).count() == q {
            total += entries.iter().map(|e| e.unsigned_abs() as u128).product::<u128>();
        }
    }
    total
}
