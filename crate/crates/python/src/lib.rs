//! Python bindings for `holomorphic-morse`.
//!
//! Matrices cross the boundary as lists of rows of Python numbers (real or
//! complex). Library errors raise `MorseError` with the machine-readable
//! code as the first argument.

use holomorphic_morse as hm;
use hm::bergman::{ModelBoundaryData, ProfileFunction};
use hm::integrals::Convexity;
use num_complex::Complex64;
use pyo3::create_exception;
use pyo3::exceptions::PyException;
use pyo3::prelude::*;

create_exception!(morse_bounds, MorseError, PyException);

fn err(e: hm::Error) -> PyErr {
    MorseError::new_err((e.code(), e.to_string()))
}

fn units(s: &str) -> PyResult<hm::Units> {
    s.parse().map_err(err)
}

/// Hermitian matrix.
#[pyclass(name = "HermitianMatrix", module = "morse_bounds", frozen)]
#[derive(Clone)]
struct PyHermitian(hm::HermitianMatrix);

#[pymethods]
impl PyHermitian {
    #[new]
    fn new(rows: Vec<Vec<Complex64>>) -> PyResult<Self> {
        hm::HermitianMatrix::from_rows(&rows).map(Self).map_err(err)
    }

    #[staticmethod]
    fn diagonal(values: Vec<f64>) -> PyResult<Self> {
        if values.is_empty() {
            return Err(err(hm::Error::InvalidArgument("empty diagonal".into())));
        }
        Ok(Self(hm::HermitianMatrix::diagonal(&values)))
    }

    #[getter]
    fn dim(&self) -> usize {
        self.0.dim()
    }

    fn rows(&self) -> Vec<Vec<Complex64>> {
        self.0.rows()
    }

    fn eigenvalues(&self) -> Vec<f64> {
        self.0.eigenvalues()
    }

    fn det(&self) -> f64 {
        self.0.det()
    }

    /// `(negatives, zeros, positives)`.
    #[pyo3(signature = (zero_tol=None))]
    fn inertia(&self, zero_tol: Option<f64>) -> (usize, usize, usize) {
        let i = match zero_tol {
            Some(t) => self.0.inertia(t),
            None => self.0.inertia_default(),
        };
        (i.negatives, i.zeros, i.positives)
    }

    fn __repr__(&self) -> String {
        format!("HermitianMatrix(dim={})", self.0.dim())
    }
}

/// Index region `T(q)`: finite intervals plus a possibly infinite last one.
#[pyclass(name = "TRegion", module = "morse_bounds", frozen)]
struct PyTRegion(hm::TRegion);

#[pymethods]
impl PyTRegion {
    #[getter]
    fn intervals(&self) -> Vec<(f64, f64)> {
        self.0.intervals().to_vec()
    }

    #[getter]
    fn unbounded(&self) -> bool {
        self.0.is_unbounded()
    }

    fn contains(&self, t: f64) -> bool {
        self.0.contains(t)
    }

    fn measure(&self) -> f64 {
        self.0.measure()
    }

    fn __repr__(&self) -> String {
        format!("TRegion({:?}, unbounded={})", self.0.intervals(), self.0.is_unbounded())
    }
}

/// Quadrature samples of the bulk and of the boundary.
#[pyclass(name = "Scene", module = "morse_bounds", frozen)]
struct PyScene(hm::Scene);

#[pymethods]
impl PyScene {
    /// `bulk` holds `(weight, theta)` pairs, `boundary` holds
    /// `(weight, theta_tan, levi)` triples.
    #[new]
    #[pyo3(signature = (n, bulk=Vec::new(), boundary=Vec::new(), units="chern"))]
    fn new(
        n: usize,
        bulk: Vec<(f64, PyHermitian)>,
        boundary: Vec<(f64, PyHermitian, PyHermitian)>,
        units: &str,
    ) -> PyResult<Self> {
        let bulk = bulk
            .into_iter()
            .map(|(weight, theta)| hm::BulkSample { weight, theta: theta.0 })
            .collect();
        let boundary = boundary
            .into_iter()
            .map(|(weight, a, b)| hm::BoundarySample { weight, theta_tan: a.0, levi: b.0 })
            .collect();
        hm::Scene::new(n, self::units(units)?, bulk, boundary)
            .map(Self)
            .map_err(err)
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        hm::io::parse_scene_str(text).map(Self).map_err(err)
    }

    #[staticmethod]
    fn load(path: std::path::PathBuf) -> PyResult<Self> {
        hm::io::parse_scene(&path).map(Self).map_err(err)
    }

    fn to_json(&self) -> String {
        hm::io::scene_to_string(&self.0)
    }

    #[getter]
    fn n(&self) -> usize {
        self.0.n()
    }

    fn weak_bound(&self, q: usize) -> PyResult<PyMorseBound> {
        hm::integrals::weak_bound(&self.0, q)
            .map(PyMorseBound)
            .map_err(err)
    }

    /// Returns `(leading_grade, total, [per-grade bounds])`.
    fn strong_bound(&self, q: usize, mode: &str) -> PyResult<(usize, f64, Vec<PyMorseBound>)> {
        let mode = match mode {
            "convex" => Convexity::Convex,
            "concave" => Convexity::Concave,
            other => {
                return Err(err(hm::Error::InvalidArgument(format!("unknown mode {other:?}"))))
            }
        };
        let s = hm::integrals::strong_bounds(&self.0, q, mode).map_err(err)?;
        Ok((
            s.leading_grade,
            s.total,
            s.grades.into_iter().map(PyMorseBound).collect(),
        ))
    }

    /// Returns `(vol_bundle, vol_x, vol_boundary_over_n, residual)`.
    fn holefill_check(&self) -> PyResult<(f64, f64, f64, f64)> {
        let h = hm::integrals::holefill_check(&self.0).map_err(err)?;
        Ok((h.vol_bundle, h.vol_x, h.vol_boundary_over_n, h.residual))
    }
}

#[pyclass(name = "MorseBound", module = "morse_bounds", frozen)]
struct PyMorseBound(hm::integrals::MorseBound);

#[pymethods]
impl PyMorseBound {
    #[getter]
    fn grade(&self) -> usize {
        self.0.grade
    }
    #[getter]
    fn bulk(&self) -> f64 {
        self.0.bulk
    }
    #[getter]
    fn boundary(&self) -> f64 {
        self.0.boundary
    }
    #[getter]
    fn total(&self) -> f64 {
        self.0.total
    }

    fn __repr__(&self) -> String {
        format!(
            "MorseBound(grade={}, bulk={}, boundary={}, total={})",
            self.0.grade, self.0.bulk, self.0.boundary, self.0.total
        )
    }
}

#[pyfunction]
fn t_region(a: &PyHermitian, b: &PyHermitian, q: usize) -> PyResult<PyTRegion> {
    hm::t_region(&a.0, &b.0, q).map(PyTRegion).map_err(err)
}

#[pyfunction]
fn pencil_breakpoints(a: &PyHermitian, b: &PyHermitian) -> PyResult<Vec<f64>> {
    hm::pencil_breakpoints(&a.0, &b.0, hm::Tolerances::default().imag_tol).map_err(err)
}

#[pyfunction]
fn condition_z(levi: &PyHermitian, n: usize, q: usize) -> PyResult<bool> {
    hm::condition_z(&levi.0, n, q).map_err(err)
}

#[pyfunction]
fn boundary_term_point(a: &PyHermitian, b: &PyHermitian, q: usize) -> PyResult<f64> {
    hm::integrals::boundary_term_point(&a.0, &b.0, q).map_err(err)
}

#[pyfunction]
#[pyo3(signature = (a, b, q, rel_tol=1e-10))]
fn boundary_term_quadrature(a: &PyHermitian, b: &PyHermitian, q: usize, rel_tol: f64) -> PyResult<f64> {
    hm::integrals::boundary_term_quadrature(&a.0, &b.0, q, rel_tol).map_err(err)
}

#[pyfunction]
#[pyo3(signature = (t, rel_tol=1e-10))]
fn profile_b(t: f64, rel_tol: f64) -> PyResult<f64> {
    hm::bergman::profile_b(t, &ProfileFunction::InverseSquare, rel_tol).map_err(err)
}

#[pyfunction]
#[pyo3(signature = (phi0, levi, q, v, units="chern", rel_tol=1e-10))]
fn model_density(
    phi0: &PyHermitian,
    levi: &PyHermitian,
    q: usize,
    v: f64,
    units: &str,
    rel_tol: f64,
) -> PyResult<f64> {
    let data = ModelBoundaryData::new(phi0.0.clone(), levi.0.clone(), ProfileFunction::InverseSquare, q)
        .map_err(err)?;
    hm::bergman::model_density(&data, v, rel_tol, self::units(units)?).map_err(err)
}

#[pyfunction]
#[pyo3(signature = (theta, q, units="chern"))]
fn flat_density(theta: &PyHermitian, q: usize, units: &str) -> PyResult<f64> {
    hm::bergman::flat_density(&theta.0, q, self::units(units)?).map_err(err)
}

#[pyfunction]
fn disc_bundle_dim(lambda: Vec<i64>, mu: Vec<i64>, q: usize, k: i64) -> PyResult<u128> {
    let spec = hm::torus::TorusBundleSpec::new(lambda, mu).map_err(err)?;
    hm::torus::disc_bundle_dim(&spec, q, k).map(|d| d.dim).map_err(err)
}

type ConvergenceRow = (i64, u128, f64, f64, f64);

/// Rows of `(k, dim, normalized, limit, abs_error)`.
#[pyfunction]
fn convergence_table(
    lambda: Vec<i64>,
    mu: Vec<i64>,
    q: usize,
    k: Vec<i64>,
) -> PyResult<Vec<ConvergenceRow>> {
    let spec = hm::torus::TorusBundleSpec::new(lambda, mu).map_err(err)?;
    let rows = hm::torus::convergence_table(&spec, q, &k).map_err(err)?;
    Ok(rows
        .into_iter()
        .map(|r| (r.k, r.dim, r.normalized, r.limit, r.abs_error))
        .collect())
}

/// Runs a self-check suite; returns `(case, value, tolerance, passed)` rows.
#[pyfunction]
fn run_suite(name: &str) -> PyResult<Vec<(String, f64, f64, bool)>> {
    let suite: hm::check::Suite = name.parse().map_err(err)?;
    let cases = hm::check::run_suite(suite).map_err(err)?;
    Ok(cases
        .into_iter()
        .map(|c| (c.case, c.value, c.tolerance, c.passed))
        .collect())
}

#[pymodule]
fn morse_bounds(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("MorseError", m.py().get_type::<MorseError>())?;
    m.add_class::<PyHermitian>()?;
    m.add_class::<PyTRegion>()?;
    m.add_class::<PyScene>()?;
    m.add_class::<PyMorseBound>()?;
    m.add_function(wrap_pyfunction!(t_region, m)?)?;
    m.add_function(wrap_pyfunction!(pencil_breakpoints, m)?)?;
    m.add_function(wrap_pyfunction!(condition_z, m)?)?;
    m.add_function(wrap_pyfunction!(boundary_term_point, m)?)?;
    m.add_function(wrap_pyfunction!(boundary_term_quadrature, m)?)?;
    m.add_function(wrap_pyfunction!(profile_b, m)?)?;
    m.add_function(wrap_pyfunction!(model_density, m)?)?;
    m.add_function(wrap_pyfunction!(flat_density, m)?)?;
    m.add_function(wrap_pyfunction!(disc_bundle_dim, m)?)?;
    m.add_function(wrap_pyfunction!(convergence_table, m)?)?;
    m.add_function(wrap_pyfunction!(run_suite, m)?)?;
    Ok(())
}
