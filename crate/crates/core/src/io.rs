//! Scene files and CSV reports.
//!
//! A scene file is a JSON document:
//!
//! ```json
//! {
//!   "n": 2,
//!   "units": "chern",
//!   "bulk_samples": [
//!     { "weight": 0.5, "theta": [[[1, 0], [0, 0]], [[0, 0], [2, 0]]] }
//!   ],
//!   "boundary_samples": [
//!     { "weight": 1.0, "theta_tan": [[[3, 0]]], "levi": [[[-2, 0]]] }
//!   ]
//! }
//! ```
//!
//! Matrices are row-major nested arrays of `[re, im]` pairs. `units` and
//! either sample list may be omitted.

use std::fs;
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hermitian::HermitianMatrix;
use crate::scene::{BoundarySample, BulkSample, Scene, Units};

type MatrixRepr = Vec<Vec<[f64; 2]>>;

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SceneFile {
    n: usize,
    #[serde(default)]
    units: Option<String>,
    #[serde(default)]
    bulk_samples: Vec<BulkRepr>,
    #[serde(default)]
    boundary_samples: Vec<BoundaryRepr>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct BulkRepr {
    weight: f64,
    theta: MatrixRepr,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct BoundaryRepr {
    weight: f64,
    theta_tan: MatrixRepr,
    levi: MatrixRepr,
}

fn matrix_from_repr(m: &MatrixRepr, field: &str) -> Result<HermitianMatrix> {
    let rows: Vec<Vec<Complex64>> = m
        .iter()
        .map(|r| r.iter().map(|&[re, im]| Complex64::new(re, im)).collect())
        .collect();
    HermitianMatrix::from_rows(&rows).map_err(|e| match e {
        Error::InvalidMatrix(msg) => Error::Parse {
            location: field.to_string(),
            message: msg,
        },
        other => other,
    })
}

fn matrix_to_repr(h: &HermitianMatrix) -> MatrixRepr {
    h.rows()
        .into_iter()
        .map(|r| r.into_iter().map(|z| [z.re, z.im]).collect())
        .collect()
}

/// Parses and validates a scene document.
pub fn parse_scene_str(text: &str) -> Result<Scene> {
    let file: SceneFile = serde_json::from_str(text).map_err(|e| Error::Parse {
        location: format!("line {} column {}", e.line(), e.column()),
        message: e.to_string(),
    })?;
    let units = match &file.units {
        Some(u) => u.parse::<Units>()?,
        None => Units::Chern,
    };
    let bulk = file
        .bulk_samples
        .iter()
        .enumerate()
        .map(|(i, s)| {
            Ok(BulkSample {
                weight: s.weight,
                theta: matrix_from_repr(&s.theta, &format!("bulk_samples[{i}].theta"))?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let boundary = file
        .boundary_samples
        .iter()
        .enumerate()
        .map(|(i, s)| {
            Ok(BoundarySample {
                weight: s.weight,
                theta_tan: matrix_from_repr(
                    &s.theta_tan,
                    &format!("boundary_samples[{i}].theta_tan"),
                )?,
                levi: matrix_from_repr(&s.levi, &format!("boundary_samples[{i}].levi"))?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Scene::new(file.n, units, bulk, boundary)
}

pub fn parse_scene(path: &Path) -> Result<Scene> {
    let text = fs::read_to_string(path)
        .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    parse_scene_str(&text)
}

/// Serializes a scene; floats are written in shortest round-trip form, so
/// parsing the output reproduces every entry exactly.
pub fn scene_to_string(scene: &Scene) -> String {
    let file = SceneFile {
        n: scene.n(),
        units: Some(scene.units().as_str().to_string()),
        bulk_samples: scene
            .bulk()
            .iter()
            .map(|s| BulkRepr {
                weight: s.weight,
                theta: matrix_to_repr(&s.theta),
            })
            .collect(),
        boundary_samples: scene
            .boundary()
            .iter()
            .map(|s| BoundaryRepr {
                weight: s.weight,
                theta_tan: matrix_to_repr(&s.theta_tan),
                levi: matrix_to_repr(&s.levi),
            })
            .collect(),
    };
    let mut out = serde_json::to_string_pretty(&file).expect("scene serializes");
    out.push('\n');
    out
}

pub fn write_scene(scene: &Scene, path: &Path) -> Result<()> {
    fs::write(path, scene_to_string(scene))
        .map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

/// Scientific notation with 17 significant digits; `inf`, `-inf`, `nan`
/// for non-finite values. Negative zero prints as zero.
pub fn format_float(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else if x.is_infinite() {
        if x > 0.0 { "inf".into() } else { "-inf".into() }
    } else if x == 0.0 {
        format!("{:.16e}", 0.0)
    } else {
        format!("{x:.16e}")
    }
}

/// Minimal CSV table: a header and rows of preformatted cells.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct CsvTable {
    header: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl CsvTable {
    pub fn new(header: &[&str]) -> Self {
        Self {
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn rows(&self) -> &[Vec<String>] {
        &self.rows
    }

    pub fn render(&self) -> String {
        let mut out = self.header.join(",");
        out.push('\n');
        for r in &self.rows {
            out.push_str(&r.join(","));
            out.push('\n');
        }
        out
    }
}
