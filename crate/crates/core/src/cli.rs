//! The `morse` command line.
//!
//! Reports go to `--output` or stdout as CSV; failures print
//! `error[CODE]: message` on stderr and map to the exit codes of
//! [`Error::exit_code`]. A failing `check` suite exits with [`EXIT_SUITE_FAILURE`].

use std::ffi::OsString;
use std::fs;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

use crate::bergman::{model_density, ModelBoundaryData, ProfileFunction};
use crate::check::{run_suite, Suite};
use crate::error::{Error, Result};
use crate::hermitian::HermitianMatrix;
use crate::integrals::{bulk_term_with, strong_bounds_with, BoundaryPencil, Convexity};
use crate::io::{format_float, parse_scene, CsvTable};
use crate::scene::{Scene, Units};
use crate::torus::{convergence_table, TorusBundleSpec};
use crate::Tolerances;

pub const EXIT_SUITE_FAILURE: i32 = 5;

/// Environment variable capping the worker threads (`0` = automatic).
pub const THREADS_ENV: &str = "MORSE_THREADS";

#[derive(Debug, Parser)]
#[command(name = "morse", version, about = "Holomorphic Morse inequality bounds")]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,

    /// Write the CSV report here instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,

    /// Relative accuracy of adaptive quadrature.
    #[arg(long, global = true, default_value_t = 1e-10)]
    pub rel_tol: f64,

    /// Eigenvalues within zero_tol * (1 + spectral radius) count as zero.
    #[arg(long, global = true, default_value_t = 1e-10)]
    pub zero_tol: f64,

    /// Imaginary-part tolerance for real pencil breakpoints.
    #[arg(long, global = true, default_value_t = 1e-8)]
    pub imag_tol: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Convex,
    Concave,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum UnitsArg {
    Chern,
    Raw,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SuiteArg {
    Holefill,
    Fubini,
    Zq,
    Convergence,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Weak bound per grade: bulk, boundary and total, with per-sample rows.
    Bound {
        #[arg(long)]
        input: PathBuf,
        /// Grade; all grades 0..=n when omitted.
        #[arg(long)]
        q: Option<usize>,
    },
    /// Strong bound I(>=q) (convex) or I(<=n-1-q) (concave).
    Strong {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        q: usize,
        #[arg(long, value_enum)]
        mode: ModeArg,
    },
    /// Index regions T(q) of every boundary sample, or of diag(a) + t diag(b).
    Tregion {
        #[arg(long, conflicts_with_all = ["a", "b"])]
        input: Option<PathBuf>,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, requires = "b")]
        a: Option<Vec<f64>>,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, requires = "a")]
        b: Option<Vec<f64>>,
        #[arg(long)]
        q: usize,
    },
    /// Disc-bundle dimensions over a torus and their k^-n limit.
    Torus {
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
        lambda: Vec<i64>,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
        mu: Vec<i64>,
        #[arg(long)]
        q: usize,
        #[arg(long, value_delimiter = ',', required = true)]
        k: Vec<i64>,
    },
    /// Model Bergman density of diag(phi0) + t diag(levi) at heights v <= 0.
    Model {
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
        phi0: Vec<f64>,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
        levi: Vec<f64>,
        #[arg(long)]
        q: usize,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, default_value = "0")]
        v: Vec<f64>,
        #[arg(long, value_enum, default_value = "chern")]
        units: UnitsArg,
    },
    /// Run a built-in self-check suite.
    Check {
        #[arg(long, value_enum)]
        suite: SuiteArg,
    },
}

/// A finished command: the rendered report and the exit status.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub report: String,
    pub exit_code: i32,
    /// Message for stderr when `exit_code != 0`.
    pub message: Option<String>,
}

impl RunConfig {
    pub fn tolerances(&self) -> Tolerances {
        Tolerances {
            zero_rel: self.zero_tol,
            imag_tol: self.imag_tol,
            rel_tol: self.rel_tol,
        }
    }
}

fn diag(values: &[f64], name: &str) -> Result<HermitianMatrix> {
    if values.is_empty() {
        return Err(Error::InvalidArgument(format!("--{name} needs at least one entry")));
    }
    Ok(HermitianMatrix::diagonal(values))
}

fn status(ok: bool) -> String {
    if ok { "ok" } else { "fail" }.to_string()
}

/// Executes a parsed configuration.
pub fn run(config: &RunConfig) -> Result<Outcome> {
    let tol = config.tolerances();
    match &config.command {
        Command::Bound { input, q } => bound_report(&parse_scene(input)?, *q, &tol),
        Command::Strong { input, q, mode } => {
            let scene = parse_scene(input)?;
            let mode = match mode {
                ModeArg::Convex => Convexity::Convex,
                ModeArg::Concave => Convexity::Concave,
            };
            let s = strong_bounds_with(&scene, *q, mode, &tol)?;
            let mut t = CsvTable::new(&["grade", "term", "sign", "value"]);
            for g in &s.grades {
                let sign = if s.leading_grade.abs_diff(g.grade) % 2 == 0 { "+" } else { "-" };
                for (term, v) in [("bulk", g.bulk), ("boundary", g.boundary), ("total", g.total)] {
                    t.push(vec![g.grade.to_string(), term.into(), sign.into(), format_float(v)]);
                }
            }
            t.push(vec![
                s.q.to_string(),
                format!("strong_{}", mode.as_str()),
                "+".into(),
                format_float(s.total),
            ]);
            Ok(ok(t))
        }
        Command::Tregion { input, a, b, q } => {
            let pencils: Vec<(HermitianMatrix, HermitianMatrix)> = match (input, a, b) {
                (Some(path), _, _) => parse_scene(path)?
                    .boundary()
                    .iter()
                    .map(|s| (s.theta_tan.clone(), s.levi.clone()))
                    .collect(),
                (None, Some(a), Some(b)) => vec![(diag(a, "a")?, diag(b, "b")?)],
                _ => {
                    return Err(Error::InvalidArgument(
                        "tregion needs --input or both --a and --b".into(),
                    ))
                }
            };
            let mut t = CsvTable::new(&["sample", "grade", "lo", "hi", "unbounded"]);
            let mut any_unbounded = false;
            for (i, (a, b)) in pencils.iter().enumerate() {
                let region = BoundaryPencil::new(a, b, &tol)?.region(*q);
                any_unbounded |= region.is_unbounded();
                for &(lo, hi) in region.intervals() {
                    t.push(vec![
                        i.to_string(),
                        q.to_string(),
                        format_float(lo),
                        format_float(hi),
                        hi.is_infinite().to_string(),
                    ]);
                }
            }
            let _ = any_unbounded;
            Ok(ok(t))
        }
        Command::Torus { lambda, mu, q, k } => {
            let spec = TorusBundleSpec::new(lambda.clone(), mu.clone())?;
            let rows = convergence_table(&spec, *q, k)?;
            let mut t = CsvTable::new(&["k", "dim", "normalized", "limit", "abs_error"]);
            for r in rows {
                t.push(vec![
                    r.k.to_string(),
                    r.dim.to_string(),
                    format_float(r.normalized),
                    format_float(r.limit),
                    format_float(r.abs_error),
                ]);
            }
            Ok(ok(t))
        }
        Command::Model {
            phi0,
            levi,
            q,
            v,
            units,
        } => {
            let data = ModelBoundaryData::new(
                diag(phi0, "phi0")?,
                diag(levi, "levi")?,
                ProfileFunction::InverseSquare,
                *q,
            )?;
            let units = match units {
                UnitsArg::Chern => Units::Chern,
                UnitsArg::Raw => Units::Raw,
            };
            let mut t = CsvTable::new(&["v", "density", "units"]);
            for &height in v {
                let density = model_density(&data, height, tol.rel_tol, units)?;
                t.push(vec![format_float(height), format_float(density), units.to_string()]);
            }
            Ok(ok(t))
        }
        Command::Check { suite } => {
            let suite = match suite {
                SuiteArg::Holefill => Suite::Holefill,
                SuiteArg::Fubini => Suite::Fubini,
                SuiteArg::Zq => Suite::Zq,
                SuiteArg::Convergence => Suite::Convergence,
            };
            let cases = run_suite(suite)?;
            let mut t = CsvTable::new(&["suite", "case", "value", "tolerance", "status"]);
            let mut failed = 0;
            for c in &cases {
                failed += usize::from(!c.passed);
                t.push(vec![
                    suite.to_string(),
                    c.case.clone(),
                    format_float(c.value),
                    format_float(c.tolerance),
                    status(c.passed),
                ]);
            }
            let mut out = ok(t);
            if failed > 0 {
                out.exit_code = EXIT_SUITE_FAILURE;
                out.message = Some(format!(
                    "error[SUITE_FAILURE]: {failed} of {} cases failed in suite {suite}",
                    cases.len()
                ));
            }
            Ok(out)
        }
    }
}

fn ok(t: CsvTable) -> Outcome {
    Outcome {
        report: t.render(),
        exit_code: 0,
        message: None,
    }
}

/// Per-grade bulk, boundary and total rows, plus one row per boundary
/// sample. A sample whose `T(q)` is unbounded is reported as `divergent`
/// and makes the command exit with the divergence status after the report
/// is written.
fn bound_report(scene: &Scene, q: Option<usize>, tol: &Tolerances) -> Result<Outcome> {
    let grades: Vec<usize> = match q {
        Some(q) => vec![q],
        None => (0..=scene.n()).collect(),
    };
    let pencils = scene
        .boundary()
        .iter()
        .map(|s| BoundaryPencil::new(&s.theta_tan, &s.levi, tol))
        .collect::<Result<Vec<_>>>()?;
    let mut t = CsvTable::new(&["grade", "term", "sample", "value", "status"]);
    let mut first_divergence = None;
    for &g in &grades {
        let bulk = bulk_term_with(scene, g, tol);
        for &i in &bulk.degenerate {
            t.push(vec![
                g.to_string(),
                "bulk_sample".into(),
                i.to_string(),
                "nan".into(),
                "degenerate".into(),
            ]);
        }
        let mut terms = Vec::with_capacity(pencils.len());
        let mut divergent = false;
        for (i, (s, p)) in scene.boundary().iter().zip(&pencils).enumerate() {
            match p.term(g) {
                Ok(v) => {
                    let w = s.weight * v;
                    terms.push(w);
                    t.push(vec![
                        g.to_string(),
                        "boundary_sample".into(),
                        i.to_string(),
                        format_float(w),
                        "ok".into(),
                    ]);
                }
                Err(Error::DivergentBoundaryTerm { .. }) => {
                    divergent = true;
                    first_divergence.get_or_insert(Error::DivergentBoundaryTerm {
                        grade: g,
                        sample: Some(i),
                    });
                    t.push(vec![
                        g.to_string(),
                        "boundary_sample".into(),
                        i.to_string(),
                        "inf".into(),
                        "divergent".into(),
                    ]);
                }
                Err(e) => return Err(e),
            }
        }
        let boundary = if divergent {
            f64::INFINITY
        } else {
            crate::sum::compensated_sum(terms)
        };
        let st = if divergent { "divergent" } else { "ok" };
        for (term, v) in [("bulk", bulk.value), ("boundary", boundary), ("total", bulk.value + boundary)] {
            let row_status = if term == "bulk" { "ok" } else { st };
            t.push(vec![
                g.to_string(),
                term.into(),
                String::new(),
                format_float(v),
                row_status.into(),
            ]);
        }
    }
    let mut out = ok(t);
    if let Some(e) = first_divergence {
        out.exit_code = e.exit_code();
        out.message = Some(format!("error[{}]: {e}", e.code()));
    }
    Ok(out)
}

fn configure_threads() {
    let Ok(raw) = std::env::var(THREADS_ENV) else {
        return;
    };
    if let Ok(n) = raw.trim().parse::<usize>() {
        if n > 0 {
            // Fails only if the pool was already built, which leaves the
            // existing pool in place.
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
    }
}

/// Entry point of the binary: parses `args`, runs, writes the report and
/// returns the exit status.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let config = match RunConfig::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    configure_threads();
    match run(&config) {
        Ok(outcome) => {
            let written = match &config.output {
                Some(path) => fs::write(path, &outcome.report)
                    .map_err(|e| Error::Io(format!("{}: {e}", path.display()))),
                None => {
                    print!("{}", outcome.report);
                    Ok(())
                }
            };
            if let Err(e) = written {
                eprintln!("error[{}]: {e}", e.code());
                return e.exit_code();
            }
            if let Some(msg) = outcome.message {
                eprintln!("{msg}");
            }
            outcome.exit_code
        }
        Err(e) => {
            eprintln!("error[{}]: {e}", e.code());
            e.exit_code()
        }
    }
}
