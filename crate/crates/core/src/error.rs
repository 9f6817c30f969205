use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not Hermitian: entry ({row}, {col}) differs from the conjugate of ({col}, {row})")]
    NonHermitian { row: usize, col: usize },

    #[error("invalid matrix: {0}")]
    InvalidMatrix(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("Levi form is degenerate (a zero eigenvalue within tolerance)")]
    DegenerateLevi,

    #[error("curvature form is degenerate (a zero eigenvalue within tolerance)")]
    DegenerateCurvature,

    #[error("boundary term diverges: T({grade}) is unbounded{}", sample_suffix(*.sample))]
    DivergentBoundaryTerm { grade: usize, sample: Option<usize> },

    #[error("adaptive quadrature did not converge (depth limit {max_depth} reached, error estimate {error_estimate:e})")]
    QuadratureNonConvergence { max_depth: usize, error_estimate: f64 },

    #[error("boundary sample {sample} violates the {mode} condition at grade {grade}")]
    ConvexityViolation {
        sample: usize,
        grade: usize,
        mode: &'static str,
    },

    #[error("boundary sample {sample} is not conformal (Levi form differs from minus the tangential curvature)")]
    NotConformal { sample: usize },

    #[error("eigenvalue vector contains a zero entry at position {0}")]
    DegenerateEigenvalue(usize),

    #[error("J({grade}) is infinite: the Levi data has exactly {grade} negative eigenvalues")]
    UnboundedJSet { grade: usize },

    #[error("negative weight at sample {0}")]
    NegativeWeight(usize),

    #[error("invalid profile: {0}")]
    InvalidProfile(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error at {location}: {message}")]
    Parse { location: String, message: String },

    #[error("i/o error: {0}")]
    Io(String),
}

fn sample_suffix(sample: Option<usize>) -> String {
    match sample {
        Some(i) => format!(" at boundary sample {i}"),
        None => String::new(),
    }
}

impl Error {
    /// Stable identifier printed by the CLI next to every failure.
    pub fn code(&self) -> &'static str {
        match self {
            Error::NonHermitian { .. } => "NON_HERMITIAN",
            Error::InvalidMatrix(_) => "INVALID_MATRIX",
            Error::DimensionMismatch { .. } => "DIMENSION_MISMATCH",
            Error::DegenerateLevi => "DEGENERATE_LEVI",
            Error::DegenerateCurvature => "DEGENERATE_CURVATURE",
            Error::DivergentBoundaryTerm { .. } => "DIVERGENT_BOUNDARY_TERM",
            Error::QuadratureNonConvergence { .. } => "QUADRATURE_NON_CONVERGENCE",
            Error::ConvexityViolation { .. } => "CONVEXITY_VIOLATION",
            Error::NotConformal { .. } => "NOT_CONFORMAL",
            Error::DegenerateEigenvalue(_) => "DEGENERATE_EIGENVALUE",
            Error::UnboundedJSet { .. } => "UNBOUNDED_J_SET",
            Error::NegativeWeight(_) => "NEGATIVE_WEIGHT",
            Error::InvalidProfile(_) => "INVALID_PROFILE",
            Error::InvalidArgument(_) => "INVALID_ARGUMENT",
            Error::Parse { .. } => "PARSE_ERROR",
            Error::Io(_) => "IO_ERROR",
        }
    }

    /// Process exit status used by the `morse` binary.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Parse { .. }
            | Error::Io(_)
            | Error::NonHermitian { .. }
            | Error::NegativeWeight(_)
            | Error::DimensionMismatch { .. }
            | Error::InvalidMatrix(_)
            | Error::InvalidProfile(_)
            | Error::InvalidArgument(_) => 2,
            Error::DivergentBoundaryTerm { .. } | Error::UnboundedJSet { .. } => 3,
            Error::QuadratureNonConvergence { .. } => 4,
            _ => 1,
        }
    }
}
