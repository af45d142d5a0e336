use thiserror::Error;

/// Errors raised anywhere in the simulation pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix is not Hermitian (defect {defect:e} exceeds {tolerance:e})")]
    NotHermitian { defect: f64, tolerance: f64 },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("singular linear system (condition estimate {condition:e})")]
    Singular { condition: f64 },

    #[error("kernel dimension is {dimension}, expected exactly one")]
    KernelDimension { dimension: usize },

    #[error("steady state is not unique (second/first eigenvalue magnitude ratio {ratio:e})")]
    NonUniqueSteadyState { ratio: f64 },

    #[error("matrix decomposition did not converge")]
    NoConvergence,

    #[error("photon cutoff must be at least 1, got {0}")]
    InvalidCutoff(usize),

    #[error("unknown electronic label `{0}` (expected one of s, g, e)")]
    UnknownLabel(String),

    #[error("eigenstate {index} has electron number {value}, not an integer")]
    SectorMixing { index: usize, value: f64 },

    #[error("resolvent solve failed at {count} grid frequencies")]
    ResolventFailed { count: usize },

    #[error("window [{lo}, {hi}] is not inside the frequency grid [{min}, {max}]")]
    WindowOutsideGrid { lo: f64, hi: f64, min: f64, max: f64 },

    #[error("invalid configuration at `{path}`: {message}")]
    Config { path: String, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn config(path: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Config {
            path: path.into(),
            message: message.into(),
        }
    }

    /// Process exit status for the command-line runner: 1 for configuration
    /// and output problems, 2 for numerical failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config { .. } | Error::Io(_) => 1,
            _ => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
