use std::path::PathBuf;

use thiserror::Error;

/// Boxed error raised by a user-supplied sub-flow.
pub type FlowError = Box<dyn std::error::Error + Send + Sync + 'static>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("unknown splitting method `{0}`")]
    UnknownMethod(String),

    #[error("invalid splitting method: {0}")]
    InvalidMethod(String),

    #[error("method has {method} operators but the flow set has {flows}")]
    OperatorMismatch { method: usize, flows: usize },

    #[error("sub-flow {operator} failed in stage {stage}: {source}")]
    SubFlow {
        stage: usize,
        operator: usize,
        #[source]
        source: FlowError,
    },

    #[error("stage hook after stage {stage} failed: {source}")]
    StageHook {
        stage: usize,
        #[source]
        source: FlowError,
    },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("need at least {required} points, got {got}")]
    TooFewPoints { required: usize, got: usize },

    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("matrix dimension {0} exceeds the supported maximum")]
    DimensionTooLarge(usize),

    #[error("singular matrix")]
    SingularMatrix,

    #[error("no sign change on [{a}, {b}]")]
    NoSignChange { a: f64, b: f64 },

    #[error("root finder did not converge after {iterations} iterations")]
    RootNotConverged { iterations: usize },

    #[error("integrator exceeded {max_steps} steps at t = {t}")]
    MaxStepsExceeded { max_steps: usize, t: f64 },

    #[error("integrator step size underflow at t = {t}")]
    StepSizeUnderflow { t: f64 },

    #[error("reference refinement did not converge: best agreement {best:.3e} after {levels} levels")]
    RefinementNotConverged { levels: usize, best: f64 },

    #[error("non-finite or non-positive value in {0}")]
    InvalidValue(&'static str),

    #[error("amplitude underflow for mode {mode}")]
    AmplitudeUnderflow { mode: usize },

    #[error("numerical blow-up at step {step} (t = {t}): {reason}")]
    Blowup { step: usize, t: f64, reason: String },

    #[error("velocity boundary of {species} is not near vacuum: edge/peak = {ratio:.3e}")]
    BoundaryNotVacuum { species: &'static str, ratio: f64 },

    #[error("error target {target} unattainable in bracket (error at smallest step = {smallest})")]
    TargetUnattainable { target: f64, smallest: f64 },

    #[error("candidate method has fewer sub-integrations ({candidate}) than the baseline ({baseline})")]
    NegativeExtraWork { candidate: usize, baseline: usize },

    #[error("config error: {0}")]
    Config(String),

    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("CSV error on {path}: {source}")]
    Csv {
        path: PathBuf,
        #[source]
        source: csv::Error,
    },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io { path: path.into(), source }
    }

    pub(crate) fn csv(path: impl Into<PathBuf>, source: csv::Error) -> Self {
        Error::Csv { path: path.into(), source }
    }

    /// True for errors that come from the numerics rather than from bad input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::SubFlow { .. }
                | Error::StageHook { .. }
                | Error::SingularMatrix
                | Error::NoSignChange { .. }
                | Error::RootNotConverged { .. }
                | Error::MaxStepsExceeded { .. }
                | Error::StepSizeUnderflow { .. }
                | Error::RefinementNotConverged { .. }
                | Error::AmplitudeUnderflow { .. }
                | Error::Blowup { .. }
                | Error::TargetUnattainable { .. }
        )
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
