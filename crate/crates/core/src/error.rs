use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("invalid mesh: {}", .0.join("; "))]
    InvalidMesh(Vec<String>),

    #[error("singular matrix: no acceptable pivot at row {row}")]
    SingularMatrix { row: usize },

    #[error("time step {step} failed: nonlinear solve stalled with residual {residual:e}")]
    StepFailure { step: usize, residual: f64 },

    #[error("non-finite state at t = {time}")]
    BlowUp { time: f64 },

    #[error("problem has no exact solution: {0}")]
    MissingExactSolution(String),

    #[error("unknown problem `{0}`")]
    UnknownProblem(String),

    #[error("refinement level {level}: {source}")]
    Level {
        level: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
