use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is not symmetric (max asymmetry {asym:e})")]
    NotSymmetric { asym: f64 },
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("rank-deficient system: column {column} has no independent pivot")]
    RankDeficient { column: usize },
    #[error("matrix is singular or not positive definite at pivot {pivot}")]
    Singular { pivot: usize },
    #[error("Jacobi eigensolver did not converge in {sweeps} sweeps")]
    NoConvergence { sweeps: usize },
    #[error("cannot parse rational '{0}'")]
    ParseRational(String),
    #[error("unsupported order {order} for {kind}")]
    UnsupportedOrder { kind: &'static str, order: usize },
    #[error("stencil is inconsistent: {0}")]
    Inconsistent(String),
    #[error("grid size n = {n} is below the minimum {min}")]
    GridTooSmall { n: usize, min: usize },
    #[error("invalid operator: {0}")]
    InvalidOperator(String),
    #[error("unknown operator '{0}'")]
    UnknownOperator(String),
    #[error("tolerance {delta} cannot be met for any h in (0, 1]")]
    Unreachable { delta: f64 },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("Gram entry ({i}, {j}) is not a pure cosine polynomial")]
    NotCosine { i: usize, j: usize },
    #[error("all optimizer starts failed: {0}")]
    OptimizerFailed(String),
    #[error("accuracy system is infeasible (residual {residual:e})")]
    Infeasible { residual: f64 },
    #[error("non-finite value at step {step}")]
    NonFinite { step: usize },
    #[error("relative norm undefined: reference is zero")]
    ZeroReference,
    #[error("io: {0}")]
    Io(String),
    #[error("format: {0}")]
    Format(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Format(e.to_string())
    }
}
