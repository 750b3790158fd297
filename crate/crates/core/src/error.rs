use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("quadrature did not converge: max |dG| = {max_change:.3e} after doubling to order {order}")]
    QuadratureFailure { order: usize, max_change: f64 },

    #[error("eigen-solver did not converge for a {dim}x{dim} matrix")]
    SolverNonConvergence { dim: usize },

    #[error("eigenvalue {value:.3e} is below the clamp threshold {threshold:.1e}")]
    ExcessiveClamp { value: f64, threshold: f64 },

    #[error("truncation bound too loose for the omega correction (epsilon = {epsilon:.3e} >= 0.5)")]
    BoundTooLoose { epsilon: f64 },

    #[error("matrix is not Hermitian (max |A - A^H| = {deviation:.3e})")]
    NonHermitian { deviation: f64 },

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("oracle did not converge: top eigenvalues still moved by {change:.3e} at {points} points")]
    ConvergenceNotReached { points: usize, change: f64 },

    #[error("invariant violated: {0}")]
    Invariant(String),

    #[error("config error: {0}")]
    Config(String),

    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_) | Error::Io { .. } => 2,
            _ => 3,
        }
    }
}
