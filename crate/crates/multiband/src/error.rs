use thiserror::Error;

/// Errors produced by this crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("matrix effectively indefinite: jitter ladder exhausted at {max_jitter:e}")]
    Indefinite { max_jitter: f64 },

    #[error("grid has {nodes} nodes, exceeding the dense-sampling cap of {cap}; use a coarser grid")]
    GridTooLarge { nodes: usize, cap: usize },

    #[error("quadrature did not converge to tolerance {tol:e} (error estimate {err:e})")]
    QuadratureNonConvergence { tol: f64, err: f64 },

    #[error("penalty bisection failed after {0} iterations")]
    BisectionFailed(usize),

    #[error("rejection sampler acceptance rate {rate:.4} below 1%; truth unsuitable for rejection")]
    RejectionTooSlow { rate: f64 },

    #[error("chain stuck: {0}; adjust proposal step sizes in the mcmc config")]
    ChainStuck(String),

    #[error("csv error at line {line}: {msg}")]
    Csv { line: usize, msg: String },

    #[error("config error{}: {msg}", line.map(|l| format!(" at line {l}")).unwrap_or_default())]
    Config { line: Option<usize>, msg: String },

    #[error("mismatched experiment plans: {0}")]
    PlanMismatch(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub(crate) fn config(msg: impl Into<String>) -> Self {
        Error::Config { line: None, msg: msg.into() }
    }
}
