use thiserror::Error;

/// Errors raised across the toolkit.
///
/// Parameter-type failures (bad input, geometry out of range) and numerical
/// failures (non-convergence, degenerate results) are kept apart so the command
/// line front end can map them onto distinct exit codes.
#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("resolution {n} is below the minimum of {min}")]
    Resolution { n: usize, min: usize },

    #[error("index {index} out of range (k = {k})")]
    Index { index: usize, k: usize },

    #[error("cells {0} and {1} are not adjacent")]
    NotAdjacent(usize, usize),

    #[error("parameter error: {0}")]
    Parameter(String),

    #[error("root not bracketed: {0}")]
    NotBracketed(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("degenerate partition: {0}")]
    Degenerate(String),

    #[error("eigensolver did not converge after {iterations} iterations (worst residual {residual:.3e})")]
    Convergence {
        iterations: usize,
        residual: f64,
        best: Vec<crate::eigen::EigenPair>,
    },

    #[error("sparse factorization failed: {0}")]
    Factorization(String),

    #[error("optimizer failed at iteration {iteration}: {source}")]
    Optimizer {
        iteration: usize,
        #[source]
        source: Box<Error>,
        last_state: Box<crate::relaxed::PartitionState>,
    },

    #[error("format error: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// True for errors caused by numerical failure rather than bad input.
    pub fn is_numerical(&self) -> bool {
        match self {
            Error::Convergence { .. } | Error::Factorization(_) | Error::Degenerate(_) => true,
            Error::Optimizer { source, .. } => source.is_numerical(),
            _ => false,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
