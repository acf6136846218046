use thiserror::Error;

/// Errors produced by the solvers and the scenario loader.
#[derive(Debug, Error)]
pub enum Error {
    #[error("scenario parse error at {path} (line {line}, column {column}): {message}")]
    Parse {
        path: String,
        line: usize,
        column: usize,
        message: String,
    },

    #[error("invalid scenario: {0}")]
    Validation(String),

    #[error("price {value} is outside the demand domain (needs > {lower_bound})")]
    Domain { value: f64, lower_bound: f64 },

    #[error("water budget {value} outside [{lo}, {hi}]")]
    OutOfDomain { value: f64, lo: f64, hi: f64 },

    #[error("total water {total} {side}")]
    Infeasible { total: f64, side: InfeasibleSide },

    #[error("{context}: {source}")]
    InState {
        context: String,
        #[source]
        source: Box<Error>,
    },

    #[error("objective is infeasible over the whole interval [{lo}, {hi}]")]
    NoFeasibleCandidate { lo: f64, hi: f64 },

    #[error("best-response iteration did not converge after {iterations} iterations; last iterates: {trace:?}")]
    NotConverged {
        iterations: usize,
        trace: Vec<Vec<f64>>,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Which side of the feasible water interval was violated.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum InfeasibleSide {
    BelowLower(f64),
    AboveUpper(f64),
}

impl std::fmt::Display for InfeasibleSide {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            InfeasibleSide::BelowLower(lo) => write!(f, "below aggregate lower bound {lo}"),
            InfeasibleSide::AboveUpper(hi) => write!(f, "above aggregate upper bound {hi}"),
        }
    }
}

impl Error {
    pub(crate) fn in_state(self, context: impl Into<String>) -> Error {
        Error::InState {
            context: context.into(),
            source: Box::new(self),
        }
    }

    /// True when the error (or the error it wraps) is a market infeasibility.
    pub fn is_infeasible(&self) -> bool {
        match self {
            Error::Infeasible { .. } | Error::OutOfDomain { .. } | Error::Domain { .. } => true,
            Error::NoFeasibleCandidate { .. } => true,
            Error::InState { source, .. } => source.is_infeasible(),
            _ => false,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
