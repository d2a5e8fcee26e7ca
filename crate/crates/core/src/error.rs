use thiserror::Error;

use crate::interval::Interval;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid interval [{lo}, {hi}]")]
    InvalidInterval { lo: f64, hi: f64 },

    #[error("{op}: argument {arg} outside domain {domain}")]
    Domain {
        op: &'static str,
        arg: String,
        domain: &'static str,
    },

    #[error("division by an interval containing zero: {0}")]
    DivisionByZero(Interval),

    #[error("tolerance not reached after {iterations} iterations (gap {gap:e})")]
    NotConverged { iterations: usize, gap: f64 },

    #[error("monotonicity violated at step {step}: {detail}")]
    MonotonicityViolation { step: usize, detail: String },

    #[error("verification of `{check}` failed{}{}: {detail}",
        witness.map(|w| format!(" on {w}")).unwrap_or_default(),
        if *inconclusive { " (inconclusive at bisection cap)" } else { "" })]
    VerificationFailed {
        check: String,
        witness: Option<Interval>,
        detail: String,
        inconclusive: bool,
    },

    #[error("neighborhood empty: fixed-point displacement {displacement:e} ≥ 2·{half_width:e}")]
    EmptyNeighborhood { displacement: f64, half_width: f64 },

    #[error("bound {bound} = {value} exceeds its cap {cap}")]
    BudgetExceeded {
        bound: &'static str,
        value: f64,
        cap: f64,
    },

    #[error("configuration error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("certificate format: {0}")]
    Format(String),
}

impl Error {
    pub(crate) fn domain(op: &'static str, arg: impl std::fmt::Display, domain: &'static str) -> Self {
        Error::Domain {
            op,
            arg: arg.to_string(),
            domain,
        }
    }

    pub(crate) fn failed(check: impl Into<String>, witness: Option<Interval>, detail: impl Into<String>) -> Self {
        Error::VerificationFailed {
            check: check.into(),
            witness,
            detail: detail.into(),
            inconclusive: false,
        }
    }
}
