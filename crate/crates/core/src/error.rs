use thiserror::Error;

use crate::units::to_ghz;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("eigensolver failed to converge (residual {residual:e})")]
    EigenConvergence { residual: f64 },

    #[error(
        "resonant pair ({l}, {lp}): detuning {:.6e} GHz against coupling {:.6e} GHz",
        to_ghz(*.delta),
        to_ghz(*.g)
    )]
    ResonantPair {
        l: usize,
        lp: usize,
        delta: f64,
        g: f64,
    },

    #[error("{what} did not converge after {iterations} iterations")]
    NoConvergence { what: String, iterations: usize },
}

impl Error {
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    /// True for failures of a numerical procedure, as opposed to bad input.
    pub fn is_numeric(&self) -> bool {
        !matches!(self, Error::Domain(_))
    }
}
