use thiserror::Error;

use crate::coords::SystemId;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// A scalar argument outside its admissible range.
    #[error("{what} = {value} is outside the admissible range {range}")]
    Domain {
        what: &'static str,
        value: f64,
        range: &'static str,
    },

    /// A coordinate triple outside the domain box of a system.
    #[error("ω{axis} = {value} is outside the domain of the {system} system")]
    OutsideDomain {
        system: SystemId,
        axis: usize,
        value: f64,
    },

    #[error("singular Jacobian for the {system} system at ω = {omega:?}")]
    Singular { system: SystemId, omega: [f64; 3] },

    #[error("coordinate inversion for the {system} system did not converge; last ω = {last:?}, residual {residual:e}")]
    Inversion {
        system: SystemId,
        last: [f64; 3],
        residual: f64,
    },

    #[error("configuration error: {0}")]
    Config(String),

    #[error("usage error: {0}")]
    Usage(String),

    #[error("integration of axis {axis} failed near ω = {at}: {reason}")]
    Integration {
        axis: usize,
        at: f64,
        reason: String,
    },

    #[error("quadrature on [{lo}, {hi}] did not reach tolerance (error estimate {estimate:e})")]
    Quadrature { lo: f64, hi: f64, estimate: f64 },

    #[error("turning point on axis {axis}: radicand {radicand:e} < 0 at ω = {at}")]
    TurningPoint { axis: usize, at: f64, radicand: f64 },

    #[error("ω{axis} = {value} is outside the solved range [{lo}, {hi}]")]
    OutOfRange {
        axis: usize,
        value: f64,
        lo: f64,
        hi: f64,
    },

    #[error("stencil node {node} could not be evaluated: {source}")]
    Stencil {
        node: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("residual check failed: {0}")]
    Assertion(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("scenario parse error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Process exit code: 1 configuration, 2 numerical, 3 I/O.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_) | Error::Usage(_) | Error::Json(_) | Error::Domain { .. } => 1,
            Error::Io(_) => 3,
            _ => 2,
        }
    }
}
