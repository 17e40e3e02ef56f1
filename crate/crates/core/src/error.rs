// SPDX-License-Identifier: Apache-2.0

use thiserror::Error;

use crate::io::config::ConfigError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: operator is {expected}x{expected}, state is {found}x{found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("{what} is not Hermitian (max deviation {deviation:.3e})")]
    NotHermitian { what: &'static str, deviation: f64 },

    #[error("density matrix trace is {trace:.12}, expected 1")]
    TraceNotUnit { trace: f64 },

    #[error("negative eigenvalue {value:.3e} below the positivity floor{}", at_time(*.time))]
    NegativeEigenvalue { value: f64, time: Option<f64> },

    #[error("channel rate must be finite and nonnegative, got {rate}")]
    InvalidRate { rate: f64 },

    #[error("channel {index} ({bath}) bohr frequency {declared} does not match the Hamiltonian (residual {residual:.3e})")]
    BohrFrequencyMismatch {
        index: usize,
        bath: crate::qdyn::BathId,
        declared: f64,
        residual: f64,
    },

    #[error("invalid time grid: {0}")]
    InvalidGrid(&'static str),

    #[error("step size underflow at t = {time}")]
    StepUnderflow { time: f64 },

    #[error("non-finite state encountered at t = {time}")]
    NonFinite { time: f64 },

    #[error("stationary state is not unique: null space has dimension {dimension}")]
    DegenerateNullSpace { dimension: usize },

    #[error("singular value decomposition did not converge")]
    NoConvergence,

    #[error("system of dimension {dim} is too large for a dense steady-state solve")]
    TooLarge { dim: usize },

    #[error("generator has no channel tagged {0}")]
    UnknownBath(crate::qdyn::BathId),

    #[error("{name} must be {constraint}")]
    InvalidParameter { name: String, constraint: String },

    #[error("oscillator truncation overflow: population {population:.3e} at n_max = {n_max}; increase n_max")]
    TruncationOverflow { n_max: usize, population: f64 },

    #[error("{0}")]
    Config(#[from] ConfigError),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

fn at_time(t: Option<f64>) -> String {
    t.map(|t| format!(" at t = {t}")).unwrap_or_default()
}

impl Error {
    pub(crate) fn invalid(name: impl Into<String>, constraint: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name: name.into(),
            constraint: constraint.into(),
        }
    }

    /// Process exit code: 2 for configuration problems, 3 for numerical failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_) | Error::InvalidParameter { .. } => 2,
            Error::Io(_) => 1,
            _ => 3,
        }
    }
}
