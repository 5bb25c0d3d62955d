use thiserror::Error;

use crate::vector::Vector;

/// Errors produced by the geometry, duality and symmetrization layers.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("degenerate input: {0}")]
    DegenerateInput(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("point lies outside the projection of the body (excess {excess:.3e})")]
    OutsideProjection { excess: f64 },

    #[error("subdivisions cover different base domains: {0}")]
    BaseMismatch(String),

    #[error("pole is not interior to the body (minimum facet slack {slack:.3e})")]
    NotInterior { slack: f64 },

    #[error("santalo solver did not converge after {iterations} iterations (residual {residual:.3e})")]
    NoConvergence {
        best: Vector,
        residual: f64,
        iterations: usize,
    },

    #[error("parameter {value} outside of [{lo}, {hi}]")]
    ParamOutOfRange { value: f64, lo: f64, hi: f64 },

    #[error("shear fit requested with zero parameter offset")]
    ZeroDelta,

    #[error("need at least {required} chords, got {found}")]
    TooFewChords { required: usize, found: usize },

    #[error("unsupported dimension {0}")]
    UnsupportedDimension(usize),

    #[error("bad body spec: {0}")]
    BadSpec(String),

    #[error("parse error at {location}: {message}")]
    Parse { location: String, message: String },

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("io error: {0}")]
    Io(String),

    #[error("at t = {t}: {source}")]
    AtParameter { t: f64, source: Box<Error> },
}

impl Error {
    pub(crate) fn degenerate(msg: impl Into<String>) -> Self {
        Self::DegenerateInput(msg.into())
    }

    pub(crate) fn numerical(msg: impl Into<String>) -> Self {
        Self::Numerical(msg.into())
    }

    /// True for failures caused by the solver rather than by the input.
    pub fn is_convergence_failure(&self) -> bool {
        match self {
            Self::NoConvergence { .. } | Self::Numerical(_) => true,
            Self::AtParameter { source, .. } => source.is_convergence_failure(),
            _ => false,
        }
    }

    /// Attaches the family parameter at which the failure happened.
    pub fn at_parameter(self, t: f64) -> Self {
        Self::AtParameter {
            t,
            source: Box::new(self),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
