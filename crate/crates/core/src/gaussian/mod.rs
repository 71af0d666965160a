//! Gaussian steady states of linearly coupled optical and matter-wave modes.
//!
//! Normally ordered multi-time correlators are evaluated by Wick's theorem:
//! every nonvanishing pairing contracts a creation operator with an
//! annihilation operator, so the full sum is the permanent of the matrix
//! of two-time pair covariances.

mod correlation;
mod kernel;
mod system;

use thiserror::Error;

use crate::linalg::LinalgError;

pub use correlation::{
    contraction_matrix, g3_x, g3_x_spec, g3_y, g3_y_spec, normalized_g3, steady_intensity, unnormalized_g3,
    wick_correlation, CorrelationSpec, FieldEvent, G3Kind, G3Weights,
};
pub use kernel::{greens_kernel, pair_covariance, steady_covariance, TwoTimeKernel};
pub use system::{
    build_two_mode_example, EffectiveModel, MatterMode, ModeKind, ModeSystem, OpticalMode, DRIFT_TOLERANCE,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EngineError {
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("unstable system: {0}")]
    UnstableSystem(String),
    #[error("parametric (anomalous) coupling on mode {mode} is not supported")]
    UnsupportedAnomalousCoupling { mode: usize },
    #[error("correlator is not normally ordered")]
    NotNormallyOrdered,
    #[error("{pairs} operator pairs exceed the supported maximum {max}")]
    TooManyEvents { pairs: usize, max: usize },
    #[error("invalid field event: {0}")]
    InvalidEvent(String),
    #[error("steady intensity of field {field} is {value:e}; cannot normalize")]
    ZeroDenominator { field: String, value: f64 },
}
