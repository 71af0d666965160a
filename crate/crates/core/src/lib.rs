//! Higher-order mutual coherence of optical and matter-wave fields.
//!
//! - [`linalg`]: small dense complex linear algebra (eigendecomposition,
//!   permanents, Lyapunov residuals).
//! - [`gaussian`]: steady-state two-time kernels and Wick-expanded
//!   normally ordered correlators of linear mode networks.
//! - [`detection`]: symbolic gated-detection combinatorics: operator
//!   orderings selected by detector switch-off times, direct and exchange
//!   contributions, fermionic vacuum contractions.
//! - [`fock`]: truncated Fock-space Lindblad oracle with quantum
//!   regression, used to cross-check the Gaussian engine.

pub mod detection;
pub mod fock;
pub mod gaussian;
pub mod linalg;

pub use num_complex::Complex64;

pub use detection::{
    enumerate_contributions, fermi_vacuum_expectation, select_ordering, ContributionTerm, DetectionError,
    DetectionPlan, DetectorKind, DetectorSpec, OperatorString,
};
pub use fock::{FockConfig, FockOracle, OracleError};
pub use gaussian::{
    build_two_mode_example, normalized_g3, pair_covariance, wick_correlation, CorrelationSpec, EngineError, FieldEvent,
    G3Kind, G3Weights, ModeKind, ModeSystem,
};
pub use linalg::{diagonalize, lyapunov_residual, permanent, ComplexMatrix, LinalgError, SpectralDecomposition};
