//! Small dense complex linear algebra.

mod eigen;
mod matrix;
mod permanent;

use thiserror::Error;

pub use eigen::{diagonalize, SpectralDecomposition, MAX_EIGEN_DIM};
pub use matrix::ComplexMatrix;
pub use permanent::{permanent, MAX_PERMANENT_DIM};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LinalgError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: String, found: String },
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("dimension {dim} exceeds the supported maximum {max}")]
    DimensionTooLarge { dim: usize, max: usize },
    #[error("matrix has non-finite entries")]
    NonFinite,
    #[error("matrix is singular")]
    Singular,
    #[error("tolerance must lie in (0, 1), got {0}")]
    InvalidTolerance(f64),
    #[error(
        "matrix is defective or near-defective (eigenvector condition number {condition:.3e}); \
         perturb the parameters"
    )]
    NonDiagonalizable { condition: f64 },
    #[error("QR iteration did not converge")]
    NoConvergence,
}

/// `‖M·C + C·M† − D‖_max`.
pub fn lyapunov_residual(m: &ComplexMatrix, c: &ComplexMatrix, d: &ComplexMatrix) -> Result<f64, LinalgError> {
    let n = m.rows();
    for (name, x) in [("M", m), ("C", c), ("D", d)] {
        if x.rows() != n || x.cols() != n {
            return Err(LinalgError::DimensionMismatch {
                expected: format!("{name} of shape {n}x{n}"),
                found: format!("{}x{}", x.rows(), x.cols()),
            });
        }
    }
    let lhs = &(m * c) + &(c * &m.adjoint());
    Ok((&lhs - d).max_abs())
}
