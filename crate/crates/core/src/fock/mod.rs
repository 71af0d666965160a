//! Brute-force reference path: truncated Fock space, thermal Lindblad
//! dynamics and quantum-regression multi-time correlators for one- and
//! two-mode number-conserving systems.
//!
//! Deliberately slow. It exists to check the Gaussian engine.

mod lindblad;
mod oracle;
mod space;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gaussian::EngineError;

pub use lindblad::{Lindbladian, ReservoirModel};
pub use oracle::{multitime_correlation, steady_state, DensityMatrix, FockOracle, MAX_ORACLE_PAIRS};
pub use space::{FockSpace, SparseOp};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OracleError {
    #[error("unsupported system: {0}")]
    UnsupportedSystem(String),
    #[error("invalid oracle configuration: {0}")]
    InvalidConfig(String),
    #[error("cutoff {cutoff} too small: edge population {edge_population:e}")]
    CutoffTooSmall { cutoff: usize, edge_population: f64 },
    #[error("steady state not converged after t = {time}: residual {residual:e}")]
    NotConverged { residual: f64, time: f64 },
    #[error("unsupported correlator: {0}")]
    UnsupportedSpec(String),
    #[error("invalid density matrix: {0}")]
    InvalidState(String),
    #[error(transparent)]
    Engine(#[from] EngineError),
}

/// Oracle settings. `tolerance` bounds `max |L[ρ]|` at the returned steady
/// state; `edge_tolerance` bounds the population on the top Fock level.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FockConfig {
    pub cutoff: usize,
    pub tolerance: f64,
    pub max_time: f64,
    pub max_step: f64,
    pub edge_tolerance: f64,
}

impl Default for FockConfig {
    fn default() -> Self {
        Self {
            cutoff: 10,
            tolerance: 1e-10,
            max_time: 5000.0,
            max_step: 0.1,
            edge_tolerance: 1e-6,
        }
    }
}

impl FockConfig {
    pub fn with_cutoff(cutoff: usize) -> Self {
        Self {
            cutoff,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<(), OracleError> {
        let positive = |x: f64| x.is_finite() && x > 0.0;
        if self.cutoff < 2 {
            return Err(OracleError::InvalidConfig(format!("cutoff {} < 2", self.cutoff)));
        }
        if self.cutoff > 64 {
            return Err(OracleError::InvalidConfig(format!("cutoff {} > 64", self.cutoff)));
        }
        for (name, v) in [
            ("tolerance", self.tolerance),
            ("max_time", self.max_time),
            ("max_step", self.max_step),
            ("edge_tolerance", self.edge_tolerance),
        ] {
            if !positive(v) {
                return Err(OracleError::InvalidConfig(format!("{name} must be positive, got {v}")));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use num_complex::Complex64;

    use super::*;
    use crate::gaussian::{build_two_mode_example, pair_covariance, CorrelationSpec, FieldEvent, ModeKind, ModeSystem};
    use crate::linalg::ComplexMatrix;

    fn reference() -> ModeSystem {
        build_two_mode_example(0.15, 0.25, 0.01, 0.1, 1.0).unwrap()
    }

    #[test]
    fn config_validation() {
        assert!(FockConfig::default().validate().is_ok());
        assert!(FockConfig::with_cutoff(1).validate().is_err());
        let cfg = FockConfig {
            tolerance: 0.0,
            ..FockConfig::default()
        };
        assert!(matches!(cfg.validate(), Err(OracleError::InvalidConfig(_))));
    }

    #[test]
    fn single_thermal_mode_is_bose_einstein() {
        let nbar = 0.2;
        let kappa = 0.3;
        let m = ComplexMatrix::from_real_diagonal(&[kappa / 2.0]);
        let sys = ModeSystem::new(vec![ModeKind::Matter], m, vec![nbar * kappa]).unwrap();
        let cfg = FockConfig::with_cutoff(14);
        let rho = steady_state(&sys, &cfg).unwrap();
        rho.check_invariants().unwrap();
        let ratio = nbar / (1.0 + nbar);
        for (k, p) in rho.populations().iter().enumerate().take(8) {
            let want = ratio.powi(k as i32) / (1.0 + nbar);
            assert!((p - want).abs() < 1e-8, "level {k}: {p} vs {want}");
        }
        assert!((rho.mean_occupation(0) - nbar).abs() < 1e-7);
    }

    #[test]
    fn zero_temperature_gives_vacuum() {
        let sys = build_two_mode_example(0.15, 0.25, 0.0, 0.0, 1.0).unwrap();
        let rho = steady_state(&sys, &FockConfig::with_cutoff(4)).unwrap();
        assert!((rho.matrix()[(0, 0)].re - 1.0).abs() < 1e-12);
        assert!(rho.edge_population() < 1e-12);
    }

    #[test]
    fn occupations_match_gaussian_covariance() {
        let sys = reference();
        let rho = steady_state(&sys, &FockConfig::default()).unwrap();
        rho.check_invariants().unwrap();
        let c = pair_covariance(&sys, 0.0, 0.0);
        for k in 0..2 {
            let want = c[(k, k)].re;
            let got = rho.mean_occupation(k);
            assert!(((got - want) / want).abs() < 0.01, "mode {k}: {got} vs {want}");
        }
    }

    #[test]
    fn propagation_preserves_trace() {
        let sys = reference();
        let oracle = FockOracle::new(&sys, &FockConfig::with_cutoff(7)).unwrap();
        let d = oracle.steady_state().space().dim();
        let mut x = vec![Complex64::new(0.0, 0.0); d * d];
        x[d + 1] = Complex64::new(1.0, 0.0);
        oracle.evolve(&mut x, 3.0);
        let tr: Complex64 = (0..d).map(|i| x[i * d + i]).sum();
        assert!((tr - 1.0).norm() < 1e-12);
    }

    #[test]
    fn cutoff_too_small_is_reported() {
        let sys = build_two_mode_example(0.15, 0.25, 0.5, 0.5, 1.0).unwrap();
        assert!(matches!(
            steady_state(&sys, &FockConfig::with_cutoff(3)),
            Err(OracleError::CutoffTooSmall { cutoff: 3, .. })
        ));
    }

    #[test]
    fn vacuum_correlator_vanishes() {
        let sys = build_two_mode_example(0.15, 0.25, 0.0, 0.0, 1.0).unwrap();
        let w = vec![Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)];
        let spec = CorrelationSpec::new(vec![
            FieldEvent::creation(w.clone(), 0.0),
            FieldEvent::annihilation(w, 0.0),
        ]);
        let v = multitime_correlation(&sys, &FockConfig::with_cutoff(4), &spec).unwrap();
        assert!(v.norm() < 1e-12);
    }

    #[test]
    fn rejects_non_nested_strings() {
        let sys = reference();
        let oracle = FockOracle::new(&sys, &FockConfig::with_cutoff(7)).unwrap();
        let w = vec![Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)];
        let crossed = CorrelationSpec::new(vec![
            FieldEvent::creation(w.clone(), 0.0),
            FieldEvent::annihilation(w.clone(), 1.0),
        ]);
        assert!(matches!(
            oracle.multitime_correlation(&crossed),
            Err(OracleError::UnsupportedSpec(_))
        ));
        let decreasing = CorrelationSpec::new(vec![
            FieldEvent::creation(w.clone(), 1.0),
            FieldEvent::creation(w.clone(), 0.0),
            FieldEvent::annihilation(w.clone(), 0.0),
            FieldEvent::annihilation(w, 1.0),
        ]);
        assert!(matches!(
            oracle.multitime_correlation(&decreasing),
            Err(OracleError::UnsupportedSpec(_))
        ));
    }

    #[test]
    fn rejects_three_modes() {
        let m = ComplexMatrix::from_real_diagonal(&[0.1, 0.1, 0.1]);
        let sys = ModeSystem::new(vec![ModeKind::Optical; 3], m, vec![0.0; 3]).unwrap();
        assert!(matches!(
            FockOracle::new(&sys, &FockConfig::with_cutoff(3)),
            Err(OracleError::UnsupportedSystem(_))
        ));
    }
}
