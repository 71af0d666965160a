use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::kernel::TwoTimeKernel;
use super::EngineError;
use crate::linalg::{diagonalize, ComplexMatrix, SpectralDecomposition};

/// Tolerance used when diagonalizing drift matrices.
pub const DRIFT_TOLERANCE: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModeKind {
    Optical,
    Matter,
}

/// Linear damped bosonic modes `dx/dt = -M x + B ξ` with diagonal
/// normally ordered diffusion `D = B B† = diag(n̄_k κ_k)`.
///
/// Times and rates are in units of the coupling constant. Construction
/// diagonalizes the drift once; the system is immutable afterwards.
#[derive(Debug)]
pub struct ModeSystem {
    kinds: Vec<ModeKind>,
    drift: ComplexMatrix,
    diffusion: Vec<f64>,
    kernel: TwoTimeKernel,
}

impl ModeSystem {
    pub fn new(kinds: Vec<ModeKind>, drift: ComplexMatrix, diffusion: Vec<f64>) -> Result<Self, EngineError> {
        let n = kinds.len();
        if n == 0 {
            return Err(EngineError::InvalidParameter(
                "a mode system needs at least one mode".into(),
            ));
        }
        if drift.rows() != n || drift.cols() != n {
            return Err(EngineError::InvalidParameter(format!(
                "drift must be {n}x{n}, got {}x{}",
                drift.rows(),
                drift.cols()
            )));
        }
        if diffusion.len() != n {
            return Err(EngineError::InvalidParameter(format!(
                "diffusion must have {n} entries, got {}",
                diffusion.len()
            )));
        }
        if let Some(bad) = diffusion.iter().find(|d| !(d.is_finite() && **d >= 0.0)) {
            return Err(EngineError::InvalidParameter(format!(
                "diffusion entries must be finite and nonnegative, got {bad}"
            )));
        }
        let decomp = diagonalize(&drift, DRIFT_TOLERANCE)?;
        if let Some(lambda) = decomp.lambdas().iter().find(|l| !(l.re > 0.0)) {
            return Err(EngineError::UnstableSystem(format!(
                "drift eigenvalue {lambda} has nonpositive real part"
            )));
        }
        let kernel = TwoTimeKernel::new(decomp, &diffusion)?;
        Ok(Self {
            kinds,
            drift,
            diffusion,
            kernel,
        })
    }

    pub fn dim(&self) -> usize {
        self.kinds.len()
    }

    pub fn kinds(&self) -> &[ModeKind] {
        &self.kinds
    }

    pub fn n_optical(&self) -> usize {
        self.kinds.iter().filter(|k| **k == ModeKind::Optical).count()
    }

    pub fn n_matter(&self) -> usize {
        self.kinds.iter().filter(|k| **k == ModeKind::Matter).count()
    }

    pub fn drift(&self) -> &ComplexMatrix {
        &self.drift
    }

    pub fn diffusion(&self) -> &[f64] {
        &self.diffusion
    }

    pub fn diffusion_matrix(&self) -> ComplexMatrix {
        ComplexMatrix::from_real_diagonal(&self.diffusion)
    }

    pub fn spectrum(&self) -> &SpectralDecomposition {
        self.kernel.decomposition()
    }

    pub fn kernel(&self) -> &TwoTimeKernel {
        &self.kernel
    }

    /// Weight vector selecting a single mode with unit amplitude.
    pub fn unit_weights(&self, mode: usize) -> Vec<Complex64> {
        assert!(mode < self.dim(), "mode index {mode} out of range");
        let mut w = vec![Complex64::new(0.0, 0.0); self.dim()];
        w[mode] = Complex64::new(1.0, 0.0);
        w
    }

    /// Index of the first mode of the given kind.
    pub fn first_mode(&self, kind: ModeKind) -> Option<usize> {
        self.kinds.iter().position(|k| *k == kind)
    }
}

impl Clone for ModeSystem {
    fn clone(&self) -> Self {
        Self {
            kinds: self.kinds.clone(),
            drift: self.drift.clone(),
            diffusion: self.diffusion.clone(),
            kernel: self.kernel.clone(),
        }
    }
}

/// Two modes: 1 optical (`a`), 2 matter (`c`), with drift
/// `[[κ1/2, ig], [ig, κ2/2]]` and diffusion `diag(n̄1 κ1, n̄2 κ2)`.
pub fn build_two_mode_example(
    kappa1: f64,
    kappa2: f64,
    nbar1: f64,
    nbar2: f64,
    g: f64,
) -> Result<ModeSystem, EngineError> {
    for (name, v) in [("kappa1", kappa1), ("kappa2", kappa2)] {
        if !(v.is_finite() && v > 0.0) {
            return Err(EngineError::InvalidParameter(format!(
                "{name} must be positive, got {v}"
            )));
        }
    }
    for (name, v) in [("nbar1", nbar1), ("nbar2", nbar2)] {
        if !(v.is_finite() && v >= 0.0) {
            return Err(EngineError::InvalidParameter(format!(
                "{name} must be nonnegative, got {v}"
            )));
        }
    }
    if !g.is_finite() {
        return Err(EngineError::InvalidParameter(format!("g must be finite, got {g}")));
    }
    let ig = Complex64::new(0.0, g);
    let drift = ComplexMatrix::from_rows(&[
        vec![Complex64::new(kappa1 / 2.0, 0.0), ig],
        vec![ig, Complex64::new(kappa2 / 2.0, 0.0)],
    ])?;
    ModeSystem::new(
        vec![ModeKind::Optical, ModeKind::Matter],
        drift,
        vec![nbar1 * kappa1, nbar2 * kappa2],
    )
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OpticalMode {
    /// Frequency in the rotating frame.
    pub omega: f64,
    pub kappa: f64,
    pub nbar: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MatterMode {
    pub omega: f64,
    pub kappa: f64,
    pub nbar: f64,
    /// Beam-splitter coupling `g⁽¹⁾` to every optical mode.
    pub g1: Complex64,
    /// Parametric coupling `g⁽²⁾`; must vanish for the Gaussian engine.
    #[serde(default)]
    pub g2: Complex64,
}

/// General linear coupling of `R` optical and `S` matter modes to thermal
/// reservoirs. Optical modes come first in the mode ordering.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EffectiveModel {
    pub optical: Vec<OpticalMode>,
    pub matter: Vec<MatterMode>,
}

impl EffectiveModel {
    pub fn build(&self) -> Result<ModeSystem, EngineError> {
        let r = self.optical.len();
        let n = r + self.matter.len();
        if let Some(i) = self.matter.iter().position(|m| m.g2 != Complex64::new(0.0, 0.0)) {
            return Err(EngineError::UnsupportedAnomalousCoupling { mode: r + i });
        }
        let params = self
            .optical
            .iter()
            .map(|o| (o.omega, o.kappa, o.nbar))
            .chain(self.matter.iter().map(|m| (m.omega, m.kappa, m.nbar)));
        let mut drift = ComplexMatrix::zeros(n, n);
        let mut diffusion = Vec::with_capacity(n);
        for (k, (omega, kappa, nbar)) in params.enumerate() {
            if !(kappa.is_finite() && kappa > 0.0) || !(nbar.is_finite() && nbar >= 0.0) || !omega.is_finite() {
                return Err(EngineError::InvalidParameter(format!(
                    "mode {k}: need kappa > 0, nbar >= 0, finite omega"
                )));
            }
            drift[(k, k)] = Complex64::new(kappa / 2.0, omega);
            diffusion.push(nbar * kappa);
        }
        let i = Complex64::new(0.0, 1.0);
        for (mi, m) in self.matter.iter().enumerate() {
            let col = r + mi;
            for alpha in 0..r {
                drift[(alpha, col)] = i * m.g1;
                drift[(col, alpha)] = i * m.g1.conj();
            }
        }
        let kinds = std::iter::repeat_n(ModeKind::Optical, r)
            .chain(std::iter::repeat_n(ModeKind::Matter, self.matter.len()))
            .collect();
        ModeSystem::new(kinds, drift, diffusion)
    }
}
