use num_complex::Complex64;

use super::lindblad::{max_abs, Lindbladian, ReservoirModel};
use super::space::{FockSpace, SparseOp};
use super::{FockConfig, OracleError};
use crate::gaussian::{CorrelationSpec, FieldEvent, ModeSystem};
use crate::linalg::ComplexMatrix;

/// Largest number of creation/annihilation pairs in an oracle correlator.
pub const MAX_ORACLE_PAIRS: usize = 3;

const STEADY_CHECK_INTERVAL: f64 = 5.0;

/// Density operator on a truncated Fock basis.
#[derive(Clone, Debug)]
pub struct DensityMatrix {
    space: FockSpace,
    matrix: ComplexMatrix,
}

impl DensityMatrix {
    pub fn space(&self) -> &FockSpace {
        &self.space
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn trace(&self) -> Complex64 {
        self.matrix.trace()
    }

    pub fn populations(&self) -> Vec<f64> {
        self.matrix.diagonal().iter().map(|z| z.re).collect()
    }

    /// `⟨x_k† x_k⟩`.
    pub fn mean_occupation(&self, mode: usize) -> f64 {
        self.populations()
            .iter()
            .enumerate()
            .map(|(i, p)| p * self.space.occupations(i)[mode] as f64)
            .sum()
    }

    /// Total population of basis states with some mode at its top level.
    pub fn edge_population(&self) -> f64 {
        edge_population(&self.space, self.matrix.as_slice())
    }

    /// Hermitian to 1e-10, unit trace to 1e-10, no eigenvalue below -1e-9.
    pub fn check_invariants(&self) -> Result<(), OracleError> {
        let herm = (&self.matrix - &self.matrix.adjoint()).max_abs();
        if herm > 1e-10 {
            return Err(OracleError::InvalidState(format!("Hermiticity defect {herm:e}")));
        }
        let tr = self.trace();
        if (tr - Complex64::new(1.0, 0.0)).norm() > 1e-10 {
            return Err(OracleError::InvalidState(format!("trace {tr}")));
        }
        if !self.matrix.is_positive_semidefinite(1e-9) {
            return Err(OracleError::InvalidState("eigenvalue below -1e-9".into()));
        }
        Ok(())
    }
}

fn edge_population(space: &FockSpace, rho: &[Complex64]) -> f64 {
    let d = space.dim();
    (0..d)
        .filter(|&i| {
            space
                .occupations(i)
                .iter()
                .enumerate()
                .any(|(k, &n)| n + 1 == space.cutoff(k))
        })
        .map(|i| rho[i * d + i].re)
        .sum()
}

/// Truncated-Fock Lindblad model of a one- or two-mode number-conserving
/// system, with its steady state computed once at construction.
#[derive(Clone, Debug)]
pub struct FockOracle {
    space: FockSpace,
    lindbladian: Lindbladian,
    lowering: Vec<SparseOp>,
    steady: DensityMatrix,
    max_step: f64,
}

impl FockOracle {
    pub fn new(sys: &ModeSystem, cfg: &FockConfig) -> Result<Self, OracleError> {
        cfg.validate()?;
        if sys.dim() == 0 || sys.dim() > 2 {
            return Err(OracleError::UnsupportedSystem(format!(
                "oracle handles one or two modes, got {}",
                sys.dim()
            )));
        }
        let model = ReservoirModel::from_system(sys)?;
        let space = FockSpace::new(vec![cfg.cutoff; sys.dim()]);
        let lindbladian = Lindbladian::new(&space, &model);
        let lowering = (0..space.modes()).map(|k| space.lowering(k)).collect();

        let mut rho = thermal_product(&space, &model.nbar);
        let edge = edge_population(&space, &rho);
        if edge > cfg.edge_tolerance {
            return Err(OracleError::CutoffTooSmall {
                cutoff: cfg.cutoff,
                edge_population: edge,
            });
        }

        let d = space.dim();
        let mut scratch = vec![Complex64::new(0.0, 0.0); d * d];
        let mut elapsed = 0.0;
        loop {
            lindbladian.apply(&rho, &mut scratch);
            let residual = max_abs(&scratch);
            if residual <= cfg.tolerance {
                break;
            }
            if elapsed >= cfg.max_time {
                return Err(OracleError::NotConverged {
                    residual,
                    time: elapsed,
                });
            }
            lindbladian.propagate(&mut rho, STEADY_CHECK_INTERVAL, cfg.max_step);
            elapsed += STEADY_CHECK_INTERVAL;
        }
        hermitize(&mut rho, d);

        let edge = edge_population(&space, &rho);
        if edge > cfg.edge_tolerance {
            return Err(OracleError::CutoffTooSmall {
                cutoff: cfg.cutoff,
                edge_population: edge,
            });
        }
        let matrix = ComplexMatrix::from_vec(d, d, rho).map_err(|e| OracleError::InvalidState(e.to_string()))?;
        Ok(Self {
            steady: DensityMatrix {
                space: space.clone(),
                matrix,
            },
            space,
            lindbladian,
            lowering,
            max_step: cfg.max_step,
        })
    }

    pub fn steady_state(&self) -> &DensityMatrix {
        &self.steady
    }

    pub fn lindbladian(&self) -> &Lindbladian {
        &self.lindbladian
    }

    /// `e^{T L}` applied to `x`.
    pub fn evolve(&self, x: &mut [Complex64], duration: f64) {
        self.lindbladian.propagate(x, duration, self.max_step);
    }

    /// `Σ_k w_k a_k`, or its adjoint for a creation event.
    fn field_operator(&self, event: &FieldEvent) -> SparseOp {
        let mut op = SparseOp::zero(self.space.dim());
        for (a, &w) in self.lowering.iter().zip(&event.weights) {
            if w != Complex64::new(0.0, 0.0) {
                op = op.plus(&a.scale(w));
            }
        }
        if event.daggered {
            op.adjoint()
        } else {
            op
        }
    }

    /// Quantum-regression evaluation of an outside-in time-nested normally
    /// ordered correlator `⟨L_1(t_1) ... L_n(t_n) R_n(t_n) ... R_1(t_1)⟩`
    /// with `t_1 ≤ ... ≤ t_n`:
    /// `χ ← R_k e^{(t_k - t_{k-1}) L}[χ] L_k`, starting from the steady state.
    pub fn multitime_correlation(&self, spec: &CorrelationSpec) -> Result<Complex64, OracleError> {
        let pairs = nested_pairs(spec, self.space.modes())?;
        let d = self.space.dim();
        let mut chi = self.steady.matrix.as_slice().to_vec();
        let mut next = vec![Complex64::new(0.0, 0.0); d * d];
        let mut t_prev = pairs.first().map_or(0.0, |(l, _)| l.time);
        let one = Complex64::new(1.0, 0.0);
        for (left, right) in pairs {
            self.evolve(&mut chi, left.time - t_prev);
            t_prev = left.time;
            let l_op = self.field_operator(left);
            let r_op = self.field_operator(right);
            next.iter_mut().for_each(|z| *z = Complex64::new(0.0, 0.0));
            let mut tmp = vec![Complex64::new(0.0, 0.0); d * d];
            r_op.left_mul_acc(&chi, &mut tmp, one);
            l_op.right_mul_acc(&tmp, &mut next, one);
            std::mem::swap(&mut chi, &mut next);
        }
        Ok((0..d).map(|i| chi[i * d + i]).sum())
    }
}

/// Pairs `(creation, annihilation)` from the outside in.
fn nested_pairs(spec: &CorrelationSpec, modes: usize) -> Result<Vec<(&FieldEvent, &FieldEvent)>, OracleError> {
    let events = &spec.events;
    let len = events.len();
    if !len.is_multiple_of(2) {
        return Err(OracleError::UnsupportedSpec("odd number of operators".into()));
    }
    let n = len / 2;
    if n > MAX_ORACLE_PAIRS {
        return Err(OracleError::UnsupportedSpec(format!(
            "{n} operator pairs exceed the oracle maximum {MAX_ORACLE_PAIRS}"
        )));
    }
    let mut pairs = Vec::with_capacity(n);
    for k in 0..n {
        let (left, right) = (&events[k], &events[len - 1 - k]);
        if !left.daggered || right.daggered {
            return Err(OracleError::UnsupportedSpec(
                "string must be creation operators followed by annihilation operators".into(),
            ));
        }
        if left.time != right.time {
            return Err(OracleError::UnsupportedSpec(format!(
                "operator pair {k} is not at a common time ({} vs {})",
                left.time, right.time
            )));
        }
        if k > 0 && left.time < events[k - 1].time {
            return Err(OracleError::UnsupportedSpec(
                "times must not decrease from the outside to the inside".into(),
            ));
        }
        for e in [left, right] {
            if e.weights.len() != modes || !e.time.is_finite() {
                return Err(OracleError::UnsupportedSpec(format!(
                    "event needs {modes} weights and a finite time"
                )));
            }
        }
        pairs.push((left, right));
    }
    Ok(pairs)
}

fn thermal_product(space: &FockSpace, nbar: &[f64]) -> Vec<Complex64> {
    let d = space.dim();
    let single: Vec<Vec<f64>> = nbar
        .iter()
        .enumerate()
        .map(|(k, &n)| {
            let ratio = if n > 0.0 { n / (n + 1.0) } else { 0.0 };
            let raw: Vec<f64> = (0..space.cutoff(k)).map(|m| ratio.powi(m as i32)).collect();
            let z: f64 = raw.iter().sum();
            raw.into_iter().map(|p| p / z).collect()
        })
        .collect();
    let mut rho = vec![Complex64::new(0.0, 0.0); d * d];
    for i in 0..d {
        let p: f64 = space
            .occupations(i)
            .iter()
            .enumerate()
            .map(|(k, &m)| single[k][m])
            .product();
        rho[i * d + i] = Complex64::new(p, 0.0);
    }
    rho
}

fn hermitize(rho: &mut [Complex64], d: usize) {
    for i in 0..d {
        for j in i..d {
            let avg = (rho[i * d + j] + rho[j * d + i].conj()) * 0.5;
            rho[i * d + j] = avg;
            rho[j * d + i] = avg.conj();
        }
    }
}

/// Steady state of the truncated Lindblad model of `sys`.
pub fn steady_state(sys: &ModeSystem, cfg: &FockConfig) -> Result<DensityMatrix, OracleError> {
    Ok(FockOracle::new(sys, cfg)?.steady)
}

/// One-shot oracle correlator; prefer [`FockOracle`] when evaluating many.
pub fn multitime_correlation(
    sys: &ModeSystem,
    cfg: &FockConfig,
    spec: &CorrelationSpec,
) -> Result<Complex64, OracleError> {
    FockOracle::new(sys, cfg)?.multitime_correlation(spec)
}
