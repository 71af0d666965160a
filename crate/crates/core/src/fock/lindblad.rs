use num_complex::Complex64;

use super::space::{FockSpace, SparseOp};
use super::OracleError;
use crate::gaussian::ModeSystem;

/// Thermal-damping parameters recovered from a number-conserving drift
/// `M = iH + diag(κ)/2` and diffusion `diag(n̄ κ)`.
#[derive(Clone, Debug, PartialEq)]
pub struct ReservoirModel {
    pub hamiltonian: Vec<Vec<Complex64>>,
    pub kappa: Vec<f64>,
    pub nbar: Vec<f64>,
}

impl ReservoirModel {
    pub fn from_system(sys: &ModeSystem) -> Result<Self, OracleError> {
        let n = sys.dim();
        let m = sys.drift();
        let i = Complex64::new(0.0, 1.0);
        let scale = m.max_abs().max(1.0);
        let mut hamiltonian = vec![vec![Complex64::new(0.0, 0.0); n]; n];
        let mut kappa = Vec::with_capacity(n);
        for k in 0..n {
            for l in 0..n {
                let herm = (m[(k, l)] + m[(l, k)].conj()) * 0.5;
                if k != l && herm.norm() > 1e-12 * scale {
                    return Err(OracleError::UnsupportedSystem(format!(
                        "drift damping part couples modes {k} and {l}"
                    )));
                }
                hamiltonian[k][l] = (m[(k, l)] - m[(l, k)].conj()) / (2.0 * i);
            }
            kappa.push(2.0 * m[(k, k)].re);
        }
        let nbar = sys.diffusion().iter().zip(&kappa).map(|(d, k)| d / k).collect();
        Ok(Self {
            hamiltonian,
            kappa,
            nbar,
        })
    }
}

/// `L[ρ] = -i(H_eff ρ - ρ H_eff†) + Σ γ J ρ J†` with
/// `H_eff = H - (i/2) Σ γ J†J`, jumps `√(κ(n̄+1)) a` and `√(κ n̄) a†`.
#[derive(Clone, Debug)]
pub struct Lindbladian {
    dim: usize,
    heff: SparseOp,
    heff_adj: SparseOp,
    jumps: Vec<(f64, SparseOp)>,
    norm_bound: f64,
}

impl Lindbladian {
    pub fn new(space: &FockSpace, model: &ReservoirModel) -> Self {
        let d = space.dim();
        let lowering: Vec<SparseOp> = (0..space.modes()).map(|k| space.lowering(k)).collect();
        let mut h = SparseOp::zero(d);
        for (k, row) in model.hamiltonian.iter().enumerate() {
            for (l, &hkl) in row.iter().enumerate() {
                if hkl != Complex64::new(0.0, 0.0) {
                    h = h.plus(&lowering[k].adjoint().product(&lowering[l]).scale(hkl));
                }
            }
        }
        let mut jumps = Vec::new();
        for (k, a) in lowering.iter().enumerate() {
            let (kappa, nbar) = (model.kappa[k], model.nbar[k]);
            let down = kappa * (nbar + 1.0);
            let up = kappa * nbar;
            if down > 0.0 {
                jumps.push((down, a.clone()));
            }
            if up > 0.0 {
                jumps.push((up, a.adjoint()));
            }
        }
        let mut heff = h;
        for (rate, j) in &jumps {
            heff = heff.plus(&j.adjoint().product(j).scale(Complex64::new(0.0, -0.5 * rate)));
        }
        let heff_adj = heff.adjoint();
        let norm_bound = 2.0 * heff.norm_one().max(heff_adj.norm_one())
            + jumps
                .iter()
                .map(|(r, j)| r * j.norm_one() * j.adjoint().norm_one())
                .sum::<f64>();
        Self {
            dim: d,
            heff,
            heff_adj,
            jumps,
            norm_bound,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Upper estimate of the generator norm, used to pick step sizes.
    pub fn norm_bound(&self) -> f64 {
        self.norm_bound
    }

    pub fn apply(&self, rho: &[Complex64], out: &mut [Complex64]) {
        out.iter_mut().for_each(|z| *z = Complex64::new(0.0, 0.0));
        let i = Complex64::new(0.0, 1.0);
        self.heff.left_mul_acc(rho, out, -i);
        self.heff_adj.right_mul_acc(rho, out, i);
        for (rate, j) in &self.jumps {
            j.sandwich_acc(rho, out, *rate);
        }
    }

    /// Fixed-step Taylor-series exponential integrator: `x ← e^{T L} x`.
    pub fn propagate(&self, x: &mut [Complex64], duration: f64, max_step: f64) {
        if duration <= 0.0 {
            return;
        }
        let step_cap = max_step.min(2.0 / self.norm_bound.max(f64::MIN_POSITIVE));
        let steps = (duration / step_cap).ceil().max(1.0) as usize;
        let dt = duration / steps as f64;
        let mut term = vec![Complex64::new(0.0, 0.0); x.len()];
        let mut next = vec![Complex64::new(0.0, 0.0); x.len()];
        for _ in 0..steps {
            term.copy_from_slice(x);
            let scale = max_abs(x).max(f64::MIN_POSITIVE);
            for order in 1..=40 {
                self.apply(&term, &mut next);
                let f = dt / order as f64;
                for (t, n) in term.iter_mut().zip(&next) {
                    *t = n * f;
                }
                for (xi, t) in x.iter_mut().zip(&term) {
                    *xi += t;
                }
                if max_abs(&term) <= 1e-17 * scale {
                    break;
                }
            }
        }
    }
}

pub(crate) fn max_abs(x: &[Complex64]) -> f64 {
    x.iter().map(|z| z.norm()).fold(0.0, f64::max)
}
