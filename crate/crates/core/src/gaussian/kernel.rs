use std::collections::HashMap;
use std::sync::Mutex;

use super::{EngineError, ModeSystem};
use crate::linalg::{ComplexMatrix, SpectralDecomposition};

const CACHE_LIMIT: usize = 1 << 14;

/// Two-time contraction kernel of a stationary linear system.
///
/// In the eigenbasis `y = U⁻¹ x` the kernel is
/// `𝒢_ij(t, s) = D̃_ij e^{-λ_i (t-s)} / (λ_i + λ_j*)` for `t ≥ s` and
/// `D̃_ij e^{-λ_j* (s-t)} / (λ_i + λ_j*)` for `t < s`, with
/// `D̃ = U⁻¹ D (U⁻¹)†`. Dressing back with `U 𝒢 U†` gives the normally
/// ordered pair covariance `C_ij(t, s) = ⟨x_j†(s) x_i(t)⟩`.
///
/// Dressed values depend only on `t - s` and are cached by that key.
#[derive(Debug)]
pub struct TwoTimeKernel {
    decomp: SpectralDecomposition,
    modal_diffusion: ComplexMatrix,
    denominators: ComplexMatrix,
    cache: Mutex<HashMap<u64, ComplexMatrix>>,
}

impl TwoTimeKernel {
    pub fn new(decomp: SpectralDecomposition, diffusion: &[f64]) -> Result<Self, EngineError> {
        let n = decomp.dim();
        if diffusion.len() != n {
            return Err(EngineError::InvalidParameter(format!(
                "diffusion has {} entries for a {n}-mode decomposition",
                diffusion.len()
            )));
        }
        let lambdas = decomp.lambdas();
        let mut denominators = ComplexMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                let den = lambdas[i] + lambdas[j].conj();
                if !(den.re > 0.0) {
                    return Err(EngineError::UnstableSystem(format!(
                        "Re(λ_{i} + λ_{j}*) = {} is not positive",
                        den.re
                    )));
                }
                denominators[(i, j)] = den;
            }
        }
        let u_inv = decomp.u_inv();
        let d = ComplexMatrix::from_real_diagonal(diffusion);
        let modal_diffusion = &(u_inv * &d) * &u_inv.adjoint();
        Ok(Self {
            decomp,
            modal_diffusion,
            denominators,
            cache: Mutex::new(HashMap::new()),
        })
    }

    pub fn decomposition(&self) -> &SpectralDecomposition {
        &self.decomp
    }

    pub fn dim(&self) -> usize {
        self.decomp.dim()
    }

    /// Eigenbasis kernel `𝒢(t, s)`.
    pub fn modal(&self, t: f64, s: f64) -> ComplexMatrix {
        let n = self.dim();
        let lambdas = self.decomp.lambdas();
        let delta = t - s;
        ComplexMatrix::from_fn(n, n, |i, j| {
            let decay = if delta >= 0.0 {
                (-lambdas[i] * delta).exp()
            } else {
                (lambdas[j].conj() * delta).exp()
            };
            self.modal_diffusion[(i, j)] * decay / self.denominators[(i, j)]
        })
    }

    /// Mode-basis pair covariance `C(t, s) = U 𝒢(t, s) U†`.
    pub fn pair_covariance(&self, t: f64, s: f64) -> ComplexMatrix {
        let delta = t - s;
        let key = if delta == 0.0 {
            0.0f64.to_bits()
        } else {
            delta.to_bits()
        };
        if let Some(hit) = self.cache.lock().expect("kernel cache poisoned").get(&key) {
            return hit.clone();
        }
        let u = self.decomp.u();
        let value = &(u * &self.modal(t, s)) * &u.adjoint();
        let mut cache = self.cache.lock().expect("kernel cache poisoned");
        if cache.len() >= CACHE_LIMIT {
            cache.clear();
        }
        cache.insert(key, value.clone());
        value
    }
}

impl Clone for TwoTimeKernel {
    fn clone(&self) -> Self {
        Self {
            decomp: self.decomp.clone(),
            modal_diffusion: self.modal_diffusion.clone(),
            denominators: self.denominators.clone(),
            cache: Mutex::new(HashMap::new()),
        }
    }
}

/// Eigenbasis two-time kernel for a decomposition and diagonal diffusion.
pub fn greens_kernel(
    decomp: &SpectralDecomposition,
    diffusion: &[f64],
    t: f64,
    s: f64,
) -> Result<ComplexMatrix, EngineError> {
    Ok(TwoTimeKernel::new(decomp.clone(), diffusion)?.modal(t, s))
}

/// `C(t, s)` with `C[u][d] = ⟨x_d†(s) x_u(t)⟩`.
pub fn pair_covariance(sys: &ModeSystem, t: f64, s: f64) -> ComplexMatrix {
    sys.kernel().pair_covariance(t, s)
}

/// Equal-time steady-state covariance `⟨x_j† x_i⟩`.
pub fn steady_covariance(sys: &ModeSystem) -> ComplexMatrix {
    pair_covariance(sys, 0.0, 0.0)
}
