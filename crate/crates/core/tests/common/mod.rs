#![allow(dead_code)]

use coherence_core::gaussian::{pair_covariance, CorrelationSpec, FieldEvent, ModeKind, ModeSystem};
use coherence_core::{permanent, Complex64, ComplexMatrix};
use itertools::Itertools;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn unit_disk(rng: &mut impl Rng) -> Complex64 {
    loop {
        let z = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        if z.norm() <= 1.0 {
            return z;
        }
    }
}

pub fn random_matrix(rng: &mut impl Rng, n: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(n, n, |_, _| unit_disk(rng))
}

/// `M = iH + Γ/2` with random Hermitian `H`, damping rates in [0.1, 1] and
/// reservoir occupations in [0, 0.5]. Stable by construction.
pub fn random_stable_system(rng: &mut impl Rng, dim: usize) -> ModeSystem {
    let mut h = ComplexMatrix::zeros(dim, dim);
    for i in 0..dim {
        h[(i, i)] = Complex64::new(rng.gen_range(-1.0..1.0), 0.0);
        for j in i + 1..dim {
            let z = unit_disk(rng);
            h[(i, j)] = z;
            h[(j, i)] = z.conj();
        }
    }
    let gamma: Vec<f64> = (0..dim).map(|_| rng.gen_range(0.1..1.0)).collect();
    let drift = ComplexMatrix::from_fn(dim, dim, |i, j| {
        let damp = if i == j { gamma[i] / 2.0 } else { 0.0 };
        Complex64::new(0.0, 1.0) * h[(i, j)] + damp
    });
    let diffusion = gamma.iter().map(|g| g * rng.gen_range(0.0..0.5)).collect();
    let kinds = (0..dim)
        .map(|k| {
            if k % 2 == 0 {
                ModeKind::Optical
            } else {
                ModeKind::Matter
            }
        })
        .collect();
    ModeSystem::new(kinds, drift, diffusion).expect("random system is stable")
}

pub fn random_weights(rng: &mut impl Rng, dim: usize) -> Vec<Complex64> {
    (0..dim).map(|_| unit_disk(rng)).collect()
}

/// Normally ordered string of `n` creators followed by `n` annihilators at
/// random times in [0, 5).
pub fn random_spec(rng: &mut impl Rng, dim: usize, n: usize) -> CorrelationSpec {
    let mut events = Vec::with_capacity(2 * n);
    for _ in 0..n {
        events.push(FieldEvent::creation(random_weights(rng, dim), rng.gen_range(0.0..5.0)));
    }
    for _ in 0..n {
        events.push(FieldEvent::annihilation(
            random_weights(rng, dim),
            rng.gen_range(0.0..5.0),
        ));
    }
    CorrelationSpec::new(events)
}

/// `Σ_σ Π_i K[i][σ(i)]` by enumeration.
pub fn brute_permanent(k: &ComplexMatrix) -> Complex64 {
    let n = k.rows();
    (0..n)
        .permutations(n)
        .map(|sigma| sigma.iter().enumerate().map(|(i, &j)| k[(i, j)]).product::<Complex64>())
        .sum()
}

/// Sum over every complete pairing of creators with annihilators of the
/// product of two-point contractions `⟨F_d† F_u⟩`, each evaluated straight
/// from the pair covariance.
pub fn pairing_sum(sys: &ModeSystem, spec: &CorrelationSpec) -> Complex64 {
    let ups: Vec<&FieldEvent> = spec.events.iter().filter(|e| e.daggered).collect();
    let downs: Vec<&FieldEvent> = spec.events.iter().filter(|e| !e.daggered).collect();
    let n = ups.len();
    let contraction = |u: &FieldEvent, d: &FieldEvent| {
        let c = pair_covariance(sys, d.time, u.time);
        let mut acc = Complex64::new(0.0, 0.0);
        for i in 0..sys.dim() {
            for j in 0..sys.dim() {
                acc += d.weights[i] * c[(i, j)] * u.weights[j].conj();
            }
        }
        acc
    };
    (0..n)
        .permutations(n)
        .map(|sigma| {
            sigma
                .iter()
                .enumerate()
                .map(|(i, &j)| contraction(ups[i], downs[j]))
                .product::<Complex64>()
        })
        .sum()
}

pub fn permanent_of(k: &ComplexMatrix) -> Complex64 {
    permanent(k).expect("small square matrix")
}
