//! Fixtures shared by the benchmarks.

use coherence_core::{build_two_mode_example, Complex64, ComplexMatrix, ModeSystem};

/// κ = (0.15, 0.25), n̄ = (0.01, 0.1), g = 1.
pub fn reference_system() -> ModeSystem {
    build_two_mode_example(0.15, 0.25, 0.01, 0.1, 1.0).expect("stable reference system")
}

/// Deterministic dense test matrix with entries on the unit circle.
pub fn phase_matrix(n: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(n, n, |i, j| {
        Complex64::from_polar(1.0, (1 + i * 7 + j * j * 3) as f64 * 0.37)
    })
}

/// Square grid over `[0, max]²` with `steps` points per axis.
pub fn grid(max: f64, steps: usize) -> Vec<(f64, f64)> {
    let axis: Vec<f64> = (0..steps).map(|i| max * i as f64 / (steps - 1) as f64).collect();
    axis.iter().flat_map(|&a| axis.iter().map(move |&b| (a, b))).collect()
}
