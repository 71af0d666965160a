//! Gaussian engine against the truncated-Fock oracle and against frozen
//! reference numbers from an independent dense-matrix computation.

use coherence_core::fock::{FockConfig, FockOracle};
use coherence_core::gaussian::{
    build_two_mode_example, g3_x_spec, g3_y_spec, unnormalized_g3, wick_correlation, CorrelationSpec, FieldEvent,
    G3Kind, G3Weights, ModeSystem,
};
use coherence_core::Complex64;

// (tau1, tau2, G3x, G3y), unnormalized, kappa = (0.15, 0.25), nbar = (0.01, 0.1), g = 1
const REFERENCE: [(f64, f64, f64, f64); 4] = [
    (0.5, 0.25, 7.264706303567855e-4, 4.8609196391848905e-4),
    (1.0, 0.5, 9.266972519198242e-4, 4.1592089556241775e-4),
    (2.0, 1.0, 8.269036615393372e-4, 8.158233503191156e-4),
    (5.0, 2.0, 4.448818317231741e-4, 4.528858947592281e-4),
];

fn reference() -> ModeSystem {
    build_two_mode_example(0.15, 0.25, 0.01, 0.1, 1.0).unwrap()
}

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

#[test]
fn engine_reproduces_reference_values() {
    let sys = reference();
    let w = G3Weights::default_for(&sys).unwrap();
    for (t1, t2, gx, gy) in REFERENCE {
        let x = unnormalized_g3(G3Kind::X, &sys, &w, t1, t2).unwrap();
        let y = unnormalized_g3(G3Kind::Y, &sys, &w, t1, t2).unwrap();
        assert!(rel(x.re, gx) < 1e-9, "x at ({t1},{t2}): {x} vs {gx}");
        assert!(rel(y.re, gy) < 1e-9, "y at ({t1},{t2}): {y} vs {gy}");
    }
}

#[test]
fn oracle_matches_reference_values() {
    let sys = reference();
    let w = G3Weights::default_for(&sys).unwrap();
    let oracle = FockOracle::new(&sys, &FockConfig::default()).unwrap();
    oracle.steady_state().check_invariants().unwrap();
    for (tau1, tau2, gx, gy) in REFERENCE {
        let x = oracle
            .multitime_correlation(&g3_x_spec(&w.r1, &w.r2, &w.r3, 0.0, tau2, tau1))
            .unwrap();
        let y = oracle
            .multitime_correlation(&g3_y_spec(&w.r1, &w.r2, &w.r3, 0.0, tau2, tau1))
            .unwrap();
        assert!(rel(x.re, gx) < 0.01, "x at ({tau1},{tau2}): {x} vs {gx}");
        assert!(rel(y.re, gy) < 0.01, "y at ({tau1},{tau2}): {y} vs {gy}");
        assert!(x.im.abs() < 1e-3 * x.re.abs());
    }
}

fn mode(dim: usize, k: usize) -> Vec<Complex64> {
    let mut w = vec![Complex64::new(0.0, 0.0); dim];
    w[k] = Complex64::new(1.0, 0.0);
    w
}

/// Every nested normally ordered string with up to three pairs over two
/// modes and a fixed time ladder.
fn nested_strings(times: &[f64]) -> Vec<CorrelationSpec> {
    let mut out = Vec::new();
    for n in 1..=3usize {
        for left_modes in 0..(1usize << n) {
            for right_modes in 0..(1usize << n) {
                let mut events = Vec::with_capacity(2 * n);
                for k in 0..n {
                    events.push(FieldEvent::creation(mode(2, (left_modes >> k) & 1), times[k]));
                }
                for k in (0..n).rev() {
                    events.push(FieldEvent::annihilation(mode(2, (right_modes >> k) & 1), times[k]));
                }
                out.push(CorrelationSpec::new(events));
            }
        }
    }
    out
}

#[test]
fn wick_agrees_with_oracle_on_nested_strings() {
    let sys = build_two_mode_example(0.15, 0.25, 0.2, 0.1, 0.7).unwrap();
    let oracle = FockOracle::new(&sys, &FockConfig::default()).unwrap();
    let mut checked = 0;
    for spec in nested_strings(&[0.0, 0.8, 2.1]) {
        let wick = wick_correlation(&sys, &spec).unwrap();
        let fock = oracle.multitime_correlation(&spec).unwrap();
        let scale = wick.norm().max(fock.norm());
        // off-resonant strings are small; compare against the diagonal scale there
        if scale < 1e-6 {
            assert!((wick - fock).norm() < 1e-7, "{wick} vs {fock}");
            continue;
        }
        assert!((wick - fock).norm() <= 0.01 * scale, "{wick} vs {fock}");
        checked += 1;
    }
    assert!(checked > 20);
}
