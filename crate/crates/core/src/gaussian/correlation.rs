use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{pair_covariance, EngineError, ModeSystem};
use crate::linalg::{permanent, ComplexMatrix, MAX_PERMANENT_DIM};

/// One field operator in a correlator: `Σ_k w_k x_k` (annihilation) or its
/// adjoint `Σ_k w_k* x_k†` (creation).
///
/// `weights` are the mode-function values at the detector position for
/// both flavors; the conjugation of the creation side happens during
/// evaluation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FieldEvent {
    pub daggered: bool,
    pub weights: Vec<Complex64>,
    pub time: f64,
}

impl FieldEvent {
    pub fn creation(weights: Vec<Complex64>, time: f64) -> Self {
        Self {
            daggered: true,
            weights,
            time,
        }
    }

    pub fn annihilation(weights: Vec<Complex64>, time: f64) -> Self {
        Self {
            daggered: false,
            weights,
            time,
        }
    }

    pub(crate) fn validate(&self, dim: usize) -> Result<(), EngineError> {
        if self.weights.len() != dim {
            return Err(EngineError::InvalidEvent(format!(
                "weight vector has {} entries, system has {dim} modes",
                self.weights.len()
            )));
        }
        if self.weights.iter().all(|w| *w == Complex64::new(0.0, 0.0)) {
            return Err(EngineError::InvalidEvent("weight vector is identically zero".into()));
        }
        if !self.time.is_finite() || self.weights.iter().any(|w| !w.is_finite()) {
            return Err(EngineError::InvalidEvent("non-finite time or weight".into()));
        }
        Ok(())
    }
}

/// Ordered operator string `⟨e_1 e_2 ... e_n⟩`.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct CorrelationSpec {
    pub events: Vec<FieldEvent>,
}

impl CorrelationSpec {
    pub fn new(events: Vec<FieldEvent>) -> Self {
        Self { events }
    }

    /// All creation operators precede all annihilation operators.
    pub fn is_normally_ordered(&self) -> bool {
        let first_plain = self
            .events
            .iter()
            .position(|e| !e.daggered)
            .unwrap_or(self.events.len());
        self.events[first_plain..].iter().all(|e| !e.daggered)
    }

    pub fn daggered(&self) -> impl Iterator<Item = &FieldEvent> {
        self.events.iter().filter(|e| e.daggered)
    }

    pub fn undaggered(&self) -> impl Iterator<Item = &FieldEvent> {
        self.events.iter().filter(|e| !e.daggered)
    }
}

/// Contraction matrix `K[u][d] = w_u · C(t_u, t_d) · w_d†` of a normally
/// ordered string; rows follow the annihilation operators, columns the
/// creation operators, both in string order.
pub fn contraction_matrix(sys: &ModeSystem, spec: &CorrelationSpec) -> Result<ComplexMatrix, EngineError> {
    check_spec(sys, spec)?;
    let creators: Vec<&FieldEvent> = spec.daggered().collect();
    let annihilators: Vec<&FieldEvent> = spec.undaggered().collect();
    let conj_weights: Vec<Vec<Complex64>> = creators
        .iter()
        .map(|e| e.weights.iter().map(|w| w.conj()).collect())
        .collect();
    Ok(ComplexMatrix::from_fn(annihilators.len(), creators.len(), |u, d| {
        let c = pair_covariance(sys, annihilators[u].time, creators[d].time);
        c.bilinear(&annihilators[u].weights, &conj_weights[d])
    }))
}

fn check_spec(sys: &ModeSystem, spec: &CorrelationSpec) -> Result<(), EngineError> {
    if !spec.is_normally_ordered() {
        return Err(EngineError::NotNormallyOrdered);
    }
    for e in &spec.events {
        e.validate(sys.dim())?;
    }
    Ok(())
}

/// Normally ordered multi-time correlator of the Gaussian steady state,
/// summed over all creation/annihilation pairings as a permanent.
///
/// Strings with unequal numbers of creation and annihilation operators
/// vanish identically in a number-conserving zero-mean state.
pub fn wick_correlation(sys: &ModeSystem, spec: &CorrelationSpec) -> Result<Complex64, EngineError> {
    check_spec(sys, spec)?;
    let n_dag = spec.daggered().count();
    let n_plain = spec.events.len() - n_dag;
    if n_dag != n_plain {
        return Ok(Complex64::new(0.0, 0.0));
    }
    if n_dag > MAX_PERMANENT_DIM {
        return Err(EngineError::TooManyEvents {
            pairs: n_dag,
            max: MAX_PERMANENT_DIM,
        });
    }
    let k = contraction_matrix(sys, spec)?;
    Ok(permanent(&k)?)
}

/// `⟨Ψ†(r1,t1) Ψ†(r2,t2) E⁻(r3,t3) E⁺(r3,t3) Ψ(r2,t2) Ψ(r1,t1)⟩`.
pub fn g3_x_spec(w1: &[Complex64], w2: &[Complex64], w3: &[Complex64], t1: f64, t2: f64, t3: f64) -> CorrelationSpec {
    CorrelationSpec::new(vec![
        FieldEvent::creation(w1.to_vec(), t1),
        FieldEvent::creation(w2.to_vec(), t2),
        FieldEvent::creation(w3.to_vec(), t3),
        FieldEvent::annihilation(w3.to_vec(), t3),
        FieldEvent::annihilation(w2.to_vec(), t2),
        FieldEvent::annihilation(w1.to_vec(), t1),
    ])
}

/// `⟨Ψ†(r1,t1) E⁻(r3,t2) Ψ†(r2,t3) Ψ(r2,t3) E⁺(r3,t2) Ψ(r1,t1)⟩`.
pub fn g3_y_spec(w1: &[Complex64], w2: &[Complex64], w3: &[Complex64], t1: f64, t2: f64, t3: f64) -> CorrelationSpec {
    CorrelationSpec::new(vec![
        FieldEvent::creation(w1.to_vec(), t1),
        FieldEvent::creation(w3.to_vec(), t2),
        FieldEvent::creation(w2.to_vec(), t3),
        FieldEvent::annihilation(w2.to_vec(), t3),
        FieldEvent::annihilation(w3.to_vec(), t2),
        FieldEvent::annihilation(w1.to_vec(), t1),
    ])
}

pub fn g3_x(
    sys: &ModeSystem,
    w1: &[Complex64],
    w2: &[Complex64],
    w3: &[Complex64],
    t1: f64,
    t2: f64,
    t3: f64,
) -> Result<Complex64, EngineError> {
    wick_correlation(sys, &g3_x_spec(w1, w2, w3, t1, t2, t3))
}

pub fn g3_y(
    sys: &ModeSystem,
    w1: &[Complex64],
    w2: &[Complex64],
    w3: &[Complex64],
    t1: f64,
    t2: f64,
    t3: f64,
) -> Result<Complex64, EngineError> {
    wick_correlation(sys, &g3_y_spec(w1, w2, w3, t1, t2, t3))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum G3Kind {
    X,
    Y,
}

impl std::str::FromStr for G3Kind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "x" | "X" => Ok(Self::X),
            "y" | "Y" => Ok(Self::Y),
            other => Err(format!("unknown correlator kind '{other}' (expected x or y)")),
        }
    }
}

/// Detector weight vectors: matter field at `r1` and `r2`, optical field at `r3`.
#[derive(Clone, Debug, PartialEq)]
pub struct G3Weights {
    pub r1: Vec<Complex64>,
    pub r2: Vec<Complex64>,
    pub r3: Vec<Complex64>,
}

impl G3Weights {
    /// Unit weight on the first matter mode for `r1`, `r2` and on the first
    /// optical mode for `r3`.
    pub fn default_for(sys: &ModeSystem) -> Result<Self, EngineError> {
        use super::ModeKind;
        let matter = sys
            .first_mode(ModeKind::Matter)
            .ok_or_else(|| EngineError::InvalidParameter("system has no matter mode".into()))?;
        let optical = sys
            .first_mode(ModeKind::Optical)
            .ok_or_else(|| EngineError::InvalidParameter("system has no optical mode".into()))?;
        Ok(Self {
            r1: sys.unit_weights(matter),
            r2: sys.unit_weights(matter),
            r3: sys.unit_weights(optical),
        })
    }
}

/// Unnormalized `G³` at `t1 = 0`, `t3 = τ1`, `t2 = τ2`.
pub fn unnormalized_g3(
    kind: G3Kind,
    sys: &ModeSystem,
    weights: &G3Weights,
    tau1: f64,
    tau2: f64,
) -> Result<Complex64, EngineError> {
    let (t1, t2, t3) = (0.0, tau2, tau1);
    match kind {
        G3Kind::X => g3_x(sys, &weights.r1, &weights.r2, &weights.r3, t1, t2, t3),
        G3Kind::Y => g3_y(sys, &weights.r1, &weights.r2, &weights.r3, t1, t2, t3),
    }
}

/// Stationary intensity `⟨F† F⟩` of the field with the given weights.
pub fn steady_intensity(sys: &ModeSystem, weights: &[Complex64]) -> Result<f64, EngineError> {
    let spec = CorrelationSpec::new(vec![
        FieldEvent::creation(weights.to_vec(), 0.0),
        FieldEvent::annihilation(weights.to_vec(), 0.0),
    ]);
    Ok(wick_correlation(sys, &spec)?.re)
}

/// `G³ / (⟨Ψ†Ψ⟩(r1) ⟨Ψ†Ψ⟩(r2) ⟨E⁻E⁺⟩(r3))` with steady-state intensities in
/// the denominator; `τ1 = t3 - t1`, `τ2 = t2 - t1`.
pub fn normalized_g3(
    kind: G3Kind,
    sys: &ModeSystem,
    weights: &G3Weights,
    tau1: f64,
    tau2: f64,
) -> Result<f64, EngineError> {
    if !(tau1 >= 0.0 && tau2 >= 0.0 && tau1.is_finite() && tau2.is_finite()) {
        return Err(EngineError::InvalidParameter(format!(
            "delays must be finite and nonnegative, got ({tau1}, {tau2})"
        )));
    }
    let mut denominator = 1.0;
    for (label, w) in [("r1", &weights.r1), ("r2", &weights.r2), ("r3", &weights.r3)] {
        let occupation = steady_intensity(sys, w)?;
        if !(occupation > f64::MIN_POSITIVE) {
            return Err(EngineError::ZeroDenominator {
                field: label.to_string(),
                value: occupation,
            });
        }
        denominator *= occupation;
    }
    Ok(unnormalized_g3(kind, sys, weights, tau1, tau2)?.re / denominator)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gaussian::{build_two_mode_example, ModeKind};

    fn reference() -> ModeSystem {
        build_two_mode_example(0.15, 0.25, 0.01, 0.1, 1.0).unwrap()
    }

    fn one(dim: usize, k: usize) -> Vec<Complex64> {
        let mut w = vec![Complex64::new(0.0, 0.0); dim];
        w[k] = Complex64::new(1.0, 0.0);
        w
    }

    #[test]
    fn normal_order_detection() {
        let w = one(2, 0);
        let ok = CorrelationSpec::new(vec![
            FieldEvent::creation(w.clone(), 0.0),
            FieldEvent::annihilation(w.clone(), 0.0),
        ]);
        assert!(ok.is_normally_ordered());
        let bad = CorrelationSpec::new(vec![
            FieldEvent::annihilation(w.clone(), 0.0),
            FieldEvent::creation(w, 0.0),
        ]);
        assert!(!bad.is_normally_ordered());
        assert!(matches!(
            wick_correlation(&reference(), &bad),
            Err(EngineError::NotNormallyOrdered)
        ));
    }

    #[test]
    fn unbalanced_strings_vanish_exactly() {
        let sys = reference();
        let spec = CorrelationSpec::new(vec![
            FieldEvent::creation(one(2, 1), 0.0),
            FieldEvent::creation(one(2, 0), 1.0),
            FieldEvent::annihilation(one(2, 1), 0.5),
        ]);
        assert_eq!(wick_correlation(&sys, &spec).unwrap(), Complex64::new(0.0, 0.0));
    }

    #[test]
    fn too_many_pairs() {
        let sys = reference();
        let mut events = vec![FieldEvent::creation(one(2, 1), 0.0); 9];
        events.extend(vec![FieldEvent::annihilation(one(2, 1), 0.0); 9]);
        assert!(matches!(
            wick_correlation(&sys, &CorrelationSpec::new(events)),
            Err(EngineError::TooManyEvents { pairs: 9, .. })
        ));
    }

    #[test]
    fn bad_weights_rejected() {
        let sys = reference();
        let spec = CorrelationSpec::new(vec![
            FieldEvent::creation(vec![Complex64::new(0.0, 0.0); 2], 0.0),
            FieldEvent::annihilation(one(2, 0), 0.0),
        ]);
        assert!(matches!(
            wick_correlation(&sys, &spec),
            Err(EngineError::InvalidEvent(_))
        ));
        let spec = CorrelationSpec::new(vec![
            FieldEvent::creation(one(3, 0), 0.0),
            FieldEvent::annihilation(one(2, 0), 0.0),
        ]);
        assert!(matches!(
            wick_correlation(&sys, &spec),
            Err(EngineError::InvalidEvent(_))
        ));
    }

    #[test]
    fn thermal_occupation_of_uncoupled_mode() {
        let sys = build_two_mode_example(0.2, 0.3, 0.05, 0.17, 0.0).unwrap();
        let n = steady_intensity(&sys, &one(2, 1)).unwrap();
        assert!((n - 0.17).abs() < 1e-15);
    }

    #[test]
    fn decoupled_equal_time_factorization() {
        // ⟨c†c†a†acc⟩ = 2 n̄_m² n̄_o
        let (no, nm) = (0.04, 0.12);
        let sys = build_two_mode_example(0.2, 0.3, no, nm, 0.0).unwrap();
        let (m, o) = (one(2, 1), one(2, 0));
        let want = 2.0 * nm * nm * no;
        for t in [0.0, 3.0] {
            let x = g3_x(&sys, &m, &m, &o, t, t, t).unwrap();
            let y = g3_y(&sys, &m, &m, &o, t, t, t).unwrap();
            assert!((x.re - want).abs() < 1e-15 && x.im.abs() < 1e-18);
            assert!((y - x).norm() < 1e-18);
        }
        let w = G3Weights::default_for(&sys).unwrap();
        let g = normalized_g3(G3Kind::X, &sys, &w, 0.0, 0.0).unwrap();
        assert!((g - 2.0).abs() < 1e-12, "{g}");
    }

    #[test]
    fn vacuum_normalization_fails() {
        let sys = build_two_mode_example(0.2, 0.3, 0.0, 0.0, 1.0).unwrap();
        let w = G3Weights::default_for(&sys).unwrap();
        assert!(matches!(
            normalized_g3(G3Kind::X, &sys, &w, 1.0, 0.5),
            Err(EngineError::ZeroDenominator { .. })
        ));
        assert_eq!(
            unnormalized_g3(G3Kind::Y, &sys, &w, 1.0, 0.5).unwrap(),
            Complex64::new(0.0, 0.0)
        );
    }

    #[test]
    fn negative_delay_rejected() {
        let sys = reference();
        let w = G3Weights::default_for(&sys).unwrap();
        assert!(normalized_g3(G3Kind::X, &sys, &w, -1.0, 0.0).is_err());
    }

    #[test]
    fn default_weights_follow_mode_kinds() {
        let sys = reference();
        let w = G3Weights::default_for(&sys).unwrap();
        assert_eq!(w.r3, one(2, 0));
        assert_eq!(w.r1, one(2, 1));
        assert_eq!(sys.kinds()[1], ModeKind::Matter);
    }

    #[test]
    fn equal_time_x_and_y_coincide() {
        let sys = reference();
        let w = G3Weights::default_for(&sys).unwrap();
        for tau in [0.0, 0.7, 3.0] {
            let x = normalized_g3(G3Kind::X, &sys, &w, tau, tau).unwrap();
            let y = normalized_g3(G3Kind::Y, &sys, &w, tau, tau).unwrap();
            assert!((x - y).abs() < 1e-12);
        }
    }
}
