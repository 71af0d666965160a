use std::fmt;

use serde::{Deserialize, Serialize};

use super::DetectionError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DetectorKind {
    /// Photodetector; measures `E⁻ ... E⁺`.
    Maxwell,
    /// Photoionization detector for the matter-wave field; measures `Ψ† ... Ψ`.
    Schrodinger,
}

/// A detector switched on at `t = 0` and off at its gate time. Only the
/// rank of the switch-off time among all detectors matters.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DetectorSpec {
    pub id: String,
    pub kind: DetectorKind,
    #[serde(rename = "position")]
    pub position_label: String,
    pub gate_rank: usize,
}

impl DetectorSpec {
    pub fn new(id: impl Into<String>, kind: DetectorKind, position: impl Into<String>, gate_rank: usize) -> Self {
        Self {
            id: id.into(),
            kind,
            position_label: position.into(),
            gate_rank,
        }
    }

    /// Gate-time symbol, `t<id>`.
    pub fn time_label(&self) -> String {
        format!("t{}", self.id)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct DetectionPlan {
    pub detectors: Vec<DetectorSpec>,
}

impl DetectionPlan {
    pub fn new(detectors: Vec<DetectorSpec>) -> Result<Self, DetectionError> {
        let plan = Self { detectors };
        plan.validate()?;
        Ok(plan)
    }

    /// Gate ranks must form a permutation of `1..=len` and ids must be unique.
    pub fn validate(&self) -> Result<(), DetectionError> {
        let n = self.detectors.len();
        if n == 0 {
            return Err(DetectionError::EmptyPlan);
        }
        let mut seen = vec![false; n];
        for d in &self.detectors {
            if d.gate_rank == 0 || d.gate_rank > n || seen[d.gate_rank - 1] {
                let ranks = self.detectors.iter().map(|d| d.gate_rank).collect();
                return Err(DetectionError::InvalidRankPermutation { ranks });
            }
            seen[d.gate_rank - 1] = true;
        }
        for (i, a) in self.detectors.iter().enumerate() {
            if self.detectors[i + 1..].iter().any(|b| b.id == a.id) {
                return Err(DetectionError::DuplicateDetector(a.id.clone()));
            }
        }
        Ok(())
    }

    pub fn count(&self, kind: DetectorKind) -> usize {
        self.detectors.iter().filter(|d| d.kind == kind).count()
    }

    /// Detectors sorted by ascending gate rank.
    pub fn by_rank(&self) -> Vec<&DetectorSpec> {
        let mut v: Vec<&DetectorSpec> = self.detectors.iter().collect();
        v.sort_by_key(|d| d.gate_rank);
        v
    }

    /// Same detectors with gate ranks reassigned: `ranks[i]` goes to detector `i`.
    pub fn with_ranks(&self, ranks: &[usize]) -> Result<Self, DetectionError> {
        if ranks.len() != self.detectors.len() {
            return Err(DetectionError::InvalidRankPermutation { ranks: ranks.to_vec() });
        }
        let detectors = self
            .detectors
            .iter()
            .zip(ranks)
            .map(|(d, &r)| DetectorSpec {
                gate_rank: r,
                ..d.clone()
            })
            .collect();
        Self::new(detectors)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FieldOp {
    /// `E⁽⁻⁾`
    EMinus,
    /// `E⁽⁺⁾`
    EPlus,
    /// `Ψ†`
    PsiDagger,
    /// `Ψ`
    Psi,
}

impl FieldOp {
    pub fn conjugate(self) -> Self {
        match self {
            Self::EMinus => Self::EPlus,
            Self::EPlus => Self::EMinus,
            Self::PsiDagger => Self::Psi,
            Self::Psi => Self::PsiDagger,
        }
    }

    pub fn is_creation(self) -> bool {
        matches!(self, Self::EMinus | Self::PsiDagger)
    }

    pub fn is_matter(self) -> bool {
        matches!(self, Self::PsiDagger | Self::Psi)
    }

    fn token(self) -> &'static str {
        match self {
            Self::EMinus => "E-",
            Self::EPlus => "E+",
            Self::PsiDagger => "Psi+",
            Self::Psi => "Psi",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SymbolicOperator {
    pub op: FieldOp,
    pub position: String,
    pub time: String,
}

impl SymbolicOperator {
    pub fn conjugate(&self) -> Self {
        Self {
            op: self.op.conjugate(),
            ..self.clone()
        }
    }
}

impl fmt::Display for SymbolicOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[{}@{}]", self.op.token(), self.position, self.time)
    }
}

/// Symbolic operator string. The canonical text form joins operators with
/// single spaces, e.g. `E-[r1@t1] Psi+[r3@t3] Psi[r3@t3] E+[r1@t1]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct OperatorString(pub Vec<SymbolicOperator>);

impl OperatorString {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn left_half(&self) -> &[SymbolicOperator] {
        &self.0[..self.len() / 2]
    }

    pub fn right_half(&self) -> &[SymbolicOperator] {
        &self.0[self.len() / 2..]
    }

    /// The right half is the reversed, conjugated left half.
    pub fn is_conjugate_mirror(&self) -> bool {
        self.len().is_multiple_of(2)
            && self.left_half().iter().all(|o| o.op.is_creation())
            && self
                .left_half()
                .iter()
                .zip(self.right_half().iter().rev())
                .all(|(l, r)| *r == l.conjugate())
    }

    /// Like [`is_conjugate_mirror`](Self::is_conjugate_mirror) but ignoring time labels.
    pub fn has_outside_in_shape(&self) -> bool {
        self.len().is_multiple_of(2)
            && self.left_half().iter().all(|o| o.op.is_creation())
            && self
                .left_half()
                .iter()
                .zip(self.right_half().iter().rev())
                .all(|(l, r)| r.op == l.op.conjugate() && r.position == l.position)
    }
}

impl fmt::Display for OperatorString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, op) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{op}")?;
        }
        Ok(())
    }
}

/// Operator arrangement selected by the gate ordering: creation operators
/// in ascending switch-off order, then their conjugates mirrored, so that
/// time increases from the outside of the string to the inside.
pub fn select_ordering(plan: &DetectionPlan) -> Result<OperatorString, DetectionError> {
    plan.validate()?;
    let left: Vec<SymbolicOperator> = plan
        .by_rank()
        .into_iter()
        .map(|d| SymbolicOperator {
            op: match d.kind {
                DetectorKind::Maxwell => FieldOp::EMinus,
                DetectorKind::Schrodinger => FieldOp::PsiDagger,
            },
            position: d.position_label.clone(),
            time: d.time_label(),
        })
        .collect();
    let right = left.iter().rev().map(SymbolicOperator::conjugate);
    let ops = left.iter().cloned().chain(right).collect();
    Ok(OperatorString(ops))
}

/// Largest `N + M` accepted by [`count_amplitude_terms`].
pub const MAX_AMPLITUDE_ORDER: usize = 12;

/// Number of terms, `(N + M)!`, in the order-`N + M` transition amplitude.
pub fn count_amplitude_terms(n_maxwell: usize, n_schrodinger: usize) -> Result<u64, DetectionError> {
    let order = n_maxwell + n_schrodinger;
    if order > MAX_AMPLITUDE_ORDER {
        return Err(DetectionError::Overflow {
            order,
            max: MAX_AMPLITUDE_ORDER,
        });
    }
    Ok((1..=order as u64).product())
}
