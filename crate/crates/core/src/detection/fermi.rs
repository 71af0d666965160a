//! Vacuum expectation values of fermionic operator strings.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::DetectionError;

pub const MAX_FERMI_STRING: usize = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FermiOpKind {
    Create,
    Annihilate,
}

/// Discrete mode label. Tags that are `None` are absent for every operator
/// of a string.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FermiLabel {
    pub momentum: String,
    #[serde(default)]
    pub spin: Option<String>,
    #[serde(default)]
    pub channel: Option<String>,
}

impl FermiLabel {
    pub fn new(momentum: impl Into<String>) -> Self {
        Self {
            momentum: momentum.into(),
            spin: None,
            channel: None,
        }
    }

    pub fn with_spin(mut self, spin: impl Into<String>) -> Self {
        self.spin = Some(spin.into());
        self
    }

    pub fn with_channel(mut self, channel: impl Into<String>) -> Self {
        self.channel = Some(channel.into());
        self
    }

    fn shape(&self) -> (bool, bool) {
        (self.spin.is_some(), self.channel.is_some())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FermiOp {
    pub kind: FermiOpKind,
    pub label: FermiLabel,
}

impl FermiOp {
    pub fn create(label: FermiLabel) -> Self {
        Self {
            kind: FermiOpKind::Create,
            label,
        }
    }

    pub fn annihilate(label: FermiLabel) -> Self {
        Self {
            kind: FermiOpKind::Annihilate,
            label,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FermiOpString(pub Vec<FermiOp>);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum LabelTag {
    Momentum,
    Spin,
    Channel,
}

/// Kronecker/Dirac delta between two label components.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Delta {
    pub tag: LabelTag,
    pub left: String,
    pub right: String,
}

impl Delta {
    pub fn holds(&self) -> bool {
        self.left == self.right
    }
}

impl fmt::Display for Delta {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "d({},{})", self.left, self.right)
    }
}

/// Signed product of deltas from one complete contraction.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DeltaTerm {
    pub sign: i8,
    /// `(annihilator index, creator index)` positions in the string,
    /// sorted by annihilator position.
    pub pairs: Vec<(usize, usize)>,
    /// Momentum deltas first, then spin, then channel; pair order within each.
    pub deltas: Vec<Delta>,
}

impl DeltaTerm {
    /// Value of the term for concrete labels: `sign` if every delta holds, else 0.
    pub fn value(&self) -> i64 {
        if self.deltas.iter().all(Delta::holds) {
            i64::from(self.sign)
        } else {
            0
        }
    }
}

impl fmt::Display for DeltaTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(if self.sign < 0 { "-" } else { "+" })?;
        for d in &self.deltas {
            write!(f, " {d}")?;
        }
        Ok(())
    }
}

/// `⟨0| s |0⟩` as a sum of signed delta products.
///
/// The only nonvanishing vacuum contraction is an annihilator standing to
/// the left of a creator, `⟨a_i a_j†⟩ = δ_ij`. Each complete contraction
/// carries the parity of the permutation that brings its pairs adjacent.
/// An empty result means the expectation vanishes identically.
pub fn fermi_vacuum_expectation(s: &FermiOpString) -> Result<Vec<DeltaTerm>, DetectionError> {
    let ops = &s.0;
    if ops.len() > MAX_FERMI_STRING {
        return Err(DetectionError::StringTooLong {
            len: ops.len(),
            max: MAX_FERMI_STRING,
        });
    }
    if let Some(first) = ops.first() {
        if ops.iter().any(|o| o.label.shape() != first.label.shape()) {
            return Err(DetectionError::InconsistentLabels);
        }
    }
    let creators = ops.iter().filter(|o| o.kind == FermiOpKind::Create).count();
    if 2 * creators != ops.len() {
        return Ok(Vec::new());
    }

    let mut out = Vec::new();
    let mut used = vec![false; ops.len()];
    let mut pairs = Vec::new();
    contract(ops, &mut used, &mut pairs, 1, &mut out);
    out.sort_by(|a: &DeltaTerm, b| b.sign.cmp(&a.sign).then_with(|| a.pairs.cmp(&b.pairs)));
    Ok(out)
}

fn contract(ops: &[FermiOp], used: &mut [bool], pairs: &mut Vec<(usize, usize)>, sign: i8, out: &mut Vec<DeltaTerm>) {
    let Some(i) = used.iter().position(|u| !u) else {
        out.push(build_term(ops, pairs, sign));
        return;
    };
    if ops[i].kind != FermiOpKind::Annihilate {
        // leftmost remaining creator acts on the bra vacuum
        return;
    }
    used[i] = true;
    let mut between = 0usize;
    for j in i + 1..ops.len() {
        if used[j] {
            continue;
        }
        if ops[j].kind == FermiOpKind::Create {
            used[j] = true;
            pairs.push((i, j));
            let s = if between.is_multiple_of(2) { sign } else { -sign };
            contract(ops, used, pairs, s, out);
            pairs.pop();
            used[j] = false;
        }
        between += 1;
    }
    used[i] = false;
}

fn build_term(ops: &[FermiOp], pairs: &[(usize, usize)], sign: i8) -> DeltaTerm {
    let mut pairs = pairs.to_vec();
    pairs.sort_unstable();
    let mut deltas = Vec::new();
    for tag in [LabelTag::Momentum, LabelTag::Spin, LabelTag::Channel] {
        for &(a, c) in &pairs {
            let (la, lc) = (&ops[a].label, &ops[c].label);
            let component = match tag {
                LabelTag::Momentum => Some((la.momentum.clone(), lc.momentum.clone())),
                LabelTag::Spin => la.spin.clone().zip(lc.spin.clone()),
                LabelTag::Channel => la.channel.clone().zip(lc.channel.clone()),
            };
            if let Some((left, right)) = component {
                deltas.push(Delta { tag, left, right });
            }
        }
    }
    DeltaTerm { sign, pairs, deltas }
}
