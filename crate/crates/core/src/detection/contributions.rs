use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::plan::{select_ordering, DetectionPlan, DetectorKind, OperatorString};
use super::DetectionError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TermClass {
    Direct,
    BosonExchange,
    FermionCross,
}

impl fmt::Display for TermClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Direct => "direct",
            Self::BosonExchange => "boson_exchange",
            Self::FermionCross => "fermion_cross",
        })
    }
}

/// Symbolic detector efficiency; never evaluated here.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Efficiency {
    /// `η_m(r)`, photodetector efficiency.
    Maxwell(String),
    /// `η_s(r)`, Schrödinger-detector self-efficiency.
    SchrodingerSelf(String),
    /// `η_s(r, r')`, mixed self-efficiency entering the exchange term.
    SchrodingerMutual(String, String),
    /// `η_x(r, r')`, cross-efficiency from exchanging electrons or ions only.
    Cross(String, String),
}

impl fmt::Display for Efficiency {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Maxwell(r) => write!(f, "eta_m({r})"),
            Self::SchrodingerSelf(r) => write!(f, "eta_s({r})"),
            Self::SchrodingerMutual(a, b) => write!(f, "eta_s({a},{b})"),
            Self::Cross(a, b) => write!(f, "eta_x({a},{b})"),
        }
    }
}

/// One contribution to the gated joint detection probability.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ContributionTerm {
    pub class: TermClass,
    /// Overall sign in front of the term.
    pub sign: i8,
    /// Integer multiplicity; 2 for the fermionic term, where either the
    /// electrons or the ions can be exchanged.
    pub prefactor: u32,
    pub efficiency_factors: Vec<Efficiency>,
    pub operator_string: OperatorString,
    pub survives_counting_rate: bool,
}

impl ContributionTerm {
    /// `sign · prefactor · Π η` with efficiencies looked up by their
    /// canonical names (e.g. `eta_s(r3,r4)`).
    ///
    /// A supplied `eta_x` value is the cross-efficiency integral without
    /// its two-fold exchange multiplicity, which `prefactor` carries.
    pub fn coefficient(&self, values: &BTreeMap<String, f64>) -> Result<f64, DetectionError> {
        let mut c = f64::from(self.sign) * f64::from(self.prefactor);
        for eta in &self.efficiency_factors {
            let name = eta.to_string();
            c *= values.get(&name).ok_or(DetectionError::MissingEfficiency(name))?;
        }
        Ok(c)
    }
}

impl fmt::Display for ContributionTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = if self.sign < 0 { '-' } else { '+' };
        write!(f, "{:<14} {sign}{}", self.class.to_string(), self.prefactor)?;
        for eta in &self.efficiency_factors {
            write!(f, " {eta}")?;
        }
        write!(f, " <{}>", self.operator_string)
    }
}

/// Maximum number of Schrödinger detectors handled by the exchange analysis.
pub const MAX_SCHRODINGER_DETECTORS: usize = 2;

/// Direct, boson-exchange and fermion-cross contributions of a plan.
///
/// With two indistinguishable Schrödinger detectors (gated at `ta < tb`)
/// there are three terms: the direct correlator; the composite-boson
/// exchange, whose two matter annihilation operators swap time labels;
/// and the fermionic cross term, in which all four matter operators sit
/// at `ta`. Distinguishable detectors, or fewer than two of them, leave
/// the direct term only.
pub fn enumerate_contributions(
    plan: &DetectionPlan,
    distinguishable: bool,
) -> Result<Vec<ContributionTerm>, DetectionError> {
    let direct_string = select_ordering(plan)?;
    let n_schrodinger = plan.count(DetectorKind::Schrodinger);
    if n_schrodinger > MAX_SCHRODINGER_DETECTORS {
        return Err(DetectionError::UnsupportedDetectorCount {
            schrodinger: n_schrodinger,
            max: MAX_SCHRODINGER_DETECTORS,
        });
    }
    let ranked = plan.by_rank();
    let maxwell: Vec<Efficiency> = ranked
        .iter()
        .filter(|d| d.kind == DetectorKind::Maxwell)
        .map(|d| Efficiency::Maxwell(d.position_label.clone()))
        .collect();
    let matter: Vec<_> = ranked.iter().filter(|d| d.kind == DetectorKind::Schrodinger).collect();

    let with = |extra: Vec<Efficiency>| maxwell.iter().cloned().chain(extra).collect::<Vec<_>>();
    let direct = ContributionTerm {
        class: TermClass::Direct,
        sign: 1,
        prefactor: 1,
        efficiency_factors: with(
            matter
                .iter()
                .map(|d| Efficiency::SchrodingerSelf(d.position_label.clone()))
                .collect(),
        ),
        operator_string: direct_string.clone(),
        survives_counting_rate: true,
    };
    if distinguishable || matter.len() < 2 {
        return Ok(vec![direct]);
    }

    let (ra, rb) = (&matter[0].position_label, &matter[1].position_label);
    let (ta, tb) = (matter[0].time_label(), matter[1].time_label());

    let mut exchange_string = direct_string.clone();
    let half = exchange_string.len() / 2;
    for op in &mut exchange_string.0[half..] {
        if op.op.is_matter() {
            op.time = if op.time == ta { tb.clone() } else { ta.clone() };
        }
    }
    let exchange = ContributionTerm {
        class: TermClass::BosonExchange,
        sign: 1,
        prefactor: 1,
        efficiency_factors: with(vec![
            Efficiency::SchrodingerMutual(ra.clone(), rb.clone()),
            Efficiency::SchrodingerMutual(rb.clone(), ra.clone()),
        ]),
        operator_string: exchange_string,
        survives_counting_rate: true,
    };

    let mut cross_string = direct_string;
    for op in &mut cross_string.0 {
        if op.op.is_matter() {
            op.time = ta.clone();
        }
    }
    // only N + M - 1 independent gate integrals remain, so the
    // (N + M)-fold time derivative of the counting rate annihilates it
    let cross = ContributionTerm {
        class: TermClass::FermionCross,
        sign: -1,
        prefactor: 2,
        efficiency_factors: with(vec![Efficiency::Cross(ra.clone(), rb.clone())]),
        operator_string: cross_string,
        survives_counting_rate: false,
    };
    Ok(vec![direct, exchange, cross])
}

/// Contributions that survive differentiation of the joint probability
/// with respect to every gate time.
pub fn counting_rate_terms(
    plan: &DetectionPlan,
    distinguishable: bool,
) -> Result<Vec<ContributionTerm>, DetectionError> {
    Ok(enumerate_contributions(plan, distinguishable)?
        .into_iter()
        .filter(|t| t.survives_counting_rate)
        .collect())
}
