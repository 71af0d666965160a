//! Symbolic combinatorics of time-gated joint detection.
//!
//! Each detector is switched on at `t = 0` and off at its own gate time.
//! A given ordering of the switch-off times selects one arrangement of
//! field operators in the counting rate; indistinguishable matter-wave
//! detectors add exchange contributions from the composite boson and from
//! its fermionic constituents.

mod contributions;
mod fermi;
mod plan;

use thiserror::Error;

pub use contributions::{
    counting_rate_terms, enumerate_contributions, ContributionTerm, Efficiency, TermClass, MAX_SCHRODINGER_DETECTORS,
};
pub use fermi::{
    fermi_vacuum_expectation, Delta, DeltaTerm, FermiLabel, FermiOp, FermiOpKind, FermiOpString, LabelTag,
    MAX_FERMI_STRING,
};
pub use plan::{
    count_amplitude_terms, select_ordering, DetectionPlan, DetectorKind, DetectorSpec, FieldOp, OperatorString,
    SymbolicOperator, MAX_AMPLITUDE_ORDER,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DetectionError {
    #[error("detection plan has no detectors")]
    EmptyPlan,
    #[error("gate ranks {ranks:?} are not a permutation of 1..=n")]
    InvalidRankPermutation { ranks: Vec<usize> },
    #[error("duplicate detector id '{0}'")]
    DuplicateDetector(String),
    #[error("order {order} exceeds the supported maximum {max}")]
    Overflow { order: usize, max: usize },
    #[error("{schrodinger} Schrodinger detectors; exchange analysis supports at most {max}")]
    UnsupportedDetectorCount { schrodinger: usize, max: usize },
    #[error("fermionic string of length {len} exceeds the maximum {max}")]
    StringTooLong { len: usize, max: usize },
    #[error("operators in a fermionic string must carry the same label tags")]
    InconsistentLabels,
    #[error("no value supplied for efficiency {0}")]
    MissingEfficiency(String),
}
