use coherence_core::detection::DetectionError;
use coherence_core::fock::OracleError;
use coherence_core::EngineError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Config(String),
    #[error("{0}")]
    Io(String),
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error(transparent)]
    Detection(#[from] DetectionError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error("{0}")]
    OracleTolerance(String),
}

impl CliError {
    /// Stable diagnostic tag printed as `error[<code>]`.
    pub fn code(&self) -> &'static str {
        match self {
            Self::Usage(_) => "usage",
            Self::Config(_) => "config",
            Self::Io(_) => "io",
            Self::Engine(e) | Self::Oracle(OracleError::Engine(e)) => match e {
                EngineError::ZeroDenominator { .. } => "zero_denominator",
                EngineError::UnstableSystem(_) => "unstable_system",
                EngineError::Linalg(_) => "linalg",
                EngineError::InvalidParameter(_) => "invalid_parameter",
                _ => "engine",
            },
            Self::Detection(_) => "detection",
            Self::Oracle(e) => match e {
                OracleError::CutoffTooSmall { .. } => "cutoff_too_small",
                OracleError::NotConverged { .. } => "not_converged",
                _ => "oracle",
            },
            Self::OracleTolerance(_) => "oracle_tolerance",
        }
    }

    /// 64 usage, 65 bad config, 74 I/O, 3 oracle regression alarm, 2 every
    /// failure of the computation itself.
    pub fn exit_code(&self) -> u8 {
        match self {
            Self::Usage(_) => 64,
            Self::Config(_) => 65,
            Self::Io(_) => 74,
            Self::OracleTolerance(_) => 3,
            Self::Engine(_) | Self::Detection(_) | Self::Oracle(_) => 2,
        }
    }

    /// Single-line diagnostic.
    pub fn diagnostic(&self) -> String {
        let msg = self.to_string().replace(['\n', '\r'], " ");
        format!("error[{}]: {}", self.code(), msg.trim())
    }
}
