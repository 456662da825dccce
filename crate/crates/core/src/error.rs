use thiserror::Error;

/// Errors produced by the engine.
///
/// Every variant maps to a stable name (see [`Error::name`]) which the CLI
/// prints on the diagnostic stream.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid frame: {0}")]
    InvalidFrame(String),
    #[error("events belong to different frames")]
    FrameMismatch,
    #[error("unknown outcome label `{0}`")]
    UnknownLabel(String),
    #[error("mass assigned to the empty set")]
    EmptySetMass,
    #[error("negative mass {value} on event {mask:#b}")]
    NegativeMass { mask: u32, value: f64 },
    #[error("masses sum to {sum}, not 1")]
    MassNotNormalized { sum: f64 },
    #[error("invalid capacity: {0}")]
    InvalidCapacity(String),
    #[error("invalid interval [{lo}, {hi}]")]
    InvalidInterval { lo: f64, hi: f64 },
    #[error("invalid partition: {0}")]
    InvalidPartition(String),
    #[error("capacity is not a belief function (Möbius mass {value} on {mask:#b})")]
    NotABeliefFunction { mask: u32, value: f64 },
    #[error("capacity is not 2-monotone")]
    NotTwoMonotone,
    #[error("frame of size {n} exceeds the limit of {limit} for this operation")]
    FrameTooLarge { n: usize, limit: usize },
    #[error("credal set is empty; lower probabilities are inconsistent")]
    InfeasiblePolytope,
    #[error("linear program is unbounded")]
    Unbounded,
    #[error("LP solver failed: {0}")]
    Solver(String),
    #[error("conditioning event has zero upper probability")]
    ConditioningOnNull,
    #[error("geometric rule undefined: conditioning event has zero lower probability")]
    GeometricUndefined,
    #[error("no sure loss to exploit: {0}")]
    NoSureLoss(String),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("invalid simplex vector: {0}")]
    InvalidSimplex(String),
    #[error("ALUP credal set is empty (sum of lower bounds {lower_sum}, sum of upper bounds {upper_sum})")]
    EmptyAlup { lower_sum: f64, upper_sum: f64 },
    #[error("value {value} outside of {range}")]
    OutOfRange { value: f64, range: &'static str },
    #[error("independent computations disagree ({what}: {discrepancy:e})")]
    CrossCheckMismatch {
        what: &'static str,
        discrepancy: f64,
    },
    #[error("parse error: {0}")]
    ParseError(String),
}

impl Error {
    /// Stable, variant-level name of the error.
    pub fn name(&self) -> &'static str {
        match self {
            Error::InvalidFrame(_) => "InvalidFrame",
            Error::FrameMismatch => "FrameMismatch",
            Error::UnknownLabel(_) => "UnknownLabel",
            Error::EmptySetMass => "EmptySetMass",
            Error::NegativeMass { .. } => "NegativeMass",
            Error::MassNotNormalized { .. } => "MassNotNormalized",
            Error::InvalidCapacity(_) => "InvalidCapacity",
            Error::InvalidInterval { .. } => "InvalidInterval",
            Error::InvalidPartition(_) => "InvalidPartition",
            Error::NotABeliefFunction { .. } => "NotABeliefFunction",
            Error::NotTwoMonotone => "NotTwoMonotone",
            Error::FrameTooLarge { .. } => "FrameTooLarge",
            Error::InfeasiblePolytope => "InfeasiblePolytope",
            Error::Unbounded => "Unbounded",
            Error::Solver(_) => "Solver",
            Error::ConditioningOnNull => "ConditioningOnNull",
            Error::GeometricUndefined => "GeometricUndefined",
            Error::NoSureLoss(_) => "NoSureLoss",
            Error::DimensionMismatch { .. } => "DimensionMismatch",
            Error::InvalidSimplex(_) => "InvalidSimplex",
            Error::EmptyAlup { .. } => "EmptyAlup",
            Error::OutOfRange { .. } => "OutOfRange",
            Error::CrossCheckMismatch { .. } => "CrossCheckMismatch",
            Error::ParseError(_) => "ParseError",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
