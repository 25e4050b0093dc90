use alloc::string::String;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModelError {
    #[error("duplicate event id `{0}`")]
    DuplicateEventId(String),
    #[error("event `{0}` has no activity alternatives")]
    EmptyAlternatives(String),
    #[error("event `{event_id}`: alternative `{label}` has non-positive probability {p}")]
    NonPositiveProbability { event_id: String, label: String, p: f64 },
    #[error("event `{event_id}`: probabilities sum to {sum}, expected 1")]
    ProbabilitySumViolation { event_id: String, sum: f64 },
    #[error("event `{event_id}`: label `{label}` appears more than once")]
    DuplicateLabelInEvent { event_id: String, label: String },
    #[error("choice {index} at position {position} is out of range ({available} alternatives)")]
    IndexOutOfRange { position: usize, index: u32, available: usize },
    #[error("assignment length {found} does not match {expected}")]
    LengthMismatch { expected: usize, found: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EngineError {
    #[error("K must be at least 1")]
    InvalidK,
    #[error("position {0} is pinned by the restriction")]
    PositionPinned(usize),
    #[error("partition has no second-best solution")]
    NoSecondBest,
    #[error("restriction conflict at position {position}: index {index}")]
    RestrictionConflict { position: usize, index: u32 },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("realization count {count} exceeds the enumeration cap {cap}")]
    CapExceeded { count: String, cap: u64 },
    #[error("K must be at least 1")]
    InvalidK,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SimulationError {
    #[error("invalid simulation parameters: {0}")]
    InvalidParams(&'static str),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MetricsError {
    #[error("rank {rank} is outside 1..={available}")]
    RankOutOfRange { rank: usize, available: usize },
    #[error("ranking is empty")]
    EmptyRanking,
}
