//! Top-K realization ranking for stochastically known event logs.
//!
//! A stochastically known log attaches a discrete distribution over activity
//! labels to every event. Under event independence the probability of a full
//! realization is the product of the chosen per-event probabilities, and the
//! [`engine`] enumerates realizations in non-increasing probability order by
//! repeatedly splitting the solution space around a best / second-best pair.
//!
//! The crate is `no_std` (with `alloc`). The `std` feature only adds wall-clock
//! timing of ranking runs.
#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod engine;
pub mod error;
pub mod logprob;
pub mod metrics;
pub mod model;
pub mod oracle;
pub mod simulate;

pub use engine::{
    alg_1p, alg_r2p, next_allowed, split_partition, top_k, top_k_with, Partition, Ranking, RankingEntry, Restriction,
    SecondBest, TopKOptions, TopKResult, TopKStats,
};
pub use error::{EngineError, MetricsError, ModelError, OracleError, SimulationError};
pub use logprob::{LogProb, LogSumExp};
pub use metrics::{avg_difference, cumulative_probability, summarize, RankingMeasures};
pub use model::{
    assignment_distance, validate_log, ActivityAlternative, Assignment, Choices, ChoicesIter, RawAlternative, RawEvent,
    StochasticEvent, StochasticLog, Timestamp, ValidateOptions,
};
pub use oracle::{enumerate_all, for_each_realization, oracle_top_k, oracle_top_k_bounded, DEFAULT_CAP};
pub use simulate::{gen_event_probabilities, simulate_log, SimulationParams};
