//! Ranking changing entities by momentum.
//!
//! Each entity carries an absolute gain and a relative gain over a window.
//! An entity dominates another when it is strictly ahead on both; the
//! momentum leaders are the undominated entities. Leaders are ordered by the
//! normalized score weight of the entities they dominate, and a whole system
//! is scored by the weight-averaged relative gain of its leaders.

pub mod error;
pub mod frontier;
pub mod ingestion;
pub mod model;
pub mod ranking;
pub mod report;
pub mod simulation;

pub use error::{Error, Result};
pub use frontier::{
    dominated_set, frontier_bruteforce, frontier_sortscan, interval, moving_maxima,
    runners_up, verify_bound, Algorithm, BoundCheck, FrontierResult, Leader, LeaderDetail,
    MovingMaxima, RankInterval,
};
pub use ingestion::{parse_gains_table, parse_leader_terms, parse_snapshot, write_gains_table};
pub use model::{
    derive_from_snapshots, dominates, DeltaSystem, Derivation, EntityGain, EntityId,
    GainRecord, RelativeGainMode, Snapshot,
};
pub use ranking::{
    compare_systems, leader_weight, momentousness, normalized_weights, rank_leaders,
    LeaderRanking, MomentousnessScore, MomentumTerm, MoreMomentous, RankedLeader,
    SystemComparison,
};
pub use report::{write_report, Format, FrontierReport, Report};
pub use simulation::{
    bound_estimate, run_study, run_trial, sample_power_law, Coupling, StudyConfig, StudyResult,
};
