//! The reporting game: workers submit lists, firms report truthfully, and
//! firm-proposing DA runs in every state.

pub mod compare;
pub mod dominance;
pub mod engine;
pub mod equilibrium;
pub mod reports;
pub mod search;

pub use compare::{
    compare_outcomes, matched_set_diff, rank_stats, unique_stable_for_reported, verify_top_top_matched,
    MatchedSetDiff, OutcomeComparison, RankStats, Verdict,
};
pub use dominance::{is_dominated_exact, is_weakly_undominated};
pub use engine::{expected_utilities, expected_utility, outcome_utility, play, play_with, reported_preferences};
pub use equilibrium::{
    enumerate_bne, enumerate_bne_with, is_bne, is_bne_by_worker, BneEnumeration, BneGroup, Deviation,
    EnumerateOptions, EquilibriumReport, SweepMode, DEFAULT_BUDGET,
};
pub use reports::{count_reports, enumerate_reports, Report, StrategyClass, StrategyProfile};
pub use search::{best_response, best_responses, potential_proposers, BestResponse};
