//! Centralized two-sided matching with one-sided incomplete information.

pub mod conditions;
pub mod constructions;
pub mod da;
pub mod economy;
pub mod error;
pub mod game;
pub mod io;
pub mod market;
pub mod matching;
pub mod stability;

#[cfg(test)]
mod testutil;

pub type Rational = num_rational::Ratio<i64>;

pub use da::{deferred_acceptance, deferred_acceptance_with, ProposingSide, Schedule};
pub use economy::{stable_outcome_map, Economy, EconomyState, OutcomeMap, StateSpec};
pub use error::{Error, Result};
pub use market::{AgentId, FirmId, Market, Preferences, Side, UtilityMatrix, WorkerId};
pub use matching::Matching;
