//! Validation of an economy as an augmentation of a complete-information
//! market by added firms and workers.

use crate::economy::Economy;
use crate::error::{Error, Result};
use crate::market::{FirmId, Market, WorkerId};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AugmentationReport {
    /// Per state: utilities restricted to the original agents equal the
    /// original market's, on both sides.
    pub restriction_matches: Vec<bool>,
    /// Added workers' utilities do not depend on the state.
    pub added_workers_state_independent: bool,
    /// At least two states, each with probability strictly between 0 and 1.
    pub belief_nondegenerate: bool,
    /// Per state: the market has a unique stable matching.
    pub unique_stable: Vec<bool>,
    /// Human-readable descriptions of every failing clause.
    pub failures: Vec<String>,
}

impl AugmentationReport {
    pub fn is_valid(&self) -> bool {
        self.failures.is_empty()
    }
}

fn complement<T: Copy + PartialEq>(all: impl Iterator<Item = T>, added: &[T]) -> Vec<T> {
    all.filter(|a| !added.contains(a)).collect()
}

/// Original agents are the economy's agents not listed as added, taken in
/// index order and identified with the original market's agents in order.
pub fn validate_augmented(
    original: &Market,
    economy: &Economy,
    added_firms: &[FirmId],
    added_workers: &[WorkerId],
) -> Result<AugmentationReport> {
    if added_firms.iter().any(|f| f.0 >= economy.num_firms())
        || added_workers.iter().any(|w| w.0 >= economy.num_workers())
    {
        return Err(Error::InvalidArgument("added agent out of range".into()));
    }
    let firms = complement((0..economy.num_firms()).map(FirmId), added_firms);
    let workers = complement((0..economy.num_workers()).map(WorkerId), added_workers);
    if firms.len() != original.num_firms() || workers.len() != original.num_workers() {
        return Err(Error::Dimension(format!(
            "{} original firms and {} original workers remain, but the original market is {}x{}",
            firms.len(),
            workers.len(),
            original.num_firms(),
            original.num_workers()
        )));
    }

    let mut failures = Vec::new();
    let worker_restriction = economy.worker_utils().restrict(&firms, &workers);
    let restriction_matches: Vec<bool> = economy
        .states()
        .iter()
        .map(|s| {
            let ok = s.market().firm_utils().restrict(&firms, &workers) == *original.firm_utils()
                && worker_restriction == *original.worker_utils();
            if !ok {
                failures.push(format!(
                    "state {}: utilities among original agents differ from the original market",
                    s.id()
                ));
            }
            ok
        })
        .collect();

    // Worker utilities are shared by construction; re-check what each state
    // actually induces for the added workers.
    let added_workers_state_independent = added_workers.iter().all(|&w| {
        economy
            .states()
            .windows(2)
            .all(|p| p[0].market().worker_utils() == p[1].market().worker_utils())
            && economy
                .states()
                .iter()
                .all(|s| s.preferences().worker_list(w) == economy.worker_true_list(w))
    });
    if !added_workers_state_independent {
        failures.push("added workers' utilities vary across states".into());
    }

    let belief_nondegenerate = economy.num_states() >= 2
        && economy.states().iter().all(|s| {
            let p = s.probability();
            p > crate::Rational::from_integer(0) && p < crate::Rational::from_integer(1)
        });
    if !belief_nondegenerate {
        failures.push("belief is degenerate: need at least two states of positive probability".into());
    }

    let unique_stable = economy.unique_stable_by_state();
    for (s, &ok) in economy.states().iter().zip(&unique_stable) {
        if !ok {
            failures.push(format!("state {}: no unique stable matching", s.id()));
        }
    }

    Ok(AugmentationReport {
        restriction_matches,
        added_workers_state_independent,
        belief_nondegenerate,
        unique_stable,
        failures,
    })
}
