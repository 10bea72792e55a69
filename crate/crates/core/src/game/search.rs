//! Best responses of one worker with everyone else's report fixed.
//!
//! [`best_responses`] enumerates the whole class. [`best_response`] uses a
//! reduction: let `P(t)` be the firms that propose to worker `j` in state
//! `t` when `j` submits the empty list. The empty list is a truncation of
//! every report, and truncating a receiving worker's list weakly hurts every
//! firm, so under any report `Q` the firms proposing to `j` are a subset of
//! `P(t)`. Hence the state-`t` outcome under `Q` equals the outcome under `Q`
//! restricted to `P(t)`, and it suffices to search reports over the union
//! of the `P(t)`.

use crate::da::{propose, Schedule};
use crate::economy::Economy;
use crate::game::engine::{expected_utility, firm_proposing_partners, rank_row};
use crate::game::reports::{enumerate_reports, ordered_subsets, subsequences, Report, StrategyClass, StrategyProfile};
use crate::market::{FirmId, WorkerId, UNRANKED};
use crate::Rational;

/// Maximum expected utility over `class` and every report attaining it, in
/// enumeration order.
pub fn best_responses(
    economy: &Economy,
    profile: &StrategyProfile,
    worker: WorkerId,
    class: StrategyClass,
) -> (Rational, Vec<Report>) {
    let truth = economy.worker_true_list(worker);
    let mut best: Option<Rational> = None;
    let mut argmax = Vec::new();
    for report in enumerate_reports(truth, economy.num_firms(), class) {
        let eu = expected_utility(economy, &profile.with_report(worker, report.clone()), worker);
        match best {
            Some(b) if eu < b => {}
            Some(b) if eu == b => argmax.push(report),
            _ => {
                best = Some(eu);
                argmax = vec![report];
            }
        }
    }
    (best.expect("every class contains a report"), argmax)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BestResponse {
    pub value: Rational,
    /// A maximizing report, restricted to firms that can ever propose.
    pub report: Report,
}

/// Firms proposing to `worker` in each state when it submits the empty list.
pub fn potential_proposers(economy: &Economy, profile: &StrategyProfile, worker: WorkerId) -> Vec<Vec<FirmId>> {
    let m = economy.num_firms();
    let mut rows: Vec<Vec<u32>> = profile.reports().iter().map(|r| rank_row(m, r)).collect();
    rows[worker.0] = vec![UNRANKED; m];
    (0..economy.num_states())
        .map(|t| {
            let mut seen = vec![false; m];
            propose(economy.preferences(t).firm_lists(), &rows, Schedule::Rounds, |f, w| {
                if w == worker.0 {
                    seen[f] = true;
                }
            });
            (0..m).filter(|&f| seen[f]).map(FirmId).collect()
        })
        .collect()
}

/// Maximum expected utility over `class` via the proposer-set reduction.
/// Ties are broken by the first maximizer in the reduced enumeration order.
pub fn best_response(
    economy: &Economy,
    profile: &StrategyProfile,
    worker: WorkerId,
    class: StrategyClass,
) -> BestResponse {
    let m = economy.num_firms();
    let truth = economy.worker_true_list(worker);
    let proposers = potential_proposers(economy, profile, worker);
    let mut union: Vec<FirmId> = proposers.iter().flatten().copied().collect();
    union.sort();
    union.dedup();

    let candidates: Vec<Report> = match class {
        StrategyClass::Truthful | StrategyClass::Truncation => enumerate_reports(truth, m, class),
        StrategyClass::Dropping => {
            let kept: Vec<FirmId> = truth.iter().copied().filter(|f| union.contains(f)).collect();
            subsequences(&kept)
        }
        StrategyClass::Full => ordered_subsets(&union),
    };

    let mut rows: Vec<Vec<u32>> = profile.reports().iter().map(|r| rank_row(m, r)).collect();
    let mut best: Option<BestResponse> = None;
    for report in candidates {
        rows[worker.0] = rank_row(m, &report);
        let value: Rational = economy
            .states()
            .iter()
            .enumerate()
            .map(|(t, s)| match firm_proposing_partners(economy, t, &rows)[worker.0] {
                Some(f) => s.probability() * economy.worker_utility(FirmId(f), worker),
                None => Rational::from_integer(0),
            })
            .sum();
        if best.as_ref().is_none_or(|b| value > b.value) {
            best = Some(BestResponse { value, report });
        }
    }
    best.expect("every class contains a report")
}
