//! Playing a profile: per-state firm-proposing DA with truthful firms.

use num_integer::Integer;

use crate::da::{propose, ProposingSide, Schedule};
use crate::economy::{Economy, OutcomeMap};
use crate::game::reports::StrategyProfile;
use crate::market::{FirmId, Preferences, WorkerId, UNRANKED};
use crate::matching::Matching;
use crate::Rational;

pub(crate) fn rank_row(num_firms: usize, report: &[FirmId]) -> Vec<u32> {
    let mut row = vec![UNRANKED; num_firms];
    for (pos, f) in report.iter().enumerate() {
        row[f.0] = pos as u32;
    }
    row
}

/// Worker partners in one state when workers' rank rows are `rows`.
pub(crate) fn firm_proposing_partners<R: AsRef<[u32]>>(
    economy: &Economy,
    state: usize,
    rows: &[R],
) -> Vec<Option<usize>> {
    propose(economy.preferences(state).firm_lists(), rows, Schedule::Rounds, |_, _| {})
}

pub fn play(economy: &Economy, profile: &StrategyProfile) -> OutcomeMap {
    play_with(economy, profile, ProposingSide::Firms)
}

/// Play with either DA direction; workers' submitted lists replace their
/// true lists and firms report truthfully in each state.
pub fn play_with(economy: &Economy, profile: &StrategyProfile, side: ProposingSide) -> OutcomeMap {
    let m = economy.num_firms();
    let matchings = match side {
        ProposingSide::Firms => {
            let rows: Vec<Vec<u32>> = profile.reports().iter().map(|r| rank_row(m, r)).collect();
            (0..economy.num_states())
                .map(|t| {
                    let held = firm_proposing_partners(economy, t, &rows);
                    let partners: Vec<Option<FirmId>> = held.into_iter().map(|f| f.map(FirmId)).collect();
                    Matching::from_worker_partners(m, &partners).expect("DA output is a matching")
                })
                .collect()
        }
        ProposingSide::Workers => (0..economy.num_states())
            .map(|t| {
                let prefs = reported_preferences(economy, t, profile);
                crate::da::deferred_acceptance(&prefs, ProposingSide::Workers)
            })
            .collect(),
    };
    OutcomeMap::new(matchings)
}

/// State `state`'s true firm lists combined with the workers' reports.
pub fn reported_preferences(economy: &Economy, state: usize, profile: &StrategyProfile) -> Preferences {
    let prefs = economy.preferences(state);
    Preferences::new(
        economy.num_firms(),
        economy.num_workers(),
        prefs.firm_lists().to_vec(),
        profile.reports().to_vec(),
    )
    .expect("validated profile over a validated economy")
}

/// Expected true utility of `worker` under `outcome`; unmatched is worth 0.
pub fn outcome_utility(economy: &Economy, outcome: &OutcomeMap, worker: WorkerId) -> Rational {
    economy
        .states()
        .iter()
        .enumerate()
        .map(|(t, s)| match outcome.state(t).worker_partner(worker) {
            Some(f) => s.probability() * economy.worker_utility(f, worker),
            None => Rational::from_integer(0),
        })
        .sum()
}

pub fn expected_utility(economy: &Economy, profile: &StrategyProfile, worker: WorkerId) -> Rational {
    outcome_utility(economy, &play(economy, profile), worker)
}

pub fn expected_utilities(economy: &Economy, outcome: &OutcomeMap) -> Vec<Rational> {
    (0..economy.num_workers())
        .map(|j| outcome_utility(economy, outcome, WorkerId(j)))
        .collect()
}

/// Integer image of worker expected utilities: every probability and
/// utility is multiplied by the lcm of the denominators, which preserves
/// every comparison exactly.
#[derive(Debug, Clone)]
pub(crate) struct ScaledUtilities {
    prob: Vec<i128>,
    /// `util[j][f]`, worker-major for locality.
    util: Vec<Vec<i128>>,
}

impl ScaledUtilities {
    pub(crate) fn new(economy: &Economy) -> Self {
        let lp = economy
            .states()
            .iter()
            .fold(1i64, |acc, s| acc.lcm(s.probability().denom()));
        let (m, n) = (economy.num_firms(), economy.num_workers());
        let mut lu = 1i64;
        for i in 0..m {
            for j in 0..n {
                lu = lu.lcm(economy.worker_utility(FirmId(i), WorkerId(j)).denom());
            }
        }
        let prob = economy
            .states()
            .iter()
            .map(|s| (s.probability() * lp).to_integer() as i128)
            .collect();
        let util = (0..n)
            .map(|j| {
                (0..m)
                    .map(|i| (economy.worker_utility(FirmId(i), WorkerId(j)) * lu).to_integer() as i128)
                    .collect()
            })
            .collect();
        ScaledUtilities { prob, util }
    }

    #[inline]
    pub(crate) fn term(&self, state: usize, worker: usize, partner: Option<usize>) -> i128 {
        match partner {
            Some(f) => self.prob[state] * self.util[worker][f],
            None => 0,
        }
    }
}
