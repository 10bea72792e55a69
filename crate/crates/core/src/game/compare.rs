//! Diagnostics on outcomes: reported-preference uniqueness, top-top
//! coverage, welfare comparisons and rank statistics.

use std::collections::BTreeSet;
use std::fmt;

use crate::conditions::spc::top_top_pairs;
use crate::economy::{Economy, OutcomeMap};
use crate::error::{Error, Result};
use crate::game::engine::{outcome_utility, reported_preferences};
use crate::game::reports::StrategyProfile;
use crate::market::{AgentId, FirmId, WorkerId};
use crate::matching::matched_set;
use crate::stability::is_unique_stable;
use crate::Rational;

/// Per state: whether firms' true lists plus the reports admit a unique
/// stable matching.
pub fn unique_stable_for_reported(economy: &Economy, profile: &StrategyProfile) -> Vec<bool> {
    (0..economy.num_states())
        .map(|t| is_unique_stable(&reported_preferences(economy, t, profile)))
        .collect()
}

/// Every top-top pair of each state's full market is matched in `outcome`.
pub fn verify_top_top_matched(economy: &Economy, outcome: &OutcomeMap) -> bool {
    (0..economy.num_states()).all(|t| {
        top_top_pairs(economy.preferences(t))
            .into_iter()
            .all(|(f, w)| outcome.state(t).contains(f, w))
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Verdict {
    PrefersA,
    PrefersB,
    Indifferent,
    /// A firm strictly prefers `a` in some state and `b` in another.
    Mixed,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::PrefersA => "prefers_a",
            Verdict::PrefersB => "prefers_b",
            Verdict::Indifferent => "indifferent",
            Verdict::Mixed => "mixed",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OutcomeComparison {
    pub firms: Vec<Verdict>,
    pub workers: Vec<Verdict>,
}

impl OutcomeComparison {
    pub fn agents_with(&self, verdict: Verdict) -> Vec<AgentId> {
        let firms = self
            .firms
            .iter()
            .enumerate()
            .filter(|&(_, v)| *v == verdict)
            .map(|(i, _)| AgentId::Firm(FirmId(i)));
        let workers = self
            .workers
            .iter()
            .enumerate()
            .filter(|&(_, v)| *v == verdict)
            .map(|(j, _)| AgentId::Worker(WorkerId(j)));
        firms.chain(workers).collect()
    }
}

fn verdict(ord: std::cmp::Ordering) -> Verdict {
    match ord {
        std::cmp::Ordering::Greater => Verdict::PrefersA,
        std::cmp::Ordering::Less => Verdict::PrefersB,
        std::cmp::Ordering::Equal => Verdict::Indifferent,
    }
}

/// Workers compare expected utility. Firms know the state, so they compare
/// true utility state by state.
pub fn compare_outcomes(economy: &Economy, a: &OutcomeMap, b: &OutcomeMap) -> OutcomeComparison {
    let workers = (0..economy.num_workers())
        .map(|j| {
            let w = WorkerId(j);
            verdict(outcome_utility(economy, a, w).cmp(&outcome_utility(economy, b, w)))
        })
        .collect();
    let zero = Rational::from_integer(0);
    let firms = (0..economy.num_firms())
        .map(|i| {
            let f = FirmId(i);
            let (mut better, mut worse) = (false, false);
            for t in 0..economy.num_states() {
                let u = |o: &OutcomeMap| {
                    o.state(t)
                        .firm_partner(f)
                        .map_or(zero, |w| economy.firm_utility(t, f, w))
                };
                match u(a).cmp(&u(b)) {
                    std::cmp::Ordering::Greater => better = true,
                    std::cmp::Ordering::Less => worse = true,
                    std::cmp::Ordering::Equal => {}
                }
            }
            match (better, worse) {
                (true, true) => Verdict::Mixed,
                (true, false) => Verdict::PrefersA,
                (false, true) => Verdict::PrefersB,
                (false, false) => Verdict::Indifferent,
            }
        })
        .collect();
    OutcomeComparison { firms, workers }
}

/// Agents matched under exactly one of the two outcomes, per state.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatchedSetDiff {
    pub only_in_a: Vec<BTreeSet<AgentId>>,
    pub only_in_b: Vec<BTreeSet<AgentId>>,
}

pub fn matched_set_diff(a: &OutcomeMap, b: &OutcomeMap) -> MatchedSetDiff {
    let mut only_in_a = Vec::new();
    let mut only_in_b = Vec::new();
    for (ma, mb) in a.matchings().iter().zip(b.matchings()) {
        let (sa, sb) = (matched_set(ma), matched_set(mb));
        only_in_a.push(sa.difference(&sb).copied().collect());
        only_in_b.push(sb.difference(&sa).copied().collect());
    }
    MatchedSetDiff { only_in_a, only_in_b }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankStats {
    /// Per state, per requested worker: rank of the base partner minus rank
    /// of the alternative partner (positive = better under the alternative).
    pub differences: Vec<Vec<(WorkerId, i64)>>,
    /// Per state, the mean of `differences`.
    pub average: Vec<Rational>,
}

/// Rank differences on workers' true lists. When `firm_subset` is given,
/// ranks are positions on the list restricted to those firms. Unmatched
/// ranks as list length plus one.
pub fn rank_stats(
    economy: &Economy,
    base: &OutcomeMap,
    alt: &OutcomeMap,
    workers: &[WorkerId],
    firm_subset: Option<&[FirmId]>,
) -> Result<RankStats> {
    if workers.is_empty() {
        return Err(Error::InvalidArgument("rank statistics need at least one worker".into()));
    }
    let rank = |w: WorkerId, partner: Option<FirmId>| -> Result<i64> {
        let list: Vec<FirmId> = economy
            .worker_true_list(w)
            .iter()
            .copied()
            .filter(|f| firm_subset.is_none_or(|s| s.contains(f)))
            .collect();
        match partner {
            None => Ok(list.len() as i64 + 1),
            Some(f) => list
                .iter()
                .position(|&g| g == f)
                .map(|p| p as i64 + 1)
                .ok_or(Error::NotListed {
                    agent: w.into(),
                    partner: f.into(),
                }),
        }
    };
    let mut differences = Vec::new();
    let mut average = Vec::new();
    for t in 0..economy.num_states() {
        let mut row = Vec::with_capacity(workers.len());
        for &w in workers {
            let d = rank(w, base.state(t).worker_partner(w))? - rank(w, alt.state(t).worker_partner(w))?;
            row.push((w, d));
        }
        let sum: i64 = row.iter().map(|&(_, d)| d).sum();
        average.push(Rational::new(sum, row.len() as i64));
        differences.push(row);
    }
    Ok(RankStats { differences, average })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::motivating::motivating_economy;
    use crate::game::engine::play;

    fn report(ids: &[usize]) -> Vec<FirmId> {
        ids.iter().map(|&i| FirmId(i - 1)).collect()
    }

    fn profile(economy: &Economy, lists: [&[usize]; 3]) -> StrategyProfile {
        StrategyProfile::for_economy(economy, lists.iter().map(|l| report(l)).collect()).unwrap()
    }

    #[test]
    fn lambda2_versus_lambda1() {
        let economy = motivating_economy(Rational::new(1, 2));
        let l1 = play(&economy, &profile(&economy, [&[2, 3], &[1, 2, 3], &[2, 3]]));
        let l2 = play(&economy, &profile(&economy, [&[2, 3], &[1, 3, 2], &[2, 1, 3]]));
        let cmp = compare_outcomes(&economy, &l2, &l1);
        assert_eq!(cmp.firms[0], Verdict::PrefersA);
        assert_eq!(cmp.workers[2], Verdict::PrefersA);
        assert_eq!(cmp.firms[2], Verdict::PrefersB);
        assert_eq!(cmp.workers[1], Verdict::PrefersB);

        let mu = play(&economy, &StrategyProfile::truthful(&economy));
        let cmp = compare_outcomes(&economy, &l1, &mu);
        assert!(cmp.workers.iter().all(|&v| v == Verdict::PrefersA));
        let same = compare_outcomes(&economy, &l1, &l1);
        assert!(same.firms.iter().chain(&same.workers).all(|&v| v == Verdict::Indifferent));
    }

    #[test]
    fn lambda3_leaves_w3_and_f3_unmatched_in_state_one() {
        let economy = motivating_economy(Rational::new(1, 2));
        let l3 = play(&economy, &profile(&economy, [&[2, 3, 1], &[1, 2, 3], &[2]]));
        let mu = play(&economy, &StrategyProfile::truthful(&economy));
        let diff = matched_set_diff(&mu, &l3);
        let expected: BTreeSet<AgentId> = [AgentId::Firm(FirmId(2)), AgentId::Worker(WorkerId(2))].into();
        assert_eq!(diff.only_in_a[0], expected);
        assert!(diff.only_in_a[1].is_empty());
        assert!(diff.only_in_b.iter().all(BTreeSet::is_empty));
    }

    #[test]
    fn identical_outcomes_have_zero_rank_difference() {
        let economy = motivating_economy(Rational::new(1, 2));
        let mu = play(&economy, &StrategyProfile::truthful(&economy));
        let stats = rank_stats(&economy, &mu, &mu, &[WorkerId(0), WorkerId(1), WorkerId(2)], None).unwrap();
        assert!(stats.average.iter().all(|a| *a == Rational::from_integer(0)));
    }

    #[test]
    fn top_top_coverage_detects_unmatched_pair() {
        // Single state where (f1,w2) is top-top; the diagonal misses it.
        let market = crate::market::Market::from_ints(&[[1, 2], [2, 1]], &[[1, 2], [2, 1]]).unwrap();
        let economy = Economy::single(&market);
        let diagonal = OutcomeMap::new(vec![crate::matching::Matching::from_pairs(
            2,
            2,
            [(FirmId(0), WorkerId(0)), (FirmId(1), WorkerId(1))],
        )
        .unwrap()]);
        assert!(!verify_top_top_matched(&economy, &diagonal));
        let stable = play(&economy, &StrategyProfile::truthful(&economy));
        assert!(verify_top_top_matched(&economy, &stable));
    }
}
