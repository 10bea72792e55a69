//! Weak dominance among worker reports.

use crate::economy::Economy;
use crate::error::{Error, Result};
use crate::game::engine::expected_utility;
use crate::game::reports::{enumerate_reports, Report, StrategyClass, StrategyProfile};
use crate::market::{FirmId, WorkerId};
use crate::Rational;

/// Size bound for [`is_dominated_exact`].
pub const DOMINANCE_BOUND: usize = 3;

/// Sufficient criterion: the report lists the true top firm first. A worker
/// with no acceptable firm is undominated only by the empty report.
pub fn is_weakly_undominated(report: &[FirmId], true_list: &[FirmId]) -> bool {
    match true_list.first() {
        Some(top) => report.first() == Some(top),
        None => report.is_empty(),
    }
}

/// Exact check: some report (from the full class) does at least as well as
/// `report` against every profile of the other workers drawn from `class`,
/// and strictly better against at least one.
pub fn is_dominated_exact(
    economy: &Economy,
    worker: WorkerId,
    report: &[FirmId],
    class: StrategyClass,
) -> Result<bool> {
    let (m, n) = (economy.num_firms(), economy.num_workers());
    if m > DOMINANCE_BOUND || n > DOMINANCE_BOUND {
        return Err(Error::SizeBound {
            what: format!("exact dominance in a {m}x{n} economy"),
            bound: DOMINANCE_BOUND,
        });
    }
    let alternatives = enumerate_reports(&[], m, StrategyClass::Full);
    let others: Vec<Vec<Report>> = (0..n)
        .map(|j| {
            if j == worker.0 {
                vec![report.to_vec()]
            } else {
                enumerate_reports(economy.worker_true_list(WorkerId(j)), m, class)
            }
        })
        .collect();

    // weakly[a] / strictly[a]: alternative a is weakly better everywhere /
    // strictly better somewhere so far.
    let mut weakly = vec![true; alternatives.len()];
    let mut strictly = vec![false; alternatives.len()];
    let mut idx = vec![0usize; n];
    loop {
        let reports: Vec<Report> = idx.iter().zip(&others).map(|(&i, r)| r[i].clone()).collect();
        let profile = StrategyProfile::new(m, reports)?;
        let own: Rational = expected_utility(economy, &profile, worker);
        for (a, alt) in alternatives.iter().enumerate() {
            if !weakly[a] {
                continue;
            }
            let eu = expected_utility(economy, &profile.with_report(worker, alt.clone()), worker);
            if eu < own {
                weakly[a] = false;
            } else if eu > own {
                strictly[a] = true;
            }
        }
        let mut j = 0;
        loop {
            if j == n {
                return Ok(weakly.iter().zip(&strictly).any(|(&w, &s)| w && s));
            }
            idx[j] += 1;
            if idx[j] < others[j].len() {
                break;
            }
            idx[j] = 0;
            j += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::motivating::motivating_economy;

    fn report(ids: &[usize]) -> Report {
        ids.iter().map(|&i| FirmId(i - 1)).collect()
    }

    #[test]
    fn top_first_criterion() {
        let truth = report(&[2, 1, 3]);
        assert!(is_weakly_undominated(&report(&[2, 3]), &truth));
        assert!(is_weakly_undominated(&report(&[2]), &truth));
        assert!(!is_weakly_undominated(&report(&[1, 2, 3]), &truth));
        assert!(!is_weakly_undominated(&[], &truth));
        assert!(is_weakly_undominated(&[], &[]));
    }

    #[test]
    fn exact_sweep_on_motivating_economy() {
        let economy = motivating_economy(Rational::new(1, 2));
        let w1 = WorkerId(0);
        assert!(is_dominated_exact(&economy, w1, &report(&[1, 2, 3]), StrategyClass::Full).unwrap());
        assert!(!is_dominated_exact(&economy, w1, &report(&[2, 1, 3]), StrategyClass::Full).unwrap());
        // Appending f3, which ranks w1 last in both states, never hurts and
        // sometimes helps, so the top-only report is dominated here.
        assert!(is_dominated_exact(&economy, w1, &report(&[2]), StrategyClass::Full).unwrap());
        assert!(!is_dominated_exact(&economy, w1, &report(&[2, 3]), StrategyClass::Full).unwrap());
    }

    #[test]
    fn named_dominating_report_is_weakly_better_everywhere() {
        let economy = motivating_economy(Rational::new(1, 2));
        let w1 = WorkerId(0);
        let others = enumerate_reports(&[], 3, StrategyClass::Full);
        let mut strict = false;
        for a in &others {
            for b in &others {
                let base = StrategyProfile::new(3, vec![report(&[1, 2, 3]), a.clone(), b.clone()]).unwrap();
                let dominated = expected_utility(&economy, &base, w1);
                let better = expected_utility(&economy, &base.with_report(w1, report(&[2, 1, 3])), w1);
                assert!(better >= dominated);
                strict |= better > dominated;
            }
        }
        assert!(strict);
    }
}
