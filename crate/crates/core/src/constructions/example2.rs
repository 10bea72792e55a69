//! A cycle-free n x n market augmented with one firm `f` and one worker `w`,
//! where two drops by `w` and `w_n` shift most original workers up their
//! lists.

use crate::constructions::{
    int_above, outcome_of, profile_of, ConstructionBundle, Constraint, Layout, NamedProfile, RankSpec,
};
use crate::economy::default_firm_names;
use crate::economy::default_worker_names;
use crate::error::{Error, Result};
use crate::game::StrategyProfile;
use crate::market::{FirmId, Market, UtilityMatrix, WorkerId};
use crate::Rational;

/// Base lists: `f_i: w_i, ..., w_n, w_{i-1}, ..., w_1` and
/// `w_i: f_{i-1}, ..., f_1, f_i, ..., f_n` (0-based indices).
pub fn base_lists(n: usize) -> (Vec<Vec<usize>>, Vec<Vec<usize>>) {
    let firms = (0..n).map(|a| (a..n).chain((0..a).rev()).collect()).collect();
    let workers = (0..n).map(|b| (0..b).rev().chain(b..n).collect()).collect();
    (firms, workers)
}

/// The base market with utilities `n - position` on both sides.
pub fn base_market(n: usize) -> Result<Market> {
    let (firms, workers) = base_lists(n);
    let mut fu = UtilityMatrix::filled(n, n, Rational::from_integer(0));
    let mut wu = fu.clone();
    for (i, list) in firms.iter().enumerate() {
        for (pos, &j) in list.iter().enumerate() {
            fu.set(FirmId(i), WorkerId(j), Rational::from_integer((n - pos) as i64));
        }
    }
    for (j, list) in workers.iter().enumerate() {
        for (pos, &i) in list.iter().enumerate() {
            wu.set(FirmId(i), WorkerId(j), Rational::from_integer((n - pos) as i64));
        }
    }
    Market::new(fu, wu)
}

pub fn example2(n: usize) -> Result<ConstructionBundle> {
    example2_with_belief(n, Rational::new(1, 2))
}

pub fn example2_with_belief(n: usize, p1: Rational) -> Result<ConstructionBundle> {
    if n < 3 {
        return Err(Error::InvalidArgument(format!("example2 needs n >= 3, got {n}")));
    }
    let p2 = Rational::from_integer(1) - p1;
    let (base_f, base_w) = base_lists(n);
    let (f, w) = (n, n);
    let (fn1, fnn) = (n - 2, n - 1);

    let firm_lists = (0..2)
        .map(|state| {
            let mut lists: Vec<Vec<usize>> = base_f
                .iter()
                .enumerate()
                .map(|(a, l)| {
                    let mut l = l.clone();
                    if a != fn1 {
                        l.push(w);
                    }
                    l
                })
                .collect();
            // f_{n-1}: w_{n-1}, w_n, w_{n-2}, ...; w goes after w_{n-1}
            // in state 1 and after w_n in state 2.
            lists[fn1].insert(state + 1, w);
            lists.push([w, n - 1, 0].into_iter().chain(1..n - 1).collect());
            lists
        })
        .collect();
    let mut worker_lists: Vec<Vec<usize>> = base_w
        .iter()
        .enumerate()
        .map(|(b, l)| {
            let mut l = l.clone();
            let at = l.iter().position(|&i| i == b).expect("own firm listed");
            l.insert(at, f);
            l
        })
        .collect();
    worker_lists.push([fn1, f, fnn].into_iter().chain(0..n - 2).collect());

    let mut firm_names = default_firm_names(n);
    firm_names.push("f".into());
    let mut worker_names = default_worker_names(n);
    worker_names.push("w".into());
    let layout = Layout {
        firm_names,
        worker_names,
        firm_lists,
        worker_lists,
        firm_base: base_f.into_iter().map(Some).chain([None]).collect(),
        worker_base: base_w.into_iter().map(Some).chain([None]).collect(),
    };
    let (firm_mats, mut wu) = layout.utilities()?;
    let u = |wu: &UtilityMatrix, firm: usize, worker: usize| wu.get(FirmId(firm), WorkerId(worker));

    // w's utility from f_{n-1} high enough.
    let need = (u(&wu, f, w) - p2 * u(&wu, fnn, w)) / p1;
    let high = int_above(need).max(Rational::from_integer(10 * (n as i64 + 1)));
    wu.set(FirmId(fn1), WorkerId(w), high);
    // w_n's utility from f close enough to its utility from f_n.
    let wn = n - 1;
    let delta = Rational::new(1, 2).min(p2 * (u(&wu, fn1, wn) - u(&wu, fnn, wn)) / 2);
    wu.set(FirmId(f), WorkerId(wn), u(&wu, fnn, wn) + delta);

    let constraints = vec![
        Constraint {
            description: "w: p1*u(f_{n-1}) + p2*u(f_n) > u(f)".into(),
            lhs: p1 * u(&wu, fn1, w) + p2 * u(&wu, fnn, w),
            rhs: u(&wu, f, w),
        },
        Constraint {
            description: "w_n: p1*u(f_n) + p2*u(f_{n-1}) > u(f)".into(),
            lhs: p1 * u(&wu, fnn, wn) + p2 * u(&wu, fn1, wn),
            rhs: u(&wu, f, wn),
        },
    ];
    let economy = layout.economy(firm_mats, wu, p1)?;

    let truthful = StrategyProfile::truthful(&economy);
    let mut candidate: Vec<Vec<usize>> = truthful.reports().iter().map(|r| r.iter().map(|f| f.0).collect()).collect();
    candidate[w].retain(|&x| x != f);
    candidate[wn].retain(|&x| x != f);
    let candidate = profile_of(&economy, candidate)?;

    let stable = outcome_of(n + 1, vec![(0..=n).map(Some).collect(); 2])?;
    let lambda = outcome_of(
        n + 1,
        (0..2)
            .map(|state| {
                let mut p: Vec<Option<usize>> = (0..=n).map(|b| b.checked_sub(1)).collect();
                p[0] = Some(f);
                let (to_w, to_wn) = if state == 0 { (fn1, fnn) } else { (fnn, fn1) };
                p[w] = Some(to_w);
                p[wn] = Some(to_wn);
                p
            })
            .collect(),
    )?;

    ConstructionBundle {
        name: format!("example2(n={n})"),
        economy,
        stable: stable.clone(),
        profiles: vec![
            NamedProfile {
                name: "truthful".into(),
                profile: truthful,
                expected: stable,
            },
            NamedProfile {
                name: "candidate".into(),
                profile: candidate,
                expected: lambda,
            },
        ],
        constraints,
        original: Some(base_market(n)?),
        added_firms: vec![FirmId(f)],
        added_workers: vec![WorkerId(w)],
        rank_spec: Some(RankSpec {
            profile: "candidate".into(),
            workers: (0..n).map(WorkerId).collect(),
            firm_subset: None,
        }),
    }
    .verified()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::conditions::{find_preference_cycles, validate_augmented};
    use crate::game::{is_bne, unique_stable_for_reported, StrategyClass};

    #[test]
    fn base_market_has_no_cycles_and_diagonal_stable() {
        for n in [3, 4, 6] {
            let market = base_market(n).unwrap();
            assert!(find_preference_cycles(market.preferences(), None).is_empty());
            let stable = crate::da::deferred_acceptance(market.preferences(), crate::da::ProposingSide::Firms);
            assert!((0..n).all(|i| stable.contains(FirmId(i), WorkerId(i))));
        }
    }

    #[test]
    fn rejects_small_n() {
        assert!(matches!(example2(2), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn candidate_is_equilibrium_for_small_n() {
        for n in 3..=6 {
            let bundle = example2(n).unwrap();
            let candidate = &bundle.profile("candidate").unwrap().profile;
            let verdict = is_bne(&bundle.economy, candidate, StrategyClass::Full);
            assert!(verdict.is_bne, "n={n}: {:?}", verdict.witness);
            assert!(verdict.undominated.iter().all(|&u| u));
            assert_eq!(unique_stable_for_reported(&bundle.economy, candidate), vec![true, true]);
            let report = validate_augmented(
                bundle.original.as_ref().unwrap(),
                &bundle.economy,
                &bundle.added_firms,
                &bundle.added_workers,
            )
            .unwrap();
            assert!(report.is_valid(), "{:?}", report.failures);
        }
    }

    #[test]
    fn rank_improvement_is_half_of_n_minus_one_in_state_one() {
        for n in [6, 10] {
            let stats = example2(n).unwrap().rank_improvements().unwrap().unwrap();
            assert_eq!(stats.average[0], Rational::new(n as i64 - 1, 2));
            assert_eq!(stats.average[1], Rational::new(n as i64 + 1, 2));
        }
    }

    #[test]
    fn asymmetric_beliefs_still_verify() {
        for p in [Rational::new(1, 10), Rational::new(9, 10)] {
            let bundle = example2_with_belief(5, p).unwrap();
            let candidate = &bundle.profile("candidate").unwrap().profile;
            assert!(is_bne(&bundle.economy, candidate, StrategyClass::Full).is_bne);
        }
    }
}
