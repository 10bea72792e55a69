//! An assortative n x n market augmented with k firms `F_i` and k workers
//! `W_i` so that, in an undominated equilibrium, n-k-1 original workers each
//! move up k places among the original firms.

use crate::constructions::{
    int_above, outcome_of, profile_of, ConstructionBundle, Constraint, Layout, NamedProfile, RankSpec,
};
use crate::economy::{default_firm_names, default_worker_names};
use crate::error::{Error, Result};
use crate::game::StrategyProfile;
use crate::market::{FirmId, Market, UtilityMatrix, WorkerId};
use crate::Rational;

/// The assortative market: every firm ranks `w_1, ..., w_n`, every worker
/// ranks `f_1, ..., f_n`.
pub fn assortative_market(n: usize) -> Result<Market> {
    let rows: Vec<Vec<i64>> = (0..n).map(|_| (0..n).map(|j| (n - j) as i64).collect()).collect();
    let worker_rows: Vec<Vec<i64>> = (0..n).map(|i| vec![(n - i) as i64; n]).collect();
    Market::new(UtilityMatrix::from_rows(to_rat(&rows))?, UtilityMatrix::from_rows(to_rat(&worker_rows))?)
}

fn to_rat(rows: &[Vec<i64>]) -> Vec<Vec<Rational>> {
    rows.iter()
        .map(|r| r.iter().map(|&v| Rational::from_integer(v)).collect())
        .collect()
}

pub fn prop4(n: usize, k: usize) -> Result<ConstructionBundle> {
    prop4_with_belief(n, k, Rational::new(1, 2))
}

pub fn prop4_with_belief(n: usize, k: usize, p1: Rational) -> Result<ConstructionBundle> {
    if k < 1 || k + 2 > n {
        return Err(Error::InvalidArgument(format!("prop4 needs 1 <= k <= n-2, got n={n}, k={k}")));
    }
    let p2 = Rational::from_integer(1) - p1;
    let total = n + k;
    // 1-based helpers onto 0-based indices.
    let o = |i: usize| i - 1;
    let a = |i: usize| n + i - 1;
    let with_rest = |head: Vec<usize>| -> Vec<usize> {
        let mut l = head.clone();
        l.extend((0..total).filter(|x| !head.contains(x)));
        l
    };
    let base: Vec<usize> = (0..n).collect();

    let firm_lists: Vec<Vec<Vec<usize>>> = (0..2)
        .map(|state| {
            let mut lists = Vec::with_capacity(total);
            for i in 1..=n {
                let mut l: Vec<usize> = (1..n).map(o).collect();
                let tail: Vec<usize> = if i == n - 1 && state == 0 {
                    [a(1), o(n)].into_iter().chain((2..=k).map(a)).collect()
                } else if i + k >= n && i + 2 <= n {
                    let own = a(n - i);
                    [own, o(n)]
                        .into_iter()
                        .chain((1..=k).map(a).filter(|&x| x != own))
                        .collect()
                } else {
                    [o(n)].into_iter().chain((1..=k).map(a)).collect()
                };
                l.extend(tail);
                lists.push(l);
            }
            lists.push(with_rest(vec![a(1), o(n), o(1)]));
            for i in 2..=k {
                lists.push(with_rest(vec![a(i), o(i)]));
            }
            lists
        })
        .collect();

    let mut worker_lists = Vec::with_capacity(total);
    for i in 1..=n {
        let l: Vec<usize> = if i <= k {
            [a(i)]
                .into_iter()
                .chain((1..=k).filter(|&x| x != i).map(a))
                .chain(base.iter().copied())
                .collect()
        } else if i < n {
            (1..i).map(o).chain((1..=k).map(a)).chain((i..=n).map(o)).collect()
        } else {
            (1..n)
                .map(o)
                .chain([a(1), o(n)])
                .chain((2..=k).map(a))
                .collect()
        };
        worker_lists.push(l);
    }
    worker_lists.push(with_rest(vec![o(n - 1), a(1), o(n)]));
    for i in 2..=k {
        worker_lists.push(with_rest(vec![o(n - i), a(i)]));
    }

    let added_names = |prefix: &'static str| (1..=k).map(move |i| format!("{prefix}{i}"));
    let layout = Layout {
        firm_names: default_firm_names(n).into_iter().chain(added_names("F")).collect(),
        worker_names: default_worker_names(n).into_iter().chain(added_names("W")).collect(),
        firm_lists,
        worker_lists,
        firm_base: (0..total).map(|i| (i < n).then(|| base.clone())).collect(),
        worker_base: (0..total).map(|j| (j < n).then(|| base.clone())).collect(),
    };
    let (firm_mats, mut wu) = layout.utilities()?;
    let u = |wu: &UtilityMatrix, firm: usize, worker: usize| wu.get(FirmId(firm), WorkerId(worker));

    let (w1, wn, f1, fn1, fnn) = (a(1), o(n), a(1), o(n - 1), o(n));
    let need = (u(&wu, f1, w1) - p2 * u(&wu, fnn, w1)) / p1;
    let high = int_above(need).max(Rational::from_integer(10 * total as i64));
    wu.set(FirmId(fn1), WorkerId(w1), high);
    let delta = Rational::new(1, 2).min(p2 * (u(&wu, fn1, wn) - u(&wu, fnn, wn)) / 2);
    wu.set(FirmId(f1), WorkerId(wn), u(&wu, fnn, wn) + delta);

    let constraints = vec![
        Constraint {
            description: "W1: p1*u(f_{n-1}) + p2*u(f_n) > u(F1)".into(),
            lhs: p1 * u(&wu, fn1, w1) + p2 * u(&wu, fnn, w1),
            rhs: u(&wu, f1, w1),
        },
        Constraint {
            description: "w_n: p1*u(f_n) + p2*u(f_{n-1}) > u(F1)".into(),
            lhs: p1 * u(&wu, fnn, wn) + p2 * u(&wu, fn1, wn),
            rhs: u(&wu, f1, wn),
        },
    ];
    let economy = layout.economy(firm_mats, wu, p1)?;

    let truthful = StrategyProfile::truthful(&economy);
    let mut candidate: Vec<Vec<usize>> = truthful
        .reports()
        .iter()
        .map(|r| r.iter().map(|f| f.0).collect())
        .collect();
    candidate[w1].retain(|&x| x != f1);
    candidate[wn].retain(|&x| x != f1);
    candidate[o(n - 1)].retain(|&x| !(o(n - k)..=o(n - 2)).contains(&x));
    let candidate = profile_of(&economy, candidate)?;

    let stable = outcome_of(total, vec![(0..total).map(Some).collect(); 2])?;
    let shifted = outcome_of(
        total,
        (0..2)
            .map(|state| {
                let mut p = vec![None; total];
                for i in 1..=k {
                    p[o(i)] = Some(a(i));
                }
                for i in k + 1..n {
                    p[o(i)] = Some(o(i - k));
                }
                for i in 2..=k {
                    p[a(i)] = Some(o(n - i));
                }
                let (to_w1, to_wn) = if state == 0 { (fn1, fnn) } else { (fnn, fn1) };
                p[w1] = Some(to_w1);
                p[wn] = Some(to_wn);
                p
            })
            .collect(),
    )?;

    ConstructionBundle {
        name: format!("prop4(n={n},k={k})"),
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
                expected: shifted,
            },
        ],
        constraints,
        original: Some(assortative_market(n)?),
        added_firms: (1..=k).map(|i| FirmId(a(i))).collect(),
        added_workers: (1..=k).map(|i| WorkerId(a(i))).collect(),
        rank_spec: Some(RankSpec {
            profile: "candidate".into(),
            workers: (k + 1..n).map(|i| WorkerId(o(i))).collect(),
            firm_subset: Some((0..n).map(FirmId).collect()),
        }),
    }
    .verified()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::conditions::{check_assortative, validate_augmented};
    use crate::game::{is_bne, unique_stable_for_reported, StrategyClass};
    use crate::market::Side;

    #[test]
    fn rejects_bad_parameters() {
        assert!(prop4(4, 0).is_err());
        assert!(prop4(4, 3).is_err());
        assert!(prop4(4, 2).is_ok());
    }

    #[test]
    fn base_is_assortative() {
        let m = assortative_market(5).unwrap();
        assert!(check_assortative(m.preferences(), Side::Firms));
    }

    #[test]
    fn every_shifted_worker_gains_k_ranks() {
        for (n, k) in [(4, 1), (5, 2), (8, 3), (9, 4)] {
            let bundle = prop4(n, k).unwrap();
            let stats = bundle.rank_improvements().unwrap().unwrap();
            let diffs = &stats.differences[0];
            assert_eq!(diffs.len(), n - k - 1);
            assert!(diffs.iter().all(|&(_, d)| d == k as i64), "n={n} k={k}: {diffs:?}");
            assert_eq!(stats.average[0], Rational::from_integer(k as i64));
        }
    }

    #[test]
    fn candidate_is_undominated_equilibrium() {
        for (n, k) in [(3, 1), (4, 1), (4, 2), (5, 2)] {
            let bundle = prop4(n, k).unwrap();
            let candidate = &bundle.profile("candidate").unwrap().profile;
            let verdict = is_bne(&bundle.economy, candidate, StrategyClass::Full);
            assert!(verdict.is_bne, "n={n} k={k}: {:?}", verdict.witness);
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
}
