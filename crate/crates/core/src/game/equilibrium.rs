//! Bayesian Nash equilibria of the reporting game with truthful firms.

use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::economy::{Economy, OutcomeMap};
use crate::error::{Error, Result};
use crate::game::compare::unique_stable_for_reported;
use crate::game::dominance::is_weakly_undominated;
use crate::game::engine::{expected_utilities, firm_proposing_partners, play, rank_row, ScaledUtilities};
use crate::game::reports::{enumerate_reports, Report, StrategyClass, StrategyProfile};
use crate::game::search::best_response;
use crate::market::{FirmId, WorkerId};
use crate::matching::Matching;
use crate::Rational;

/// Default cap on the number of profiles a sweep may visit.
pub const DEFAULT_BUDGET: u128 = 100_000_000;

/// Largest `profiles x workers` for which the sweep tabulates every profile.
const TABLE_LIMIT: u128 = 1 << 21;

/// A profitable unilateral deviation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Deviation {
    pub worker: WorkerId,
    pub report: Report,
    pub current: Rational,
    pub improved: Rational,
}

impl Deviation {
    pub fn gain(&self) -> Rational {
        self.improved - self.current
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EquilibriumReport {
    pub profile: StrategyProfile,
    pub outcome: OutcomeMap,
    pub expected_utilities: Vec<Rational>,
    pub is_bne: bool,
    /// The lowest-indexed worker with a profitable deviation, and its best
    /// response. Present iff `is_bne` is false.
    pub witness: Option<Deviation>,
    pub unique_stable_for_reported: Vec<bool>,
    /// Per worker: the report lists the true top firm first.
    pub undominated: Vec<bool>,
}

/// BNE check with deviations drawn from `class` for every worker.
pub fn is_bne(economy: &Economy, profile: &StrategyProfile, class: StrategyClass) -> EquilibriumReport {
    let classes = vec![class; economy.num_workers()];
    is_bne_by_worker(economy, profile, &classes).expect("one class per worker")
}

/// BNE check where worker `j` may deviate within `classes[j]`.
pub fn is_bne_by_worker(
    economy: &Economy,
    profile: &StrategyProfile,
    classes: &[StrategyClass],
) -> Result<EquilibriumReport> {
    let n = economy.num_workers();
    if classes.len() != n || profile.num_workers() != n {
        return Err(Error::Dimension(format!(
            "{} classes and {} reports for {n} workers",
            classes.len(),
            profile.num_workers()
        )));
    }
    let outcome = play(economy, profile);
    let eu = expected_utilities(economy, &outcome);
    let witness = (0..n).find_map(|j| {
        let w = WorkerId(j);
        let best = best_response(economy, profile, w, classes[j]);
        (best.value > eu[j]).then(|| Deviation {
            worker: w,
            report: best.report,
            current: eu[j],
            improved: best.value,
        })
    });
    Ok(EquilibriumReport {
        is_bne: witness.is_none(),
        witness,
        unique_stable_for_reported: unique_stable_for_reported(economy, profile),
        undominated: (0..n)
            .map(|j| is_weakly_undominated(profile.report(WorkerId(j)), economy.worker_true_list(WorkerId(j))))
            .collect(),
        expected_utilities: eu,
        outcome,
        profile: profile.clone(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SweepMode {
    /// Tabulate when the table is small, stream otherwise.
    #[default]
    Auto,
    /// Play every profile of the class once, then check deviations by lookup.
    Table,
    /// Play each candidate profile and search each worker's best response.
    Streaming,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EnumerateOptions {
    pub class: StrategyClass,
    pub undominated_only: bool,
    pub budget: u128,
    pub mode: SweepMode,
}

impl EnumerateOptions {
    pub fn new(class: StrategyClass) -> Self {
        EnumerateOptions {
            class,
            undominated_only: false,
            budget: DEFAULT_BUDGET,
            mode: SweepMode::Auto,
        }
    }

    pub fn undominated_only(mut self, flag: bool) -> Self {
        self.undominated_only = flag;
        self
    }

    pub fn budget(mut self, budget: u128) -> Self {
        self.budget = budget;
        self
    }

    pub fn mode(mut self, mode: SweepMode) -> Self {
        self.mode = mode;
        self
    }
}

/// Equilibria sharing one outcome map.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BneGroup {
    pub outcome: OutcomeMap,
    /// First equilibrium profile in sweep order.
    pub representative: StrategyProfile,
    pub profiles: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BneEnumeration {
    /// Sorted by outcome map.
    pub groups: Vec<BneGroup>,
    pub profiles_swept: u128,
    pub equilibria: u64,
}

impl BneEnumeration {
    pub fn outcomes(&self) -> Vec<&OutcomeMap> {
        self.groups.iter().map(|g| &g.outcome).collect()
    }
}

pub fn enumerate_bne(economy: &Economy, class: StrategyClass, undominated_only: bool) -> Result<BneEnumeration> {
    enumerate_bne_with(economy, &EnumerateOptions::new(class).undominated_only(undominated_only))
}

/// Mixed-radix profile indexing, worker 0 most significant, so index order
/// is the lexicographic sweep order.
struct Radix {
    sizes: Vec<usize>,
    strides: Vec<u128>,
    total: u128,
}

impl Radix {
    fn new(sizes: Vec<usize>) -> Self {
        let mut strides = vec![1u128; sizes.len()];
        let mut total = 1u128;
        for j in (0..sizes.len()).rev() {
            strides[j] = total;
            total = total.saturating_mul(sizes[j] as u128);
        }
        Radix { sizes, strides, total }
    }

    fn digits(&self, mut idx: u128, out: &mut [usize]) {
        for (d, &stride) in out.iter_mut().zip(&self.strides) {
            *d = (idx / stride) as usize;
            idx %= stride;
        }
    }
}

/// Sweep every profile of `options.class` (restricted to top-first reports
/// when `undominated_only`), keep the equilibria (deviations range over the
/// whole class), and group them by outcome map.
pub fn enumerate_bne_with(economy: &Economy, options: &EnumerateOptions) -> Result<BneEnumeration> {
    let (m, n) = (economy.num_firms(), economy.num_workers());
    let class_reports: Vec<Vec<Report>> = (0..n)
        .map(|j| enumerate_reports(economy.worker_true_list(WorkerId(j)), m, options.class))
        .collect();
    let candidate: Vec<Vec<bool>> = class_reports
        .iter()
        .enumerate()
        .map(|(j, reports)| {
            let truth = economy.worker_true_list(WorkerId(j));
            reports
                .iter()
                .map(|r| !options.undominated_only || is_weakly_undominated(r, truth))
                .collect()
        })
        .collect();
    let swept = candidate
        .iter()
        .fold(1u128, |acc, c| acc.saturating_mul(c.iter().filter(|&&b| b).count() as u128));
    if swept > options.budget {
        return Err(Error::BudgetExceeded {
            required: swept,
            budget: options.budget,
        });
    }
    let full = Radix::new(class_reports.iter().map(Vec::len).collect());
    let table_fits = full.total.saturating_mul(n as u128) <= TABLE_LIMIT && m < u8::MAX as usize;
    let use_table = match options.mode {
        SweepMode::Table => true,
        SweepMode::Streaming => false,
        SweepMode::Auto => table_fits,
    };
    let groups = if swept == 0 {
        BTreeMap::new()
    } else if use_table {
        if !table_fits {
            return Err(Error::SizeBound {
                what: format!("a table of {} profiles", full.total),
                bound: (TABLE_LIMIT / n.max(1) as u128) as usize,
            });
        }
        table_sweep(economy, &class_reports, &candidate, &full)
    } else {
        streaming_sweep(economy, options.class, &class_reports, &candidate)
    };
    let equilibria = groups.values().map(|g: &(Vec<usize>, u64)| g.1).sum();
    Ok(BneEnumeration {
        groups: groups
            .into_iter()
            .map(|(outcome, (digits, profiles))| BneGroup {
                outcome,
                representative: StrategyProfile::new(
                    m,
                    digits.iter().zip(&class_reports).map(|(&d, r)| r[d].clone()).collect(),
                )
                .expect("enumerated reports are valid"),
                profiles,
            })
            .collect(),
        profiles_swept: swept,
        equilibria,
    })
}

type Groups = BTreeMap<OutcomeMap, (Vec<usize>, u64)>;

fn merge(mut a: Groups, b: Groups) -> Groups {
    for (outcome, (digits, count)) in b {
        a.entry(outcome)
            .and_modify(|e| {
                if digits < e.0 {
                    e.0 = digits.clone();
                }
                e.1 += count;
            })
            .or_insert((digits, count));
    }
    a
}

fn outcome_from_partners(m: usize, n: usize, partners: &[u8]) -> OutcomeMap {
    OutcomeMap::new(
        partners
            .chunks(n)
            .map(|state| {
                let p: Vec<Option<FirmId>> = state
                    .iter()
                    .map(|&f| (f != u8::MAX).then_some(FirmId(f as usize)))
                    .collect();
                Matching::from_worker_partners(m, &p).expect("DA output is a matching")
            })
            .collect(),
    )
}

fn table_sweep(economy: &Economy, class_reports: &[Vec<Report>], candidate: &[Vec<bool>], radix: &Radix) -> Groups {
    let (m, n, s) = (economy.num_firms(), economy.num_workers(), economy.num_states());
    let scaled = ScaledUtilities::new(economy);
    let rows: Vec<Vec<Vec<u32>>> = class_reports
        .iter()
        .map(|reports| reports.iter().map(|r| rank_row(m, r)).collect())
        .collect();
    let total = radix.total as usize;
    let mut partners = vec![u8::MAX; total * s * n];
    let mut eu = vec![0i128; total * n];

    partners
        .par_chunks_mut(s * n)
        .zip(eu.par_chunks_mut(n))
        .enumerate()
        .for_each_init(
            || vec![0usize; n],
            |digits, (idx, (part, util))| {
                radix.digits(idx as u128, digits);
                let profile_rows: Vec<&[u32]> = (0..n).map(|j| rows[j][digits[j]].as_slice()).collect();
                for t in 0..s {
                    let held = firm_proposing_partners(economy, t, &profile_rows);
                    for (j, f) in held.into_iter().enumerate() {
                        part[t * n + j] = f.map_or(u8::MAX, |f| f as u8);
                        util[j] += scaled.term(t, j, f);
                    }
                }
            },
        );

    (0..total)
        .into_par_iter()
        .fold(
            || (Groups::new(), vec![0usize; n]),
            |(mut groups, mut digits), idx| {
                radix.digits(idx as u128, &mut digits);
                if !(0..n).all(|j| candidate[j][digits[j]]) {
                    return (groups, digits);
                }
                let stable = (0..n).all(|j| {
                    let own = eu[idx * n + j];
                    let stride = radix.strides[j] as usize;
                    let base = idx - digits[j] * stride;
                    (0..radix.sizes[j]).all(|r| eu[(base + r * stride) * n + j] <= own)
                });
                if stable {
                    let outcome = outcome_from_partners(m, n, &partners[idx * s * n..(idx + 1) * s * n]);
                    let single = Groups::from([(outcome, (digits.clone(), 1))]);
                    groups = merge(groups, single);
                }
                (groups, digits)
            },
        )
        .map(|(g, _)| g)
        .reduce(Groups::new, merge)
}

fn streaming_sweep(
    economy: &Economy,
    class: StrategyClass,
    class_reports: &[Vec<Report>],
    candidate: &[Vec<bool>],
) -> Groups {
    let (m, n) = (economy.num_firms(), economy.num_workers());
    // Candidate positions within each worker's class enumeration.
    let positions: Vec<Vec<usize>> = candidate
        .iter()
        .map(|c| c.iter().enumerate().filter(|&(_, &b)| b).map(|(i, _)| i).collect())
        .collect();
    let radix = Radix::new(positions.iter().map(Vec::len).collect());
    (0..radix.total)
        .into_par_iter()
        .fold(Groups::new, |groups, idx| {
            let mut local = vec![0usize; n];
            radix.digits(idx, &mut local);
            let digits: Vec<usize> = (0..n).map(|j| positions[j][local[j]]).collect();
            let profile = StrategyProfile::new(m, (0..n).map(|j| class_reports[j][digits[j]].clone()).collect())
                .expect("enumerated reports are valid");
            let outcome = play(economy, &profile);
            let eu = expected_utilities(economy, &outcome);
            let stable = (0..n).all(|j| best_response(economy, &profile, WorkerId(j), class).value <= eu[j]);
            if stable {
                merge(groups, Groups::from([(outcome, (digits, 1))]))
            } else {
                groups
            }
        })
        .reduce(Groups::new, merge)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::motivating::motivating_economy;
    use crate::economy::stable_outcome_map;
    use crate::testutil::random_economy;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn report(ids: &[usize]) -> Report {
        ids.iter().map(|&i| FirmId(i - 1)).collect()
    }

    #[test]
    fn w1_reporting_only_f3_deviates_to_f1() {
        let economy = motivating_economy(Rational::new(1, 2));
        let profile = StrategyProfile::truthful(&economy).with_report(WorkerId(0), report(&[3]));
        let verdict = is_bne(&economy, &profile, StrategyClass::Full);
        assert!(!verdict.is_bne);
        let witness = verdict.witness.unwrap();
        assert_eq!(witness.worker, WorkerId(0));
        assert_eq!(witness.report, report(&[1]));
        assert_eq!(witness.gain(), Rational::from_integer(1));
    }

    #[test]
    fn single_pair_economy_has_one_outcome() {
        let market = crate::market::Market::from_ints(&[[1]], &[[1]]).unwrap();
        let economy = Economy::single(&market);
        let result = enumerate_bne(&economy, StrategyClass::Full, false).unwrap();
        assert_eq!(result.groups.len(), 1);
        assert_eq!(result.groups[0].outcome, stable_outcome_map(&economy).unwrap());
    }

    #[test]
    fn budget_is_enforced() {
        let economy = motivating_economy(Rational::new(1, 2));
        let options = EnumerateOptions::new(StrategyClass::Full).budget(100);
        assert!(matches!(
            enumerate_bne_with(&economy, &options),
            Err(Error::BudgetExceeded { required: 4096, budget: 100 })
        ));
    }

    #[test]
    fn table_and_streaming_agree() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for round in 0..60 {
            let economy = random_economy(&mut rng, 3, 3, 2, 0.1);
            let class = StrategyClass::ALL[round % 4];
            for undominated in [false, true] {
                let base = EnumerateOptions::new(class).undominated_only(undominated);
                let table = enumerate_bne_with(&economy, &base.clone().mode(SweepMode::Table)).unwrap();
                let stream = enumerate_bne_with(&economy, &base.mode(SweepMode::Streaming)).unwrap();
                assert_eq!(table, stream);
            }
        }
    }

    #[test]
    fn sweep_matches_naive_verification() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for _ in 0..15 {
            let economy = random_economy(&mut rng, 3, 3, 2, 0.0);
            let result = enumerate_bne(&economy, StrategyClass::Dropping, false).unwrap();
            let m = economy.num_firms();
            let lists: Vec<Vec<Report>> = (0..economy.num_workers())
                .map(|j| enumerate_reports(economy.worker_true_list(WorkerId(j)), m, StrategyClass::Dropping))
                .collect();
            let mut naive: BTreeMap<OutcomeMap, u64> = BTreeMap::new();
            let radix = Radix::new(lists.iter().map(Vec::len).collect());
            let mut digits = vec![0; lists.len()];
            for idx in 0..radix.total {
                radix.digits(idx, &mut digits);
                let profile =
                    StrategyProfile::new(m, digits.iter().zip(&lists).map(|(&d, l)| l[d].clone()).collect()).unwrap();
                let eu = expected_utilities(&economy, &play(&economy, &profile));
                let ok = (0..lists.len()).all(|j| {
                    lists[j].iter().all(|r| {
                        crate::game::engine::expected_utility(&economy, &profile.with_report(WorkerId(j), r.clone()), WorkerId(j))
                            <= eu[j]
                    })
                });
                if ok {
                    *naive.entry(play(&economy, &profile)).or_default() += 1;
                }
            }
            let got: BTreeMap<OutcomeMap, u64> =
                result.groups.iter().map(|g| (g.outcome.clone(), g.profiles)).collect();
            assert_eq!(got, naive);
        }
    }

    #[test]
    fn result_is_independent_of_thread_count() {
        let economy = motivating_economy(Rational::new(1, 2));
        let run = |threads| {
            rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap()
                .install(|| enumerate_bne(&economy, StrategyClass::Full, true).unwrap())
        };
        assert_eq!(run(1), run(4));
    }
}
