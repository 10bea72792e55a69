//! Appends the three-by-three two-state block to any complete-information
//! market whose stable matching leaves nobody unmatched. Each side ranks the
//! other block below everyone in its own.

use crate::constructions::motivating::{FIRM_UTILS, LAMBDA, OUTCOMES, WORKER_UTILS};
use crate::constructions::{check_belief, ConstructionBundle, NamedProfile};
use crate::da::{deferred_acceptance, ProposingSide};
use crate::economy::{default_firm_names, default_worker_names, Economy, OutcomeMap, StateSpec};
use crate::error::{Error, Result};
use crate::game::StrategyProfile;
use crate::market::{FirmId, Market, UtilityMatrix, WorkerId};
use crate::matching::Matching;
use crate::Rational;

const BLOCK: usize = 3;

pub fn append_block(original: &Market) -> Result<ConstructionBundle> {
    append_block_named(
        original,
        default_firm_names(original.num_firms()),
        default_worker_names(original.num_workers()),
        Rational::new(1, 2),
    )
}

/// Smallest positive entry of a matrix, or 1.
fn min_positive(u: &UtilityMatrix) -> Rational {
    u.to_rows()
        .into_iter()
        .flatten()
        .filter(|v| *v > Rational::from_integer(0))
        .min()
        .unwrap_or(Rational::from_integer(1))
}

pub fn append_block_named(
    original: &Market,
    firm_names: Vec<String>,
    worker_names: Vec<String>,
    p1: Rational,
) -> Result<ConstructionBundle> {
    check_belief(p1)?;
    let (m, n) = (original.num_firms(), original.num_workers());
    if firm_names.len() != m || worker_names.len() != n {
        return Err(Error::Dimension(format!(
            "{} firm and {} worker names for a {m}x{n} market",
            firm_names.len(),
            worker_names.len()
        )));
    }
    // A spare original agent would take the seat the block leaves empty in
    // lambda3, so the original stable matching must cover everyone.
    let base = deferred_acceptance(original.preferences(), ProposingSide::Firms);
    if base.len() != m || base.len() != n {
        return Err(Error::InvalidArgument(format!(
            "append needs an original market whose stable matching leaves nobody unmatched; \
             this {m}x{n} market matches {} pairs",
            base.len()
        )));
    }
    let (tm, tn) = (m + BLOCK, n + BLOCK);
    let eps_f = min_positive(original.firm_utils());
    let eps_w = min_positive(original.worker_utils());
    // Block agent b (0-based) as seen from the original side.
    let below = |eps: Rational, b: usize| eps * Rational::new((BLOCK - b) as i64, BLOCK as i64 + 1);
    // Original agent `x` of `count` as seen from the block.
    let original_value = |x: usize, count: usize| Rational::new((count - x) as i64, 2 * (count as i64 + 1));

    let mut worker_utils = UtilityMatrix::filled(tm, tn, Rational::from_integer(0));
    for i in 0..tm {
        for j in 0..tn {
            let v = match (i < m, j < n) {
                (true, true) => original.worker_utility(FirmId(i), WorkerId(j)),
                (false, true) => below(eps_w, i - m),
                (true, false) => original_value(i, m),
                (false, false) => Rational::from_integer(WORKER_UTILS[i - m][j - n]),
            };
            worker_utils.set(FirmId(i), WorkerId(j), v);
        }
    }
    let states = FIRM_UTILS
        .iter()
        .zip([p1, Rational::from_integer(1) - p1])
        .enumerate()
        .map(|(t, (block, p))| {
            let mut u = UtilityMatrix::filled(tm, tn, Rational::from_integer(0));
            for i in 0..tm {
                for j in 0..tn {
                    let v = match (i < m, j < n) {
                        (true, true) => original.firm_utility(FirmId(i), WorkerId(j)),
                        (true, false) => below(eps_f, j - n),
                        (false, true) => original_value(j, n),
                        (false, false) => Rational::from_integer(block[i - m][j - n]),
                    };
                    u.set(FirmId(i), WorkerId(j), v);
                }
            }
            StateSpec {
                id: (t + 1).to_string(),
                probability: p,
                firm_utils: u,
            }
        })
        .collect();
    let block_names = |prefix: &'static str| (1..=BLOCK).map(move |b| format!("{prefix}{b}"));
    let economy = Economy::new(
        firm_names.into_iter().chain(block_names("bf")).collect(),
        worker_names.into_iter().chain(block_names("bw")).collect(),
        worker_utils,
        states,
    )?;

    let outcome = |k: usize| -> Result<OutcomeMap> {
        OUTCOMES[k]
            .iter()
            .map(|block| {
                let pairs = base
                    .pairs()
                    .into_iter()
                    .chain(
                        block
                            .iter()
                            .enumerate()
                            .filter_map(|(j, f)| f.map(|f| (FirmId(m + f), WorkerId(n + j)))),
                    );
                Matching::from_pairs(tm, tn, pairs)
            })
            .collect::<Result<Vec<_>>>()
            .map(OutcomeMap::new)
    };

    let truthful = StrategyProfile::truthful(&economy);
    let mut profiles = vec![NamedProfile {
        name: "truthful".into(),
        profile: truthful.clone(),
        expected: outcome(0)?,
    }];
    for (k, lists) in LAMBDA.iter().enumerate() {
        let mut profile = truthful.clone();
        for (b, list) in lists.iter().enumerate() {
            let report = list
                .iter()
                .map(|&f| FirmId(m + f))
                .chain((0..m).map(FirmId))
                .collect();
            profile = profile.with_report(WorkerId(n + b), report);
        }
        profiles.push(NamedProfile {
            name: format!("lambda{}", k + 1),
            profile,
            expected: outcome(k + 1)?,
        });
    }

    ConstructionBundle {
        name: "append".into(),
        stable: outcome(0)?,
        economy,
        profiles,
        constraints: Vec::new(),
        original: Some(original.clone()),
        added_firms: (m..tm).map(FirmId).collect(),
        added_workers: (n..tn).map(WorkerId).collect(),
        rank_spec: None,
    }
    .verified()
}
