//! Serializable views of outcomes and construction bundles, keyed by agent
//! names.

use serde::Serialize;

use crate::constructions::ConstructionBundle;
use crate::economy::{Economy, OutcomeMap};
use crate::error::Result;
use crate::game::{BneEnumeration, StrategyClass};
use crate::io::format::{pretty, Number, ProfileFile, FORMAT_VERSION};
use crate::market::{FirmId, WorkerId};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StateOutcome {
    pub state: String,
    pub pairs: Vec<(String, String)>,
    pub unmatched_firms: Vec<String>,
    pub unmatched_workers: Vec<String>,
}

pub fn outcome_json(economy: &Economy, outcome: &OutcomeMap) -> Vec<StateOutcome> {
    outcome
        .matchings()
        .iter()
        .enumerate()
        .map(|(t, m)| StateOutcome {
            state: economy.state(t).id().to_string(),
            pairs: m
                .pairs()
                .into_iter()
                .map(|(f, w)| (economy.firm_name(f).to_string(), economy.worker_name(w).to_string()))
                .collect(),
            unmatched_firms: (0..economy.num_firms())
                .filter(|&i| m.firm_partner(FirmId(i)).is_none())
                .map(|i| economy.firm_name(FirmId(i)).to_string())
                .collect(),
            unmatched_workers: (0..economy.num_workers())
                .filter(|&j| m.worker_partner(WorkerId(j)).is_none())
                .map(|j| economy.worker_name(WorkerId(j)).to_string())
                .collect(),
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GroupView {
    pub outcome: Vec<StateOutcome>,
    pub profiles: u64,
    pub representative: ProfileFile,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EnumerationView {
    pub class: String,
    pub undominated_only: bool,
    /// Decimal string: the count may exceed what JSON numbers carry exactly.
    pub profiles_swept: String,
    pub equilibria: u64,
    pub groups: Vec<GroupView>,
}

impl EnumerationView {
    pub fn new(economy: &Economy, class: StrategyClass, undominated_only: bool, result: &BneEnumeration) -> Self {
        EnumerationView {
            class: class.name().to_string(),
            undominated_only,
            profiles_swept: result.profiles_swept.to_string(),
            equilibria: result.equilibria,
            groups: result
                .groups
                .iter()
                .map(|g| GroupView {
                    outcome: outcome_json(economy, &g.outcome),
                    profiles: g.profiles,
                    representative: ProfileFile::from_profile(economy, &g.representative),
                })
                .collect(),
        }
    }

    pub fn to_json(&self) -> String {
        pretty(self)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ProfileEntry {
    pub name: String,
    pub file: String,
    pub expected: Vec<StateOutcome>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConstraintEntry {
    pub description: String,
    pub lhs: Number,
    pub rhs: Number,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RankDifference {
    pub worker: String,
    pub improvement: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StateRanks {
    pub state: String,
    pub differences: Vec<RankDifference>,
    pub average: Number,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RankImprovements {
    pub profile: String,
    pub workers: Vec<String>,
    pub firm_subset: Option<Vec<String>>,
    pub states: Vec<StateRanks>,
}

/// The expectations written next to a generated economy.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Manifest {
    pub format_version: u32,
    pub construction: String,
    pub economy: String,
    pub original: Option<String>,
    pub added_firms: Vec<String>,
    pub added_workers: Vec<String>,
    pub stable: Vec<StateOutcome>,
    pub profiles: Vec<ProfileEntry>,
    pub constraints: Vec<ConstraintEntry>,
    pub rank_improvements: Option<RankImprovements>,
}

impl Manifest {
    pub fn to_json(&self) -> String {
        pretty(self)
    }
}

/// Manifest for `bundle`, with profile `p` stored at `profile_file(p)`.
pub fn manifest(
    bundle: &ConstructionBundle,
    economy_file: &str,
    original_file: Option<&str>,
    profile_file: impl Fn(&str) -> String,
) -> Result<Manifest> {
    let e = &bundle.economy;
    let firm = |f: &FirmId| e.firm_name(*f).to_string();
    let worker = |w: &WorkerId| e.worker_name(*w).to_string();
    let rank_improvements = match (&bundle.rank_spec, bundle.rank_improvements()?) {
        (Some(spec), Some(stats)) => Some(RankImprovements {
            profile: spec.profile.clone(),
            workers: spec.workers.iter().map(worker).collect(),
            firm_subset: spec.firm_subset.as_ref().map(|s| s.iter().map(firm).collect()),
            states: stats
                .differences
                .iter()
                .zip(&stats.average)
                .enumerate()
                .map(|(t, (diffs, avg))| StateRanks {
                    state: e.state(t).id().to_string(),
                    differences: diffs
                        .iter()
                        .map(|(w, d)| RankDifference {
                            worker: worker(w),
                            improvement: *d,
                        })
                        .collect(),
                    average: Number(*avg),
                })
                .collect(),
        }),
        _ => None,
    };
    Ok(Manifest {
        format_version: FORMAT_VERSION,
        construction: bundle.name.clone(),
        economy: economy_file.to_string(),
        original: original_file.map(str::to_string),
        added_firms: bundle.added_firms.iter().map(firm).collect(),
        added_workers: bundle.added_workers.iter().map(worker).collect(),
        stable: outcome_json(e, &bundle.stable),
        profiles: bundle
            .profiles
            .iter()
            .map(|p| ProfileEntry {
                name: p.name.clone(),
                file: profile_file(&p.name),
                expected: outcome_json(e, &p.expected),
            })
            .collect(),
        constraints: bundle
            .constraints
            .iter()
            .map(|c| ConstraintEntry {
                description: c.description.clone(),
                lhs: Number(c.lhs),
                rhs: Number(c.rhs),
                holds: c.holds(),
            })
            .collect(),
        rank_improvements,
    })
}
