//! Generators for example economies, their candidate equilibrium profiles
//! and the inequalities their utilities must satisfy. Every bundle checks
//! itself when built.

pub mod append;
pub mod example2;
pub mod motivating;
pub mod prop4;

pub use append::{append_block, append_block_named};
pub use example2::example2;
pub use motivating::{motivating_economy, motivating_example};
pub use prop4::prop4;

use std::fmt;

use crate::economy::{stable_outcome_map, Economy, OutcomeMap, StateSpec};
use crate::error::{Error, Result};
use crate::game::{play, rank_stats, RankStats, StrategyProfile};
use crate::market::{FirmId, Market, Preferences, UtilityMatrix, WorkerId};
use crate::Rational;

/// A strict inequality `lhs > rhs` the construction relies on.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Constraint {
    pub description: String,
    pub lhs: Rational,
    pub rhs: Rational,
}

impl Constraint {
    pub fn holds(&self) -> bool {
        self.lhs > self.rhs
    }
}

impl fmt::Display for Constraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {} > {}", self.description, self.lhs, self.rhs)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NamedProfile {
    pub name: String,
    pub profile: StrategyProfile,
    pub expected: OutcomeMap,
}

/// Which workers' rank changes a bundle advertises, and on which firms'
/// positions ranks are measured.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankSpec {
    pub profile: String,
    pub workers: Vec<WorkerId>,
    pub firm_subset: Option<Vec<FirmId>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstructionBundle {
    pub name: String,
    pub economy: Economy,
    pub stable: OutcomeMap,
    pub profiles: Vec<NamedProfile>,
    pub constraints: Vec<Constraint>,
    /// The complete-information market this economy augments, if any.
    pub original: Option<Market>,
    pub added_firms: Vec<FirmId>,
    pub added_workers: Vec<WorkerId>,
    pub rank_spec: Option<RankSpec>,
}

impl ConstructionBundle {
    pub fn profile(&self, name: &str) -> Option<&NamedProfile> {
        self.profiles.iter().find(|p| p.name == name)
    }

    /// Rank improvements of the advertised workers, stable map versus the
    /// advertised profile's outcome.
    pub fn rank_improvements(&self) -> Result<Option<RankStats>> {
        let Some(spec) = &self.rank_spec else {
            return Ok(None);
        };
        let alt = self
            .profile(&spec.profile)
            .ok_or_else(|| Error::Construction(format!("no profile named `{}`", spec.profile)))?;
        rank_stats(
            &self.economy,
            &self.stable,
            &alt.expected,
            &spec.workers,
            spec.firm_subset.as_deref(),
        )
        .map(Some)
    }

    /// Checks every constraint, the stable map and every profile's outcome.
    pub(crate) fn verified(self) -> Result<Self> {
        for c in &self.constraints {
            if !c.holds() {
                return Err(Error::Construction(format!("constraint violated: {c}")));
            }
        }
        let stable = stable_outcome_map(&self.economy)
            .map_err(|e| Error::Construction(format!("{}: {e}", self.name)))?;
        if stable != self.stable {
            return Err(Error::Construction(format!(
                "{}: stable map is {stable}, expected {}",
                self.name, self.stable
            )));
        }
        for p in &self.profiles {
            let got = play(&self.economy, &p.profile);
            if got != p.expected {
                return Err(Error::Construction(format!(
                    "{}: profile {} yields {got}, expected {}",
                    self.name, p.name, p.expected
                )));
            }
        }
        Ok(self)
    }
}

/// Utilities along one agent's list. Entries with a pinned value keep it
/// (pinned values must decrease along the list); the others are spread
/// evenly through the gap between their pinned neighbours, with 0 below the
/// last pinned entry. With nothing pinned this is `len - position`.
pub(crate) fn cardinalize(pinned: &[Option<Rational>]) -> Result<Vec<Rational>> {
    let zero = Rational::from_integer(0);
    let mut out = vec![zero; pinned.len()];
    let mut last: Option<Rational> = None;
    let mut start = 0;
    for pos in 0..=pinned.len() {
        let bound = if pos < pinned.len() { pinned[pos] } else { Some(zero) };
        let Some(lo) = bound else { continue };
        if pos < pinned.len() {
            if let Some(prev) = last {
                if lo >= prev {
                    return Err(Error::Construction("pinned utilities do not decrease along the list".into()));
                }
            }
            if lo <= zero {
                return Err(Error::Construction("pinned utilities must be positive".into()));
            }
        }
        let gap = (pos - start) as i64;
        let hi = last.unwrap_or(lo + Rational::from_integer(gap + 1));
        for (t, slot) in out[start..pos].iter_mut().enumerate() {
            *slot = lo + (hi - lo) * Rational::new(gap - t as i64, gap + 1);
        }
        if pos < pinned.len() {
            out[pos] = lo;
        }
        last = Some(lo);
        start = pos + 1;
    }
    Ok(out)
}

/// Pinned value of each partner for an agent whose base list is `base`:
/// `len(base) - position`.
pub(crate) fn base_values(base: &[usize]) -> impl Fn(usize) -> Option<Rational> + '_ {
    move |partner| {
        base.iter()
            .position(|&p| p == partner)
            .map(|pos| Rational::from_integer((base.len() - pos) as i64))
    }
}

/// Utilities of an agent with `list` (partner indices), pinning partners via `pin`.
pub(crate) fn list_utilities(list: &[usize], pin: impl Fn(usize) -> Option<Rational>) -> Result<Vec<(usize, Rational)>> {
    let pinned: Vec<Option<Rational>> = list.iter().map(|&p| pin(p)).collect();
    Ok(list.iter().copied().zip(cardinalize(&pinned)?).collect())
}

/// Ordinal layout of a constructed economy. Original agents carry their
/// base-market list, whose values are pinned so that utilities among
/// original agents are identical in every state.
pub(crate) struct Layout {
    pub firm_names: Vec<String>,
    pub worker_names: Vec<String>,
    /// `firm_lists[state][firm]`.
    pub firm_lists: Vec<Vec<Vec<usize>>>,
    pub worker_lists: Vec<Vec<usize>>,
    pub firm_base: Vec<Option<Vec<usize>>>,
    pub worker_base: Vec<Option<Vec<usize>>>,
}

impl Layout {
    /// Cardinal utilities before any override: (per-state firm matrices, worker matrix).
    pub(crate) fn utilities(&self) -> Result<(Vec<UtilityMatrix>, UtilityMatrix)> {
        let (m, n) = (self.firm_names.len(), self.worker_names.len());
        let mut firm_mats = Vec::new();
        for lists in &self.firm_lists {
            let mut u = unlisted(m, n, |_, j| j);
            for (i, list) in lists.iter().enumerate() {
                let base = self.firm_base[i].as_deref().unwrap_or(&[]);
                for (j, v) in list_utilities(list, base_values(base))? {
                    u.set(FirmId(i), WorkerId(j), v);
                }
            }
            firm_mats.push(u);
        }
        let mut w = unlisted(m, n, |i, _| i);
        for (j, list) in self.worker_lists.iter().enumerate() {
            let base = self.worker_base[j].as_deref().unwrap_or(&[]);
            for (i, v) in list_utilities(list, base_values(base))? {
                w.set(FirmId(i), WorkerId(j), v);
            }
        }
        Ok((firm_mats, w))
    }

    pub(crate) fn economy(&self, firm_mats: Vec<UtilityMatrix>, worker_utils: UtilityMatrix, p1: Rational) -> Result<Economy> {
        check_belief(p1)?;
        let probs = [p1, Rational::from_integer(1) - p1];
        let economy = Economy::new(
            self.firm_names.clone(),
            self.worker_names.clone(),
            worker_utils,
            firm_mats
                .into_iter()
                .zip(probs)
                .enumerate()
                .map(|(t, (u, p))| StateSpec {
                    id: (t + 1).to_string(),
                    probability: p,
                    firm_utils: u,
                })
                .collect(),
        )?;
        check_lists(&economy, &self.firm_lists, &self.worker_lists)?;
        Ok(economy)
    }
}

/// Distinct negative utilities so unlisted partners stay strict.
fn unlisted(m: usize, n: usize, key: impl Fn(usize, usize) -> usize) -> UtilityMatrix {
    let mut u = UtilityMatrix::filled(m, n, Rational::from_integer(-1));
    for i in 0..m {
        for j in 0..n {
            u.set(FirmId(i), WorkerId(j), Rational::from_integer(-1 - key(i, j) as i64));
        }
    }
    u
}

/// Smallest integer strictly above `x`.
pub(crate) fn int_above(x: Rational) -> Rational {
    x.floor() + Rational::from_integer(1)
}

/// The economy's induced lists must equal the intended ones.
pub(crate) fn check_lists(
    economy: &Economy,
    firm_lists: &[Vec<Vec<usize>>],
    worker_lists: &[Vec<usize>],
) -> Result<()> {
    for (t, lists) in firm_lists.iter().enumerate() {
        let prefs: &Preferences = economy.preferences(t);
        for (i, list) in lists.iter().enumerate() {
            let got: Vec<usize> = prefs.firm_list(FirmId(i)).iter().map(|w| w.0).collect();
            if &got != list {
                return Err(Error::Construction(format!(
                    "state {}: {} list is {got:?}, intended {list:?}",
                    t + 1,
                    economy.firm_name(FirmId(i))
                )));
            }
        }
    }
    for (j, list) in worker_lists.iter().enumerate() {
        let got: Vec<usize> = economy.worker_true_list(WorkerId(j)).iter().map(|f| f.0).collect();
        if &got != list {
            return Err(Error::Construction(format!(
                "{} list is {got:?}, intended {list:?}",
                economy.worker_name(WorkerId(j))
            )));
        }
    }
    Ok(())
}

pub(crate) fn check_belief(p1: Rational) -> Result<()> {
    if p1 <= Rational::from_integer(0) || p1 >= Rational::from_integer(1) {
        return Err(Error::Belief(format!("state 1 probability {p1} must lie strictly between 0 and 1")));
    }
    Ok(())
}

/// Profile from 0-based report lists.
pub(crate) fn profile_of(economy: &Economy, lists: Vec<Vec<usize>>) -> Result<StrategyProfile> {
    StrategyProfile::for_economy(economy, lists.into_iter().map(|l| l.into_iter().map(FirmId).collect()).collect())
}

/// Outcome map from per-state worker -> firm assignments.
pub(crate) fn outcome_of(num_firms: usize, states: Vec<Vec<Option<usize>>>) -> Result<OutcomeMap> {
    states
        .into_iter()
        .map(|partners| {
            let p: Vec<Option<FirmId>> = partners.into_iter().map(|f| f.map(FirmId)).collect();
            crate::matching::Matching::from_worker_partners(num_firms, &p)
        })
        .collect::<Result<Vec<_>>>()
        .map(OutcomeMap::new)
}
