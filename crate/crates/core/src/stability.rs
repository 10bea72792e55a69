//! Stability checks and the brute-force stable-matching oracle.

use crate::da::{deferred_acceptance, ProposingSide};
use crate::error::{Error, Result};
use crate::market::{AgentId, FirmId, Preferences, WorkerId};
use crate::matching::Matching;

/// Largest side the brute-force enumerator accepts by default.
pub const DEFAULT_ENUMERATION_BOUND: usize = 7;

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct StabilityReport {
    /// Mutually acceptable pairs who both strictly prefer each other to
    /// their assignment.
    pub blocking_pairs: Vec<(FirmId, WorkerId)>,
    /// Matched pairs where at least one side does not list the other.
    pub unacceptable_matches: Vec<(FirmId, WorkerId)>,
}

impl StabilityReport {
    pub fn is_stable(&self) -> bool {
        self.blocking_pairs.is_empty() && self.unacceptable_matches.is_empty()
    }
}

pub fn blocking_pairs(matching: &Matching, prefs: &Preferences) -> StabilityReport {
    let mut report = StabilityReport::default();
    for (f, w) in matching.pairs() {
        if !prefs.mutually_acceptable(f, w) {
            report.unacceptable_matches.push((f, w));
        }
    }
    for i in 0..prefs.num_firms() {
        let f = FirmId(i);
        let current = matching.firm_partner(f);
        for &w in prefs.firm_list(f) {
            if current == Some(w) || prefs.worker_rank(w, f).is_none() {
                continue;
            }
            if prefs.firm_prefers(f, Some(w), current)
                && prefs.worker_prefers(w, Some(f), matching.worker_partner(w))
            {
                report.blocking_pairs.push((f, w));
            }
        }
    }
    report
}

pub fn is_stable(matching: &Matching, prefs: &Preferences) -> bool {
    blocking_pairs(matching, prefs).is_stable()
}

/// All stable matchings, in canonical order, for markets with at most
/// [`DEFAULT_ENUMERATION_BOUND`] agents per side.
pub fn enumerate_stable_matchings(prefs: &Preferences) -> Result<Vec<Matching>> {
    enumerate_stable_matchings_bounded(prefs, DEFAULT_ENUMERATION_BOUND)
}

/// Brute force: each firm in turn picks an unused worker or stays unmatched;
/// every complete assignment is then filtered by [`is_stable`].
pub fn enumerate_stable_matchings_bounded(
    prefs: &Preferences,
    bound: usize,
) -> Result<Vec<Matching>> {
    let (m, n) = (prefs.num_firms(), prefs.num_workers());
    if m > bound || n > bound {
        return Err(Error::SizeBound {
            what: format!("a {m}x{n} market"),
            bound,
        });
    }
    fn recurse(
        firm: usize,
        choice: &mut Vec<Option<WorkerId>>,
        used: &mut Vec<bool>,
        prefs: &Preferences,
        out: &mut Vec<Matching>,
    ) {
        if firm == choice.len() {
            let pairs = choice
                .iter()
                .enumerate()
                .filter_map(|(i, w)| w.map(|w| (FirmId(i), w)));
            let matching = Matching::from_pairs(choice.len(), used.len(), pairs)
                .expect("used-worker pruning keeps assignments injective");
            if is_stable(&matching, prefs) {
                out.push(matching);
            }
            return;
        }
        choice[firm] = None;
        recurse(firm + 1, choice, used, prefs, out);
        for j in 0..used.len() {
            if !used[j] {
                used[j] = true;
                choice[firm] = Some(WorkerId(j));
                recurse(firm + 1, choice, used, prefs, out);
                used[j] = false;
            }
        }
        choice[firm] = None;
    }
    let mut out = Vec::new();
    recurse(0, &mut vec![None; m], &mut vec![false; n], prefs, &mut out);
    out.sort();
    Ok(out)
}

/// A market has a unique stable matching iff both DA directions agree.
pub fn is_unique_stable(prefs: &Preferences) -> bool {
    deferred_acceptance(prefs, ProposingSide::Firms)
        == deferred_acceptance(prefs, ProposingSide::Workers)
}

/// One-based position of `partner` on `agent`'s list; `None` when unmatched.
pub fn rank_of(agent: AgentId, partner: Option<AgentId>, prefs: &Preferences) -> Result<Option<usize>> {
    let Some(partner) = partner else {
        return Ok(None);
    };
    let rank = match (agent, partner) {
        (AgentId::Firm(f), AgentId::Worker(w)) => prefs.firm_rank(f, w),
        (AgentId::Worker(w), AgentId::Firm(f)) => prefs.worker_rank(w, f),
        _ => {
            return Err(Error::InvalidArgument(format!(
                "{agent} and {partner} are on the same side"
            )))
        }
    };
    rank.map(|r| Some(r + 1))
        .ok_or(Error::NotListed { agent, partner })
}
