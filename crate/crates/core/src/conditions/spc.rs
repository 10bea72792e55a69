//! Sequential preference condition, its cross-state strengthening, and
//! assortativity.
//!
//! A top-top pair of a residual market is a firm and worker that are each
//! other's most preferred mutually acceptable partner among the agents still
//! present. Removing a top-top pair never destroys another one, so any
//! maximal sequence of removals reaches the same end and the set of valid
//! orderings is the set of linear extensions of the "becomes top-top after"
//! relation.

use std::collections::HashSet;
use std::fmt;

use crate::economy::Economy;
use crate::error::{Error, Result};
use crate::market::{FirmId, Preferences, Side, WorkerId};
use crate::matching::Matching;

/// Largest number of orderings [`check_spc`] returns before giving up.
pub const DEFAULT_ORDERING_LIMIT: usize = 100_000;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SpcOrdering {
    pairs: Vec<(FirmId, WorkerId)>,
}

impl SpcOrdering {
    pub fn new(pairs: Vec<(FirmId, WorkerId)>) -> Self {
        SpcOrdering { pairs }
    }

    pub fn pairs(&self) -> &[(FirmId, WorkerId)] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// Zero-based order of `firm`, if it is coupled at all.
    pub fn firm_position(&self, firm: FirmId) -> Option<usize> {
        self.pairs.iter().position(|&(f, _)| f == firm)
    }

    /// Couple every pair into a matching.
    pub fn to_matching(&self, num_firms: usize, num_workers: usize) -> Matching {
        Matching::from_pairs(num_firms, num_workers, self.pairs.iter().copied())
            .expect("ordering pairs are disjoint")
    }
}

impl fmt::Display for SpcOrdering {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, (firm, worker)) in self.pairs.iter().enumerate() {
            if k > 0 {
                write!(f, " ")?;
            }
            write!(f, "({firm},{worker})")?;
        }
        Ok(())
    }
}

struct Residual<'a> {
    prefs: &'a Preferences,
    firm_alive: Vec<bool>,
    worker_alive: Vec<bool>,
}

impl<'a> Residual<'a> {
    fn new(prefs: &'a Preferences) -> Self {
        Residual {
            prefs,
            firm_alive: vec![true; prefs.num_firms()],
            worker_alive: vec![true; prefs.num_workers()],
        }
    }

    fn top_worker(&self, f: FirmId) -> Option<WorkerId> {
        self.prefs
            .firm_list(f)
            .iter()
            .copied()
            .find(|&w| self.worker_alive[w.0] && self.prefs.worker_rank(w, f).is_some())
    }

    fn top_firm(&self, w: WorkerId) -> Option<FirmId> {
        self.prefs
            .worker_list(w)
            .iter()
            .copied()
            .find(|&f| self.firm_alive[f.0] && self.prefs.firm_rank(f, w).is_some())
    }

    fn top_top_pairs(&self) -> Vec<(FirmId, WorkerId)> {
        (0..self.prefs.num_firms())
            .map(FirmId)
            .filter(|f| self.firm_alive[f.0])
            .filter_map(|f| {
                let w = self.top_worker(f)?;
                (self.top_firm(w) == Some(f)).then_some((f, w))
            })
            .collect()
    }

    /// No mutually acceptable pair is left, so the residual's only stable
    /// matching is empty.
    fn exhausted(&self) -> bool {
        (0..self.prefs.num_firms())
            .filter(|&i| self.firm_alive[i])
            .all(|i| self.top_worker(FirmId(i)).is_none())
    }

    fn remove(&mut self, (f, w): (FirmId, WorkerId)) {
        self.firm_alive[f.0] = false;
        self.worker_alive[w.0] = false;
    }

    fn restore(&mut self, (f, w): (FirmId, WorkerId)) {
        self.firm_alive[f.0] = true;
        self.worker_alive[w.0] = true;
    }
}

/// Top-top pairs of the full market.
pub fn top_top_pairs(prefs: &Preferences) -> Vec<(FirmId, WorkerId)> {
    Residual::new(prefs).top_top_pairs()
}

/// One valid ordering, found greedily, or `None` when the SPC fails.
pub fn spc_ordering(prefs: &Preferences) -> Option<SpcOrdering> {
    let mut residual = Residual::new(prefs);
    let mut pairs = Vec::new();
    loop {
        match residual.top_top_pairs().first() {
            Some(&pair) => {
                residual.remove(pair);
                pairs.push(pair);
            }
            None => return residual.exhausted().then(|| SpcOrdering::new(pairs)),
        }
    }
}

/// Every valid ordering, by backtracking over the top-top pairs available at
/// each step. Empty when the SPC fails.
pub fn check_spc(prefs: &Preferences) -> Result<Vec<SpcOrdering>> {
    check_spc_bounded(prefs, DEFAULT_ORDERING_LIMIT)
}

pub fn check_spc_bounded(prefs: &Preferences, limit: usize) -> Result<Vec<SpcOrdering>> {
    fn recurse(
        residual: &mut Residual<'_>,
        prefix: &mut Vec<(FirmId, WorkerId)>,
        out: &mut Vec<SpcOrdering>,
        limit: usize,
    ) -> Result<()> {
        let candidates = residual.top_top_pairs();
        if candidates.is_empty() {
            if residual.exhausted() {
                if out.len() == limit {
                    return Err(Error::SizeBound {
                        what: "the number of SPC orderings".into(),
                        bound: limit,
                    });
                }
                out.push(SpcOrdering::new(prefix.clone()));
            }
            return Ok(());
        }
        for pair in candidates {
            residual.remove(pair);
            prefix.push(pair);
            let r = recurse(residual, prefix, out, limit);
            prefix.pop();
            residual.restore(pair);
            r?;
        }
        Ok(())
    }
    let mut out = Vec::new();
    recurse(&mut Residual::new(prefs), &mut Vec::new(), &mut out, limit)?;
    Ok(out)
}

/// SPC holds in every state.
pub fn check_spc_economy(economy: &Economy) -> bool {
    economy
        .states()
        .iter()
        .all(|s| spc_ordering(s.preferences()).is_some())
}

/// All agents on `side` submit identical lists.
pub fn check_assortative(prefs: &Preferences, side: Side) -> bool {
    match side {
        Side::Firms => prefs.firm_lists().windows(2).all(|w| w[0] == w[1]),
        Side::Workers => prefs.worker_lists().windows(2).all(|w| w[0] == w[1]),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpcStarReport {
    pub holds: bool,
    /// One ordering per state, present when `holds`.
    pub witness: Option<Vec<SpcOrdering>>,
    /// States (by index) in which even the SPC fails.
    pub spc_failures: Vec<usize>,
}

/// Firms that `worker` ranks above `partner`.
fn preferred_firms(prefs: &Preferences, worker: WorkerId, partner: FirmId) -> &[FirmId] {
    let list = prefs.worker_list(worker);
    let cut = prefs.worker_rank(worker, partner).unwrap_or(list.len());
    &list[..cut]
}

/// Checks the cross-state condition on a given selection of orderings: for
/// each state, order `i` and firm `f` that `w_i` prefers to `f_i`, `f` must
/// be coupled before order `i` in every state.
pub fn is_spc_star_witness(economy: &Economy, orderings: &[SpcOrdering]) -> bool {
    if orderings.len() != economy.num_states() {
        return false;
    }
    orderings.iter().enumerate().all(|(t, ordering)| {
        let prefs = economy.preferences(t);
        ordering.pairs().iter().enumerate().all(|(i, &(fi, wi))| {
            preferred_firms(prefs, wi, fi).iter().all(|&f| {
                orderings
                    .iter()
                    .all(|o| o.firm_position(f).is_some_and(|p| p < i))
            })
        })
    })
}

/// Existential search for one ordering per state satisfying the cross-state
/// condition.
///
/// Orderings are built in lockstep across states. Whether a pair may take
/// order `i` depends only on which firms every state has coupled before `i`,
/// so the search memoizes failed configurations of coupled-firm sets.
pub fn check_spc_star(economy: &Economy) -> SpcStarReport {
    let spc_failures: Vec<usize> = (0..economy.num_states())
        .filter(|&t| spc_ordering(economy.preferences(t)).is_none())
        .collect();
    if !spc_failures.is_empty() {
        return SpcStarReport {
            holds: false,
            witness: None,
            spc_failures,
        };
    }

    struct Search<'a> {
        economy: &'a Economy,
        residuals: Vec<Residual<'a>>,
        orders: Vec<Vec<(FirmId, WorkerId)>>,
        failed: HashSet<Vec<Vec<bool>>>,
    }

    impl Search<'_> {
        fn allowed(&self, t: usize) -> Option<Vec<(FirmId, WorkerId)>> {
            let residual = &self.residuals[t];
            let candidates = residual.top_top_pairs();
            if candidates.is_empty() {
                return (!residual.exhausted()).then(Vec::new);
            }
            let prefs = self.economy.preferences(t);
            Some(
                candidates
                    .into_iter()
                    .filter(|&(fi, wi)| {
                        preferred_firms(prefs, wi, fi)
                            .iter()
                            .all(|&f| self.residuals.iter().all(|r| !r.firm_alive[f.0]))
                    })
                    .collect(),
            )
        }

        fn key(&self) -> Vec<Vec<bool>> {
            self.residuals.iter().map(|r| r.firm_alive.clone()).collect()
        }

        fn run(&mut self) -> bool {
            let mut choices = Vec::with_capacity(self.residuals.len());
            for t in 0..self.residuals.len() {
                match self.allowed(t) {
                    Some(c) if c.is_empty() => return false,
                    Some(c) => choices.push(c),
                    None => choices.push(Vec::new()),
                }
            }
            if choices.iter().all(Vec::is_empty) {
                return true;
            }
            let key = self.key();
            if self.failed.contains(&key) {
                return false;
            }
            if self.product(0, &choices) {
                return true;
            }
            self.failed.insert(key);
            false
        }

        fn product(&mut self, t: usize, choices: &[Vec<(FirmId, WorkerId)>]) -> bool {
            if t == choices.len() {
                return self.run();
            }
            if choices[t].is_empty() {
                return self.product(t + 1, choices);
            }
            for &pair in &choices[t] {
                self.residuals[t].remove(pair);
                self.orders[t].push(pair);
                let found = self.product(t + 1, choices);
                if found {
                    return true;
                }
                self.orders[t].pop();
                self.residuals[t].restore(pair);
            }
            false
        }
    }

    let mut search = Search {
        economy,
        residuals: economy
            .states()
            .iter()
            .map(|s| Residual::new(s.preferences()))
            .collect(),
        orders: vec![Vec::new(); economy.num_states()],
        failed: HashSet::new(),
    };
    let holds = search.run();
    let witness = holds.then(|| search.orders.into_iter().map(SpcOrdering::new).collect());
    SpcStarReport {
        holds,
        witness,
        spc_failures,
    }
}
