//! Deferred Acceptance (Gale–Shapley) over strict, possibly partial lists.

use crate::market::{FirmId, Preferences, WorkerId, UNRANKED};
use crate::matching::Matching;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ProposingSide {
    Firms,
    Workers,
}

/// Order in which free proposers are processed. The output does not depend
/// on it; both exist so that can be checked.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Schedule {
    /// All free proposers propose simultaneously each round.
    #[default]
    Rounds,
    /// One proposer at a time; a displaced proposer continues immediately.
    Sequential,
}

pub(crate) trait AgentIndex: Copy {
    fn idx(self) -> usize;
}

impl AgentIndex for usize {
    fn idx(self) -> usize {
        self
    }
}

impl AgentIndex for FirmId {
    fn idx(self) -> usize {
        self.0
    }
}

impl AgentIndex for WorkerId {
    fn idx(self) -> usize {
        self.0
    }
}

/// Core proposal loop.
///
/// `receiver_rank[r][p]` is `r`'s rank of proposer `p` (`UNRANKED` if
/// unacceptable). `on_proposal(p, r)` observes every proposal made. Returns
/// the proposer held by each receiver.
pub(crate) fn propose<L, I, R, F>(
    proposer_lists: &[L],
    receiver_rank: &[R],
    schedule: Schedule,
    mut on_proposal: F,
) -> Vec<Option<usize>>
where
    L: AsRef<[I]>,
    I: AgentIndex,
    R: AsRef<[u32]>,
    F: FnMut(usize, usize),
{
    let num_proposers = proposer_lists.len();
    let mut held: Vec<Option<usize>> = vec![None; receiver_rank.len()];
    let mut next = vec![0usize; num_proposers];

    // Offer `p` to receiver `r`; returns the proposer left free, if any.
    let mut offer = |p: usize, r: usize, held: &mut Vec<Option<usize>>| -> Option<usize> {
        on_proposal(p, r);
        let ranks = receiver_rank[r].as_ref();
        let rank = ranks[p];
        if rank == UNRANKED {
            return Some(p);
        }
        match held[r] {
            None => {
                held[r] = Some(p);
                None
            }
            Some(q) if rank < ranks[q] => {
                held[r] = Some(p);
                Some(q)
            }
            Some(_) => Some(p),
        }
    };

    match schedule {
        Schedule::Sequential => {
            let mut free: Vec<usize> = (0..num_proposers).rev().collect();
            while let Some(mut p) = free.pop() {
                loop {
                    let list = proposer_lists[p].as_ref();
                    let Some(&r) = list.get(next[p]) else { break };
                    next[p] += 1;
                    match offer(p, r.idx(), &mut held) {
                        None => break,
                        Some(q) => p = q,
                    }
                }
            }
        }
        Schedule::Rounds => {
            let mut free: Vec<usize> = (0..num_proposers).collect();
            let mut proposals = Vec::with_capacity(num_proposers);
            while !free.is_empty() {
                proposals.clear();
                for &p in &free {
                    let list = proposer_lists[p].as_ref();
                    if let Some(&r) = list.get(next[p]) {
                        next[p] += 1;
                        proposals.push((p, r.idx()));
                    }
                }
                free.clear();
                for &(p, r) in &proposals {
                    if let Some(q) = offer(p, r, &mut held) {
                        free.push(q);
                    }
                }
                free.sort_unstable();
            }
        }
    }
    held
}

pub fn deferred_acceptance(prefs: &Preferences, side: ProposingSide) -> Matching {
    deferred_acceptance_with(prefs, side, Schedule::default())
}

pub fn deferred_acceptance_with(
    prefs: &Preferences,
    side: ProposingSide,
    schedule: Schedule,
) -> Matching {
    let (m, n) = (prefs.num_firms(), prefs.num_workers());
    match side {
        ProposingSide::Firms => {
            let held = propose(prefs.firm_lists(), prefs.worker_rank_rows(), schedule, |_, _| {});
            let pairs = held
                .iter()
                .enumerate()
                .filter_map(|(j, f)| f.map(|f| (FirmId(f), WorkerId(j))));
            Matching::from_pairs(m, n, pairs).expect("DA output is a matching")
        }
        ProposingSide::Workers => {
            let held = propose(prefs.worker_lists(), prefs.firm_rank_rows(), schedule, |_, _| {});
            let pairs = held
                .iter()
                .enumerate()
                .filter_map(|(i, w)| w.map(|w| (FirmId(i), WorkerId(w))));
            Matching::from_pairs(m, n, pairs).expect("DA output is a matching")
        }
    }
}
