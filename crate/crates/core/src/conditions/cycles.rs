//! Preference cycles: alternating sequences `f_1, w_1, ..., f_k, w_k` of
//! distinct agents in which, cyclically, `f_i` prefers `w_i` to `w_{i-1}`
//! and `w_i` prefers `f_{i+1}` to `f_i`. Every pair of neighbours in the
//! sequence must be mutually acceptable.

use std::fmt;

use crate::market::{FirmId, Preferences, WorkerId};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PreferenceCycle {
    firms: Vec<FirmId>,
    workers: Vec<WorkerId>,
}

impl PreferenceCycle {
    pub fn firms(&self) -> &[FirmId] {
        &self.firms
    }

    pub fn workers(&self) -> &[WorkerId] {
        &self.workers
    }

    /// Number of firms (equal to the number of workers) on the cycle.
    pub fn len(&self) -> usize {
        self.firms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.firms.is_empty()
    }

    /// Whether the sequence satisfies the cycle conditions under `prefs`.
    pub fn is_valid(&self, prefs: &Preferences) -> bool {
        let k = self.firms.len();
        if k < 2 || self.workers.len() != k {
            return false;
        }
        (0..k).all(|i| {
            let (f, w) = (self.firms[i], self.workers[i]);
            let prev_w = self.workers[(i + k - 1) % k];
            let next_f = self.firms[(i + 1) % k];
            prefs.mutually_acceptable(f, w)
                && prefs.mutually_acceptable(next_f, w)
                && prefs.firm_rank(f, w) < prefs.firm_rank(f, prev_w)
                && prefs.worker_rank(w, next_f) < prefs.worker_rank(w, f)
        })
    }
}

impl fmt::Display for PreferenceCycle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, (firm, worker)) in self.firms.iter().zip(&self.workers).enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{firm}, {worker}")?;
        }
        write!(f, ")")
    }
}

/// All preference cycles with at most `max_k` firms (default `min(m, n)`).
///
/// Each cycle is reported once, rotated to start at its lowest-indexed firm.
/// The reversed sequence would need every preference inverted, so
/// reflections never produce duplicates.
pub fn find_preference_cycles(prefs: &Preferences, max_k: Option<usize>) -> Vec<PreferenceCycle> {
    let limit = max_k.unwrap_or(prefs.num_firms().min(prefs.num_workers()));
    let mut search = Search {
        prefs,
        limit,
        firms: Vec::new(),
        workers: Vec::new(),
        firm_used: vec![false; prefs.num_firms()],
        worker_used: vec![false; prefs.num_workers()],
        out: Vec::new(),
        stop_at_first: false,
    };
    search.run();
    search.out.sort();
    search.out
}

pub fn has_preference_cycle(prefs: &Preferences) -> bool {
    let mut search = Search {
        prefs,
        limit: prefs.num_firms().min(prefs.num_workers()),
        firms: Vec::new(),
        workers: Vec::new(),
        firm_used: vec![false; prefs.num_firms()],
        worker_used: vec![false; prefs.num_workers()],
        out: Vec::new(),
        stop_at_first: true,
    };
    search.run();
    !search.out.is_empty()
}

struct Search<'a> {
    prefs: &'a Preferences,
    limit: usize,
    firms: Vec<FirmId>,
    workers: Vec<WorkerId>,
    firm_used: Vec<bool>,
    worker_used: Vec<bool>,
    out: Vec<PreferenceCycle>,
    stop_at_first: bool,
}

impl Search<'_> {
    fn done(&self) -> bool {
        self.stop_at_first && !self.out.is_empty()
    }

    fn run(&mut self) {
        for i in 0..self.prefs.num_firms() {
            let f = FirmId(i);
            self.firm_used[i] = true;
            self.firms.push(f);
            for &w in self.prefs.firm_list(f) {
                if self.prefs.worker_rank(w, f).is_none() {
                    continue;
                }
                self.worker_used[w.0] = true;
                self.workers.push(w);
                self.extend();
                self.workers.pop();
                self.worker_used[w.0] = false;
                if self.done() {
                    return;
                }
            }
            self.firms.pop();
            self.firm_used[i] = false;
        }
    }

    /// Extend a path ending at worker `w_k` by a firm the worker prefers to
    /// `f_k`, then a worker that firm prefers to `w_k`; record closures.
    fn extend(&mut self) {
        let k = self.firms.len();
        let (first, fk, wk) = (self.firms[0], self.firms[k - 1], *self.workers.last().unwrap());
        let w1 = self.workers[0];
        if k >= 2
            && self.prefs.mutually_acceptable(first, wk)
            && self.prefs.worker_rank(wk, first) < self.prefs.worker_rank(wk, fk)
            && self.prefs.firm_rank(first, w1) < self.prefs.firm_rank(first, wk)
        {
            self.out.push(PreferenceCycle {
                firms: self.firms.clone(),
                workers: self.workers.clone(),
            });
            if self.done() {
                return;
            }
        }
        if k == self.limit {
            return;
        }
        let cut = self.prefs.worker_rank(wk, fk).expect("path pairs are mutually acceptable");
        for idx in 0..cut {
            let f = self.prefs.worker_list(wk)[idx];
            if f.0 <= first.0 || self.firm_used[f.0] || self.prefs.firm_rank(f, wk).is_none() {
                continue;
            }
            let f_cut = self.prefs.firm_rank(f, wk).unwrap();
            self.firm_used[f.0] = true;
            self.firms.push(f);
            for jdx in 0..f_cut {
                let w = self.prefs.firm_list(f)[jdx];
                if self.worker_used[w.0] || self.prefs.worker_rank(w, f).is_none() {
                    continue;
                }
                self.worker_used[w.0] = true;
                self.workers.push(w);
                self.extend();
                self.workers.pop();
                self.worker_used[w.0] = false;
                if self.done() {
                    return;
                }
            }
            self.firms.pop();
            self.firm_used[f.0] = false;
        }
    }
}
