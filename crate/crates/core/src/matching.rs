use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::market::{AgentId, FirmId, WorkerId};

/// Partial one-to-one assignment between firms and workers.
///
/// The derived ordering compares firm partners in index order and is used as
/// the canonical order for enumerated matchings.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Matching {
    firm_partner: Vec<Option<WorkerId>>,
    worker_partner: Vec<Option<FirmId>>,
}

impl Matching {
    pub fn empty(num_firms: usize, num_workers: usize) -> Self {
        Matching {
            firm_partner: vec![None; num_firms],
            worker_partner: vec![None; num_workers],
        }
    }

    pub fn from_pairs(
        num_firms: usize,
        num_workers: usize,
        pairs: impl IntoIterator<Item = (FirmId, WorkerId)>,
    ) -> Result<Self> {
        let mut matching = Matching::empty(num_firms, num_workers);
        for (f, w) in pairs {
            if f.0 >= num_firms || w.0 >= num_workers {
                return Err(Error::InvalidMatching(format!("({f}, {w}) is out of range")));
            }
            if matching.firm_partner[f.0].is_some() || matching.worker_partner[w.0].is_some() {
                return Err(Error::InvalidMatching(format!(
                    "({f}, {w}) reuses an already matched agent"
                )));
            }
            matching.firm_partner[f.0] = Some(w);
            matching.worker_partner[w.0] = Some(f);
        }
        Ok(matching)
    }

    /// Build from a worker -> firm map.
    pub fn from_worker_partners(num_firms: usize, partners: &[Option<FirmId>]) -> Result<Self> {
        Matching::from_pairs(
            num_firms,
            partners.len(),
            partners
                .iter()
                .enumerate()
                .filter_map(|(j, f)| f.map(|f| (f, WorkerId(j)))),
        )
    }

    pub fn num_firms(&self) -> usize {
        self.firm_partner.len()
    }

    pub fn num_workers(&self) -> usize {
        self.worker_partner.len()
    }

    pub fn firm_partner(&self, firm: FirmId) -> Option<WorkerId> {
        self.firm_partner[firm.0]
    }

    pub fn worker_partner(&self, worker: WorkerId) -> Option<FirmId> {
        self.worker_partner[worker.0]
    }

    pub fn worker_partners(&self) -> &[Option<FirmId>] {
        &self.worker_partner
    }

    pub fn partner(&self, agent: AgentId) -> Option<AgentId> {
        match agent {
            AgentId::Firm(f) => self.firm_partner(f).map(AgentId::Worker),
            AgentId::Worker(w) => self.worker_partner(w).map(AgentId::Firm),
        }
    }

    pub fn contains(&self, firm: FirmId, worker: WorkerId) -> bool {
        self.firm_partner[firm.0] == Some(worker)
    }

    /// Matched pairs in firm order.
    pub fn pairs(&self) -> Vec<(FirmId, WorkerId)> {
        self.firm_partner
            .iter()
            .enumerate()
            .filter_map(|(i, w)| w.map(|w| (FirmId(i), w)))
            .collect()
    }

    pub fn len(&self) -> usize {
        self.firm_partner.iter().filter(|p| p.is_some()).count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

impl fmt::Display for Matching {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, (firm, worker)) in self.pairs().into_iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "({firm},{worker})")?;
        }
        write!(f, "}}")
    }
}

/// Agents that have a partner.
pub fn matched_set(matching: &Matching) -> BTreeSet<AgentId> {
    matching
        .pairs()
        .into_iter()
        .flat_map(|(f, w)| [AgentId::Firm(f), AgentId::Worker(w)])
        .collect()
}
