//! Complete-information markets: agents, cardinal utilities and the strict
//! ordinal preferences they induce.
//!
//! Agent indices are zero-based internally and printed one-based (`f1`, `w1`).

use std::fmt;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FirmId(pub usize);

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct WorkerId(pub usize);

impl fmt::Display for FirmId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "f{}", self.0 + 1)
    }
}

impl fmt::Display for WorkerId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "w{}", self.0 + 1)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Side {
    Firms,
    Workers,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum AgentId {
    Firm(FirmId),
    Worker(WorkerId),
}

impl AgentId {
    pub fn side(self) -> Side {
        match self {
            AgentId::Firm(_) => Side::Firms,
            AgentId::Worker(_) => Side::Workers,
        }
    }

    /// Zero-based index within the agent's side.
    pub fn index(self) -> usize {
        match self {
            AgentId::Firm(f) => f.0,
            AgentId::Worker(w) => w.0,
        }
    }
}

impl fmt::Display for AgentId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AgentId::Firm(id) => id.fmt(f),
            AgentId::Worker(id) => id.fmt(f),
        }
    }
}

impl From<FirmId> for AgentId {
    fn from(f: FirmId) -> Self {
        AgentId::Firm(f)
    }
}

impl From<WorkerId> for AgentId {
    fn from(w: WorkerId) -> Self {
        AgentId::Worker(w)
    }
}

/// Dense `firms x workers` matrix of exact utilities.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UtilityMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl UtilityMatrix {
    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self> {
        let num_rows = rows.len();
        let cols = rows.first().map_or(0, Vec::len);
        if num_rows == 0 || cols == 0 {
            return Err(Error::Dimension("utility matrix must be non-empty".into()));
        }
        let mut data = Vec::with_capacity(num_rows * cols);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != cols {
                return Err(Error::Dimension(format!(
                    "row {} has {} entries, expected {cols}",
                    i + 1,
                    row.len()
                )));
            }
            data.extend(row);
        }
        Ok(UtilityMatrix {
            rows: num_rows,
            cols,
            data,
        })
    }

    pub fn from_ints<R: AsRef<[i64]>>(rows: &[R]) -> Result<Self> {
        Self::from_rows(
            rows.iter()
                .map(|r| r.as_ref().iter().map(|&v| Rational::from_integer(v)).collect())
                .collect(),
        )
    }

    pub fn filled(rows: usize, cols: usize, value: Rational) -> Self {
        UtilityMatrix {
            rows,
            cols,
            data: vec![value; rows * cols],
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, firm: FirmId, worker: WorkerId) -> Rational {
        self.data[firm.0 * self.cols + worker.0]
    }

    pub fn set(&mut self, firm: FirmId, worker: WorkerId, value: Rational) {
        self.data[firm.0 * self.cols + worker.0] = value;
    }

    pub fn to_rows(&self) -> Vec<Vec<Rational>> {
        self.data.chunks(self.cols).map(<[_]>::to_vec).collect()
    }

    pub fn restrict(&self, firms: &[FirmId], workers: &[WorkerId]) -> UtilityMatrix {
        let mut data = Vec::with_capacity(firms.len() * workers.len());
        for &f in firms {
            for &w in workers {
                data.push(self.get(f, w));
            }
        }
        UtilityMatrix {
            rows: firms.len(),
            cols: workers.len(),
            data,
        }
    }
}

pub(crate) const UNRANKED: u32 = u32::MAX;

/// Strict ordinal preferences for both sides. Unlisted partners are
/// unacceptable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Preferences {
    firm_lists: Vec<Vec<WorkerId>>,
    worker_lists: Vec<Vec<FirmId>>,
    firm_rank: Vec<Vec<u32>>,
    worker_rank: Vec<Vec<u32>>,
}

fn rank_table<T: Copy>(len: usize, list: &[T], idx: impl Fn(T) -> usize) -> Vec<u32> {
    let mut rank = vec![UNRANKED; len];
    for (pos, &item) in list.iter().enumerate() {
        rank[idx(item)] = pos as u32;
    }
    rank
}

impl Preferences {
    pub fn new(
        num_firms: usize,
        num_workers: usize,
        firm_lists: Vec<Vec<WorkerId>>,
        worker_lists: Vec<Vec<FirmId>>,
    ) -> Result<Self> {
        if firm_lists.len() != num_firms || worker_lists.len() != num_workers {
            return Err(Error::Dimension(format!(
                "expected {num_firms} firm lists and {num_workers} worker lists, got {} and {}",
                firm_lists.len(),
                worker_lists.len()
            )));
        }
        for (i, list) in firm_lists.iter().enumerate() {
            check_list(AgentId::Firm(FirmId(i)), list, num_workers, |w| w.0)?;
        }
        for (j, list) in worker_lists.iter().enumerate() {
            check_list(AgentId::Worker(WorkerId(j)), list, num_firms, |f| f.0)?;
        }
        let firm_rank = firm_lists
            .iter()
            .map(|l| rank_table(num_workers, l, |w| w.0))
            .collect();
        let worker_rank = worker_lists
            .iter()
            .map(|l| rank_table(num_firms, l, |f| f.0))
            .collect();
        Ok(Preferences {
            firm_lists,
            worker_lists,
            firm_rank,
            worker_rank,
        })
    }

    pub fn num_firms(&self) -> usize {
        self.firm_lists.len()
    }

    pub fn num_workers(&self) -> usize {
        self.worker_lists.len()
    }

    pub fn firm_list(&self, firm: FirmId) -> &[WorkerId] {
        &self.firm_lists[firm.0]
    }

    pub fn worker_list(&self, worker: WorkerId) -> &[FirmId] {
        &self.worker_lists[worker.0]
    }

    pub fn firm_lists(&self) -> &[Vec<WorkerId>] {
        &self.firm_lists
    }

    pub fn worker_lists(&self) -> &[Vec<FirmId>] {
        &self.worker_lists
    }

    pub(crate) fn worker_rank_rows(&self) -> &[Vec<u32>] {
        &self.worker_rank
    }

    pub(crate) fn firm_rank_rows(&self) -> &[Vec<u32>] {
        &self.firm_rank
    }

    /// Zero-based position of `worker` on `firm`'s list.
    pub fn firm_rank(&self, firm: FirmId, worker: WorkerId) -> Option<usize> {
        let r = self.firm_rank[firm.0][worker.0];
        (r != UNRANKED).then_some(r as usize)
    }

    /// Zero-based position of `firm` on `worker`'s list.
    pub fn worker_rank(&self, worker: WorkerId, firm: FirmId) -> Option<usize> {
        let r = self.worker_rank[worker.0][firm.0];
        (r != UNRANKED).then_some(r as usize)
    }

    pub fn mutually_acceptable(&self, firm: FirmId, worker: WorkerId) -> bool {
        self.firm_rank(firm, worker).is_some() && self.worker_rank(worker, firm).is_some()
    }

    /// Whether `firm` strictly prefers `a` to `b`, where `None` is being
    /// unmatched. Listed partners beat unmatched, unmatched beats unlisted.
    pub fn firm_prefers(&self, firm: FirmId, a: Option<WorkerId>, b: Option<WorkerId>) -> bool {
        let key = |x: Option<WorkerId>| match x {
            None => self.firm_lists[firm.0].len() as u64,
            Some(w) => match self.firm_rank[firm.0][w.0] {
                UNRANKED => u64::MAX,
                r => r as u64,
            },
        };
        key(a) < key(b)
    }

    /// Whether `worker` strictly prefers `a` to `b` (see [`Self::firm_prefers`]).
    pub fn worker_prefers(&self, worker: WorkerId, a: Option<FirmId>, b: Option<FirmId>) -> bool {
        let key = |x: Option<FirmId>| match x {
            None => self.worker_lists[worker.0].len() as u64,
            Some(f) => match self.worker_rank[worker.0][f.0] {
                UNRANKED => u64::MAX,
                r => r as u64,
            },
        };
        key(a) < key(b)
    }

    /// Replace one worker's list, e.g. with a strategic report.
    pub fn with_worker_list(&self, worker: WorkerId, list: Vec<FirmId>) -> Result<Self> {
        let mut worker_lists = self.worker_lists.clone();
        worker_lists[worker.0] = list;
        Preferences::new(
            self.num_firms(),
            self.num_workers(),
            self.firm_lists.clone(),
            worker_lists,
        )
    }

    /// Sub-market preferences over the given agents, renumbered in the order given.
    pub fn restrict(&self, firms: &[FirmId], workers: &[WorkerId]) -> Preferences {
        let firm_pos = |f: FirmId| firms.iter().position(|&x| x == f);
        let worker_pos = |w: WorkerId| workers.iter().position(|&x| x == w);
        let firm_lists = firms
            .iter()
            .map(|&f| {
                self.firm_list(f)
                    .iter()
                    .filter_map(|&w| worker_pos(w).map(WorkerId))
                    .collect()
            })
            .collect();
        let worker_lists = workers
            .iter()
            .map(|&w| {
                self.worker_list(w)
                    .iter()
                    .filter_map(|&f| firm_pos(f).map(FirmId))
                    .collect()
            })
            .collect();
        Preferences::new(firms.len(), workers.len(), firm_lists, worker_lists)
            .expect("restriction of valid preferences is valid")
    }
}

fn check_list<T: Copy + fmt::Display>(
    agent: AgentId,
    list: &[T],
    bound: usize,
    idx: impl Fn(T) -> usize,
) -> Result<()> {
    let mut seen = vec![false; bound];
    for &item in list {
        let i = idx(item);
        if i >= bound {
            return Err(Error::InvalidList {
                agent,
                reason: format!("{item} does not exist"),
            });
        }
        if std::mem::replace(&mut seen[i], true) {
            return Err(Error::InvalidList {
                agent,
                reason: format!("{item} is listed twice"),
            });
        }
    }
    Ok(())
}

fn sorted_by_utility<T: Copy>(
    agent: AgentId,
    entries: Vec<(T, Rational)>,
    as_agent: impl Fn(T) -> AgentId,
) -> Result<Vec<T>> {
    for &(partner, u) in &entries {
        if u.is_zero() {
            return Err(Error::ZeroUtility {
                agent,
                partner: as_agent(partner),
            });
        }
    }
    let mut sorted = entries;
    sorted.sort_by_key(|e| std::cmp::Reverse(e.1));
    if let Some(pair) = sorted.windows(2).find(|p| p[0].1 == p[1].1) {
        return Err(Error::Tie {
            agent,
            first: as_agent(pair[0].0),
            second: as_agent(pair[1].0),
        });
    }
    Ok(sorted
        .into_iter()
        .filter(|(_, u)| u.is_positive())
        .map(|(p, _)| p)
        .collect())
}

/// Induce strict ordinal preferences from utilities. Partners with
/// non-positive utility are unacceptable; ties and zero entries are errors.
pub fn utilities_to_ordinal(
    firm_utils: &UtilityMatrix,
    worker_utils: &UtilityMatrix,
) -> Result<Preferences> {
    let (m, n) = (firm_utils.rows(), firm_utils.cols());
    if worker_utils.rows() != m || worker_utils.cols() != n {
        return Err(Error::Dimension(format!(
            "firm utilities are {m}x{n} but worker utilities are {}x{}",
            worker_utils.rows(),
            worker_utils.cols()
        )));
    }
    let mut firm_lists = Vec::with_capacity(m);
    for i in 0..m {
        let entries = (0..n)
            .map(|j| (WorkerId(j), firm_utils.get(FirmId(i), WorkerId(j))))
            .collect();
        firm_lists.push(sorted_by_utility(
            AgentId::Firm(FirmId(i)),
            entries,
            AgentId::Worker,
        )?);
    }
    let mut worker_lists = Vec::with_capacity(n);
    for j in 0..n {
        let entries = (0..m)
            .map(|i| (FirmId(i), worker_utils.get(FirmId(i), WorkerId(j))))
            .collect();
        worker_lists.push(sorted_by_utility(
            AgentId::Worker(WorkerId(j)),
            entries,
            AgentId::Firm,
        )?);
    }
    Preferences::new(m, n, firm_lists, worker_lists)
}

/// One complete-information market. Validated at construction: no ties and
/// no zero utilities.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Market {
    firm_utils: UtilityMatrix,
    worker_utils: UtilityMatrix,
    prefs: Preferences,
}

impl Market {
    pub fn new(firm_utils: UtilityMatrix, worker_utils: UtilityMatrix) -> Result<Self> {
        let prefs = utilities_to_ordinal(&firm_utils, &worker_utils)?;
        Ok(Market {
            firm_utils,
            worker_utils,
            prefs,
        })
    }

    pub fn from_ints<R: AsRef<[i64]>>(firm_utils: &[R], worker_utils: &[R]) -> Result<Self> {
        Market::new(
            UtilityMatrix::from_ints(firm_utils)?,
            UtilityMatrix::from_ints(worker_utils)?,
        )
    }

    pub fn num_firms(&self) -> usize {
        self.firm_utils.rows()
    }

    pub fn num_workers(&self) -> usize {
        self.firm_utils.cols()
    }

    pub fn firm_utils(&self) -> &UtilityMatrix {
        &self.firm_utils
    }

    pub fn worker_utils(&self) -> &UtilityMatrix {
        &self.worker_utils
    }

    pub fn firm_utility(&self, firm: FirmId, worker: WorkerId) -> Rational {
        self.firm_utils.get(firm, worker)
    }

    pub fn worker_utility(&self, firm: FirmId, worker: WorkerId) -> Rational {
        self.worker_utils.get(firm, worker)
    }

    pub fn preferences(&self) -> &Preferences {
        &self.prefs
    }

    /// Every pair mutually acceptable (all utilities positive).
    pub fn is_all_acceptable(&self) -> bool {
        (0..self.num_firms()).all(|i| {
            (0..self.num_workers()).all(|j| {
                self.firm_utility(FirmId(i), WorkerId(j)).is_positive()
                    && self.worker_utility(FirmId(i), WorkerId(j)).is_positive()
            })
        })
    }

    pub fn restrict(&self, firms: &[FirmId], workers: &[WorkerId]) -> Market {
        Market::new(
            self.firm_utils.restrict(firms, workers),
            self.worker_utils.restrict(firms, workers),
        )
        .expect("restriction of a strict market is strict")
    }
}
