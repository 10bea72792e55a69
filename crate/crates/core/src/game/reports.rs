//! Worker reports, strategy profiles and strategy classes.

use std::fmt;
use std::str::FromStr;

use crate::economy::Economy;
use crate::error::{Error, Result};
use crate::market::{FirmId, WorkerId};

/// A worker's submitted list of acceptable firms, most preferred first.
pub type Report = Vec<FirmId>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum StrategyClass {
    /// The true list.
    Truthful,
    /// Prefixes of the true list, including the empty one.
    Truncation,
    /// Order-preserving sublists of the true list.
    Dropping,
    /// Any ordered list of distinct firms.
    Full,
}

impl StrategyClass {
    pub const ALL: [StrategyClass; 4] = [
        StrategyClass::Truthful,
        StrategyClass::Truncation,
        StrategyClass::Dropping,
        StrategyClass::Full,
    ];

    pub fn name(self) -> &'static str {
        match self {
            StrategyClass::Truthful => "truthful",
            StrategyClass::Truncation => "truncation",
            StrategyClass::Dropping => "dropping",
            StrategyClass::Full => "full",
        }
    }

    /// Whether `report` belongs to this class for a worker with `true_list`.
    pub fn contains(self, report: &[FirmId], true_list: &[FirmId]) -> bool {
        match self {
            StrategyClass::Truthful => report == true_list,
            StrategyClass::Truncation => true_list.starts_with(report),
            StrategyClass::Dropping => {
                let mut rest = true_list.iter();
                report.iter().all(|f| rest.any(|g| g == f))
            }
            StrategyClass::Full => true,
        }
    }
}

impl fmt::Display for StrategyClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for StrategyClass {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        StrategyClass::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown strategy class `{s}`")))
    }
}

/// Every report of `class` for a worker with `true_list` in a market with
/// `num_firms` firms, duplicate-free, in a fixed order:
///
/// - truncation: by increasing length;
/// - dropping: by bitmask over the true list, bit `i` keeping entry `i`;
/// - full: depth-first, each list followed by its extensions, firms tried in
///   index order.
pub fn enumerate_reports(true_list: &[FirmId], num_firms: usize, class: StrategyClass) -> Vec<Report> {
    match class {
        StrategyClass::Truthful => vec![true_list.to_vec()],
        StrategyClass::Truncation => (0..=true_list.len()).map(|k| true_list[..k].to_vec()).collect(),
        StrategyClass::Dropping => subsequences(true_list),
        StrategyClass::Full => {
            let firms: Vec<FirmId> = (0..num_firms).map(FirmId).collect();
            ordered_subsets(&firms)
        }
    }
}

pub(crate) fn subsequences(list: &[FirmId]) -> Vec<Report> {
    assert!(list.len() < 32, "too many firms to enumerate sublists");
    (0u32..1 << list.len())
        .map(|mask| {
            list.iter()
                .enumerate()
                .filter(|&(i, _)| mask >> i & 1 == 1)
                .map(|(_, &f)| f)
                .collect()
        })
        .collect()
}

/// Ordered subsets of `items` (which must be distinct), depth-first.
pub(crate) fn ordered_subsets(items: &[FirmId]) -> Vec<Report> {
    fn recurse(items: &[FirmId], used: &mut [bool], prefix: &mut Vec<FirmId>, out: &mut Vec<Report>) {
        out.push(prefix.clone());
        for i in 0..items.len() {
            if !used[i] {
                used[i] = true;
                prefix.push(items[i]);
                recurse(items, used, prefix, out);
                prefix.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    recurse(items, &mut vec![false; items.len()], &mut Vec::new(), &mut out);
    out
}

/// Number of reports `enumerate_reports` yields.
pub fn count_reports(list_len: usize, num_firms: usize, class: StrategyClass) -> u128 {
    match class {
        StrategyClass::Truthful => 1,
        StrategyClass::Truncation => list_len as u128 + 1,
        StrategyClass::Dropping => 1u128.checked_shl(list_len as u32).unwrap_or(u128::MAX),
        StrategyClass::Full => {
            let (mut total, mut term) = (1u128, 1u128);
            for k in 0..num_firms {
                term = term.saturating_mul((num_firms - k) as u128);
                total = total.saturating_add(term);
            }
            total
        }
    }
}

/// One report per worker. Firms are not part of a profile: they always
/// report truthfully.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct StrategyProfile {
    reports: Vec<Report>,
}

pub(crate) fn validate_report(worker: WorkerId, report: &[FirmId], num_firms: usize) -> Result<()> {
    for (k, f) in report.iter().enumerate() {
        if f.0 >= num_firms {
            return Err(Error::InvalidList {
                agent: worker.into(),
                reason: format!("{f} does not exist"),
            });
        }
        if report[..k].contains(f) {
            return Err(Error::InvalidList {
                agent: worker.into(),
                reason: format!("{f} is listed twice"),
            });
        }
    }
    Ok(())
}

impl StrategyProfile {
    pub fn new(num_firms: usize, reports: Vec<Report>) -> Result<Self> {
        for (j, r) in reports.iter().enumerate() {
            validate_report(WorkerId(j), r, num_firms)?;
        }
        Ok(StrategyProfile { reports })
    }

    /// Checks that the profile covers exactly the economy's workers.
    pub fn for_economy(economy: &Economy, reports: Vec<Report>) -> Result<Self> {
        if reports.len() != economy.num_workers() {
            return Err(Error::Dimension(format!(
                "{} reports for {} workers",
                reports.len(),
                economy.num_workers()
            )));
        }
        StrategyProfile::new(economy.num_firms(), reports)
    }

    pub fn truthful(economy: &Economy) -> Self {
        StrategyProfile {
            reports: (0..economy.num_workers())
                .map(|j| economy.worker_true_list(WorkerId(j)).to_vec())
                .collect(),
        }
    }

    pub fn num_workers(&self) -> usize {
        self.reports.len()
    }

    pub fn reports(&self) -> &[Report] {
        &self.reports
    }

    pub fn report(&self, worker: WorkerId) -> &[FirmId] {
        &self.reports[worker.0]
    }

    pub fn with_report(&self, worker: WorkerId, report: Report) -> Self {
        let mut reports = self.reports.clone();
        reports[worker.0] = report;
        StrategyProfile { reports }
    }
}

impl fmt::Display for StrategyProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (j, r) in self.reports.iter().enumerate() {
            if j > 0 {
                write!(f, "; ")?;
            }
            write!(f, "{}:[", WorkerId(j))?;
            for (k, firm) in r.iter().enumerate() {
                if k > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{firm}")?;
            }
            write!(f, "]")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    fn firms(ids: &[usize]) -> Report {
        ids.iter().map(|&i| FirmId(i)).collect()
    }

    #[test]
    fn report_counts_for_three_firms() {
        let truth = firms(&[1, 0, 2]);
        for (class, expected) in [
            (StrategyClass::Truthful, 1),
            (StrategyClass::Truncation, 4),
            (StrategyClass::Dropping, 8),
            (StrategyClass::Full, 16),
        ] {
            let reports = enumerate_reports(&truth, 3, class);
            assert_eq!(reports.len(), expected, "{class}");
            assert_eq!(count_reports(3, 3, class), expected as u128);
            let distinct: HashSet<_> = reports.iter().collect();
            assert_eq!(distinct.len(), expected);
            assert!(reports.iter().all(|r| class.contains(r, &truth)));
        }
    }

    #[test]
    fn full_count_matches_formula() {
        assert_eq!(count_reports(5, 5, StrategyClass::Full), 326);
        assert_eq!(enumerate_reports(&[], 5, StrategyClass::Full).len(), 326);
    }

    #[test]
    fn class_membership() {
        let truth = firms(&[1, 0, 2]);
        assert!(StrategyClass::Dropping.contains(&firms(&[1, 2]), &truth));
        assert!(!StrategyClass::Dropping.contains(&firms(&[2, 1]), &truth));
        assert!(!StrategyClass::Truncation.contains(&firms(&[1, 2]), &truth));
        assert!(StrategyClass::Truncation.contains(&firms(&[1, 0]), &truth));
    }

    #[test]
    fn class_names_round_trip() {
        for c in StrategyClass::ALL {
            assert_eq!(c.name().parse::<StrategyClass>().unwrap(), c);
        }
        assert!("everything".parse::<StrategyClass>().is_err());
    }

    #[test]
    fn duplicate_report_entries_rejected() {
        assert!(StrategyProfile::new(3, vec![firms(&[0, 0])]).is_err());
        assert!(StrategyProfile::new(3, vec![firms(&[3])]).is_err());
    }
}
