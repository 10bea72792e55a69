//! Multi-state economies with one-sided incomplete information.
//!
//! Firms' utilities vary by state; workers' utilities are a single matrix
//! shared by every state, so no worker learns the state from his own type.

use std::fmt;

use num_traits::{One, Signed};

use crate::da::{deferred_acceptance, ProposingSide};
use crate::error::{Error, Result};
use crate::market::{FirmId, Market, Preferences, UtilityMatrix, WorkerId};
use crate::matching::Matching;
use crate::stability::is_unique_stable;
use crate::Rational;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StateSpec {
    pub id: String,
    pub probability: Rational,
    pub firm_utils: UtilityMatrix,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EconomyState {
    id: String,
    probability: Rational,
    market: Market,
}

impl EconomyState {
    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn probability(&self) -> Rational {
        self.probability
    }

    pub fn market(&self) -> &Market {
        &self.market
    }

    pub fn preferences(&self) -> &Preferences {
        self.market.preferences()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Economy {
    firm_names: Vec<String>,
    worker_names: Vec<String>,
    worker_utils: UtilityMatrix,
    states: Vec<EconomyState>,
}

pub fn default_firm_names(m: usize) -> Vec<String> {
    (1..=m).map(|i| format!("f{i}")).collect()
}

pub fn default_worker_names(n: usize) -> Vec<String> {
    (1..=n).map(|j| format!("w{j}")).collect()
}

fn check_names(kind: &str, names: &[String], expected: usize) -> Result<()> {
    if names.len() != expected {
        return Err(Error::Dimension(format!(
            "{} {kind} names for {expected} {kind}s",
            names.len()
        )));
    }
    for (i, name) in names.iter().enumerate() {
        if name.is_empty() {
            return Err(Error::InvalidArgument(format!("{kind} {} has an empty name", i + 1)));
        }
        if names[..i].contains(name) {
            return Err(Error::InvalidArgument(format!("duplicate {kind} name `{name}`")));
        }
    }
    Ok(())
}

impl Economy {
    /// Validates full support, probabilities summing to one, consistent
    /// dimensions and strictness in every state.
    pub fn new(
        firm_names: Vec<String>,
        worker_names: Vec<String>,
        worker_utils: UtilityMatrix,
        states: Vec<StateSpec>,
    ) -> Result<Self> {
        let (m, n) = (worker_utils.rows(), worker_utils.cols());
        check_names("firm", &firm_names, m)?;
        check_names("worker", &worker_names, n)?;
        if states.is_empty() {
            return Err(Error::Belief("an economy needs at least one state".into()));
        }
        let mut total = Rational::from_integer(0);
        let mut built = Vec::with_capacity(states.len());
        for (k, spec) in states.into_iter().enumerate() {
            if !spec.probability.is_positive() {
                return Err(Error::Belief(format!(
                    "state `{}` has non-positive probability {}",
                    spec.id, spec.probability
                )));
            }
            if built.iter().any(|s: &EconomyState| s.id == spec.id) {
                return Err(Error::InvalidArgument(format!("duplicate state id `{}`", spec.id)));
            }
            if spec.firm_utils.rows() != m || spec.firm_utils.cols() != n {
                return Err(Error::Dimension(format!(
                    "state {} firm utilities are {}x{}, expected {m}x{n}",
                    k + 1,
                    spec.firm_utils.rows(),
                    spec.firm_utils.cols()
                )));
            }
            total += spec.probability;
            let market = Market::new(spec.firm_utils, worker_utils.clone())?;
            built.push(EconomyState {
                id: spec.id,
                probability: spec.probability,
                market,
            });
        }
        if !total.is_one() {
            return Err(Error::Belief(format!("state probabilities sum to {total}, not 1")));
        }
        Ok(Economy {
            firm_names,
            worker_names,
            worker_utils,
            states: built,
        })
    }

    /// A complete-information economy with one state of probability one.
    pub fn single(market: &Market) -> Self {
        Economy::new(
            default_firm_names(market.num_firms()),
            default_worker_names(market.num_workers()),
            market.worker_utils().clone(),
            vec![StateSpec {
                id: "1".into(),
                probability: Rational::one(),
                firm_utils: market.firm_utils().clone(),
            }],
        )
        .expect("a validated market forms a valid economy")
    }

    pub fn num_firms(&self) -> usize {
        self.worker_utils.rows()
    }

    pub fn num_workers(&self) -> usize {
        self.worker_utils.cols()
    }

    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    pub fn states(&self) -> &[EconomyState] {
        &self.states
    }

    pub fn state(&self, index: usize) -> &EconomyState {
        &self.states[index]
    }

    pub fn state_index(&self, id: &str) -> Option<usize> {
        self.states.iter().position(|s| s.id == id)
    }

    pub fn preferences(&self, state: usize) -> &Preferences {
        self.states[state].preferences()
    }

    pub fn worker_utils(&self) -> &UtilityMatrix {
        &self.worker_utils
    }

    pub fn worker_utility(&self, firm: FirmId, worker: WorkerId) -> Rational {
        self.worker_utils.get(firm, worker)
    }

    pub fn firm_utility(&self, state: usize, firm: FirmId, worker: WorkerId) -> Rational {
        self.states[state].market.firm_utility(firm, worker)
    }

    /// Worker's true list; identical in every state.
    pub fn worker_true_list(&self, worker: WorkerId) -> &[FirmId] {
        self.states[0].preferences().worker_list(worker)
    }

    pub fn firm_names(&self) -> &[String] {
        &self.firm_names
    }

    pub fn worker_names(&self) -> &[String] {
        &self.worker_names
    }

    pub fn firm_name(&self, firm: FirmId) -> &str {
        &self.firm_names[firm.0]
    }

    pub fn worker_name(&self, worker: WorkerId) -> &str {
        &self.worker_names[worker.0]
    }

    pub fn firm_by_name(&self, name: &str) -> Result<FirmId> {
        self.firm_names
            .iter()
            .position(|n| n == name)
            .map(FirmId)
            .ok_or_else(|| Error::UnknownName {
                kind: "firm",
                name: name.into(),
            })
    }

    pub fn worker_by_name(&self, name: &str) -> Result<WorkerId> {
        self.worker_names
            .iter()
            .position(|n| n == name)
            .map(WorkerId)
            .ok_or_else(|| Error::UnknownName {
                kind: "worker",
                name: name.into(),
            })
    }

    pub fn with_names(mut self, firm_names: Vec<String>, worker_names: Vec<String>) -> Result<Self> {
        check_names("firm", &firm_names, self.num_firms())?;
        check_names("worker", &worker_names, self.num_workers())?;
        self.firm_names = firm_names;
        self.worker_names = worker_names;
        Ok(self)
    }

    /// Same economy with different state probabilities (in state order).
    pub fn with_belief(&self, probabilities: &[Rational]) -> Result<Self> {
        if probabilities.len() != self.num_states() {
            return Err(Error::Belief(format!(
                "{} probabilities for {} states",
                probabilities.len(),
                self.num_states()
            )));
        }
        Economy::new(
            self.firm_names.clone(),
            self.worker_names.clone(),
            self.worker_utils.clone(),
            self.states
                .iter()
                .zip(probabilities)
                .map(|(s, &p)| StateSpec {
                    id: s.id.clone(),
                    probability: p,
                    firm_utils: s.market.firm_utils().clone(),
                })
                .collect(),
        )
    }

    /// Drop one state and renormalize the remaining probabilities.
    pub fn without_state(&self, index: usize) -> Result<Self> {
        if self.num_states() < 2 || index >= self.num_states() {
            return Err(Error::InvalidArgument(format!(
                "cannot remove state {index} from an economy with {} states",
                self.num_states()
            )));
        }
        let remaining = Rational::one() - self.states[index].probability;
        Economy::new(
            self.firm_names.clone(),
            self.worker_names.clone(),
            self.worker_utils.clone(),
            self.states
                .iter()
                .enumerate()
                .filter(|&(k, _)| k != index)
                .map(|(_, s)| StateSpec {
                    id: s.id.clone(),
                    probability: s.probability / remaining,
                    firm_utils: s.market.firm_utils().clone(),
                })
                .collect(),
        )
    }

    pub fn unique_stable_by_state(&self) -> Vec<bool> {
        self.states.iter().map(|s| is_unique_stable(s.preferences())).collect()
    }

    pub fn require_unique_stable(&self) -> Result<()> {
        match self.states.iter().find(|s| !is_unique_stable(s.preferences())) {
            Some(s) => Err(Error::NotUniquelyStable { state: s.id.clone() }),
            None => Ok(()),
        }
    }
}

/// State-indexed matchings, one per state in economy order.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct OutcomeMap(Vec<Matching>);

impl OutcomeMap {
    pub fn new(matchings: Vec<Matching>) -> Self {
        OutcomeMap(matchings)
    }

    pub fn state(&self, index: usize) -> &Matching {
        &self.0[index]
    }

    pub fn matchings(&self) -> &[Matching] {
        &self.0
    }

    pub fn num_states(&self) -> usize {
        self.0.len()
    }
}

impl fmt::Display for OutcomeMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, m) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, " | ")?;
            }
            write!(f, "{m}")?;
        }
        Ok(())
    }
}

/// The unique stable matching of each state, found by truthful DA.
pub fn stable_outcome_map(economy: &Economy) -> Result<OutcomeMap> {
    economy.require_unique_stable()?;
    Ok(OutcomeMap(
        economy
            .states()
            .iter()
            .map(|s| deferred_acceptance(s.preferences(), ProposingSide::Firms))
            .collect(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    fn two_state(p: Rational, q: Rational) -> Result<Economy> {
        Economy::new(
            default_firm_names(1),
            default_worker_names(2),
            UtilityMatrix::from_ints(&[[1, 2]]).unwrap(),
            vec![
                StateSpec {
                    id: "1".into(),
                    probability: p,
                    firm_utils: UtilityMatrix::from_ints(&[[2, 1]]).unwrap(),
                },
                StateSpec {
                    id: "2".into(),
                    probability: q,
                    firm_utils: UtilityMatrix::from_ints(&[[1, 2]]).unwrap(),
                },
            ],
        )
    }

    #[test]
    fn belief_must_sum_to_one_with_full_support() {
        assert!(two_state(r(1, 3), r(2, 3)).is_ok());
        assert!(matches!(two_state(r(1, 2), r(1, 3)), Err(Error::Belief(_))));
        assert!(matches!(two_state(r(1, 1), r(0, 1)), Err(Error::Belief(_))));
    }

    #[test]
    fn stable_map_of_single_state_economy() {
        let market = Market::from_ints(&[[2, 1], [1, 2]], &[[2, 1], [1, 2]]).unwrap();
        let economy = Economy::single(&market);
        let map = stable_outcome_map(&economy).unwrap();
        assert_eq!(map.num_states(), 1);
        assert_eq!(map.state(0).pairs(), vec![(FirmId(0), WorkerId(0)), (FirmId(1), WorkerId(1))]);
    }

    #[test]
    fn non_unique_state_is_reported() {
        let market = Market::from_ints(&[[2, 1], [1, 2]], &[[1, 2], [2, 1]]).unwrap();
        let economy = Economy::single(&market);
        assert!(matches!(stable_outcome_map(&economy), Err(Error::NotUniquelyStable { .. })));
    }

    #[test]
    fn removing_a_state_renormalizes() {
        let economy = two_state(r(1, 3), r(2, 3)).unwrap();
        let reduced = economy.without_state(0).unwrap();
        assert_eq!(reduced.num_states(), 1);
        assert_eq!(reduced.state(0).probability(), r(1, 1));
        assert_eq!(reduced.state(0).id(), "2");
    }

    #[test]
    fn names_resolve() {
        let economy = two_state(r(1, 2), r(1, 2)).unwrap();
        assert_eq!(economy.worker_by_name("w2").unwrap(), WorkerId(1));
        assert!(matches!(economy.firm_by_name("g"), Err(Error::UnknownName { .. })));
    }
}
