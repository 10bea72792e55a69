//! The three-firm, three-worker, two-state economy with four equilibrium
//! outcomes.

use crate::constructions::{check_belief, outcome_of, profile_of, ConstructionBundle, NamedProfile};
use crate::economy::{default_firm_names, default_worker_names, Economy, StateSpec};
use crate::error::Result;
use crate::market::{FirmId, Market, UtilityMatrix, WorkerId};
use crate::Rational;

pub(crate) const FIRM_UTILS: [[[i64; 3]; 3]; 2] = [
    [[3, 1, 2], [2, 3, 1], [1, 2, 3]],
    [[3, 1, 2], [1, 3, 2], [1, 2, 3]],
];
pub(crate) const WORKER_UTILS: [[i64; 3]; 3] = [[2, 5, 2], [5, 2, 5], [1, 1, 1]];

/// Reports of the three non-truthful equilibria, 0-based firm indices.
pub(crate) const LAMBDA: [[&[usize]; 3]; 3] = [
    [&[1, 2], &[0, 1, 2], &[1, 2]],
    [&[1, 2], &[0, 2, 1], &[1, 0, 2]],
    [&[1, 2, 0], &[0, 1, 2], &[1]],
];

/// Per state, the firm of each worker under the truthful profile and under
/// each `LAMBDA` profile.
pub(crate) const OUTCOMES: [[[Option<usize>; 3]; 2]; 4] = [
    [[Some(0), Some(1), Some(2)], [Some(0), Some(1), Some(2)]],
    [[Some(1), Some(0), Some(2)], [Some(2), Some(0), Some(1)]],
    [[Some(1), Some(2), Some(0)], [Some(2), Some(0), Some(1)]],
    [[Some(1), Some(0), None], [Some(2), Some(0), Some(1)]],
];

/// The economy with state 1 drawn with probability `p1`.
pub fn motivating_economy(p1: Rational) -> Economy {
    check_belief(p1).expect("state 1 probability strictly between 0 and 1");
    Economy::new(
        default_firm_names(3),
        default_worker_names(3),
        UtilityMatrix::from_ints(&WORKER_UTILS).expect("constant matrix"),
        FIRM_UTILS
            .iter()
            .zip([p1, Rational::from_integer(1) - p1])
            .enumerate()
            .map(|(t, (u, p))| StateSpec {
                id: (t + 1).to_string(),
                probability: p,
                firm_utils: UtilityMatrix::from_ints(u).expect("constant matrix"),
            })
            .collect(),
    )
    .expect("constant economy is valid")
}

/// The market among f1, f3, w1, w3, which the economy augments with f2, w2.
pub fn outer_market() -> Market {
    motivating_economy(Rational::new(1, 2))
        .state(0)
        .market()
        .restrict(&[FirmId(0), FirmId(2)], &[WorkerId(0), WorkerId(2)])
}

pub fn motivating_example() -> ConstructionBundle {
    motivating_example_with_belief(Rational::new(1, 2)).expect("equal belief is valid")
}

pub fn motivating_example_with_belief(p1: Rational) -> Result<ConstructionBundle> {
    check_belief(p1)?;
    let economy = motivating_economy(p1);
    let outcome = |k: usize| outcome_of(3, OUTCOMES[k].iter().map(|s| s.to_vec()).collect());
    let mut profiles = vec![NamedProfile {
        name: "truthful".into(),
        profile: crate::game::StrategyProfile::truthful(&economy),
        expected: outcome(0)?,
    }];
    for (k, lists) in LAMBDA.iter().enumerate() {
        profiles.push(NamedProfile {
            name: format!("lambda{}", k + 1),
            profile: profile_of(&economy, lists.iter().map(|l| l.to_vec()).collect())?,
            expected: outcome(k + 1)?,
        });
    }
    ConstructionBundle {
        name: "motivating".into(),
        stable: outcome(0)?,
        economy,
        profiles,
        constraints: Vec::new(),
        original: Some(outer_market()),
        added_firms: vec![FirmId(1)],
        added_workers: vec![WorkerId(1)],
        rank_spec: None,
    }
    .verified()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::conditions::validate_augmented;

    #[test]
    fn motivating_values() {
        let economy = motivating_economy(Rational::new(1, 2));
        let f2 = FirmId(1);
        let row: Vec<Rational> = (0..3).map(|j| economy.firm_utility(1, f2, WorkerId(j))).collect();
        assert_eq!(row, [1, 3, 2].map(Rational::from_integer));
    }

    #[test]
    fn bundle_verifies_under_several_beliefs() {
        let bundle = motivating_example();
        assert_eq!(bundle.profiles.len(), 4);
        assert_eq!(
            bundle.profile("lambda2").unwrap().expected.state(0).to_string(),
            "{(f1,w3), (f2,w1), (f3,w2)}"
        );
        for p in [Rational::new(1, 3), Rational::new(4, 5)] {
            assert!(motivating_example_with_belief(p).is_ok());
        }
        assert!(motivating_example_with_belief(Rational::from_integer(1)).is_err());
    }

    #[test]
    fn augments_the_outer_market() {
        let bundle = motivating_example();
        let report = validate_augmented(
            bundle.original.as_ref().unwrap(),
            &bundle.economy,
            &bundle.added_firms,
            &bundle.added_workers,
        )
        .unwrap();
        assert!(report.is_valid());
    }
}
