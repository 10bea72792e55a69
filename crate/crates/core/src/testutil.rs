//! Random strict markets and economies for property tests.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::economy::{default_firm_names, default_worker_names, Economy, StateSpec};
use crate::market::{FirmId, Market, UtilityMatrix, WorkerId};
use crate::Rational;

/// Distinct utilities per agent; with probability `drop` an entry is made
/// negative (unacceptable).
pub fn random_utils<R: Rng>(rng: &mut R, m: usize, n: usize, firm_rows: bool, drop: f64) -> UtilityMatrix {
    let mut u = UtilityMatrix::filled(m, n, Rational::from_integer(1));
    let (outer, inner) = if firm_rows { (m, n) } else { (n, m) };
    for a in 0..outer {
        let mut values: Vec<i64> = (1..=inner as i64).collect();
        values.shuffle(rng);
        for (b, v) in values.into_iter().enumerate() {
            let v = if rng.gen_bool(drop) { -v } else { v };
            let (f, w) = if firm_rows { (a, b) } else { (b, a) };
            u.set(FirmId(f), WorkerId(w), Rational::from_integer(v));
        }
    }
    u
}

pub fn random_market<R: Rng>(rng: &mut R, max_m: usize, max_n: usize, drop: f64) -> Market {
    let m = rng.gen_range(1..=max_m);
    let n = rng.gen_range(1..=max_n);
    Market::new(random_utils(rng, m, n, true, drop), random_utils(rng, m, n, false, drop)).unwrap()
}

pub fn random_belief<R: Rng>(rng: &mut R, states: usize) -> Vec<Rational> {
    let weights: Vec<i64> = (0..states).map(|_| rng.gen_range(1..=4)).collect();
    let total: i64 = weights.iter().sum();
    weights.into_iter().map(|w| Rational::new(w, total)).collect()
}

pub fn random_economy<R: Rng>(rng: &mut R, max_m: usize, max_n: usize, states: usize, drop: f64) -> Economy {
    let m = rng.gen_range(1..=max_m);
    let n = rng.gen_range(1..=max_n);
    let worker_utils = random_utils(rng, m, n, false, drop);
    let belief = random_belief(rng, states);
    let specs = belief
        .into_iter()
        .enumerate()
        .map(|(k, p)| StateSpec {
            id: (k + 1).to_string(),
            probability: p,
            firm_utils: random_utils(rng, m, n, true, drop),
        })
        .collect();
    Economy::new(default_firm_names(m), default_worker_names(n), worker_utils, specs).unwrap()
}
