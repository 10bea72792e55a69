#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use matchlab::economy::{default_firm_names, default_worker_names};
use matchlab::{Economy, FirmId, Market, Matching, Preferences, Rational, StateSpec, UtilityMatrix, WorkerId};
use rand::seq::SliceRandom;
use rand::Rng;

/// Rows are firms. Each agent on the ranking side gets a shuffled set of
/// distinct values; with probability `drop` a value is negated.
pub fn random_utils<R: Rng>(rng: &mut R, m: usize, n: usize, firms_rank: bool, drop: f64) -> UtilityMatrix {
    let mut u = UtilityMatrix::filled(m, n, Rational::from_integer(1));
    let (outer, inner) = if firms_rank { (m, n) } else { (n, m) };
    for a in 0..outer {
        let mut values: Vec<i64> = (1..=inner as i64).collect();
        values.shuffle(rng);
        for (b, v) in values.into_iter().enumerate() {
            let v = if rng.gen_bool(drop) { -v } else { v };
            let (f, w) = if firms_rank { (a, b) } else { (b, a) };
            u.set(FirmId(f), WorkerId(w), Rational::from_integer(v));
        }
    }
    u
}

/// Every firm ranks the workers in the same order and accepts the same set.
pub fn assortative_firm_utils<R: Rng>(rng: &mut R, m: usize, n: usize, drop: f64) -> UtilityMatrix {
    let mut values: Vec<i64> = (1..=n as i64).collect();
    values.shuffle(rng);
    let values: Vec<i64> = values.into_iter().map(|v| if rng.gen_bool(drop) { -v } else { v }).collect();
    let mut u = UtilityMatrix::filled(m, n, Rational::from_integer(1));
    for i in 0..m {
        for (j, &v) in values.iter().enumerate() {
            u.set(FirmId(i), WorkerId(j), Rational::from_integer(v));
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

/// Random economy whose per-state firm utilities come from `firm_utils`.
pub fn economy_with<R: Rng>(
    rng: &mut R,
    max_m: usize,
    max_n: usize,
    states: usize,
    drop: f64,
    mut firm_utils: impl FnMut(&mut R, usize, usize) -> UtilityMatrix,
) -> Economy {
    let m = rng.gen_range(1..=max_m);
    let n = rng.gen_range(1..=max_n);
    let worker_utils = random_utils(rng, m, n, false, drop);
    let specs = random_belief(rng, states)
        .into_iter()
        .enumerate()
        .map(|(k, p)| StateSpec {
            id: (k + 1).to_string(),
            probability: p,
            firm_utils: firm_utils(rng, m, n),
        })
        .collect();
    Economy::new(default_firm_names(m), default_worker_names(n), worker_utils, specs).unwrap()
}

pub fn random_economy<R: Rng>(rng: &mut R, max_m: usize, max_n: usize, states: usize, drop: f64) -> Economy {
    economy_with(rng, max_m, max_n, states, drop, |r, m, n| random_utils(r, m, n, true, drop))
}

/// Draws until `accept` holds; panics after `tries` rejections.
pub fn sample<R: Rng>(rng: &mut R, tries: usize, mut draw: impl FnMut(&mut R) -> Economy, accept: impl Fn(&Economy) -> bool) -> Economy {
    for _ in 0..tries {
        let e = draw(rng);
        if accept(&e) {
            return e;
        }
    }
    panic!("no acceptable economy in {tries} draws");
}

/// Independent stability check straight from the lists.
pub fn oracle_is_stable(m: &Matching, prefs: &Preferences) -> bool {
    for i in 0..prefs.num_firms() {
        let f = FirmId(i);
        if let Some(w) = m.firm_partner(f) {
            if !prefs.firm_list(f).contains(&w) || !prefs.worker_list(w).contains(&f) {
                return false;
            }
        }
        for &w in prefs.firm_list(f) {
            if !prefs.worker_list(w).contains(&f) {
                continue;
            }
            let pos = |list: &[WorkerId], x: WorkerId| list.iter().position(|&y| y == x);
            let fpos = |list: &[FirmId], x: FirmId| list.iter().position(|&y| y == x);
            let firm_wants = match m.firm_partner(f) {
                None => true,
                Some(cur) => pos(prefs.firm_list(f), w) < pos(prefs.firm_list(f), cur),
            };
            let worker_wants = match m.worker_partner(w) {
                None => true,
                Some(cur) => fpos(prefs.worker_list(w), f) < fpos(prefs.worker_list(w), cur),
            };
            if firm_wants && worker_wants {
                return false;
            }
        }
    }
    true
}

/// Every stable matching, by trying every injective partial assignment.
pub fn oracle_stable_matchings(prefs: &Preferences) -> Vec<Matching> {
    fn go(i: usize, choice: &mut Vec<Option<WorkerId>>, used: &mut Vec<bool>, prefs: &Preferences, out: &mut Vec<Matching>) {
        if i == choice.len() {
            let pairs = choice.iter().enumerate().filter_map(|(f, w)| w.map(|w| (FirmId(f), w)));
            let m = Matching::from_pairs(choice.len(), used.len(), pairs).unwrap();
            if oracle_is_stable(&m, prefs) {
                out.push(m);
            }
            return;
        }
        choice[i] = None;
        go(i + 1, choice, used, prefs, out);
        for j in 0..used.len() {
            if !used[j] {
                used[j] = true;
                choice[i] = Some(WorkerId(j));
                go(i + 1, choice, used, prefs, out);
                used[j] = false;
            }
        }
        choice[i] = None;
    }
    let mut out = Vec::new();
    go(0, &mut vec![None; prefs.num_firms()], &mut vec![false; prefs.num_workers()], prefs, &mut out);
    out
}

/// The stable matching every firm weakly prefers to every other.
pub fn oracle_firm_optimal(prefs: &Preferences) -> Matching {
    let all = oracle_stable_matchings(prefs);
    let better_or_equal = |a: &Matching, b: &Matching| {
        (0..prefs.num_firms()).all(|i| {
            let f = FirmId(i);
            let (x, y) = (a.firm_partner(f), b.firm_partner(f));
            x == y || prefs.firm_prefers(f, x, y)
        })
    };
    all.iter()
        .find(|a| all.iter().all(|b| better_or_equal(a, b)))
        .cloned()
        .expect("the firm-optimal stable matching exists")
}

pub fn matchlab_bin() -> &'static str {
    env!("CARGO_BIN_EXE_matchlab")
}

pub fn run(args: &[&str]) -> Output {
    Command::new(matchlab_bin())
        .args(args)
        .env_remove("MATCHLAB_BUDGET")
        .output()
        .expect("matchlab runs")
}

pub fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

pub fn json(o: &Output) -> serde_json::Value {
    assert!(o.status.success(), "command failed: {}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_slice(&o.stdout).unwrap()
}

pub fn path(dir: &Path, file: &str) -> String {
    dir.join(file).to_string_lossy().into_owned()
}

pub fn gen_into(dir: &Path, args: &[&str]) -> PathBuf {
    let out = dir.to_string_lossy().into_owned();
    let mut full = vec!["gen"];
    full.extend_from_slice(args);
    full.extend_from_slice(&["--out", &out]);
    let o = run(&full);
    assert!(o.status.success(), "gen failed: {}", String::from_utf8_lossy(&o.stderr));
    dir.to_path_buf()
}
