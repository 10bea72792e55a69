//! Acceptance suite: one PASS/FAIL line per criterion. Runs without the
//! libtest harness so the lines always reach the terminal.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use common::*;
use matchlab::conditions::{check_assortative, check_spc, check_spc_star, has_preference_cycle, spc_ordering};
use matchlab::constructions::{example2, motivating_example, prop4, ConstructionBundle};
use matchlab::game::{
    best_responses, compare_outcomes, enumerate_bne, expected_utilities, expected_utility, is_bne,
    is_bne_by_worker, is_weakly_undominated, matched_set_diff, play, unique_stable_for_reported,
    verify_top_top_matched, StrategyClass, StrategyProfile, Verdict,
};
use matchlab::stability::is_unique_stable;
use matchlab::{
    deferred_acceptance, deferred_acceptance_with, stable_outcome_map, AgentId, Economy, FirmId, OutcomeMap,
    ProposingSide, Rational, Schedule, Side, WorkerId,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check, u64);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn within(elapsed: Duration, limit: Duration) -> Result<(), String> {
    if elapsed > limit {
        Err(format!("took {elapsed:.2?}, limit {limit:?}"))
    } else {
        Ok(())
    }
}

fn named_profile(bundle: &ConstructionBundle, name: &str) -> StrategyProfile {
    bundle.profile(name).unwrap().profile.clone()
}

fn c1_motivating_goldens() -> Check {
    let dir = tempfile::tempdir().unwrap();
    gen_into(dir.path(), &["motivating"]);
    let econ = path(dir.path(), "economy.json");
    let mu = json!([["f1", "w1"], ["f2", "w2"], ["f3", "w3"]]);
    let goldens = [
        ("truthful", [mu.clone(), mu.clone()]),
        (
            "lambda1",
            [json!([["f1", "w2"], ["f2", "w1"], ["f3", "w3"]]), json!([["f1", "w2"], ["f2", "w3"], ["f3", "w1"]])],
        ),
        (
            "lambda2",
            [json!([["f1", "w3"], ["f2", "w1"], ["f3", "w2"]]), json!([["f1", "w2"], ["f2", "w3"], ["f3", "w1"]])],
        ),
        (
            "lambda3",
            [json!([["f1", "w2"], ["f2", "w1"]]), json!([["f1", "w2"], ["f2", "w3"], ["f3", "w1"]])],
        ),
    ];
    let mut checked = 0;
    for (name, states) in goldens {
        let v: Value = json(&run(&[
            "--format",
            "json",
            "play",
            &econ,
            "--profile",
            &path(dir.path(), &format!("profile-{name}.json")),
        ]));
        for (t, expected) in states.iter().enumerate() {
            let got = &v["states"][t]["pairs"];
            ensure!(got == expected, "{name} state {}: got {got}, expected {expected}", t + 1);
            checked += 1;
        }
    }
    Ok(format!("{checked} state-wise matchings"))
}

fn c2_motivating_equilibria() -> Check {
    let dir = tempfile::tempdir().unwrap();
    gen_into(dir.path(), &["motivating"]);
    let econ = path(dir.path(), "economy.json");
    for name in ["truthful", "lambda1", "lambda2", "lambda3"] {
        let v = json(&run(&[
            "--format",
            "json",
            "bne",
            "verify",
            &econ,
            "--profile",
            &path(dir.path(), &format!("profile-{name}.json")),
            "--class",
            "full",
        ]));
        ensure!(v["is_bne"] == true, "{name} is not a BNE under full: {}", v["witness"]);
    }

    let bundle = motivating_example();
    let expected: Vec<&OutcomeMap> = bundle.profiles.iter().map(|p| &p.expected).collect();
    let mut summary = Vec::new();
    for undominated in [true, false] {
        let result = enumerate_bne(&bundle.economy, StrategyClass::Full, undominated).map_err(|e| e.to_string())?;
        let outcomes = result.outcomes();
        for (k, o) in expected.iter().enumerate() {
            ensure!(outcomes.contains(o), "motivating outcome {k} missing (undominated_only={undominated})");
        }
        ensure!(
            result.groups.len() == 4,
            "expected 4 outcome groups, found {} (undominated_only={undominated})",
            result.groups.len()
        );
        summary.push(format!(
            "undominated_only={undominated}: {} profiles, {} equilibria, {} groups",
            result.profiles_swept,
            result.equilibria,
            result.groups.len()
        ));
        let expected_swept = if undominated { 125 } else { 4096 };
        ensure!(result.profiles_swept == expected_swept, "swept {}", result.profiles_swept);
    }
    Ok(summary.join("; "))
}

fn c3_truncation_failure() -> Check {
    let bundle = motivating_example();
    let e = &bundle.economy;
    let lambda1 = named_profile(&bundle, "lambda1");
    let mut parts = Vec::new();
    for j in [0, 2] {
        let w = WorkerId(j);
        let current = expected_utility(e, &lambda1, w);
        let (best, _) = best_responses(e, &lambda1, w, StrategyClass::Truncation);
        ensure!(best < current, "w{}: best truncation {best} is not below {current}", j + 1);
        parts.push(format!("w{}: {best} < {current}", j + 1));
    }
    Ok(parts.join(", "))
}

fn c4_lattice_and_rural_hospitals() -> Check {
    let bundle = motivating_example();
    let e = &bundle.economy;
    let outcome = |n: &str| bundle.profile(n).unwrap().expected.clone();
    let cmp = compare_outcomes(e, &outcome("lambda2"), &outcome("lambda1"));
    ensure!(cmp.firms[0] == Verdict::PrefersA, "f1: {:?}", cmp.firms[0]);
    ensure!(cmp.workers[2] == Verdict::PrefersA, "w3: {:?}", cmp.workers[2]);
    ensure!(cmp.firms[2] == Verdict::PrefersB, "f3: {:?}", cmp.firms[2]);
    ensure!(cmp.workers[1] == Verdict::PrefersB, "w2: {:?}", cmp.workers[1]);

    let w3 = AgentId::Worker(WorkerId(2));
    let lambda3 = outcome("lambda3");
    for name in ["truthful", "lambda1", "lambda2"] {
        let diff = matched_set_diff(&outcome(name), &lambda3);
        ensure!(diff.only_in_a[0].contains(&w3), "w3 not unmatched in state 1 under lambda3 vs {name}");
        ensure!(!diff.only_in_a[1].contains(&w3), "w3 also unmatched in state 2 under lambda3");
        ensure!(lambda3.state(0).worker_partner(WorkerId(2)).is_none(), "w3 matched under lambda3");
        ensure!(
            outcome(name).state(0).worker_partner(WorkerId(2)).is_some(),
            "w3 unmatched in state 1 under {name}"
        );
    }
    Ok("f1,w3 prefer lambda2; f3,w2 prefer lambda1; w3 unmatched only under lambda3".into())
}

fn unique_each_state(e: &Economy) -> bool {
    e.unique_stable_by_state().iter().all(|&u| u)
}

fn c5_truthful_and_top_top() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let (mut outcomes, mut multiple) = (0usize, 0usize);
    for k in 0..500 {
        let e = sample(&mut rng, 10_000, |r| random_economy(r, 3, 3, 2, 0.15), unique_each_state);
        let truthful = StrategyProfile::truthful(&e);
        ensure!(is_bne(&e, &truthful, StrategyClass::Full).is_bne, "economy {k}: truthful is not a BNE");
        let result = enumerate_bne(&e, StrategyClass::Full, false).map_err(|err| err.to_string())?;
        for g in &result.groups {
            ensure!(verify_top_top_matched(&e, &g.outcome), "economy {k}: an equilibrium splits a top-top pair");
        }
        outcomes += result.groups.len();
        multiple += usize::from(result.groups.len() > 1);
    }
    Ok(format!("500 economies, {outcomes} equilibrium outcomes, {multiple} with several"))
}

fn unique_outcome(e: &Economy, class: StrategyClass) -> Result<(), String> {
    let result = enumerate_bne(e, class, false).map_err(|err| err.to_string())?;
    let stable = stable_outcome_map(e).map_err(|err| err.to_string())?;
    if result.groups.len() != 1 || result.groups[0].outcome != stable {
        return Err(format!("{} outcome groups under {}", result.groups.len(), class.name()));
    }
    Ok(())
}

fn firm_assortative(e: &Economy) -> bool {
    e.states().iter().all(|s| check_assortative(s.preferences(), Side::Firms))
}

fn suite(
    seed: u64,
    class: StrategyClass,
    condition: &str,
    draw: impl Fn(&mut ChaCha8Rng) -> Economy,
    accept: impl Fn(&Economy) -> bool,
) -> Result<(), String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for k in 0..200 {
        let e = sample(&mut rng, 100_000, &draw, &accept);
        unique_outcome(&e, class).map_err(|m| format!("{condition} economy {k}: {m}"))?;
    }
    Ok(())
}

fn spc_star(e: &Economy) -> bool {
    check_spc_star(e).holds
}

fn draw_assortative(r: &mut ChaCha8Rng) -> Economy {
    economy_with(r, 3, 3, 2, 0.15, |r, m, n| assortative_firm_utils(r, m, n, 0.15))
}

fn draw_random(r: &mut ChaCha8Rng) -> Economy {
    random_economy(r, 3, 3, 2, 0.15)
}

fn c6_prop1() -> Check {
    suite(61, StrategyClass::Full, "assortative", draw_assortative, firm_assortative)?;
    suite(62, StrategyClass::Full, "SPC*", draw_random, spc_star)?;
    Ok("200 firm-assortative + 200 SPC* economies, one outcome each".into())
}

fn c7_prop2() -> Check {
    let acyclic = |e: &Economy| e.states().iter().all(|s| !has_preference_cycle(s.preferences()));
    suite(71, StrategyClass::Dropping, "acyclic", draw_random, acyclic)?;
    suite(72, StrategyClass::Dropping, "SPC*", draw_random, spc_star)?;
    Ok("200 cycle-free + 200 SPC* economies, one outcome each".into())
}

fn c8_example2() -> Check {
    let mut parts = Vec::new();
    for (n, golden) in [(6usize, Rational::new(5, 2)), (10, Rational::new(9, 2))] {
        let start = Instant::now();
        let bundle = example2(n).map_err(|e| e.to_string())?;
        let candidate = named_profile(&bundle, "candidate");
        let report = is_bne(&bundle.economy, &candidate, StrategyClass::Full);
        ensure!(report.is_bne, "n={n}: candidate has a deviation {:?}", report.witness);
        ensure!(report.undominated.iter().all(|&u| u), "n={n}: a report is not undominated");
        ensure!(
            unique_stable_for_reported(&bundle.economy, &candidate).iter().all(|&u| u),
            "n={n}: reported market not uniquely stable"
        );
        let stats = bundle.rank_improvements().map_err(|e| e.to_string())?.unwrap();
        let avg = stats.average[0];
        let half = Rational::new(n as i64, 2);
        ensure!(
            avg >= half - 2 && avg <= half + 2,
            "n={n}: state-1 average {avg} outside [{}, {}]",
            half - 2,
            half + 2
        );
        ensure!(avg == golden, "n={n}: state-1 average {avg}, frozen {golden}");
        within(start.elapsed(), Duration::from_secs(if n == 6 { 60 } else { 300 }))?;
        parts.push(format!("n={n}: average {avg}"));
    }
    Ok(parts.join(", "))
}

fn c9_prop4() -> Check {
    let (n, k) = (8usize, 3usize);
    let bundle = prop4(n, k).map_err(|e| e.to_string())?;
    let e = &bundle.economy;
    let candidate = named_profile(&bundle, "candidate");

    // Strategic workers: the first added worker, w_{n-1} and w_n.
    let added_w1 = bundle.added_workers[0];
    let strategic = [added_w1, WorkerId(n - 2), WorkerId(n - 1)];
    let classes: Vec<StrategyClass> = (0..e.num_workers())
        .map(|j| if strategic.contains(&WorkerId(j)) { StrategyClass::Full } else { StrategyClass::Dropping })
        .collect();
    let report = is_bne_by_worker(e, &candidate, &classes).map_err(|err| err.to_string())?;
    ensure!(report.is_bne, "deviation found: {:?}", report.witness);
    for j in 0..e.num_workers() {
        let w = WorkerId(j);
        let (r, truth) = (candidate.report(w), e.worker_true_list(w));
        ensure!(StrategyClass::Dropping.contains(r, truth), "{} does not play a dropping strategy", e.worker_name(w));
        ensure!(is_weakly_undominated(r, truth), "{} is dominated", e.worker_name(w));
    }

    let outcome = play(e, &candidate);
    let originals: Vec<FirmId> = (0..e.num_firms()).map(FirmId).filter(|f| !bundle.added_firms.contains(f)).collect();
    let rank = |w: WorkerId, f: FirmId| {
        e.worker_true_list(w)
            .iter()
            .filter(|g| originals.contains(g))
            .position(|&g| g == f)
            .map(|p| p as i64)
    };
    let mut improved = Vec::new();
    for j in 0..n {
        let w = WorkerId(j);
        let (a, b) = (outcome.state(0).worker_partner(w), outcome.state(1).worker_partner(w));
        let stable = bundle.stable.state(0).worker_partner(w);
        if a != b || bundle.stable.state(1).worker_partner(w) != stable {
            continue;
        }
        if let (Some(a), Some(s)) = (a, stable) {
            if let (Some(ra), Some(rs)) = (rank(w, a), rank(w, s)) {
                if rs - ra == k as i64 {
                    improved.push(e.worker_name(w).to_string());
                }
            }
        }
    }
    ensure!(improved.len() == n - k - 1, "{} workers improve by {k}: {improved:?}", improved.len());

    let (before, after) = (expected_utilities(e, &bundle.stable), expected_utilities(e, &outcome));
    for j in 0..e.num_workers() {
        ensure!(
            after[j] > before[j],
            "{}: candidate EU {} does not exceed stable {}",
            e.worker_name(WorkerId(j)),
            after[j],
            before[j]
        );
    }
    Ok(format!("improved by {k}: {}", improved.join(",")))
}

fn c10_oracles() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    for k in 0..1000 {
        let market = random_market(&mut rng, 4, 4, 0.2);
        let prefs = market.preferences();
        let da = deferred_acceptance(prefs, ProposingSide::Firms);
        ensure!(da == oracle_firm_optimal(prefs), "market {k}: DA differs from the firm-optimal stable matching");
        let count = oracle_stable_matchings(prefs).len();
        ensure!(is_unique_stable(prefs) == (count == 1), "market {k}: uniqueness disagrees with {count} matchings");
        for side in [ProposingSide::Firms, ProposingSide::Workers] {
            ensure!(
                deferred_acceptance_with(prefs, side, Schedule::Rounds)
                    == deferred_acceptance_with(prefs, side, Schedule::Sequential),
                "market {k}: schedules disagree for {side:?}"
            );
        }
    }
    Ok("1000 markets".into())
}

fn c11_structure() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let (mut acyclic, mut spc, mut assort) = (0, 0, 0);
    for k in 0..500 {
        let market = if k % 5 == 0 {
            let m = rand::Rng::gen_range(&mut rng, 1..=4);
            let n = rand::Rng::gen_range(&mut rng, 1..=4);
            matchlab::Market::new(
                assortative_firm_utils(&mut rng, m, n, 0.2),
                random_utils(&mut rng, m, n, false, 0.2),
            )
            .unwrap()
        } else {
            random_market(&mut rng, 4, 4, 0.2)
        };
        let prefs = market.preferences();
        let holds_spc = spc_ordering(prefs).is_some();
        let unique = oracle_stable_matchings(prefs).len() == 1;
        if !has_preference_cycle(prefs) {
            acyclic += 1;
            ensure!(holds_spc, "market {k}: no cycles but SPC fails");
        }
        if holds_spc {
            spc += 1;
            ensure!(unique, "market {k}: SPC holds but stable matching not unique");
        }
        if check_assortative(prefs, Side::Firms) {
            assort += 1;
            ensure!(holds_spc, "market {k}: firm-assortative but SPC fails");
        }
    }

    let bundle = motivating_example();
    let e = &bundle.economy;
    ensure!(!check_spc_star(e).holds, "motivating economy satisfies SPC*");
    let (firms, workers) = ([FirmId(0), FirmId(2)], [WorkerId(0), WorkerId(2)]);
    for t in 0..e.num_states() {
        let restricted = e.preferences(t).restrict(&firms, &workers);
        let orderings = check_spc(&restricted).map_err(|err| err.to_string())?;
        ensure!(!orderings.is_empty(), "state {}: restriction fails SPC", t + 1);
        ensure!(
            orderings.iter().all(|o| o.pairs()[0] == (FirmId(0), WorkerId(0))),
            "state {}: an ordering does not start with (f1,w1)",
            t + 1
        );
    }
    Ok(format!("500 markets ({acyclic} acyclic, {spc} SPC, {assort} firm-assortative)"))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 11] = [
        ("motivating economy goldens", c1_motivating_goldens, 1),
        ("motivating economy equilibria", c2_motivating_equilibria, 5),
        ("truncation failure", c3_truncation_failure, 1),
        ("lattice and rural-hospital breakdown", c4_lattice_and_rural_hospitals, 1),
        ("truthful BNE and top-top pairs", c5_truthful_and_top_top, 120),
        ("unique outcome under full (assortative, SPC*)", c6_prop1, 300),
        ("unique outcome under dropping (acyclic, SPC*)", c7_prop2, 300),
        ("augmented cycle-free economy at n = 6, 10", c8_example2, 360),
        ("augmented assortative market (8, 3)", c9_prop4, 120),
        ("oracle equivalences", c10_oracles, 60),
        ("structure-checker cross-validation", c11_structure, 60),
    ];
    let mut failed = 0;
    for (i, (name, check, limit)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(check))
            .unwrap_or_else(|p| {
                Err(p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_default())
            })
            .and_then(|detail| within(start.elapsed(), Duration::from_secs(limit)).map(|_| detail));
        let elapsed = start.elapsed();
        match result {
            Ok(detail) => println!("criterion {:>2} PASS  {name} [{elapsed:.2?}]: {detail}", i + 1),
            Err(reason) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name} [{elapsed:.2?}]: {reason}", i + 1);
            }
        }
    }
    println!("{} passed, {failed} failed", 11 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
