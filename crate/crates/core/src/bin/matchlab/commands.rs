use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use matchlab::conditions::{
    check_assortative, check_spc_star, find_preference_cycles, spc_ordering, validate_augmented,
};
use matchlab::constructions::{self, ConstructionBundle};
use matchlab::economy::Economy;
use matchlab::game::{
    compare_outcomes, enumerate_bne_with, expected_utilities, is_bne, matched_set_diff, play_with, rank_stats,
    EnumerateOptions, StrategyProfile, Verdict,
};
use matchlab::io::{load_economy, load_profile, manifest, save_economy, save_profile, EnumerationView};
use matchlab::stability::is_unique_stable;
use matchlab::{deferred_acceptance, Error, FirmId, ProposingSide, Result, Side, WorkerId};
use serde_json::{json, Value};

use crate::render::{self, firm, num, worker};
use crate::{BneCommand, CheckArgs, GenCommand, PlayArgs, SideArg, StatsArgs};

pub struct Output {
    pub text: String,
    pub json: Value,
}

fn side(arg: SideArg) -> Side {
    match arg {
        SideArg::Firms => Side::Firms,
        SideArg::Workers => Side::Workers,
    }
}

fn holds(flag: bool) -> &'static str {
    if flag {
        "holds"
    } else {
        "fails"
    }
}

pub fn gen(which: GenCommand) -> Result<Output> {
    let (bundle, common) = match which {
        GenCommand::Motivating(common) => (
            constructions::motivating::motivating_example_with_belief(common.p1)?,
            common,
        ),
        GenCommand::Example2 { n, common } => (constructions::example2::example2_with_belief(n, common.p1)?, common),
        GenCommand::Prop4 { n, k, common } => (constructions::prop4::prop4_with_belief(n, k, common.p1)?, common),
        GenCommand::Append { input, common } => {
            let original = load_economy(&input)?;
            if original.num_states() != 1 {
                return Err(Error::InvalidArgument(format!(
                    "{} has {} states; append needs a complete-information market",
                    input.display(),
                    original.num_states()
                )));
            }
            let bundle = constructions::append_block_named(
                original.state(0).market(),
                original.firm_names().to_vec(),
                original.worker_names().to_vec(),
                common.p1,
            )?;
            (bundle, common)
        }
    };
    write_bundle(&bundle, &common.out)
}

fn original_economy(bundle: &ConstructionBundle) -> Result<Option<Economy>> {
    let Some(market) = &bundle.original else {
        return Ok(None);
    };
    let e = &bundle.economy;
    let firms = (0..e.num_firms())
        .map(FirmId)
        .filter(|f| !bundle.added_firms.contains(f))
        .map(|f| firm(e, f))
        .collect();
    let workers = (0..e.num_workers())
        .map(WorkerId)
        .filter(|w| !bundle.added_workers.contains(w))
        .map(|w| worker(e, w))
        .collect();
    Economy::single(market).with_names(firms, workers).map(Some)
}

fn write_bundle(bundle: &ConstructionBundle, out: &Path) -> Result<Output> {
    fs::create_dir_all(out)?;
    let e = &bundle.economy;
    let mut files = vec!["economy.json".to_string()];
    save_economy(&out.join("economy.json"), e)?;
    let original = original_economy(bundle)?;
    if let Some(original) = &original {
        save_economy(&out.join("original.json"), original)?;
        files.push("original.json".into());
    }
    let profile_file = |name: &str| format!("profile-{name}.json");
    for p in &bundle.profiles {
        save_profile(&out.join(profile_file(&p.name)), e, &p.profile)?;
        files.push(profile_file(&p.name));
    }
    let m = manifest(bundle, "economy.json", original.as_ref().map(|_| "original.json"), profile_file)?;
    fs::write(out.join("manifest.json"), m.to_json())?;
    files.push("manifest.json".into());

    let mut text = format!(
        "{}: {} firms, {} workers, {} states\n",
        bundle.name,
        e.num_firms(),
        e.num_workers(),
        e.num_states()
    );
    text += "stable:\n";
    text += &render::outcome_lines(e, &bundle.stable, "  ");
    for p in &bundle.profiles {
        let _ = writeln!(text, "profile {}:", p.name);
        text += &render::outcome_lines(e, &p.expected, "  ");
    }
    for c in &bundle.constraints {
        let _ = writeln!(text, "constraint {}: {} > {} ({})", c.description, c.lhs, c.rhs, holds(c.holds()));
    }
    if let Some(r) = &m.rank_improvements {
        for s in &r.states {
            let diffs: Vec<String> = s
                .differences
                .iter()
                .map(|d| format!("{} {:+}", d.worker, d.improvement))
                .collect();
            let avg = serde_json::to_string(&s.average).expect("numbers serialize");
            let _ = writeln!(
                text,
                "rank improvement under {} in state {}: {} (average {})",
                r.profile,
                s.state,
                diffs.join(", "),
                avg.trim_matches('"')
            );
        }
    }
    for f in &files {
        let _ = writeln!(text, "wrote {}", out.join(f).display());
    }
    Ok(Output {
        text,
        json: json!({
            "files": files,
            "manifest": serde_json::to_value(&m).expect("manifest serializes"),
        }),
    })
}

pub fn check(args: CheckArgs) -> Result<Output> {
    let e = load_economy(&args.economy)?;
    let none = !(args.spc || args.spc_star || args.cycles || args.unique_stable)
        && args.assortative.is_none()
        && args.augmented.is_none();
    let mut text = String::new();
    let mut out = serde_json::Map::new();
    let states = 0..e.num_states();
    let id = |t: usize| e.state(t).id().to_string();

    if args.spc || none {
        let mut rows = Vec::new();
        for t in states.clone() {
            let ordering = spc_ordering(e.preferences(t));
            match &ordering {
                Some(o) => {
                    let _ = writeln!(text, "spc state {}: holds {}", id(t), render::ordering(&e, o));
                }
                None => {
                    let _ = writeln!(text, "spc state {}: fails", id(t));
                }
            }
            rows.push(json!({
                "state": id(t),
                "holds": ordering.is_some(),
                "ordering": ordering.as_ref().map(|o| render::ordering_json(&e, o)),
            }));
        }
        out.insert("spc".into(), Value::Array(rows));
    }
    if args.spc_star || none {
        let report = check_spc_star(&e);
        let _ = writeln!(text, "spc-star: {}", holds(report.holds));
        if let Some(w) = &report.witness {
            for (t, o) in w.iter().enumerate() {
                let _ = writeln!(text, "  state {}: {}", id(t), render::ordering(&e, o));
            }
        }
        if !report.spc_failures.is_empty() {
            let failing: Vec<String> = report.spc_failures.iter().map(|&t| id(t)).collect();
            let _ = writeln!(text, "  spc fails in state(s) {}", failing.join(", "));
        }
        out.insert(
            "spc_star".into(),
            json!({
                "holds": report.holds,
                "witness": report.witness.as_ref().map(|w| w.iter().map(|o| render::ordering_json(&e, o)).collect::<Vec<_>>()),
                "spc_failures": report.spc_failures.iter().map(|&t| id(t)).collect::<Vec<_>>(),
            }),
        );
    }
    if args.cycles || none {
        let mut rows = Vec::new();
        for t in states.clone() {
            let cycles = find_preference_cycles(e.preferences(t), None);
            if cycles.is_empty() {
                let _ = writeln!(text, "cycles state {}: none", id(t));
            } else {
                let shown: Vec<String> = cycles.iter().map(|c| render::cycle(&e, c)).collect();
                let _ = writeln!(text, "cycles state {}: {}", id(t), shown.join(" "));
            }
            rows.push(json!({
                "state": id(t),
                "cycles": cycles.iter().map(|c| render::cycle_json(&e, c)).collect::<Vec<_>>(),
            }));
        }
        out.insert("cycles".into(), Value::Array(rows));
    }
    if let Some(arg) = args.assortative {
        let s = side(arg);
        let label = match arg {
            SideArg::Firms => "firms",
            SideArg::Workers => "workers",
        };
        let mut rows = Vec::new();
        for t in states.clone() {
            let ok = check_assortative(e.preferences(t), s);
            let _ = writeln!(text, "assortative ({label}) state {}: {}", id(t), holds(ok));
            rows.push(json!({"state": id(t), "holds": ok}));
        }
        out.insert("assortative".into(), json!({"side": label, "states": rows}));
    }
    if args.unique_stable || none {
        let mut rows = Vec::new();
        for t in states.clone() {
            let prefs = e.preferences(t);
            let unique = is_unique_stable(prefs);
            let m = deferred_acceptance(prefs, ProposingSide::Firms);
            if unique {
                let _ = writeln!(text, "unique-stable state {}: holds {}", id(t), render::matching(&e, &m));
            } else {
                let _ = writeln!(text, "unique-stable state {}: fails", id(t));
            }
            rows.push(json!({
                "state": id(t),
                "holds": unique,
                "matching": unique.then(|| json!(m.pairs().into_iter().map(|(f, w)| [firm(&e, f), worker(&e, w)]).collect::<Vec<_>>())),
            }));
        }
        out.insert("unique_stable".into(), Value::Array(rows));
    }
    if let Some(path) = &args.augmented {
        let original = load_economy(path)?;
        if original.num_states() != 1 {
            return Err(Error::InvalidArgument(format!(
                "{} is not a complete-information market",
                path.display()
            )));
        }
        let added_firms: Vec<FirmId> = (0..e.num_firms())
            .map(FirmId)
            .filter(|&f| !original.firm_names().iter().any(|n| n == e.firm_name(f)))
            .collect();
        let added_workers: Vec<WorkerId> = (0..e.num_workers())
            .map(WorkerId)
            .filter(|&w| !original.worker_names().iter().any(|n| n == e.worker_name(w)))
            .collect();
        let kept_firms: Vec<&str> = (0..e.num_firms())
            .map(FirmId)
            .filter(|f| !added_firms.contains(f))
            .map(|f| e.firm_name(f))
            .collect();
        let kept_workers: Vec<&str> = (0..e.num_workers())
            .map(WorkerId)
            .filter(|w| !added_workers.contains(w))
            .map(|w| e.worker_name(w))
            .collect();
        if kept_firms != original.firm_names() || kept_workers != original.worker_names() {
            return Err(Error::InvalidArgument(
                "original agents must appear in the economy in the same order".into(),
            ));
        }
        let report = validate_augmented(original.state(0).market(), &e, &added_firms, &added_workers)?;
        let _ = writeln!(text, "augmented: {}", holds(report.is_valid()));
        for f in &report.failures {
            let _ = writeln!(text, "  {f}");
        }
        out.insert(
            "augmented".into(),
            json!({
                "holds": report.is_valid(),
                "added_firms": added_firms.iter().map(|&f| firm(&e, f)).collect::<Vec<_>>(),
                "added_workers": added_workers.iter().map(|&w| worker(&e, w)).collect::<Vec<_>>(),
                "restriction_matches": report.restriction_matches,
                "added_workers_state_independent": report.added_workers_state_independent,
                "belief_nondegenerate": report.belief_nondegenerate,
                "unique_stable": report.unique_stable,
                "failures": report.failures,
            }),
        );
    }
    Ok(Output {
        text,
        json: Value::Object(out),
    })
}

fn eu_line(e: &Economy, eu: &[matchlab::Rational]) -> String {
    let parts: Vec<String> = eu
        .iter()
        .enumerate()
        .map(|(j, v)| format!("{} {v}", worker(e, WorkerId(j))))
        .collect();
    parts.join(", ")
}

fn eu_json(e: &Economy, eu: &[matchlab::Rational]) -> Value {
    Value::Array(
        eu.iter()
            .enumerate()
            .map(|(j, &v)| json!({"worker": worker(e, WorkerId(j)), "expected_utility": num(v)}))
            .collect(),
    )
}

pub fn play(args: PlayArgs) -> Result<Output> {
    let e = load_economy(&args.economy)?;
    let profile = load_profile(&args.profile, &e)?;
    let proposing = match args.proposing {
        SideArg::Firms => ProposingSide::Firms,
        SideArg::Workers => ProposingSide::Workers,
    };
    let outcome = play_with(&e, &profile, proposing);
    let shown: Vec<usize> = match &args.state {
        Some(s) => vec![e.state_index(s).ok_or_else(|| Error::UnknownName {
            kind: "state",
            name: s.clone(),
        })?],
        None => (0..e.num_states()).collect(),
    };
    let mut text = String::new();
    let mut rows = Vec::new();
    for t in shown {
        let m = outcome.state(t);
        let prefs = e.preferences(t);
        let state = e.state(t);
        let _ = writeln!(
            text,
            "state {} (p={}): {}",
            state.id(),
            state.probability(),
            render::matching(&e, m)
        );
        let rank_text = |r: Option<usize>, matched: bool| match (r, matched) {
            (Some(r), _) => (r + 1).to_string(),
            (None, true) => "unlisted".into(),
            (None, false) => "-".into(),
        };
        let mut firm_ranks = Vec::new();
        let mut texts = Vec::new();
        for i in 0..e.num_firms() {
            let f = FirmId(i);
            let partner = m.firm_partner(f);
            let r = partner.and_then(|w| prefs.firm_rank(f, w));
            texts.push(format!("{} {}", firm(&e, f), rank_text(r, partner.is_some())));
            firm_ranks.push(json!({
                "firm": firm(&e, f),
                "partner": partner.map(|w| worker(&e, w)),
                "rank": r.map(|r| r + 1),
            }));
        }
        let _ = writeln!(text, "  firm ranks: {}", texts.join(", "));
        let mut worker_ranks = Vec::new();
        let mut texts = Vec::new();
        for j in 0..e.num_workers() {
            let w = WorkerId(j);
            let partner = m.worker_partner(w);
            let r = partner.and_then(|f| prefs.worker_rank(w, f));
            texts.push(format!("{} {}", worker(&e, w), rank_text(r, partner.is_some())));
            worker_ranks.push(json!({
                "worker": worker(&e, w),
                "partner": partner.map(|f| firm(&e, f)),
                "rank": r.map(|r| r + 1),
            }));
        }
        let _ = writeln!(text, "  worker ranks: {}", texts.join(", "));
        rows.push(json!({
            "state": state.id(),
            "probability": state.probability().to_string(),
            "pairs": m.pairs().into_iter().map(|(f, w)| [firm(&e, f), worker(&e, w)]).collect::<Vec<_>>(),
            "firm_ranks": firm_ranks,
            "worker_ranks": worker_ranks,
        }));
    }
    let eu = expected_utilities(&e, &outcome);
    let _ = writeln!(text, "expected utility: {}", eu_line(&e, &eu));
    Ok(Output {
        text,
        json: json!({
            "proposing": match proposing { ProposingSide::Firms => "firms", ProposingSide::Workers => "workers" },
            "states": rows,
            "expected_utilities": eu_json(&e, &eu),
        }),
    })
}

pub fn bne(which: BneCommand) -> Result<Output> {
    match which {
        BneCommand::Verify { economy, profile, class } => {
            let e = load_economy(&economy)?;
            let profile = load_profile(&profile, &e)?;
            verify(&e, &profile, class)
        }
        BneCommand::Enumerate {
            economy,
            class,
            undominated_only,
            budget,
        } => {
            let e = load_economy(&economy)?;
            let options = EnumerateOptions::new(class)
                .undominated_only(undominated_only)
                .budget(budget);
            let result = enumerate_bne_with(&e, &options)?;
            let mut text = format!(
                "class {class}{}: {} profiles swept, {} equilibria, {} outcome maps\n",
                if undominated_only { " (undominated only)" } else { "" },
                result.profiles_swept,
                result.equilibria,
                result.groups.len()
            );
            for (k, g) in result.groups.iter().enumerate() {
                let _ = writeln!(text, "outcome {} ({} profiles):", k + 1, g.profiles);
                text += &render::outcome_lines(&e, &g.outcome, "  ");
                let reps: Vec<String> = g
                    .representative
                    .reports()
                    .iter()
                    .enumerate()
                    .map(|(j, r)| format!("{} {}", worker(&e, WorkerId(j)), render::report(&e, r)))
                    .collect();
                let _ = writeln!(text, "  representative: {}", reps.join(", "));
            }
            let view = EnumerationView::new(&e, class, undominated_only, &result);
            Ok(Output {
                text,
                json: serde_json::to_value(&view).expect("views serialize"),
            })
        }
    }
}

fn verify(e: &Economy, profile: &StrategyProfile, class: matchlab::game::StrategyClass) -> Result<Output> {
    let report = is_bne(e, profile, class);
    let mut text = format!(
        "class {class}: {}\n",
        if report.is_bne { "BNE" } else { "not a BNE" }
    );
    text += &render::outcome_lines(e, &report.outcome, "  ");
    let _ = writeln!(text, "expected utility: {}", eu_line(e, &report.expected_utilities));
    if let Some(d) = &report.witness {
        let _ = writeln!(
            text,
            "deviation: {} reports {} and gains {} ({} -> {})",
            worker(e, d.worker),
            render::report(e, &d.report),
            d.gain(),
            d.current,
            d.improved
        );
    }
    let undominated: Vec<String> = report
        .undominated
        .iter()
        .enumerate()
        .map(|(j, &u)| format!("{} {}", worker(e, WorkerId(j)), if u { "yes" } else { "no" }))
        .collect();
    let _ = writeln!(text, "top-first reports: {}", undominated.join(", "));
    let unique: Vec<String> = report
        .unique_stable_for_reported
        .iter()
        .enumerate()
        .map(|(t, &u)| format!("state {} {}", e.state(t).id(), if u { "yes" } else { "no" }))
        .collect();
    let _ = writeln!(text, "unique stable for reported lists: {}", unique.join(", "));
    Ok(Output {
        text,
        json: json!({
            "class": class.name(),
            "is_bne": report.is_bne,
            "outcome": render::outcome(e, &report.outcome),
            "expected_utilities": eu_json(e, &report.expected_utilities),
            "witness": report.witness.as_ref().map(|d| json!({
                "worker": worker(e, d.worker),
                "report": render::report_json(e, &d.report),
                "current": num(d.current),
                "improved": num(d.improved),
                "gain": num(d.gain()),
            })),
            "undominated": report.undominated.iter().enumerate().map(|(j, &u)| json!({"worker": worker(e, WorkerId(j)), "top_first": u})).collect::<Vec<_>>(),
            "unique_stable_for_reported": report.unique_stable_for_reported.iter().enumerate().map(|(t, &u)| json!({"state": e.state(t).id(), "holds": u})).collect::<Vec<_>>(),
        }),
    })
}

fn verdict_name(v: Verdict) -> &'static str {
    match v {
        Verdict::PrefersA => "base",
        Verdict::PrefersB => "alt",
        Verdict::Indifferent => "indifferent",
        Verdict::Mixed => "mixed",
    }
}

pub fn stats(args: StatsArgs) -> Result<Output> {
    let e = load_economy(&args.economy)?;
    let base = play_with(&e, &load_profile(&args.base, &e)?, ProposingSide::Firms);
    let alt = play_with(&e, &load_profile(&args.alt, &e)?, ProposingSide::Firms);
    let workers: Vec<WorkerId> = match &args.workers {
        Some(names) => names
            .iter()
            .map(|n| e.worker_by_name(n.trim()))
            .collect::<Result<_>>()?,
        None => (0..e.num_workers()).map(WorkerId).collect(),
    };
    let ranks = rank_stats(&e, &base, &alt, &workers, None)?;
    let cmp = compare_outcomes(&e, &base, &alt);
    let diff = matched_set_diff(&base, &alt);
    let (eu_base, eu_alt) = (expected_utilities(&e, &base), expected_utilities(&e, &alt));

    let mut text = String::from("base:\n");
    text += &render::outcome_lines(&e, &base, "  ");
    text += "alt:\n";
    text += &render::outcome_lines(&e, &alt, "  ");
    let mut rank_rows = Vec::new();
    for (t, (diffs, avg)) in ranks.differences.iter().zip(&ranks.average).enumerate() {
        let cells: Vec<String> = diffs.iter().map(|&(w, d)| format!("{} {d:+}", worker(&e, w))).collect();
        let _ = writeln!(
            text,
            "rank improvement state {}: {} (average {avg})",
            e.state(t).id(),
            cells.join(", ")
        );
        rank_rows.push(json!({
            "state": e.state(t).id(),
            "differences": diffs.iter().map(|&(w, d)| json!({"worker": worker(&e, w), "improvement": d})).collect::<Vec<_>>(),
            "average": num(*avg),
        }));
    }
    let firm_verdicts: Vec<String> = cmp
        .firms
        .iter()
        .enumerate()
        .map(|(i, &v)| format!("{} {}", firm(&e, FirmId(i)), verdict_name(v)))
        .collect();
    let worker_verdicts: Vec<String> = cmp
        .workers
        .iter()
        .enumerate()
        .map(|(j, &v)| format!("{} {}", worker(&e, WorkerId(j)), verdict_name(v)))
        .collect();
    let _ = writeln!(text, "firms prefer: {}", firm_verdicts.join(", "));
    let _ = writeln!(text, "workers prefer: {}", worker_verdicts.join(", "));
    for j in 0..e.num_workers() {
        let _ = writeln!(
            text,
            "expected utility {}: base {} alt {}",
            worker(&e, WorkerId(j)),
            eu_base[j],
            eu_alt[j]
        );
    }
    let mut diff_rows = Vec::new();
    for t in 0..e.num_states() {
        let names = |s: &std::collections::BTreeSet<matchlab::AgentId>| -> Vec<String> {
            s.iter().map(|&a| render::agent(&e, a)).collect()
        };
        let (a, b) = (names(&diff.only_in_a[t]), names(&diff.only_in_b[t]));
        let _ = writeln!(
            text,
            "matched only under base, state {}: {}",
            e.state(t).id(),
            if a.is_empty() { "-".into() } else { a.join(", ") }
        );
        let _ = writeln!(
            text,
            "matched only under alt, state {}: {}",
            e.state(t).id(),
            if b.is_empty() { "-".into() } else { b.join(", ") }
        );
        diff_rows.push(json!({"state": e.state(t).id(), "only_base": a, "only_alt": b}));
    }
    Ok(Output {
        text,
        json: json!({
            "base": render::outcome(&e, &base),
            "alt": render::outcome(&e, &alt),
            "rank_improvements": rank_rows,
            "firm_verdicts": cmp.firms.iter().enumerate().map(|(i, &v)| json!({"firm": firm(&e, FirmId(i)), "prefers": verdict_name(v)})).collect::<Vec<_>>(),
            "worker_verdicts": cmp.workers.iter().enumerate().map(|(j, &v)| json!({"worker": worker(&e, WorkerId(j)), "prefers": verdict_name(v)})).collect::<Vec<_>>(),
            "expected_utilities": (0..e.num_workers()).map(|j| json!({"worker": worker(&e, WorkerId(j)), "base": num(eu_base[j]), "alt": num(eu_alt[j])})).collect::<Vec<_>>(),
            "matched_set_diff": diff_rows,
        }),
    })
}
