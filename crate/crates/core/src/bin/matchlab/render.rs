use matchlab::conditions::{PreferenceCycle, SpcOrdering};
use matchlab::economy::{Economy, OutcomeMap};
use matchlab::io::Number;
use matchlab::{AgentId, FirmId, Matching, Rational, WorkerId};
use serde_json::{json, Value};

pub fn firm(e: &Economy, f: FirmId) -> String {
    e.firm_name(f).to_string()
}

pub fn worker(e: &Economy, w: WorkerId) -> String {
    e.worker_name(w).to_string()
}

pub fn agent(e: &Economy, a: AgentId) -> String {
    match a {
        AgentId::Firm(f) => firm(e, f),
        AgentId::Worker(w) => worker(e, w),
    }
}

pub fn num(r: Rational) -> Value {
    serde_json::to_value(Number(r)).expect("numbers serialize")
}

pub fn matching(e: &Economy, m: &Matching) -> String {
    let pairs: Vec<String> = m
        .pairs()
        .into_iter()
        .map(|(f, w)| format!("({},{})", firm(e, f), worker(e, w)))
        .collect();
    format!("{{{}}}", pairs.join(", "))
}

pub fn outcome_lines(e: &Economy, o: &OutcomeMap, indent: &str) -> String {
    o.matchings()
        .iter()
        .enumerate()
        .map(|(t, m)| format!("{indent}state {}: {}\n", e.state(t).id(), matching(e, m)))
        .collect()
}

pub fn outcome(e: &Economy, o: &OutcomeMap) -> Value {
    serde_json::to_value(matchlab::io::outcome_json(e, o)).expect("outcomes serialize")
}

pub fn report(e: &Economy, r: &[FirmId]) -> String {
    let names: Vec<String> = r.iter().map(|&f| firm(e, f)).collect();
    format!("[{}]", names.join(", "))
}

pub fn report_json(e: &Economy, r: &[FirmId]) -> Value {
    json!(r.iter().map(|&f| firm(e, f)).collect::<Vec<_>>())
}

pub fn ordering(e: &Economy, o: &SpcOrdering) -> String {
    let pairs: Vec<String> = o
        .pairs()
        .iter()
        .map(|&(f, w)| format!("({},{})", firm(e, f), worker(e, w)))
        .collect();
    pairs.join(" ")
}

pub fn ordering_json(e: &Economy, o: &SpcOrdering) -> Value {
    json!(o
        .pairs()
        .iter()
        .map(|&(f, w)| [firm(e, f), worker(e, w)])
        .collect::<Vec<_>>())
}

pub fn cycle(e: &Economy, c: &PreferenceCycle) -> String {
    let parts: Vec<String> = c
        .firms()
        .iter()
        .zip(c.workers())
        .flat_map(|(&f, &w)| [firm(e, f), worker(e, w)])
        .collect();
    format!("({})", parts.join(", "))
}

pub fn cycle_json(e: &Economy, c: &PreferenceCycle) -> Value {
    json!({
        "firms": c.firms().iter().map(|&f| firm(e, f)).collect::<Vec<_>>(),
        "workers": c.workers().iter().map(|&w| worker(e, w)).collect::<Vec<_>>(),
    })
}
