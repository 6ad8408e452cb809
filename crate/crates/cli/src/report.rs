//! Text and JSON renderings of reports.

use relfix_core::certifier::{describe, Certifiable, Entry, HypothesisReport, Status, Verdict};
use relfix_core::instance::Setting;
use relfix_core::mappings::CoincidenceProfile;
use relfix_core::solver::{IterationTrace, Outcome};
use serde_json::{json, Map, Value};

pub fn status_name(s: Status) -> &'static str {
    match s {
        Status::Certified => "certified",
        Status::ConditionallyCertified => "conditionally-certified",
        Status::NotCertified => "not-certified",
    }
}

fn points<S: Setting>(s: &S, ps: &[S::Point]) -> Value {
    Value::from(ps.iter().map(|p| s.rep(p.clone()).to_string()).collect::<Vec<_>>())
}

fn entry_json<P>(e: &Entry<P>) -> Value {
    let mut m = Map::new();
    m.insert("label".into(), e.label.into());
    m.insert("verdict".into(), e.verdict.kind().into());
    match &e.verdict {
        Verdict::Fails(w) if !w.is_empty() => {
            m.insert("witness".into(), w.iter().map(|r| r.to_string()).collect::<Vec<_>>().into());
        }
        Verdict::HoldsOnSamples(n) => {
            m.insert("samples".into(), (*n).into());
        }
        Verdict::TriviallyHolds(reason) | Verdict::Undecidable(reason) => {
            m.insert("reason".into(), reason.clone().into());
        }
        _ => {}
    }
    if let Some(d) = &e.detail {
        m.insert("detail".into(), d.clone().into());
    }
    Value::Object(m)
}

pub fn outcome_text<S: Setting>(s: &S, o: &Outcome<S::Point>) -> String {
    match o {
        Outcome::Coincidence(p) => format!("coincidence at {}", s.rep(p.clone())),
        Outcome::WithinTolerance { point, residual } => {
            format!("within tolerance at {} (residual {residual})", s.rep(point.clone()))
        }
        Outcome::Stalled { cycle_start } => format!("stalled: the iteration cycles from step {cycle_start}"),
        Outcome::BudgetExhausted => "iteration budget exhausted".into(),
        Outcome::NoPreimage { step } => format!("no g-preimage of f(w_{step})"),
    }
}

pub fn trace_json<S: Setting>(s: &S, t: &IterationTrace<S::Point>) -> Value {
    json!({
        "w": points(s, &t.w),
        "gw": points(s, &t.gw),
        "step_distances": t.step_distances.iter().map(|d| d.to_string()).collect::<Vec<_>>(),
        "outcome": outcome_text(s, &t.outcome),
        "terminal_point": t.terminal_point().map(|p| s.rep(p.clone()).to_string()),
    })
}

pub fn profile_json<S: Setting>(s: &S, p: &CoincidenceProfile<S::Point>) -> Value {
    json!({
        "coincidence_points": points(s, &p.coincidence_points),
        "points_of_coincidence": points(s, &p.points_of_coincidence),
        "common_fixed_points": points(s, &p.common_fixed_points),
    })
}

pub fn report_json<S: Certifiable>(s: &S, instance: &str, r: &HypothesisReport<S::Point>) -> Value {
    let mut conclusion = match &r.conclusion.profile {
        Ok(p) => profile_json(s, p),
        Err(e) => json!({ "error": e }),
    };
    if let Some(t) = &r.conclusion.trace {
        conclusion["trace"] = trace_json(s, t);
    }
    json!({
        "instance": instance,
        "theorem": r.theorem.name(),
        "condition": r.condition,
        "status": status_name(r.status),
        "hypotheses": r.entries.iter().map(entry_json).collect::<Vec<_>>(),
        "claims": r.claims.iter().map(|c| json!({
            "claim": c.claim.to_string(),
            "status": status_name(c.status),
        })).collect::<Vec<_>>(),
        "conclusion": conclusion,
        "oracle_agreement": r.conclusion.oracle_agreement,
    })
}

fn verdict_text<P>(v: &Verdict<P>) -> String {
    match v {
        Verdict::Holds => "holds".into(),
        Verdict::Fails(w) if w.is_empty() => "FAILS".into(),
        Verdict::Fails(w) => format!(
            "FAILS at {}",
            w.iter().map(|r| r.to_string()).collect::<Vec<_>>().join(", ")
        ),
        Verdict::HoldsOnSamples(n) => format!("holds on {n} sampled cases"),
        Verdict::TriviallyHolds(reason) => format!("trivially holds: {reason}"),
        Verdict::ExternallyAsserted { holds: true } => "externally asserted".into(),
        Verdict::ExternallyAsserted { holds: false } => "externally asserted to FAIL".into(),
        Verdict::Undecidable(reason) => format!("undecidable: {reason}"),
    }
}

pub fn report_text<S: Certifiable>(s: &S, instance: &str, r: &HypothesisReport<S::Point>) -> String {
    let mut out = format!("{instance}: {} under {}\n", r.theorem, r.condition);
    let width = r.entries.iter().map(|e| describe(e.label).chars().count()).max().unwrap_or(0);
    for e in &r.entries {
        let text = describe(e.label);
        let pad = " ".repeat(width - text.chars().count());
        out += &format!("  {:<5} {text}{pad}  {}\n", e.label, verdict_text(&e.verdict));
        if let Some(d) = &e.detail {
            out += &format!("        {d}\n");
        }
    }
    for c in &r.claims {
        out += &format!("  claim: {}: {}\n", c.claim, status_name(c.status));
    }
    match &r.conclusion.profile {
        Ok(p) => {
            let show = |ps: &[S::Point]| {
                let v: Vec<String> = ps.iter().map(|x| s.rep(x.clone()).to_string()).collect();
                format!("{{{}}}", v.join(", "))
            };
            out += &format!("  C(f,g) = {}\n", show(&p.coincidence_points));
            out += &format!("  points of coincidence = {}\n", show(&p.points_of_coincidence));
            out += &format!("  common fixed points = {}\n", show(&p.common_fixed_points));
        }
        Err(e) => out += &format!("  C(f,g): {e}\n"),
    }
    if let Some(t) = &r.conclusion.trace {
        out += &format!("  solver: {} after {} step(s)\n", outcome_text(s, &t.outcome), t.steps());
    }
    if let Some(a) = r.conclusion.oracle_agreement {
        out += &format!("  oracle agreement: {}\n", if a { "yes" } else { "NO" });
    }
    out += &format!("  status: {}\n", status_name(r.status));
    out
}
