//! Command implementations. Each returns its rendered output and exit code.

use std::path::Path;

use relfix_core::certifier::{check_theorem, Certifiable, Declared, Status, Theorem};
use relfix_core::contraction::ContractionCondition;
use relfix_core::instance::Setting;
use relfix_core::mappings::coincidence_profile;
use relfix_core::oracle::{self, brute_force_solutions, differential_check, DifferentialVerdict};
use relfix_core::relspace::PointId;
use relfix_core::scalar::{parse_rational, Scalar};
use relfix_core::solver::{find_starting_point, picard_jungck, SolverConfig};
use serde_json::{json, Value};

use crate::document::{bundled, load_text, Built, InputError, Loaded};
use crate::report::{outcome_text, profile_json, report_json, report_text, trace_json};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_HYPOTHESIS: i32 = 2;
pub const EXIT_BUG: i32 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum Format {
    #[default]
    Text,
    Json,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Output {
    pub text: String,
    pub code: i32,
}

impl Output {
    fn new(text: String, code: i32) -> Self {
        Output { text, code }
    }

    fn input(e: impl std::fmt::Display) -> Self {
        Output::new(format!("error: {e}\n"), EXIT_INPUT)
    }

    fn render(value: Value, text: String, format: Format, code: i32) -> Self {
        match format {
            Format::Json => Output::new(serde_json::to_string_pretty(&value).expect("json") + "\n", code),
            Format::Text => Output::new(text, code),
        }
    }
}

/// A bundled instance name or a path to a JSON document.
pub fn load(source: &str) -> Result<Loaded, InputError> {
    if let Some(text) = bundled(source) {
        return load_text(text, source);
    }
    let text = std::fs::read_to_string(source)
        .map_err(|e| InputError::new(format!("cannot read `{source}`: {e}")))?;
    let stem = Path::new(source).file_stem().and_then(|s| s.to_str()).unwrap_or(source);
    load_text(&text, stem)
}

fn require_condition(l: &Loaded) -> Result<&ContractionCondition, InputError> {
    l.condition
        .as_ref()
        .ok_or_else(|| InputError::new("the document has no condition block"))
}

pub fn check(source: &str, theorem: Option<Theorem>, format: Format) -> Output {
    let loaded = match load(source) {
        Ok(l) => l,
        Err(e) => return Output::input(e),
    };
    let cond = match require_condition(&loaded) {
        Ok(c) => c,
        Err(e) => return Output::input(e),
    };
    let theorem = theorem.or(loaded.theorem).unwrap_or(Theorem::Th1);
    match &loaded.instance {
        Built::Finite(inst) => check_with(inst, &loaded.name, theorem, cond, format),
        Built::Interval(inst) => {
            let d = Declared {
                instance: inst,
                assertions: &loaded.assertions,
            };
            check_with(&d, &loaded.name, theorem, cond, format)
        }
    }
}

fn check_with<S: Certifiable>(s: &S, name: &str, t: Theorem, cond: &ContractionCondition, format: Format) -> Output {
    match check_theorem(t, s, cond) {
        Ok(r) => {
            let code = if r.status == Status::NotCertified { EXIT_HYPOTHESIS } else { EXIT_OK };
            Output::render(report_json(s, name, &r), report_text(s, name, &r), format, code)
        }
        Err(e) => Output::input(e),
    }
}

/// Every theorem the document's condition can be read under.
pub fn report(source: &str, format: Format) -> Output {
    let loaded = match load(source) {
        Ok(l) => l,
        Err(e) => return Output::input(e),
    };
    let cond = match require_condition(&loaded) {
        Ok(c) => c,
        Err(e) => return Output::input(e),
    };
    match &loaded.instance {
        Built::Finite(inst) => report_with(inst, &loaded.name, cond, format),
        Built::Interval(inst) => {
            let d = Declared {
                instance: inst,
                assertions: &loaded.assertions,
            };
            report_with(&d, &loaded.name, cond, format)
        }
    }
}

fn report_with<S: Certifiable>(s: &S, name: &str, cond: &ContractionCondition, format: Format) -> Output {
    let mut values = Vec::new();
    let mut text = String::new();
    let mut skipped = Vec::new();
    for t in Theorem::ALL {
        match check_theorem(t, s, cond) {
            Ok(r) => {
                values.push(report_json(s, name, &r));
                text += &report_text(s, name, &r);
                text.push('\n');
            }
            Err(_) => skipped.push(t.name()),
        }
    }
    if !skipped.is_empty() {
        text += &format!("not applicable to {cond}: {}\n", skipped.join(", "));
    }
    let value = json!({ "instance": name, "reports": values, "not_applicable": skipped });
    Output::render(value, text, format, EXIT_OK)
}

pub struct SolveOptions {
    pub start: Option<String>,
    pub max_iterations: usize,
    pub epsilon: Option<String>,
}

fn solver_config<P>(opts: &SolveOptions) -> Result<SolverConfig<P>, Output> {
    let mut config = SolverConfig {
        max_iterations: opts.max_iterations,
        ..SolverConfig::default()
    };
    if let Some(eps) = &opts.epsilon {
        config.epsilon = parse_rational(eps)
            .ok_or_else(|| Output::input(format!("--eps `{eps}` is not an exact rational")))?;
    }
    Ok(config)
}

pub fn solve(source: &str, opts: &SolveOptions, format: Format) -> Output {
    let loaded = match load(source) {
        Ok(l) => l,
        Err(e) => return Output::input(e),
    };
    match &loaded.instance {
        Built::Finite(inst) => {
            let start = match &opts.start {
                Some(label) => match inst.space.id_of(label) {
                    Some(p) => Some(p),
                    None => return Output::input(format!("unknown point `{label}`")),
                },
                None => None,
            };
            match solver_config(opts) {
                Ok(config) => solve_with(inst, &loaded.name, start, &config, format),
                Err(out) => out,
            }
        }
        Built::Interval(inst) => {
            let start = match &opts.start {
                Some(x) => match x.parse::<Scalar>() {
                    Ok(p) if inst.space.carrier().contains(&p) => Some(p),
                    Ok(p) => return Output::input(format!("start {p} is outside the carrier")),
                    Err(e) => return Output::input(e),
                },
                None => None,
            };
            match solver_config(opts) {
                Ok(config) => solve_with(inst, &loaded.name, start, &config, format),
                Err(out) => out,
            }
        }
    }
}

fn solve_with<S: Setting>(
    s: &S,
    name: &str,
    start: Option<S::Point>,
    config: &SolverConfig<S::Point>,
    format: Format,
) -> Output {
    let Some(w0) = start.or_else(|| find_starting_point(s)) else {
        let text = format!("{name}: no point w0 has (gw0, fw0) in R\n");
        return Output::render(json!({ "instance": name, "error": "no starting point" }), text, format, EXIT_HYPOTHESIS);
    };
    let trace = match picard_jungck(s, w0, config) {
        Ok(t) => t,
        Err(e) => return Output::input(e),
    };
    let code = if trace.terminal_point().is_some() { EXIT_OK } else { EXIT_HYPOTHESIS };
    let mut text = format!("{name}: Picard-Jungck from w0 = {}\n", s.rep(trace.w[0].clone()));
    for (n, gw) in trace.gw.iter().enumerate() {
        let d = trace.step_distances.get(n).map(|d| format!("  d{n} = {d}")).unwrap_or_default();
        text += &format!("  gw{n} = {}{d}\n", s.rep(gw.clone()));
    }
    text += &format!("  {}\n", outcome_text(s, &trace.outcome));
    let value = json!({ "instance": name, "trace": trace_json(s, &trace) });
    Output::render(value, text, format, code)
}

/// Brute-force solution sets, their agreement with the closed form, and,
/// when the document has a condition, the differential check.
pub fn oracle(source: &str, format: Format) -> Output {
    let loaded = match load(source) {
        Ok(l) => l,
        Err(e) => return Output::input(e),
    };
    let Built::Finite(inst) = &loaded.instance else {
        return Output::input("the brute-force oracle needs a finite carrier");
    };
    let truth = brute_force_solutions(inst);
    let agrees = coincidence_profile(&inst.pair) == truth;
    let differential = loaded.condition.as_ref().map(|c| differential_check(inst, c));
    let violated = differential.as_ref().is_some_and(|d| d.is_violation());
    let code = if !agrees || violated { EXIT_BUG } else { EXIT_OK };
    let (kind, detail) = match &differential {
        None => ("none", String::new()),
        Some(DifferentialVerdict::Pass(ts)) => (
            "pass",
            ts.iter().map(|t| t.name()).collect::<Vec<_>>().join(" "),
        ),
        Some(DifferentialVerdict::Skipped(why)) => ("skipped", why.clone()),
        Some(DifferentialVerdict::TheoremViolated(why)) => ("theorem-violated", why.clone()),
    };
    let labels = |ps: &[PointId]| inst.labels_of(ps).join(", ");
    let text = format!(
        "{}: brute force\n  C(f,g) = {{{}}}\n  points of coincidence = {{{}}}\n  common fixed points = {{{}}}\n  closed form agrees: {}\n  differential check: {kind} {detail}\n",
        loaded.name,
        labels(&truth.coincidence_points),
        labels(&truth.points_of_coincidence),
        labels(&truth.common_fixed_points),
        if agrees { "yes" } else { "NO" },
    );
    let value = json!({
        "instance": loaded.name,
        "solutions": profile_json(inst, &truth),
        "closed_form_agrees": agrees,
        "differential": { "verdict": kind, "detail": detail },
    });
    Output::render(value, text, format, code)
}

pub fn fuzz(seeds: u64, start: u64, max_size: usize, format: Format) -> Output {
    if !(2..=oracle::MAX_CARRIER).contains(&max_size) {
        return Output::input(format!("--size must be in 2..={}", oracle::MAX_CARRIER));
    }
    let summary = oracle::fuzz(start..start + seeds, max_size);
    let code = if summary.passed() { EXIT_OK } else { EXIT_BUG };
    let certified: Vec<Value> = summary
        .certified
        .iter()
        .map(|(t, n)| json!({ "theorem": t.name(), "instances": n }))
        .collect();
    let mut text = format!(
        "fuzz: seeds {start}..{} (carrier 2..={max_size}), {} instances\n  oracle disagreements: {}\n",
        start + seeds,
        summary.instances,
        summary.oracle_disagreements.len()
    );
    for (t, n) in &summary.certified {
        text += &format!("  {t} certified on {n} instance(s)\n");
    }
    for (seed, msg) in &summary.violations {
        text += &format!("  VIOLATION at seed {seed}: {msg}\n");
    }
    for (seed, msg) in &summary.generator_errors {
        text += &format!("  generator error at seed {seed}: {msg}\n");
    }
    text += &format!("  verdict: {}\n", if summary.passed() { "pass" } else { "FAIL" });
    let value = json!({
        "seeds": { "start": start, "count": seeds },
        "max_size": max_size,
        "instances": summary.instances,
        "oracle_disagreements": summary.oracle_disagreements,
        "certified": certified,
        "violations": summary.violations.iter().map(|(s, m)| json!({ "seed": s, "detail": m })).collect::<Vec<_>>(),
        "passed": summary.passed(),
    });
    Output::render(value, text, format, code)
}

/// The fuzz start seed: the flag, else `RELFIX_SEED`, else 0.
pub fn resolve_seed(flag: Option<u64>, env: Option<&str>) -> Result<u64, InputError> {
    match (flag, env) {
        (Some(s), _) => Ok(s),
        (None, Some(text)) => text
            .trim()
            .parse()
            .map_err(|_| InputError::new(format!("RELFIX_SEED `{text}` is not an unsigned integer"))),
        (None, None) => Ok(0),
    }
}
