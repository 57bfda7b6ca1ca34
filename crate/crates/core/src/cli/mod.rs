//! Command-line front end: `crdu eval|check|core|match|family|compare|verify|counterexample|audit`.
//!
//! Exit codes: 0 when everything requested holds, 1 when a property or
//! verification fails, 2 on usage, parse or validation errors.

pub mod file;

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use indexmap::IndexMap;
use serde_json::{json, Value};

use crate::capacity::{construct_counterexample, product_space, Verdict};
use crate::choquet::choquet;
use crate::core_polytope::{
    converse_witness, core_vertices, exactness_witness, is_balanced, robust_value,
};
use crate::error::Error;
use crate::models::family::{check_comonotone_agreement_events, check_nested_monotonicity};
use crate::models::{
    attitude_report, axiom_audit, comparative_full, derive_distortion_family,
    family_representation_value, AxiomOutcome, ModelSpec,
};
use crate::space::{Event, ProbabilityMeasure, StateSpace};
use crate::verify::{counterexample_facts, run_suite, Suite};
use file::{load, save, DistortionSpec, LoadedModel, SCHEMA_VERSION};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Parser, Debug)]
#[command(
    name = "crdu",
    version,
    about = "Evaluate and check Choquet rank-dependent utility models"
)]
pub struct Cli {
    /// Emit machine-readable JSON.
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Value, certainty equivalent and rank decomposition of an act.
    Eval {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        act: String,
    },
    /// Check a comma-separated list of properties.
    Check {
        #[arg(long)]
        model: PathBuf,
        /// e.g. supermodular,balanced,exact or AN,AA,RAA,DS,SRA,NSC,AAF
        properties: String,
    },
    /// Core vertices, balancedness, exactness and the robust value of an act.
    Core {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        act: Option<String>,
    },
    /// Matching probabilities of every event, or of one.
    Match {
        #[arg(long)]
        model: PathBuf,
        /// Comma-joined state labels.
        #[arg(long)]
        event: Option<String>,
    },
    /// The act-dependent distortion of an act and the family properties.
    Family {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        act: String,
    },
    /// Whether the second model is more ambiguity averse than the first.
    Compare {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        other: PathBuf,
        /// Sampled act pairs for the comparative implication.
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Run a randomized verification suite.
    Verify {
        /// choquet, maxmin, main, comam, family, latt, counterexample, dv,
        /// matching, mixture or audit
        suite: String,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Write the two-coordinate model that is diversification seeking but
    /// not ambiguity averse.
    Counterexample {
        #[arg(long, default_value_t = 2)]
        g_states: usize,
        #[arg(long, default_value_t = 2)]
        h_states: usize,
        /// Strictly concave distortion: power:GAMMA or pwl:x:y,...
        #[arg(long, default_value = "power:0.5")]
        h: String,
        /// Marginal probabilities of the first coordinate (default uniform).
        #[arg(long)]
        g_probs: Option<String>,
        /// Marginal probabilities of the second coordinate (default uniform).
        #[arg(long)]
        h_probs: Option<String>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Sampled axiom checks.
    Audit {
        #[arg(long)]
        model: PathBuf,
        /// Samples per axiom.
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

/// Text and JSON renderings of a command's result.
struct Report {
    text: String,
    json: Value,
    exit: i32,
}

/// A command failure: message and exit code.
struct Failure(String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(e.to_string())
    }
}

impl From<file::LoadError> for Failure {
    fn from(e: file::LoadError) -> Self {
        Failure(e.to_string())
    }
}

type CmdResult = Result<Report, Failure>;

/// Parses `args` (including the program name), runs the command and returns
/// the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if code == EXIT_OK {
                out.write_all(text.as_bytes())
            } else {
                err.write_all(text.as_bytes())
            };
            return code;
        }
    };
    match execute(&cli.command) {
        Ok(report) => {
            let body = if cli.json {
                let mut v = report.json;
                if let Value::Object(map) = &mut v {
                    map.insert("schema_version".into(), json!(SCHEMA_VERSION));
                }
                serde_json::to_string_pretty(&v).expect("reports serialize") + "\n"
            } else {
                report.text
            };
            let _ = out.write_all(body.as_bytes());
            report.exit
        }
        Err(Failure(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_USAGE
        }
    }
}

fn execute(cmd: &Command) -> CmdResult {
    match cmd {
        Command::Eval { model, act } => cmd_eval(&load(model)?, act),
        Command::Check { model, properties } => cmd_check(&load(model)?, properties),
        Command::Core { model, act } => cmd_core(&load(model)?, act.as_deref()),
        Command::Match { model, event } => cmd_match(&load(model)?, event.as_deref()),
        Command::Family { model, act } => cmd_family(&load(model)?, act),
        Command::Compare {
            model,
            other,
            trials,
            seed,
        } => cmd_compare(&load(model)?, &load(other)?, *trials, *seed),
        Command::Verify {
            suite,
            trials,
            seed,
        } => cmd_verify(suite, *trials, *seed),
        Command::Counterexample {
            g_states,
            h_states,
            h,
            g_probs,
            h_probs,
            out,
        } => cmd_counterexample(
            *g_states,
            *h_states,
            h,
            g_probs.as_deref(),
            h_probs.as_deref(),
            out,
        ),
        Command::Audit {
            model,
            trials,
            seed,
        } => cmd_audit(&load(model)?, *trials, *seed),
    }
}

fn event_json(s: &StateSpace, e: Event) -> Value {
    json!(e
        .members()
        .map(|i| s.labels()[i].clone())
        .collect::<Vec<_>>())
}

fn braces(s: &StateSpace, e: Event) -> String {
    format!("{{{}}}", s.event_label(e))
}

fn find_act<'a>(m: &'a LoadedModel, name: &str) -> Result<&'a crate::space::Act, Failure> {
    m.act(name).ok_or_else(|| {
        let known: Vec<&str> = m.acts.keys().map(String::as_str).collect();
        Failure(format!(
            "unknown act {name:?}; the model defines {}",
            known.join(", ")
        ))
    })
}

fn cmd_eval(m: &LoadedModel, act: &str) -> CmdResult {
    let x = find_act(m, act)?;
    let model = &m.model;
    let s = model.space();
    let value = model.value(x)?;
    let ce = model.certainty_equivalent(x)?;
    let steps = model.decomposition(x)?;
    let mut text = String::new();
    let _ = writeln!(text, "model: {}", model.kind());
    let _ = writeln!(text, "act: {act}");
    let _ = writeln!(text, "value: {value}");
    let _ = writeln!(text, "certainty equivalent: {ce}");
    let mut rows = Vec::new();
    if let Some(steps) = &steps {
        let _ = writeln!(text, "decomposition:");
        let _ = writeln!(
            text,
            "  {:<10} {:>14} {:>14}  upper set",
            "state", "u(payoff)", "weight"
        );
        for st in steps {
            let label = &s.labels()[st.state];
            let _ = writeln!(
                text,
                "  {:<10} {:>14.9} {:>14.9}  {}",
                label,
                st.payoff,
                st.weight,
                braces(s, st.upper_set)
            );
            rows.push(json!({
                "state": label,
                "utility": st.payoff,
                "weight": st.weight,
                "upper_set": event_json(s, st.upper_set),
            }));
        }
    }
    Ok(Report {
        text,
        json: json!({
            "command": "eval",
            "kind": model.kind().name(),
            "act": act,
            "value": value,
            "certainty_equivalent": ce,
            "decomposition": if steps.is_some() { json!(rows) } else { Value::Null },
        }),
        exit: EXIT_OK,
    })
}

/// Capacity-level properties accepted by `check`.
pub const CAPACITY_PROPERTIES: [&str; 7] = [
    "supermodular",
    "submodular",
    "additive",
    "balanced",
    "exact",
    "risk-conforming",
    "p-consistent",
];

/// Outcome of one named property check.
#[derive(Clone, Debug, PartialEq)]
pub struct PropertyRow {
    pub name: String,
    pub holds: bool,
    pub witness: Option<String>,
}

fn pair_witness(s: &StateSpace, v: &Verdict<(Event, Event)>) -> Option<String> {
    v.witness()
        .map(|(a, b)| format!("A = {}, B = {}", braces(s, *a), braces(s, *b)))
}

fn capacity_property(model: &ModelSpec, name: &str) -> Result<PropertyRow, Failure> {
    let cm = model.choquet_model().ok_or_else(|| {
        Failure(format!(
            "property {name} needs a capacity; {} models have none",
            model.kind()
        ))
    })?;
    let nu = cm.capacity();
    let s = nu.space();
    let (holds, witness) = match name {
        "supermodular" => {
            let v = nu.is_supermodular()?;
            (
                v.holds(),
                pair_witness(s, &v).map(|w| format!("ν(A∪B)+ν(A∩B) < ν(A)+ν(B) at {w}")),
            )
        }
        "submodular" => {
            let v = nu.is_submodular()?;
            (
                v.holds(),
                pair_witness(s, &v).map(|w| format!("ν(A∪B)+ν(A∩B) > ν(A)+ν(B) at {w}")),
            )
        }
        "additive" => {
            let v = nu.is_additive();
            (
                v.holds(),
                v.witness()
                    .map(|e| format!("ν({}) is not the sum over its states", braces(s, *e))),
            )
        }
        "balanced" => {
            let b = is_balanced(nu)?;
            (b, (!b).then(|| "core is empty".to_string()))
        }
        "exact" => {
            let v = exactness_witness(nu)?;
            let w = v.witness().map(|e| {
                if *e == s.full() {
                    "core is empty".to_string()
                } else {
                    format!(
                        "min over the core of μ({}) exceeds ν = {}",
                        braces(s, *e),
                        nu.value(*e)
                    )
                }
            });
            (v.holds(), w)
        }
        "risk-conforming" => {
            let v = nu.is_risk_conforming(cm.partition(), cm.reference())?;
            (
                v.holds(),
                v.witness().map(|e| format!("ν({}) ≠ P", braces(s, *e))),
            )
        }
        "p-consistent" => {
            let v = nu.is_p_consistent(cm.reference())?;
            (
                v.holds(),
                pair_witness(s, &v).map(|w| format!("ν differs on {w}")),
            )
        }
        _ => unreachable!("checked by caller"),
    };
    Ok(PropertyRow {
        name: name.to_string(),
        holds,
        witness,
    })
}

fn is_known_property(name: &str) -> bool {
    CAPACITY_PROPERTIES.contains(&name.to_ascii_lowercase().as_str())
        || crate::models::AttitudeReport::NAMES
            .iter()
            .any(|a| a.eq_ignore_ascii_case(name))
}

fn unknown_property(name: &str) -> Failure {
    Failure(format!(
        "unknown property {name:?}; expected any of {}, {}",
        CAPACITY_PROPERTIES.join(", "),
        crate::models::AttitudeReport::NAMES.join(", ")
    ))
}

/// Checks one capacity property or attitude flag by name (case-insensitive).
pub fn check_property(model: &ModelSpec, name: &str) -> std::result::Result<PropertyRow, String> {
    if !is_known_property(name) {
        return Err(unknown_property(name).0);
    }
    let lower = name.to_ascii_lowercase();
    if CAPACITY_PROPERTIES.contains(&lower.as_str()) {
        return capacity_property(model, &lower).map_err(|f| f.0);
    }
    let report = attitude_report(model).map_err(|e| e.to_string())?;
    let flag = report.get(name).expect("known flag");
    Ok(PropertyRow {
        name: flag.name.to_string(),
        holds: flag.holds,
        witness: flag.witness.clone(),
    })
}

fn cmd_check(m: &LoadedModel, properties: &str) -> CmdResult {
    let names: Vec<&str> = properties
        .split(',')
        .map(str::trim)
        .filter(|p| !p.is_empty())
        .collect();
    if names.is_empty() {
        return Err(Failure("no properties given".into()));
    }
    if let Some(n) = names.iter().find(|n| !is_known_property(n)) {
        return Err(unknown_property(n));
    }
    let mut attitudes = None;
    let mut rows = Vec::new();
    for n in &names {
        let lower = n.to_ascii_lowercase();
        if CAPACITY_PROPERTIES.contains(&lower.as_str()) {
            rows.push(capacity_property(&m.model, &lower)?);
        } else {
            if attitudes.is_none() {
                attitudes = Some(attitude_report(&m.model)?);
            }
            let flag = attitudes.as_ref().unwrap().get(n).expect("known flag");
            rows.push(PropertyRow {
                name: flag.name.to_string(),
                holds: flag.holds,
                witness: flag.witness.clone(),
            });
        }
    }
    let mut text = String::new();
    let _ = writeln!(text, "{:<16} {:<6} witness", "property", "result");
    for r in &rows {
        let _ = writeln!(
            text,
            "{:<16} {:<6} {}",
            r.name,
            if r.holds { "pass" } else { "fail" },
            r.witness.as_deref().unwrap_or("-")
        );
    }
    let all = rows.iter().all(|r| r.holds);
    Ok(Report {
        text,
        json: json!({
            "command": "check",
            "all_hold": all,
            "properties": rows.iter().map(|r| json!({
                "name": r.name,
                "holds": r.holds,
                "witness": r.witness,
            })).collect::<Vec<_>>(),
        }),
        exit: if all { EXIT_OK } else { EXIT_FAILED },
    })
}

fn measure_json(s: &StateSpace, mu: &ProbabilityMeasure) -> Value {
    let map: IndexMap<String, f64> = s
        .labels()
        .iter()
        .cloned()
        .zip(mu.weights().iter().copied())
        .collect();
    json!(map)
}

fn cmd_core(m: &LoadedModel, act: Option<&str>) -> CmdResult {
    let cm = m
        .model
        .choquet_model()
        .ok_or_else(|| Failure(format!("{} models have no capacity", m.model.kind())))?;
    let nu = cm.capacity();
    let s = nu.space();
    let verts = core_vertices(nu)?;
    let balanced = !verts.is_empty();
    let exact = exactness_witness(nu)?;
    let supermodular = nu.is_supermodular()?.holds();
    let mut text = String::new();
    let _ = writeln!(text, "vertices: {}", verts.len());
    for v in &verts {
        let parts: Vec<String> = s
            .labels()
            .iter()
            .zip(v.weights())
            .map(|(l, w)| format!("{l}={w:.9}"))
            .collect();
        let _ = writeln!(text, "  ({})", parts.join(", "));
    }
    let _ = writeln!(text, "balanced: {balanced}");
    let _ = writeln!(text, "exact: {}", exact.holds());
    let _ = writeln!(text, "supermodular: {supermodular}");
    let mut j = json!({
        "command": "core",
        "vertices": verts.iter().map(|v| measure_json(s, v)).collect::<Vec<_>>(),
        "balanced": balanced,
        "exact": exact.holds(),
        "supermodular": supermodular,
    });
    if let Some(name) = act {
        let x = find_act(m, name)?;
        if balanced {
            let (u, g) = (cm.utility(), cm.distortion());
            let r = robust_value(u, g, nu, x)?;
            let c = choquet(&x.try_map(|v| u.eval(v))?, cm.weights())?;
            let _ = writeln!(
                text,
                "act {name}: robust value {} ({}), Choquet value {c}",
                r.value,
                if r.exact { "exact" } else { "upper bound" }
            );
            j["act"] = json!({"name": name, "robust_value": r.value, "exact": r.exact, "choquet_value": c});
        } else {
            let _ = writeln!(text, "act {name}: no robust value, the core is empty");
            j["act"] = json!({"name": name, "robust_value": Value::Null});
        }
    }
    if balanced && !supermodular {
        if let Some(w) = converse_witness(cm.utility(), cm.distortion(), nu)? {
            let chain: Vec<String> = w.chain.iter().map(|e| braces(s, *e)).collect();
            let _ = writeln!(
                text,
                "gap witness: chain {} with act {:?}: robust {} > Choquet {}",
                chain.join(" ⊆ "),
                w.act.payoffs(),
                w.robust,
                w.choquet
            );
            j["gap_witness"] = json!({
                "chain": w.chain.iter().map(|e| event_json(s, *e)).collect::<Vec<_>>(),
                "act": w.act.payoffs(),
                "robust_value": w.robust,
                "choquet_value": w.choquet,
            });
        }
    }
    Ok(Report {
        text,
        json: j,
        exit: EXIT_OK,
    })
}

fn cmd_match(m: &LoadedModel, event: Option<&str>) -> CmdResult {
    let model = &m.model;
    let s = model.space();
    let events: Vec<Event> = match event {
        Some(e) => vec![s.parse_event(e)?],
        None => s.events().collect(),
    };
    let cm = model.choquet_model();
    let mut text = String::new();
    let _ = writeln!(text, "{:<24} {:>14} {:>8}", "event", "matching", "risky");
    let mut rows = Vec::new();
    for e in events {
        let mp = model.matching_probability(e)?;
        let risky = cm.map(|c| c.partition().contains_event(e));
        let _ = writeln!(
            text,
            "{:<24} {:>14.9} {:>8}",
            braces(s, e),
            mp,
            risky.map_or("-".to_string(), |r| r.to_string())
        );
        rows.push(json!({"event": event_json(s, e), "matching_probability": mp, "risky": risky}));
    }
    Ok(Report {
        text,
        json: json!({"command": "match", "events": rows}),
        exit: EXIT_OK,
    })
}

fn cmd_family(m: &LoadedModel, act: &str) -> CmdResult {
    let x = find_act(m, act)?;
    let model = &m.model;
    let s = model.space();
    let entry = derive_distortion_family(model, x)?;
    let fam = family_representation_value(model, x)?;
    let value = model.value(x)?;
    let nested = check_nested_monotonicity(model)?;
    let comon = check_comonotone_agreement_events(model)?;
    let mut text = String::new();
    let _ = writeln!(text, "{:>14} {:>14}", "alpha", "g_X(alpha)");
    for (a, v) in &entry.levels {
        let _ = writeln!(text, "{:>14.9} {:>14.9}", a + 0.0, v + 0.0);
    }
    let _ = writeln!(text, "family value: {fam}");
    let _ = writeln!(text, "model value: {value}");
    let _ = writeln!(
        text,
        "nested monotonicity: {}",
        if nested.holds() {
            "pass".to_string()
        } else {
            format!("fail ({})", pair_witness(s, &nested).unwrap_or_default())
        }
    );
    let _ = writeln!(
        text,
        "comonotone agreement: {}",
        if comon.holds() {
            "pass".to_string()
        } else {
            format!("fail ({})", pair_witness(s, &comon).unwrap_or_default())
        }
    );
    let ok = nested.holds() && comon.holds() && (fam - value).abs() <= 1e-9;
    Ok(Report {
        text,
        json: json!({
            "command": "family",
            "act": act,
            "levels": entry.levels.iter().map(|(a, v)| json!({"alpha": a, "g": v})).collect::<Vec<_>>(),
            "family_value": fam,
            "value": value,
            "nested_monotonicity": nested.holds(),
            "comonotone_agreement": comon.holds(),
        }),
        exit: if ok { EXIT_OK } else { EXIT_FAILED },
    })
}

fn cmd_compare(m1: &LoadedModel, m2: &LoadedModel, trials: usize, seed: u64) -> CmdResult {
    let r = comparative_full(&m1.model, &m2.model, trials, seed)?;
    let s = m1.model.space();
    let mut text = String::new();
    let _ = writeln!(text, "same utility: {}", r.same_utility);
    let _ = writeln!(text, "same distortion: {}", r.same_distortion);
    let _ = writeln!(
        text,
        "matching probabilities ν1 ≥ ν2: {}{}",
        r.aversion.setwise.holds(),
        r.aversion
            .setwise
            .witness()
            .map(|e| format!(" (ν2 larger on {})", braces(s, *e)))
            .unwrap_or_default()
    );
    let _ = writeln!(
        text,
        "binary bets: {}{}",
        r.aversion.behavioral.holds(),
        r.aversion
            .behavioral
            .witness()
            .map(|(a, b)| format!(" (risky {} vs {})", braces(s, *a), braces(s, *b)))
            .unwrap_or_default()
    );
    let _ = writeln!(
        text,
        "sampled pairs: {} checked, {}",
        r.sampled.checked,
        match &r.sampled.violation {
            None => "no violation".to_string(),
            Some((x, y)) => format!("violation X = {:?}, Y = {:?}", x.payoffs(), y.payoffs()),
        }
    );
    let _ = writeln!(text, "second model more ambiguity averse: {}", r.holds());
    Ok(Report {
        text,
        json: json!({
            "command": "compare",
            "same_utility": r.same_utility,
            "same_distortion": r.same_distortion,
            "setwise": r.aversion.setwise.holds(),
            "setwise_witness": r.aversion.setwise.witness().map(|e| event_json(s, *e)),
            "behavioral": r.aversion.behavioral.holds(),
            "sampled_checked": r.sampled.checked,
            "sampled_violation": r.sampled.violation.as_ref().map(|(x, y)| json!([x.payoffs(), y.payoffs()])),
            "holds": r.holds(),
        }),
        exit: if r.holds() { EXIT_OK } else { EXIT_FAILED },
    })
}

fn cmd_verify(suite: &str, trials: usize, seed: u64) -> CmdResult {
    let suite: Suite = suite.parse().map_err(|_| {
        let names: Vec<&str> = Suite::ALL.iter().map(|s| s.name()).collect();
        Failure(format!(
            "unknown suite {suite:?}; expected one of {}",
            names.join(", ")
        ))
    })?;
    let r = run_suite(suite, trials, seed)?;
    let mut text = String::new();
    let _ = writeln!(
        text,
        "{}: {}/{} passed (seed {})",
        r.suite, r.passed, r.trials, r.seed
    );
    if let Some(e) = r.max_error {
        let _ = writeln!(text, "largest error: {e:.3e}");
    }
    for n in &r.notes {
        let _ = writeln!(text, "{n}");
    }
    if let Some((t, msg)) = &r.first_failure {
        let _ = writeln!(text, "first failure (trial {t}): {msg}");
    }
    Ok(Report {
        text,
        json: json!({
            "command": "verify",
            "suite": r.suite.name(),
            "trials": r.trials,
            "passed": r.passed,
            "seed": r.seed,
            "max_error": r.max_error,
            "notes": r.notes,
            "first_failure": r.first_failure.as_ref().map(|(t, m)| json!({"trial": t, "message": m})),
        }),
        exit: if r.ok() { EXIT_OK } else { EXIT_FAILED },
    })
}

fn probs(text: Option<&str>, n: usize) -> Result<ProbabilityMeasure, Failure> {
    let s = StateSpace::indexed(n)?;
    match text {
        None => Ok(ProbabilityMeasure::uniform(&s)),
        Some(t) => {
            let w = t
                .split(',')
                .map(|x| {
                    x.trim()
                        .parse::<f64>()
                        .map_err(|_| Failure(format!("bad probability {x:?}")))
                })
                .collect::<Result<Vec<_>, _>>()?;
            if w.len() != n {
                return Err(Failure(format!(
                    "expected {n} probabilities, got {}",
                    w.len()
                )));
            }
            Ok(ProbabilityMeasure::new(&s, w)?)
        }
    }
}

fn cmd_counterexample(
    gb: usize,
    hb: usize,
    h: &str,
    g_probs: Option<&str>,
    h_probs: Option<&str>,
    out: &Path,
) -> CmdResult {
    let h = DistortionSpec::parse(h).map_err(Failure)?.build()?;
    let space = product_space(gb, hb)?;
    let (pg, ph) = (probs(g_probs, gb)?, probs(h_probs, hb)?);
    let w = (0..gb)
        .flat_map(|i| (0..hb).map(move |j| (i, j)))
        .map(|(i, j)| pg.weight(i) * ph.weight(j))
        .collect();
    let p = ProbabilityMeasure::new(&space, w)?;
    let cx = construct_counterexample(gb, hb, &p, &h)?;
    let facts = counterexample_facts(gb, hb, &p, &h)?;
    let u = crate::distortion::UtilityFunction::power(0.5, 0.0, f64::INFINITY)?;
    let model = ModelSpec::crdu(
        u,
        cx.g.clone(),
        cx.capacity.clone(),
        cx.g_partition.clone(),
        p,
    )?;
    let a0 = cx.h_partition.blocks()[0];
    let mut acts = IndexMap::new();
    acts.insert(
        "bet_A0".to_string(),
        crate::space::Act::indicator(&space, a0)?,
    );
    acts.insert(
        "bet_A0c".to_string(),
        crate::space::Act::indicator(&space, a0.complement(space.len()))?,
    );
    let mut partitions = IndexMap::new();
    partitions.insert("h".to_string(), cx.h_partition.clone());
    let loaded = LoadedModel {
        model,
        acts,
        partitions,
    };
    save(&loaded, out).map_err(|e| Failure(format!("cannot write {}: {e}", out.display())))?;
    let mut text = String::new();
    let _ = writeln!(text, "wrote {} ({gb}×{hb} states)", out.display());
    let _ = writeln!(text, "risk conforming: {}", facts.risk_conforming);
    let _ = writeln!(
        text,
        "ν = h∘P on the second-coordinate algebra: {}",
        facts.h_of_p_on_h_algebra
    );
    let _ = writeln!(text, "h(P(A)) ≥ ν(A) ≥ P(A) for all A: {}", facts.sandwich);
    let _ = writeln!(text, "g∘ν supermodular: {}", facts.distorted_supermodular);
    let _ = writeln!(text, "ν(A0)+ν(A0ᶜ) = {:.6}", facts.complement_sum);
    let _ = writeln!(text, "balanced: {}", facts.balanced);
    let _ = writeln!(text, "DS without AA (u = √x): {}", facts.ds_with_concave_u);
    Ok(Report {
        text,
        json: json!({
            "command": "counterexample",
            "out": out.display().to_string(),
            "risk_conforming": facts.risk_conforming,
            "h_of_p_on_h_algebra": facts.h_of_p_on_h_algebra,
            "sandwich": facts.sandwich,
            "distorted_supermodular": facts.distorted_supermodular,
            "complement_sum": facts.complement_sum,
            "balanced": facts.balanced,
            "ds_without_aa": facts.ds_with_concave_u,
        }),
        exit: if facts.reproduced() {
            EXIT_OK
        } else {
            EXIT_FAILED
        },
    })
}

fn cmd_audit(m: &LoadedModel, samples: usize, seed: u64) -> CmdResult {
    let r = axiom_audit(&m.model, samples, seed)?;
    let mut text = String::new();
    let mut rows = Vec::new();
    let _ = writeln!(text, "{:<4} {:<9} result", "", "expected");
    for res in &r.results {
        let expected = res.axiom.characterizes(r.kind);
        let mark = if expected { "yes" } else { "no" };
        match &res.outcome {
            AxiomOutcome::Checked {
                passed,
                total,
                counterexample,
            } => {
                let _ = writeln!(text, "{:<4} {mark:<9} {passed}/{total}", res.axiom.name());
                if let Some(w) = counterexample {
                    let acts: Vec<&[f64]> = w.acts.iter().map(|a| a.payoffs()).collect();
                    let _ = writeln!(text, "     witness: {} {:?}", w.detail, acts);
                }
                rows.push(json!({
                    "axiom": res.axiom.name(),
                    "expected": expected,
                    "passed": passed,
                    "total": total,
                    "witness": counterexample.as_ref().map(|w| json!({
                        "detail": w.detail,
                        "acts": w.acts.iter().map(|a| a.payoffs().to_vec()).collect::<Vec<_>>(),
                    })),
                }));
            }
            AxiomOutcome::Skipped(reason) => {
                let _ = writeln!(text, "{:<4} {mark:<9} skipped: {reason}", res.axiom.name());
                rows.push(
                    json!({"axiom": res.axiom.name(), "expected": expected, "skipped": reason}),
                );
            }
        }
    }
    for n in &r.notes {
        let _ = writeln!(text, "note: {n}");
    }
    let violations = r.violations();
    Ok(Report {
        text,
        json: json!({
            "command": "audit",
            "kind": r.kind.name(),
            "samples": r.samples,
            "seed": r.seed,
            "axioms": rows,
            "violations": violations.iter().map(|a| a.name()).collect::<Vec<_>>(),
            "notes": r.notes,
        }),
        exit: if violations.is_empty() {
            EXIT_OK
        } else {
            EXIT_FAILED
        },
    })
}
