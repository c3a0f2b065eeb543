//! Batch front end shared by the `breuil` binary and the C ABI.
//!
//! Each command parses a [`JobFile`], hands the payload to the matching
//! library operation and collects its checks. Exit codes: 0 when every check
//! passes, 1 when some check fails, 2 on input errors.

use std::fmt::Write as _;
use std::str::FromStr;

use serde::Serialize;
use serde_json::{json, Value};

use crate::cat::{adapted_basis, check_morphism, verify_adapted, SimpleObject, TildeModule};
use crate::dprings::{DpRing, RingParams};
use crate::equiv::{check_s1_morphism, lift_tilde_morphism, round_trip_report, scalar_lift_report};
use crate::error::Error;
use crate::gf::GaloisField;
use crate::inertia::{ambient_field, character_of_simple, pairing, serre_check, weight_exponents};
use crate::json::{self, JobFile, Payload};
use crate::oracle;
use crate::report::{Check, ValidationReport};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Command {
    Validate,
    AdaptedBasis,
    Weights,
    Character,
    SerreCheck,
    PairingCheck,
    Oracle,
    LiftCheck,
}

impl Command {
    pub const ALL: [Command; 8] = [
        Command::Validate,
        Command::AdaptedBasis,
        Command::Weights,
        Command::Character,
        Command::SerreCheck,
        Command::PairingCheck,
        Command::Oracle,
        Command::LiftCheck,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Command::Validate => "validate",
            Command::AdaptedBasis => "adapted-basis",
            Command::Weights => "weights",
            Command::Character => "character",
            Command::SerreCheck => "serre-check",
            Command::PairingCheck => "pairing-check",
            Command::Oracle => "oracle",
            Command::LiftCheck => "lift-check",
        }
    }
}

impl FromStr for Command {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Command::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| format!("unknown command `{s}`"))
    }
}

#[derive(Clone, Debug, Default)]
pub struct Flags {
    pub json: bool,
    pub trunc_degree: Option<usize>,
}

/// Bounds for `oracle --grid pmax=P dmax=D`.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct GridSpec {
    pub pmax: u32,
    pub dmax: usize,
}

impl GridSpec {
    pub fn parse<S: AsRef<str>>(items: &[S]) -> Result<GridSpec, String> {
        let mut spec = GridSpec { pmax: 5, dmax: 2 };
        for item in items {
            for kv in item.as_ref().split([',', ' ']).filter(|s| !s.is_empty()) {
                let (k, v) = kv.split_once('=').ok_or_else(|| format!("grid: expected key=value, got `{kv}`"))?;
                let bad = |_| format!("grid: `{v}` is not a valid value for {k}");
                match k {
                    "pmax" => spec.pmax = v.parse().map_err(bad)?,
                    "dmax" => spec.dmax = v.parse().map_err(bad)?,
                    _ => return Err(format!("grid: unknown key `{k}` (expected pmax or dmax)")),
                }
            }
        }
        if !(3..=7).contains(&spec.pmax) {
            return Err("grid: pmax must lie in [3, 7]".into());
        }
        if !(1..=3).contains(&spec.dmax) {
            return Err("grid: dmax must lie in [1, 3]".into());
        }
        Ok(spec)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub command: String,
    pub params: Option<RingParams>,
    pub checks: Vec<Check>,
    pub data: Value,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Outcome {
    pub exit_code: i32,
    pub report: Option<Report>,
    pub error: Option<String>,
}

impl Outcome {
    fn input_error(msg: String) -> Outcome {
        Outcome { exit_code: EXIT_INPUT, report: None, error: Some(msg) }
    }

    fn from_report(report: Report) -> Outcome {
        let ok = report.checks.iter().all(|c| c.pass);
        Outcome { exit_code: if ok { EXIT_PASS } else { EXIT_FAIL }, report: Some(report), error: None }
    }

    /// Standard output; input errors go to [`Outcome::error`] instead.
    pub fn render(&self, as_json: bool) -> String {
        match (&self.report, as_json) {
            (Some(r), true) => serde_json::to_string_pretty(r).expect("report serializes") + "\n",
            (Some(r), false) => render_text(r),
            (None, true) => serde_json::to_string_pretty(&json!({ "error": self.error })).expect("error serializes") + "\n",
            (None, false) => String::new(),
        }
    }
}

fn render_text(r: &Report) -> String {
    let mut out = format!("command: {}\n", r.command);
    if let Some(p) = &r.params {
        let _ = writeln!(out, "params: p={} m={} e={} r={} eisenstein={:?}", p.p, p.m, p.e, p.r, p.eisenstein);
    }
    out.push_str(&ValidationReport { checks: r.checks.clone() }.to_text());
    if let Value::Object(map) = &r.data {
        for (k, v) in map {
            let _ = writeln!(out, "{k}: {v}");
        }
    }
    let failed = r.checks.iter().filter(|c| !c.pass).count();
    if failed == 0 {
        let _ = writeln!(out, "result: PASS ({} checks)", r.checks.len());
    } else {
        let _ = writeln!(out, "result: FAIL ({failed} of {} checks failed)", r.checks.len());
    }
    out
}

fn params_error(e: Error) -> String {
    match e {
        Error::InvalidParams { field, reason } => format!("params.{field}: {reason}"),
        other => format!("params: {other}"),
    }
}

enum Step {
    Input(String),
}

impl From<Error> for Step {
    fn from(e: Error) -> Self {
        Step::Input(e.to_string())
    }
}

type StepResult = Result<(Vec<Check>, Value), Step>;

/// Turns a failing library call into either an input error or a failed check.
fn stage<T>(checks: &mut Vec<Check>, name: &str, r: crate::Result<T>) -> Result<Option<T>, Step> {
    match r {
        Ok(x) => Ok(Some(x)),
        Err(e) if e.is_input() => Err(e.into()),
        Err(e) => {
            checks.push(Check::fail(name, e.to_string()));
            Ok(None)
        }
    }
}

fn unsupported(cmd: Command, p: &Payload, expected: &str) -> Step {
    Step::Input(format!("payload: `{}` does not accept a `{}` payload (expected {expected})", cmd.name(), p.kind()))
}

fn simple_of(ring: &DpRing, cmd: Command, p: &Payload) -> Result<SimpleObject, Step> {
    match p {
        Payload::Simple(s) => Ok(json::simple_object(ring, s, "payload.simple")?),
        _ => Err(unsupported(cmd, p, "simple")),
    }
}

fn module_of(ring: &DpRing, cmd: Command, p: &Payload) -> Result<TildeModule, Step> {
    match p {
        Payload::Simple(s) => Ok(json::simple_object(ring, s, "payload.simple")?.to_module()),
        Payload::Module(m) => Ok(json::tilde_module(ring, m, "payload.module")?),
        _ => Err(unsupported(cmd, p, "simple or module")),
    }
}

fn summary(name: &str, rep: &ValidationReport) -> Check {
    if rep.all_pass() {
        Check::pass(name)
    } else {
        Check::fail(name, rep.failures().map(|c| c.name.clone()).collect::<Vec<_>>().join(", "))
    }
}

fn field_data(f: &GaloisField) -> Value {
    json!({ "p": f.p(), "m": f.degree(), "modulus": f.params().modulus })
}

fn cmd_validate(ring: &DpRing, job: &JobFile) -> StepResult {
    match &job.payload {
        Payload::Simple(_) | Payload::Module(_) => {
            let m = module_of(ring, Command::Validate, &job.payload)?;
            let data = json!({ "kind": job.payload.kind(), "d": m.d(), "fil_dim": m.fil_dim() });
            Ok((m.validate().checks, data))
        }
        Payload::S1Module(j) => {
            let m = json::s1_module(ring, j, "payload.s1_module")?;
            Ok((m.validate().checks, json!({ "kind": "s1_module", "d": m.d() })))
        }
        Payload::Morphism(j) => {
            let f = json::morphism(ring, j, "payload.morphism")?;
            let mut checks = vec![summary("source_valid", &f.source.validate()), summary("target_valid", &f.target.validate())];
            checks.extend(check_morphism(&f).checks);
            Ok((checks, json!({ "kind": "morphism", "source_d": f.source.d(), "target_d": f.target.d() })))
        }
        p => Err(unsupported(Command::Validate, p, "simple, module, s1_module or morphism")),
    }
}

fn cmd_adapted_basis(ring: &DpRing, job: &JobFile) -> StepResult {
    let m = module_of(ring, Command::AdaptedBasis, &job.payload)?;
    let mut checks = Vec::new();
    let Some(ab) = stage(&mut checks, "adapted_basis", adapted_basis(&m))? else {
        return Ok((checks, Value::Null));
    };
    checks.extend(verify_adapted(&m, &ab).checks);
    let f = ring.field();
    let basis: Vec<Vec<json::TildeJson>> =
        (0..m.d()).map(|i| ab.basis_vector(i).iter().map(|x| json::tilde_json(f, x)).collect()).collect();
    Ok((checks, json!({ "weights": ab.weights, "basis": basis })))
}

fn cmd_weights(ring: &DpRing, job: &JobFile) -> StepResult {
    let s = simple_of(ring, Command::Weights, &job.payload)?;
    let w = weight_exponents(&s)?;
    Ok((w.check().checks, serde_json::to_value(&w).expect("weights serialize")))
}

fn cmd_character(ring: &DpRing, job: &JobFile) -> StepResult {
    let s = simple_of(ring, Command::Character, &job.payload)?;
    let info = character_of_simple(&s)?;
    Ok((info.check().checks, serde_json::to_value(&info).expect("character serializes")))
}

fn cmd_serre(ring: &DpRing, job: &JobFile) -> StepResult {
    let chi = match &job.payload {
        Payload::Character(c) => json::character(ring.field().p(), c, "payload.character")?,
        Payload::Simple(_) => character_of_simple(&simple_of(ring, Command::SerreCheck, &job.payload)?)?.character,
        p => return Err(unsupported(Command::SerreCheck, p, "simple or character")),
    };
    let (_, rep) = serre_check(&chi, ring.e(), ring.r());
    let data = json!({ "character": chi, "er": ring.er() });
    Ok((rep.checks, data))
}

fn cmd_pairing(ring: &DpRing, job: &JobFile) -> StepResult {
    let s = simple_of(ring, Command::PairingCheck, &job.payload)?;
    let w = weight_exponents(&s)?;
    let amb = ambient_field(w.p, ring.params().m, w.d())?;
    let mut checks = Vec::new();
    let Some(signs) = stage(&mut checks, "signs", oracle::derive_signs(&w, &amb))? else {
        return Ok((checks, json!({ "ambient": field_data(&amb) })));
    };
    if let Some(rep) = stage(&mut checks, "pairing_identity", oracle::verify_pairing_identity(&w, &amb, &signs))? {
        checks.extend(rep.checks);
    }
    let mut data = json!({
        "ambient": field_data(&amb),
        "epsilon": amb.epsilon().ok().map(|e| json::field_json(&amb, e)),
        "signs": signs,
        "v": w.v,
    });
    match (&job.options.a, &job.options.b) {
        (Some(a), Some(b)) => {
            let a = json::field_elem(&amb, a, "options.a")?;
            let b = json::field_elem(&amb, b, "options.b")?;
            if let Some(x) = stage(&mut checks, "solution_pair", pairing(a, b, &s, &amb))? {
                checks.push(Check::pass("solution_pair"));
                data["value"] = json!(json::field_json(&amb, x));
            }
        }
        (None, None) => {}
        _ => return Err(Step::Input("options: `a` and `b` must be given together".into())),
    }
    Ok((checks, data))
}

fn cmd_oracle(ring: &DpRing, job: &JobFile) -> StepResult {
    let s = simple_of(ring, Command::Oracle, &job.payload)?;
    let w = weight_exponents(&s)?;
    let amb = ambient_field(w.p, ring.params().m, w.d())?;
    let mut checks = w.check().checks;
    if let Some(rep) = stage(&mut checks, "oracle", oracle::verify_weights(&w, &amb))? {
        checks.extend(rep.checks);
    }
    Ok((checks, json!({ "ambient": field_data(&amb), "weights": w })))
}

fn cmd_lift(ring: &DpRing, job: &JobFile) -> StepResult {
    let p = ring.p() as u32;
    if let Payload::Morphism(j) = &job.payload {
        let f = json::morphism(ring, j, "payload.morphism")?;
        let mut checks = check_morphism(&f).checks;
        if checks.iter().any(|c| !c.pass) {
            return Ok((checks, Value::Null));
        }
        let Some(lm) = stage(&mut checks, "lift_morphism", lift_tilde_morphism(&f))? else {
            return Ok((checks, Value::Null));
        };
        checks.push(Check::pass("lift_morphism"));
        let s1 = check_s1_morphism(&lm.source.module, &lm.target.module, &lm.matrix);
        checks.extend(s1.checks.into_iter().map(|c| Check { name: format!("lift_{}", c.name), ..c }));
        let data = json!({ "matrix": json::s1_matrix_json(ring.field(), &lm.matrix) });
        return Ok((checks, data));
    }
    let m = module_of(ring, Command::LiftCheck, &job.payload)?;
    let scalars = job.options.scalars.clone().unwrap_or_else(|| (1..p).collect());
    if let Some(c) = scalars.iter().find(|&&c| c >= p) {
        return Err(Step::Input(format!("options.scalars: {c} is not reduced mod {p}")));
    }
    let (lifted, rep) = round_trip_report(&m);
    let mut checks = rep.checks;
    let Some(lifted) = lifted else {
        return Ok((checks, Value::Null));
    };
    checks.extend(scalar_lift_report(&lifted, &scalars).checks);
    let data = json!({
        "weights": lifted.adapted.weights,
        "rounds": lifted.rounds,
        "lifted": json::s1_module_json(&lifted.module),
    });
    Ok((checks, data))
}

/// Runs one command on a jobfile given as JSON text.
pub fn run(command: Command, jobfile: &str, flags: &Flags) -> Outcome {
    let mut job = match JobFile::parse(jobfile) {
        Ok(j) => j,
        Err(e) => return Outcome::input_error(e.to_string()),
    };
    if let Some(d) = flags.trunc_degree {
        job.params.trunc_degree = Some(d);
    }
    let ring = match DpRing::new(job.params.clone()) {
        Ok(r) => r,
        Err(e) => return Outcome::input_error(params_error(e)),
    };
    let res = match command {
        Command::Validate => cmd_validate(&ring, &job),
        Command::AdaptedBasis => cmd_adapted_basis(&ring, &job),
        Command::Weights => cmd_weights(&ring, &job),
        Command::Character => cmd_character(&ring, &job),
        Command::SerreCheck => cmd_serre(&ring, &job),
        Command::PairingCheck => cmd_pairing(&ring, &job),
        Command::Oracle => cmd_oracle(&ring, &job),
        Command::LiftCheck => cmd_lift(&ring, &job),
    };
    match res {
        Ok((checks, data)) => {
            Outcome::from_report(Report { command: command.name().into(), params: Some(job.params), checks, data })
        }
        Err(Step::Input(msg)) => Outcome::input_error(msg),
    }
}

/// `oracle --grid`: every admissible configuration up to the given bounds.
pub fn run_grid(spec: GridSpec) -> Outcome {
    let entries = match oracle::grid(spec.pmax, spec.dmax) {
        Ok(e) => e,
        Err(e) => return Outcome::input_error(e.to_string()),
    };
    let checks = entries
        .iter()
        .map(|g| {
            let name = format!("p={} e={} r={} n={:?}", g.p, g.e, g.r, g.weights);
            if g.pass {
                Check::pass(name)
            } else {
                Check::fail(name, g.failures.join(", "))
            }
        })
        .collect();
    let data = json!({ "pmax": spec.pmax, "dmax": spec.dmax, "configurations": entries.len() });
    Outcome::from_report(Report { command: "oracle".into(), params: None, checks, data })
}

#[cfg(test)]
mod tests {
    use super::*;

    const SIMPLE: &str = r#"{"params": {"p": 5, "e": 2, "r": 1, "eisenstein": [-5, 0, 1]},
        "payload": {"simple": {"d": 2, "weights": [1, 2], "cyclic": true}}}"#;

    #[test]
    fn every_command_passes_on_a_cyclic_simple() {
        for cmd in Command::ALL {
            let out = run(cmd, SIMPLE, &Flags::default());
            assert_eq!(out.exit_code, EXIT_PASS, "{}: {}", cmd.name(), out.render(false));
            assert!(out.render(false).contains("result: PASS"));
        }
    }

    #[test]
    fn inadmissible_is_an_input_error() {
        let job = r#"{"params": {"p": 5, "e": 1, "r": 4, "eisenstein": [-5, 1]},
            "payload": {"simple": {"d": 1, "weights": [0], "cyclic": true}}}"#;
        let out = run(Command::Validate, job, &Flags::default());
        assert_eq!(out.exit_code, EXIT_INPUT);
        assert!(out.error.unwrap().contains("e·r ≤ p − 2"));
    }

    #[test]
    fn schema_errors_name_the_field() {
        let job = SIMPLE.replace("[1, 2]", "[1, 3]");
        let out = run(Command::Weights, &job, &Flags::default());
        assert_eq!(out.exit_code, EXIT_INPUT);
        assert!(out.error.unwrap().contains("payload.simple.weights[1]"));
        let out = run(Command::Weights, r#"{"params": {"p": 5}}"#, &Flags::default());
        assert!(out.error.unwrap().contains("missing field"));
        let job = SIMPLE.replace("\"e\": 2", "\"e\": 2, \"m\": 0");
        assert!(run(Command::Weights, &job, &Flags::default()).error.unwrap().starts_with("params.m"));
    }

    #[test]
    fn failing_checks_exit_one() {
        let job = r#"{"params": {"p": 5, "e": 2, "r": 1, "eisenstein": [-5, 0, 1]},
            "payload": {"character": {"digits": [3, 1]}}}"#;
        let out = run(Command::SerreCheck, job, &Flags::default());
        assert_eq!(out.exit_code, EXIT_FAIL);
        assert!(out.render(false).contains("FAIL digit_0"));
    }

    #[test]
    fn wrong_payload_and_trunc_override() {
        let out = run(Command::Weights, &SIMPLE.replace("\"simple\": {", "\"character\": {\"h\": 1, \"exponent\": 1}, \"x\": {"), &Flags::default());
        assert_eq!(out.exit_code, EXIT_INPUT);
        let flags = Flags { json: true, trunc_degree: Some(60) };
        let out = run(Command::Validate, SIMPLE, &flags);
        assert_eq!(out.report.unwrap().params.unwrap().trunc_degree, Some(60));
        let flags = Flags { json: true, trunc_degree: Some(10) };
        assert!(run(Command::Validate, SIMPLE, &flags).error.unwrap().contains("trunc_degree"));
    }

    #[test]
    fn json_is_deterministic() {
        let flags = Flags { json: true, trunc_degree: None };
        let a = run(Command::LiftCheck, SIMPLE, &flags).render(true);
        let b = run(Command::LiftCheck, SIMPLE, &flags).render(true);
        assert_eq!(a, b);
        let v: Value = serde_json::from_str(&a).unwrap();
        for k in ["command", "params", "checks", "data"] {
            assert!(v.get(k).is_some());
        }
    }

    #[test]
    fn grid_spec() {
        assert_eq!(GridSpec::parse(&["pmax=5", "dmax=2"]).unwrap(), GridSpec { pmax: 5, dmax: 2 });
        assert_eq!(GridSpec::parse(&["pmax=3,dmax=1"]).unwrap(), GridSpec { pmax: 3, dmax: 1 });
        assert!(GridSpec::parse(&["qmax=3"]).is_err());
        let out = run_grid(GridSpec { pmax: 3, dmax: 1 });
        assert_eq!(out.exit_code, EXIT_PASS);
    }
}
