use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use super::emit::{emit_report, Format};
use super::workspace::{Workspace, WorkspaceError};
use crate::cdc::{
    classify_cdc_map, linearize_section, random_map, theta, verify_cdc_axioms, verify_tangent_identities, CdcMap, IdentityCheck,
};
use crate::classify::{classify_affine, classify_calg, ClassificationReport, Status};
use crate::error::Error;
use crate::groebner::Limits;
use crate::kahler::{
    base_change_check, classify_cotangent, cotangent_map, detect_regime, jacobian_smoothness_note, kahler_module, BaseChangeVerdict,
    ModulePresentation,
};
use crate::modlin::Regime;
use crate::oracle::{identity_check, replay_evidence, OracleConfig, OracleVerdict};
use crate::presentations::{AlgebraMorphism, AlgebraPresentation};

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum InstanceArg {
    Calg,
    Affine,
    CdcLinear,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Suite {
    ThetaLaws,
    TangentIdentities,
    BaseChange,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Command {
    /// Either `morphism` or `structure` (the structure map of an algebra) is set.
    Classify { instance: InstanceArg, morphism: Option<String>, structure: Option<String> },
    Kahler { algebra: String },
    Cotangent { morphism: String },
    CdcAxioms { map: String, with: Option<String> },
    CdcLinearize { map: String, section: String },
    /// `random` extra randomly generated pairs for the CDC suites.
    Verify { suite: Suite, random: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Flags {
    pub format: Format,
    pub oracle: bool,
    pub strict: bool,
    pub degree_cap: u32,
    pub seed: u64,
}

impl Default for Flags {
    fn default() -> Self {
        Flags { format: Format::Human, oracle: false, strict: false, degree_cap: crate::groebner::DEFAULT_DEGREE_CAP, seed: 0 }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Outcome {
    pub json: Value,
    pub text: String,
    /// Some verdict was left undetermined (exit 4 under `--strict`).
    pub undetermined: bool,
    /// A checked law failed: exit 6.
    pub violation: Option<String>,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Io(String),
    #[error(transparent)]
    Workspace(#[from] WorkspaceError),
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] Error),
}

/// 2 input error, 3 ill-defined morphism, 5 resource limit, 6 inconsistency, 1 otherwise.
pub fn exit_code(e: &CliError) -> i32 {
    match e {
        CliError::Workspace(_) | CliError::Usage(_) => 2,
        CliError::Core(Error::IllDefinedMorphism { .. }) => 3,
        CliError::Core(e) if e.is_resource_limit() => 5,
        CliError::Core(Error::InconsistentClassification(_) | Error::EvidenceMismatch(_)) => 6,
        _ => 1,
    }
}

/// Removes every `timings_ms` entry, for determinism comparisons.
pub fn strip_timings(v: &mut Value) {
    match v {
        Value::Object(m) => {
            m.shift_remove("timings_ms");
            m.values_mut().for_each(strip_timings);
        }
        Value::Array(a) => a.iter_mut().for_each(strip_timings),
        _ => {}
    }
}

fn unknown(kind: &str, name: &str) -> CliError {
    CliError::Usage(format!("no {kind} named `{name}` in the workspace"))
}

fn oracle_cfg(flags: &Flags) -> Option<OracleConfig> {
    flags.oracle.then(|| OracleConfig::with_seed(flags.seed))
}

pub fn run(cmd: &Command, ws: &Workspace, flags: &Flags) -> Result<Outcome, CliError> {
    let limits = Limits::with_degree_cap(flags.degree_cap);
    match cmd {
        Command::Classify { instance, morphism, structure } => classify(ws, *instance, morphism.as_deref(), structure.as_deref(), flags, &limits),
        Command::Kahler { algebra } => kahler(ws, algebra, flags, &limits),
        Command::Cotangent { morphism } => cotangent(ws, morphism, flags, &limits),
        Command::CdcAxioms { map, with } => cdc_axioms(ws, map, with.as_deref(), flags),
        Command::CdcLinearize { map, section } => cdc_linearize(ws, map, section, flags),
        Command::Verify { suite: Suite::BaseChange, .. } => base_change_suite(ws, flags, &limits),
        Command::Verify { suite, random } => cdc_suite(ws, *suite, *random, flags),
    }
}

fn text_of(v: &Value, flags: &Flags, human: impl FnOnce() -> String) -> String {
    match flags.format {
        Format::Json => serde_json::to_string_pretty(v).expect("json") + "\n",
        Format::Human => human(),
    }
}

fn structure_map(a: &Arc<AlgebraPresentation>) -> Result<AlgebraMorphism, Error> {
    let name = format!("{}_structure", a.name());
    match a.base() {
        Some(base) => AlgebraMorphism::new(name, Arc::new(AlgebraPresentation::over_itself(base)?), a.clone(), vec![], true),
        None => AlgebraMorphism::new(name, Arc::new(AlgebraPresentation::field(a.domain())?), a.clone(), vec![], false),
    }
}

fn classify(
    ws: &Workspace,
    instance: InstanceArg,
    morphism: Option<&str>,
    structure: Option<&str>,
    flags: &Flags,
    limits: &Limits,
) -> Result<Outcome, CliError> {
    let mut report: ClassificationReport = if instance == InstanceArg::CdcLinear {
        let name = morphism.ok_or_else(|| CliError::Usage("cdc-linear classification needs --morphism <cdcmap>".into()))?;
        classify_cdc_map(ws.cdcmap(name).ok_or_else(|| unknown("cdcmap", name))?)?
    } else {
        let f = match (morphism, structure) {
            (Some(m), None) => ws.morphism(m).ok_or_else(|| unknown("morphism", m))?.morphism.clone(),
            (None, Some(a)) => structure_map(&ws.algebra(a).ok_or_else(|| unknown("algebra", a))?.presentation)?,
            _ => return Err(CliError::Usage("give exactly one of --morphism and --structure".into())),
        };
        match instance {
            InstanceArg::Calg => classify_calg(&f, limits)?,
            _ => classify_affine(&f, None, limits)?,
        }
    };
    if flags.oracle {
        let v = replay_evidence(&report)?;
        report.annotate("oracle_replay", format!("verified {} witnesses", v.verified.len()));
    }
    let undetermined = report.predicates.values().any(|s| s.status == Status::Undetermined);
    let json = serde_json::to_value(&report).expect("report serializes");
    let text = emit_report(&report, flags.format);
    Ok(Outcome { json, text, undetermined, violation: None })
}

fn polys_json(ps: &[crate::polycore::Polynomial]) -> Value {
    Value::Array(ps.iter().map(|p| Value::String(p.to_string())).collect())
}

fn module_json(m: &ModulePresentation, limits: &Limits) -> Result<Value, Error> {
    Ok(json!({
        "generators": m.labels(),
        "relations": m.relations().iter().map(|r| polys_json(r)).collect::<Vec<_>>(),
        "is_zero": m.is_zero(limits)?,
        "dimension": m.dimension(limits)?,
    }))
}

fn module_text(title: &str, m: &Value) -> String {
    format!(
        "{title}: generators {}, relations {}, zero: {}, dimension: {}\n",
        m["generators"],
        m["relations"],
        m["is_zero"],
        if m["dimension"].is_null() { "infinite".to_string() } else { m["dimension"].to_string() }
    )
}

fn kahler(ws: &Workspace, name: &str, flags: &Flags, limits: &Limits) -> Result<Outcome, CliError> {
    let a = &ws.algebra(name).ok_or_else(|| unknown("algebra", name))?.presentation;
    let omega = kahler_module(a, limits)?;
    let note = jacobian_smoothness_note(a, limits)?;
    let module = module_json(&omega, limits)?;
    let json = json!({
        "algebra": name,
        "base": a.base_name(),
        "kahler_module": module,
        "jacobian_smoothness_note": {"formally_smooth_hint": note.formally_smooth_hint.to_string(), "detail": note.detail},
    });
    let text = text_of(&json, flags, || {
        module_text(&format!("Ω_{{{name}/{}}}", a.base_name()), &json["kahler_module"])
            + &format!("jacobian smoothness: {} ({})\n", json["jacobian_smoothness_note"]["formally_smooth_hint"], note.detail)
    });
    Ok(Outcome { text, json, undetermined: note.formally_smooth_hint == crate::kahler::SmoothnessHint::Undetermined, violation: None })
}

fn cotangent(ws: &Workspace, name: &str, flags: &Flags, limits: &Limits) -> Result<Outcome, CliError> {
    let f = &ws.morphism(name).ok_or_else(|| unknown("morphism", name))?.morphism;
    let seq = cotangent_map(f, limits)?;
    let exact = seq.check_exactness(limits)?;
    let regime = detect_regime(&seq, limits)?;
    let v = classify_cotangent(&seq, regime, limits)?;
    let json = json!({
        "morphism": name,
        "base": f.base_name(),
        "pullback": module_json(&seq.pullback, limits)?,
        "middle": module_json(&seq.middle, limits)?,
        "v": seq.v.columns().iter().map(|c| polys_json(c)).collect::<Vec<_>>(),
        "cokernel": module_json(&seq.cokernel, limits)?,
        "exact": exact,
        "regime": if regime == Regime::FiniteDimensional { "finite-dimensional" } else { "general" },
        "verdicts": {"monic": v.monic, "coker_zero": v.coker_zero, "split_monic": v.split_monic, "iso": v.iso},
    });
    let undetermined = [&v.monic, &v.coker_zero, &v.split_monic, &v.iso].iter().any(|s| s.status == Status::Undetermined);
    let text = text_of(&json, flags, || {
        let mut t = format!("cotangent sequence of `{name}` over {}\n", f.base_name());
        t += &module_text("f*Ω_A", &json["pullback"]);
        t += &module_text("Ω_B", &json["middle"]);
        t += &format!("v columns: {}\n", json["v"]);
        t += &module_text("Ω_{B/A}", &json["cokernel"]);
        t += &format!("exact: {exact}   regime: {}\n", json["regime"].as_str().unwrap_or(""));
        for (k, s) in [("monic", &v.monic), ("coker_zero", &v.coker_zero), ("split_monic", &v.split_monic), ("iso", &v.iso)] {
            t += &format!("  {k:<12} {}\n", s.status);
        }
        t
    });
    let violation = (!exact).then(|| format!("cotangent sequence of `{name}` is not exact"));
    Ok(Outcome { json, text, undetermined, violation })
}

fn checks_text(checks: &[IdentityCheck]) -> String {
    checks
        .iter()
        .map(|c| {
            let mark = if c.holds { "ok  " } else { "FAIL" };
            let oracle = c.oracle.as_ref().map(|o| format!("   [oracle: {o}]")).unwrap_or_default();
            format!("  {mark} {}{oracle}\n", c.name)
        })
        .collect()
}

fn cdc_axioms(ws: &Workspace, name: &str, with: Option<&str>, flags: &Flags) -> Result<Outcome, CliError> {
    let f = ws.cdcmap(name).ok_or_else(|| unknown("cdcmap", name))?;
    let g = match with {
        Some(w) => ws.cdcmap(w).ok_or_else(|| unknown("cdcmap", w))?.clone(),
        None => CdcMap::identity(f.domain(), f.coarity()),
    };
    let rep = verify_cdc_axioms(f, &g, oracle_cfg(flags).as_ref())?;
    let all = rep.all_hold();
    let json = json!({"map": name, "with": with.unwrap_or("identity"), "checks": rep.checks, "all_hold": all});
    let text = text_of(&json, flags, || format!("differential-category axioms at `{name}`, `{}`\n{}", with.unwrap_or("identity"), checks_text(&rep.checks)));
    Ok(Outcome { json, text, undetermined: false, violation: (!all).then(|| "an axiom instance failed".into()) })
}

fn cdc_linearize(ws: &Workspace, name: &str, section: &str, flags: &Flags) -> Result<Outcome, CliError> {
    let f = ws.cdcmap(name).ok_or_else(|| unknown("cdcmap", name))?;
    let s = ws.section(section).ok_or_else(|| unknown("section", section))?;
    if s.for_map != name {
        return Err(CliError::Usage(format!("section `{section}` is declared for `{}`, not `{name}`", s.for_map)));
    }
    let sf = linearize_section(f, &s.map)?;
    let mut json = json!({
        "map": name,
        "section": section,
        "linear_section": polys_json(sf.components()),
        "verified": true,
    });
    if let Some(cfg) = oracle_cfg(flags) {
        let comp = sf.standardized().then(&theta(f)?)?;
        let id = CdcMap::identity(f.domain(), comp.arity());
        for (a, b) in comp.components().iter().zip(id.components()) {
            if identity_check(a, b, &cfg)? != OracleVerdict::ProbablyEqual {
                return Err(Error::EvidenceMismatch("oracle rejects θ_f∘s_f = id".into()).into());
            }
        }
        json["oracle"] = Value::String("probably equal".into());
    }
    let text = text_of(&json, flags, || {
        format!("linear section of `{name}` from `{section}`:\n  ({})\nverified: θ_f∘s_f = id\n", sf.components().iter().map(|c| c.to_string()).collect::<Vec<_>>().join(", "))
    });
    Ok(Outcome { json, text, undetermined: false, violation: None })
}

/// Composable workspace pairs first, then `random` generated pairs.
fn cdc_pairs(ws: &Workspace, random: usize, seed: u64) -> Vec<(String, CdcMap, CdcMap)> {
    let mut out = Vec::new();
    for f in &ws.cdcmaps {
        for g in &ws.cdcmaps {
            if f.domain().has_negation() && g.domain() == f.domain() && g.arity() == f.coarity() {
                out.push((format!("{}, {}", f.name(), g.name()), f.clone(), g.clone()));
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for k in 0..random {
        use rand::Rng;
        let (n, m, l) = (rng.gen_range(1..=3), rng.gen_range(1..=3), rng.gen_range(1..=3));
        let f = random_map(&mut rng, crate::polycore::CoefficientDomain::Rationals, n, m, 4, 3).with_name(format!("f{k}"));
        let g = random_map(&mut rng, crate::polycore::CoefficientDomain::Rationals, m, l, 4, 3).with_name(format!("g{k}"));
        out.push((format!("random #{k}"), f, g));
    }
    out
}

fn cdc_suite(ws: &Workspace, suite: Suite, random: usize, flags: &Flags) -> Result<Outcome, CliError> {
    let cfg = oracle_cfg(flags);
    let mut cases = Vec::new();
    let mut text = String::new();
    let mut all = true;
    for (label, f, g) in cdc_pairs(ws, random, flags.seed) {
        let mut checks = verify_tangent_identities(&f, &g, cfg.as_ref())?.checks;
        match suite {
            Suite::ThetaLaws => checks.retain(|c| c.name.starts_with('θ')),
            _ => checks.extend(verify_cdc_axioms(&f, &g, cfg.as_ref())?.checks),
        }
        let ok = checks.iter().all(|c| c.holds);
        all &= ok;
        text += &format!("{label}: {}\n", if ok { "all identities hold" } else { "FAILED" });
        text += &checks_text(&checks);
        cases.push(json!({
            "case": label,
            "f": polys_json(f.components()),
            "g": polys_json(g.components()),
            "checks": checks,
            "all_hold": ok,
        }));
    }
    let name = match suite {
        Suite::ThetaLaws => "theta-laws",
        _ => "tangent-identities",
    };
    let json = json!({"suite": name, "seed": flags.seed, "cases": cases, "all_hold": all});
    let text = text_of(&json, flags, || text);
    Ok(Outcome { json, text, undetermined: false, violation: (!all).then(|| format!("{name}: an identity failed")) })
}

fn base_change_suite(ws: &Workspace, flags: &Flags, limits: &Limits) -> Result<Outcome, CliError> {
    let mut cases = Vec::new();
    let mut text = String::new();
    let (mut undetermined, mut failed) = (false, false);
    for f in &ws.morphisms {
        for g in &ws.morphisms {
            if f.name == g.name || f.source != g.source || f.over.is_some() != g.over.is_some() {
                continue;
            }
            let verdict = base_change_check(&f.morphism, &g.morphism, limits)?;
            let (status, detail) = match &verdict {
                BaseChangeVerdict::Holds { dimension } => ("holds", json!({"dimension": dimension})),
                BaseChangeVerdict::Fails { reason } => {
                    failed = true;
                    ("fails", json!({"reason": reason}))
                }
                BaseChangeVerdict::Undetermined(r) => {
                    undetermined = true;
                    ("undetermined", json!({"reason": r}))
                }
            };
            text += &format!("Ω along `{}` base-changed by `{}`: {status} {}\n", f.name, g.name, detail);
            let mut case = json!({"f": f.name, "g": g.name, "status": status});
            if let (Value::Object(c), Value::Object(d)) = (&mut case, detail) {
                c.extend(d);
            }
            cases.push(case);
        }
    }
    let json = json!({"suite": "base-change", "cases": cases, "all_hold": !failed && !undetermined});
    let text = text_of(&json, flags, || text);
    Ok(Outcome { json, text, undetermined, violation: failed.then(|| "base change failed".into()) })
}
