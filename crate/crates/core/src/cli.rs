//! Command-line front end (`setcons`).
//!
//! Exit codes: 0 success, 1 input problems (unreadable file, syntax or
//! semantic diagnostics, a system that does not fit the command), 2 a size
//! cap was exceeded.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::caps::Caps;
use crate::convergence::{
    consensus_region, equilibria_sbm, is_contractive_encoded, is_contractive_sbm, is_locally_attractive_sbm,
    global_fixed_point, EquilibriaSummary,
};
use crate::dsl::{self, SystemSpec};
use crate::encoding::Partition;
use crate::error::Error;
use crate::expr::LinearSbm;
use crate::sim::{default_window, random_initial, render_timeline, simulate, topology};

/// How many listed equilibria get a local attractiveness verdict.
const LOCAL_CHECK_LIMIT: usize = 32;

#[derive(Debug, Parser)]
#[command(name = "setcons", version, about = "Convergence analysis and simulation of set-valued Boolean systems")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, global = true, default_value_t = Format::Json)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Global contractivity, equilibria and local attractiveness.
    Analyze { file: PathBuf },
    /// Run the system round by round until it repeats a state.
    Simulate {
        file: PathBuf,
        /// Round budget (default: the file's `max_rounds`, else 2·n·κ).
        #[arg(long)]
        rounds: Option<usize>,
        /// Seed for `--random-init` (default: the file's `seed`, else 0).
        #[arg(long)]
        seed: Option<u64>,
        /// Replace the declared initial sets by random ones.
        #[arg(long)]
        random_init: bool,
        /// Include an ASCII timeline of every round.
        #[arg(long)]
        timeline: bool,
        /// Timeline width in characters.
        #[arg(long, default_value_t = 60)]
        width: usize,
    },
    /// Cell partition and the bit-vector code of every initial set.
    Encode { file: PathBuf },
    /// Consensus region of a linear system.
    Consensus { file: PathBuf },
    /// Equilibria, cell by cell.
    Equilibria { file: PathBuf },
}

enum Failure {
    Diagnostics(String),
    Cap(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_cap() {
            Failure::Cap(format!("error: {e}"))
        } else {
            Failure::Diagnostics(format!("error: {e}"))
        }
    }
}

type Outcome = Result<(Value, String), Failure>;

/// Runs the CLI with explicit arguments and output streams; returns the
/// exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 {
                write!(out, "{text}")
            } else {
                write!(err, "{text}")
            };
            return code;
        }
    };
    let outcome = match &cli.command {
        Command::Analyze { file } => load(file).and_then(|s| analyze(&s)),
        Command::Simulate {
            file,
            rounds,
            seed,
            random_init,
            timeline,
            width,
        } => load(file).and_then(|s| simulate_cmd(&s, *rounds, *seed, *random_init, *timeline, *width)),
        Command::Encode { file } => load(file).and_then(|s| encode(&s)),
        Command::Consensus { file } => load(file).and_then(|s| consensus(&s)),
        Command::Equilibria { file } => load(file).and_then(|s| equilibria(&s)),
    };
    match outcome {
        Ok((value, text)) => {
            let _ = match cli.format {
                Format::Json => writeln!(out, "{}", serde_json::to_string_pretty(&value).expect("plain JSON")),
                Format::Text => write!(out, "{text}"),
            };
            0
        }
        Err(Failure::Diagnostics(msg)) => {
            let _ = writeln!(err, "{msg}");
            1
        }
        Err(Failure::Cap(msg)) => {
            let _ = writeln!(err, "{msg}");
            let _ = writeln!(err, "  hint: raise the limit with SETCONS_CAPS (enum=, partition=, listing=)");
            2
        }
    }
}

fn load(path: &Path) -> Result<SystemSpec, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Diagnostics(format!("error: cannot read {}: {e}", path.display())))?;
    dsl::parse(&text).map_err(|diags| {
        Failure::Diagnostics(
            diags
                .iter()
                .map(|d| format!("{}:{d}", path.display()))
                .collect::<Vec<_>>()
                .join("\n"),
        )
    })
}

fn caps_for(spec: &SystemSpec) -> Result<Caps, Failure> {
    Ok(Caps::resolve(&spec.options)?)
}

fn names_of(order: &[usize], names: &[String]) -> Vec<String> {
    order.iter().map(|&i| names[i].clone()).collect()
}

fn equilibria_json(summary: &EquilibriaSummary) -> Value {
    json!({
        "kappa": summary.kappa,
        "per_cell_counts": summary.per_cell.iter().map(Vec::len).collect::<Vec<_>>(),
        "per_cell": summary.per_cell,
        "total": summary.total.map(|t| t.to_string()),
        "listed": summary.listing,
    })
}

fn analyze(spec: &SystemSpec) -> Outcome {
    let caps = caps_for(spec)?;
    let sbm = spec.to_sbm()?;
    let names = spec.names();
    let initial = spec.initial_state();
    let partition = Partition::for_system(&sbm, &initial, caps.partition)?;
    let verdict = is_contractive_sbm(&sbm);
    let encoded = is_contractive_encoded(&sbm, &partition)?;
    if encoded != verdict.contractive {
        return Err(Error::Internal("shadow and encoded contractivity disagree".into()).into());
    }
    let fixed_point = if verdict.contractive {
        Some(global_fixed_point(&sbm, &initial)?)
    } else {
        None
    };
    let equilibria = equilibria_sbm(&sbm, &partition, caps.enumeration, caps.listing)?;
    let mut local = Vec::new();
    let mut local_text = String::new();
    for x in equilibria.listing.iter().flatten().take(LOCAL_CHECK_LIMIT) {
        let v = is_locally_attractive_sbm(&sbm, x, &partition)?;
        local.push(json!({ "state": x, "theorem": v.theorem, "direct": v.direct }));
        let shown: Vec<String> = x.iter().map(|s| s.to_string()).collect();
        local_text.push_str(&format!(
            "  ({}) attractive: {} (derivative test), {} (simulation)\n",
            shown.join(", "),
            v.theorem,
            v.direct
        ));
    }
    let linear = LinearSbm::from_sbm(&sbm).ok().map(|l| consensus_region(&l));
    let witness = verdict.witness.as_ref().map(|p| names_of(p.order(), &names));
    let cycle = verdict.cycle_evidence.as_ref().map(|c| names_of(c, &names));
    let value = json!({
        "contractive": verdict.contractive,
        "witness_order": witness,
        "q": verdict.q,
        "cycle": cycle,
        "encoded_contractive": encoded,
        "incidence": sbm.incidence(),
        "edges": topology(&sbm).iter().map(|&(j, i)| [names[j].clone(), names[i].clone()]).collect::<Vec<_>>(),
        "fixed_point": fixed_point,
        "equilibria_summary": equilibria_json(&equilibria),
        "local": local,
        "consensus": linear,
    });

    let mut text = String::new();
    text.push_str(&format!("incidence matrix:\n{}\n", sbm.incidence()));
    if verdict.contractive {
        text.push_str(&format!(
            "contractive: yes, F^{} is constant (elimination order {})\n",
            verdict.q.unwrap_or(0),
            witness.unwrap_or_default().join(" ")
        ));
        for (name, set) in names.iter().zip(fixed_point.iter().flatten()) {
            text.push_str(&format!("  {name} -> {set}\n"));
        }
    } else {
        text.push_str(&format!(
            "contractive: no, dependency cycle {}\n",
            cycle.unwrap_or_default().join(" -> ")
        ));
    }
    text.push_str(&format!(
        "equilibria: {} over {} cells\n",
        equilibria.total.map_or("too many to count".to_string(), |t| t.to_string()),
        equilibria.kappa
    ));
    text.push_str(&local_text);
    if let Some(c) = &linear {
        text.push_str(&format!("consensus region: {}\n", c.region));
    }
    Ok((value, text))
}

fn simulate_cmd(
    spec: &SystemSpec,
    rounds: Option<usize>,
    seed: Option<u64>,
    random: bool,
    timeline: bool,
    width: usize,
) -> Outcome {
    let caps = caps_for(spec)?;
    let spec = if random {
        let seed = seed.or(spec.options.seed).unwrap_or(0);
        spec.with_initial(random_initial(spec, seed))?
    } else {
        spec.clone()
    };
    let traj = simulate(&spec, rounds, &caps)?;
    let picture = timeline.then(|| render_timeline(&traj, &default_window(&spec), width.max(1)));
    let mut value = serde_json::to_value(&traj).expect("plain data");
    if let Some(p) = &picture {
        value["timeline"] = json!(p);
    }
    let mut text = String::new();
    match (traj.transient, traj.period) {
        (Some(t), Some(1)) => text.push_str(&format!("fixed point after {t} rounds\n")),
        (Some(t), Some(p)) => text.push_str(&format!("cycle of period {p} entered after {t} rounds\n")),
        _ => text.push_str(&format!("no repetition within {} rounds\n", traj.rounds.len() - 1)),
    }
    if let Some(c) = &traj.consensus {
        text.push_str(&format!("consensus on {c}\n"));
    }
    for (name, set) in traj.names.iter().zip(traj.last()) {
        text.push_str(&format!("  {name} = {set}\n"));
    }
    if let Some(p) = picture {
        text.push_str(&p);
    }
    Ok((value, text))
}

fn encode(spec: &SystemSpec) -> Outcome {
    let caps = caps_for(spec)?;
    let sbm = spec.to_sbm()?;
    let initial = spec.initial_state();
    let partition = Partition::for_system(&sbm, &initial, caps.partition)?;
    let mut vars = serde_json::Map::new();
    let mut text = format!("{} cells\n", partition.kappa());
    for (h, cell) in partition.cells().iter().enumerate() {
        text.push_str(&format!("  Z{} {} {}\n", h + 1, cell.signature, cell.region));
    }
    for (name, set) in spec.names().iter().zip(&initial) {
        let bits = partition.encode(set)?.to_string();
        text.push_str(&format!("{name} = {bits}\n"));
        vars.insert(name.clone(), json!(bits));
    }
    let value = json!({
        "generators": partition.generators(),
        "kappa": partition.kappa(),
        "cells": partition.cells(),
        "vars": vars,
    });
    Ok((value, text))
}

fn consensus(spec: &SystemSpec) -> Outcome {
    let sbm = spec.to_sbm()?;
    let linear = LinearSbm::from_sbm(&sbm)?;
    let verdict = consensus_region(&linear);
    let text = if verdict.exists {
        format!("consensus possible on any subset of {}\n", verdict.region)
    } else {
        "no consensus fixed point\n".to_string()
    };
    Ok((serde_json::to_value(&verdict).expect("plain data"), text))
}

fn equilibria(spec: &SystemSpec) -> Outcome {
    let caps = caps_for(spec)?;
    let sbm = spec.to_sbm()?;
    let partition = Partition::for_system(&sbm, &spec.initial_state(), caps.partition)?;
    let summary = equilibria_sbm(&sbm, &partition, caps.enumeration, caps.listing)?;
    let mut text = String::new();
    for (h, fixed) in summary.per_cell.iter().enumerate() {
        let list: Vec<String> = fixed.iter().map(|b| b.to_string()).collect();
        text.push_str(&format!("cell {} ({}): {}\n", h + 1, partition.cells()[h].region, list.join(" ")));
    }
    text.push_str(&format!(
        "total: {}\n",
        summary.total.map_or("too many to count".to_string(), |t| t.to_string())
    ));
    Ok((equilibria_json(&summary), text))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn systems(name: &str) -> String {
        format!("{}/systems/{name}", env!("CARGO_MANIFEST_DIR"))
    }

    fn call(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let mut full = vec!["setcons"];
        full.extend_from_slice(args);
        let code = run(full, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn analyze_six_agents() {
        let (code, out, _) = call(&["analyze", &systems("six_agents.sbm")]);
        assert_eq!(code, 0);
        let v: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["contractive"], json!(true));
        assert_eq!(v["q"], json!(6));
        assert_eq!(v["encoded_contractive"], json!(true));
        assert_eq!(v["equilibria_summary"]["total"], json!("1"));
        assert_eq!(v["fixed_point"][3], json!("[60,120]"));
    }

    #[test]
    fn analyze_three_agents() {
        let (code, out, _) = call(&["analyze", &systems("three_agents.sbm")]);
        assert_eq!(code, 0);
        let v: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["contractive"], json!(false));
        assert_eq!(v["cycle"], json!(["X1"]));
        assert_eq!(v["consensus"], Value::Null);
    }

    #[test]
    fn missing_file_is_a_diagnostic() {
        let (code, _, err) = call(&["analyze", "missing.sbm"]);
        assert_eq!(code, 1);
        assert!(err.contains("cannot read missing.sbm"));
    }

    #[test]
    fn nonlinear_consensus_is_a_diagnostic() {
        let (code, _, err) = call(&["consensus", &systems("three_agents.sbm")]);
        assert_eq!(code, 1);
        assert!(err.contains("not linear"));
        let (code, out, _) = call(&["consensus", &systems("linear_pair.sbm")]);
        assert_eq!(code, 0);
        let v: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v, json!({"exists": true, "region": "[2,4] | [6,8]"}));
    }

    #[test]
    fn encode_three_agents() {
        let (code, out, _) = call(&["encode", &systems("three_agents.sbm")]);
        assert_eq!(code, 0);
        let v: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["vars"], json!({"X1": "11000", "X2": "10100", "X3": "00010"}));
        assert_eq!(v["cells"][4], json!({"signature": "000", "region": "[0,2) | (7,8) | (11,inf)"}));
    }

    #[test]
    fn simulate_and_timeline() {
        let (code, out, _) = call(&["simulate", &systems("three_agents.sbm"), "--rounds", "10"]);
        assert_eq!(code, 0);
        let v: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["rounds"][1][1], json!("[0,5] | (7,inf)"));
        let (code, out, _) = call(&[
            "--format",
            "text",
            "simulate",
            &systems("six_agents.sbm"),
            "--random-init",
            "--seed",
            "3",
            "--timeline",
        ]);
        assert_eq!(code, 0);
        assert!(out.starts_with("fixed point after"));
        assert!(out.contains("consensus on"));
        assert!(out.contains("t=0"));
    }

    #[test]
    fn cap_exceeded_exits_with_two() {
        let dir = std::env::temp_dir().join("setcons-cli-cap-test.sbm");
        std::fs::write(
            &dir,
            "universe [0,10]\nstate A = [1,2]\nstate B = [3,4]\nrule A = B\nrule B = A\noption partition_cap = 1\n",
        )
        .unwrap();
        let (code, _, err) = call(&["encode", dir.to_str().unwrap()]);
        assert_eq!(code, 2);
        assert!(err.contains("exceeds the cap"));
    }

    #[test]
    fn bad_arguments() {
        let (code, _, err) = call(&["frobnicate"]);
        assert_eq!(code, 1);
        assert!(!err.is_empty());
    }
}
