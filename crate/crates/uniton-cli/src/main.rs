//! `uniton`: build, verify and classify harmonic maps of finite uniton number.
//!
//! Every command writes a JSON report to standard output and a one-line
//! summary to standard error. Exit codes: 0 success, 2 bad input, 3 pattern
//! violation, 4 no usable evaluation point, 5 a check failed.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};
use uniton::combinatorics::{enumerate_pairs, matching_check, rank_formula, uniton_bound_detail, AdaptedPair, EnumerateOptions};
use uniton::engine::UnitonChain;
use uniton::loop_model::{f0_adapted_check, model_space, ModelSpace};
use uniton::presets::{preset, PRESET_NAMES};
use uniton::scenario::{RawModel, Scenario};
use uniton::verifier::{run_checks, CheckKind, FdConfig};
use uniton::{Error, GaussRat};

#[derive(Parser)]
#[command(name = "uniton", version, about = "Harmonic maps of finite uniton number into complex Grassmannians")]
struct Cli {
    /// Print compact single-line JSON instead of indented JSON.
    #[arg(long, global = true)]
    json: bool,
    /// Suppress the summary on standard error.
    #[arg(long, global = true)]
    quiet: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Input {
    /// Scenario document (JSON).
    #[arg(long, value_name = "FILE", conflicts_with = "preset")]
    scenario: Option<PathBuf>,
    /// Built-in scenario; `uniton preset` lists them.
    #[arg(long, value_name = "NAME")]
    preset: Option<String>,
    /// Draw sample points from this seed, replacing any listed in the scenario.
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Subcommand)]
enum Command {
    /// Build the chain and report generic ranks of the unitons and F-chain.
    Build {
        #[command(flatten)]
        input: Input,
    },
    /// Run verifier checks at generic points.
    Verify {
        #[command(flatten)]
        input: Input,
        /// Comma-separated check names, or "all".
        #[arg(long, default_value = "all")]
        checks: String,
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
        /// Finite-difference step.
        #[arg(long, default_value_t = 1e-5)]
        h: f64,
        /// Number of generic points to check at.
        #[arg(long, default_value_t = 3)]
        points: usize,
    },
    /// List adapted pairs whose maps land in G_p(C^n) with uniton number r.
    Enumerate {
        n: usize,
        p: usize,
        r: usize,
        /// Skip the uniton-number bound.
        #[arg(long)]
        no_bound: bool,
        /// Skip the realizability pass (static candidates only).
        #[arg(long)]
        no_realize: bool,
        /// Only pairs with this dim F0 (of the reduced problem when 2p > n).
        #[arg(long)]
        k: Option<usize>,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// Table of uniton-number bounds r_k for k = 0..n.
    Bound { n: usize, p: usize },
    /// Grassmannian model W at generic points, with adaptedness and shift-stability.
    Model {
        #[command(flatten)]
        input: Input,
        /// Hand-written model vectors instead of a scenario.
        #[arg(long, value_name = "FILE", conflicts_with_all = ["scenario", "preset"])]
        raw_model: Option<PathBuf>,
        #[arg(long, default_value_t = 1)]
        points: usize,
    },
    /// Print a preset scenario, or list the presets.
    Preset { name: Option<String> },
}

/// A command's outcome: the report, a summary line and whether it passed.
struct Outcome {
    report: Value,
    summary: String,
    pass: bool,
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Parse(_) | Error::BadArguments(_) | Error::OutOfRange(_) | Error::DivisionByZeroFunction => 2,
        Error::PatternViolation { .. } => 3,
        Error::NoGenericPoint(_) | Error::PoleAtPoint(_) | Error::RankDropAtPoint { .. } | Error::InfeasiblePair(_) => 4,
        Error::SplitFailure { .. } | Error::StepTooLarge { .. } => 5,
    }
}

fn load(input: &Input) -> Result<Scenario, Error> {
    let mut s = match (&input.scenario, &input.preset) {
        (Some(path), _) => {
            let text = std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
            Scenario::from_json(&text)?
        }
        (None, Some(name)) => preset(name)?,
        (None, None) => return Err(Error::BadArguments("one of --scenario or --preset is required".into())),
    };
    if let Some(seed) = input.seed {
        s.seed = seed;
        s.points = None;
    }
    Ok(s)
}

fn strings(points: &[GaussRat]) -> Vec<String> {
    points.iter().map(ToString::to_string).collect()
}

fn pair_json(p: &AdaptedPair) -> Value {
    let (l, s) = p.to_matrices();
    json!({ "k": p.k, "L": l, "S": s })
}

fn grassmannian(chain: &UnitonChain) -> Option<usize> {
    chain.generic.as_ref()?.f_ranks.as_ref()?.last().copied()
}

fn build_summary(s: &Scenario, chain: &UnitonChain) -> Value {
    let g = chain.generic.as_ref().expect("built chains carry generic data");
    let mut v = json!({
        "n": chain.n,
        "k": chain.k,
        "r": chain.r,
        "Q_sign": chain.q_sign,
        "alpha_ranks": g.alpha_ranks,
        "f_ranks": g.f_ranks,
        "p": grassmannian(chain),
        "generic_points": strings(&g.points),
    });
    if let Some(p) = &s.pair {
        v["pair"] = pair_json(p);
        v["rank_formula"] = json!((0..=p.r()).map(|i| rank_formula(p, i).ok()).collect::<Vec<_>>());
    }
    v
}

fn cmd_build(input: &Input) -> Result<Outcome, Error> {
    let s = load(input)?;
    let chain = s.build_chain()?;
    let report = build_summary(&s, &chain);
    let summary = format!(
        "build: n={} k={} r={} alpha ranks {} F ranks {}",
        chain.n,
        chain.k,
        chain.r,
        report["alpha_ranks"],
        report["f_ranks"]
    );
    Ok(Outcome { report, summary, pass: true })
}

fn parse_checks(list: &str) -> Result<Vec<CheckKind>, Error> {
    if list.trim() == "all" {
        return Ok(CheckKind::ALL.to_vec());
    }
    list.split(',').map(|c| c.trim().parse()).collect()
}

fn cmd_verify(input: &Input, checks: &str, tol: f64, h: f64, count: usize) -> Result<Outcome, Error> {
    if !(tol > 0.0 && h > 0.0) {
        return Err(Error::BadArguments("--tol and --h must be positive".into()));
    }
    let checks = parse_checks(checks)?;
    let s = load(input)?;
    let chain = s.build_chain()?;
    let points: Vec<GaussRat> = chain.generic_points().into_iter().take(count.max(1)).collect();
    let cfg = FdConfig { h, tol, ..FdConfig::default() };
    let reports = run_checks(&chain, &checks, &points, &cfg)?;
    let mut pass = reports.iter().all(|r| r.pass);
    let mut invariants = json!({});
    if let (Some(p), uniton::scenario::Grid::K) = (&s.pair, s.grid) {
        let m = matching_check(&s.to_array()?, p, &points)?;
        let predicted: Vec<Option<usize>> = (0..=p.r()).map(|i| rank_formula(p, i).ok()).collect();
        let observed = chain.generic.as_ref().and_then(|g| g.f_ranks.clone());
        let agree = observed.as_ref().map(|o| o.iter().map(|&x| Some(x)).collect::<Vec<_>>()) == Some(predicted.clone());
        pass &= m.passed && agree;
        invariants = json!({ "matching": m, "rank_formula": predicted, "f_ranks": observed, "rank_formula_agrees": agree });
    }
    let failed: Vec<&str> = reports.iter().filter(|r| !r.pass).map(|r| r.check.as_str()).collect();
    let summary = if failed.is_empty() && pass {
        format!("verify: {} checks passed at {} points", reports.len(), points.len())
    } else if failed.is_empty() {
        "verify: checks passed but the pair invariants failed".to_string()
    } else {
        format!("verify: failed {}", failed.join(", "))
    };
    let report = json!({ "chain": build_summary(&s, &chain), "reports": reports, "invariants": invariants, "pass": pass });
    Ok(Outcome { report, summary, pass })
}

fn cmd_enumerate(n: usize, p: usize, r: usize, no_bound: bool, no_realize: bool, k: Option<usize>, seed: u64) -> Result<Outcome, Error> {
    if r < 1 || r + 1 > n {
        return Err(Error::BadArguments(format!("need 1 ≤ r ≤ n−1, got r={r}, n={n}")));
    }
    if p > n {
        return Err(Error::BadArguments(format!("p={p} exceeds n={n}")));
    }
    let dual = 2 * p > n;
    let q = if dual { n - p } else { p };
    let opts = EnumerateOptions { apply_bound: !no_bound, realizability: !no_realize, seed, only_k: k, ..EnumerateOptions::default() };
    let reduced = enumerate_pairs(n, q, r, &opts)?;
    let listed: Vec<AdaptedPair> = if dual { reduced.iter().map(AdaptedPair::swapped).collect() } else { reduced.clone() };
    let mut report = json!({
        "n": n, "p": p, "r": r, "q": q,
        "Q_sign": if dual { -1 } else { 1 },
        "count": listed.len(),
        "pairs": listed.iter().map(pair_json).collect::<Vec<_>>(),
    });
    if dual {
        report["reduced_pairs"] = json!(reduced.iter().map(pair_json).collect::<Vec<_>>());
    }
    let summary = format!("enumerate: {} pairs for G_{p}(C^{n}), r={r} (q={q}, Q_sign {})", listed.len(), if dual { "-1" } else { "+1" });
    Ok(Outcome { report, summary, pass: true })
}

fn cmd_bound(n: usize, p: usize) -> Result<Outcome, Error> {
    if p > n {
        return Err(Error::BadArguments(format!("p={p} exceeds n={n}")));
    }
    let dual = 2 * p > n;
    let rows = (0..=n)
        .map(|k| {
            let b = if dual { uniton_bound_detail(n - k, n - p, n)? } else { uniton_bound_detail(k, p, n)? };
            Ok(json!({ "k": k, "case": b.case, "a_k": b.a_k, "r_k": b.r_k }))
        })
        .collect::<Result<Vec<_>, Error>>()?;
    let summary = format!(
        "bound: G_{p}(C^{n}) r_k = {}",
        rows.iter().map(|r| r["r_k"].to_string()).collect::<Vec<_>>().join(" ")
    );
    Ok(Outcome { report: json!({ "n": n, "p": p, "dualized": dual, "rows": rows }), summary, pass: true })
}

fn model_json(w: &ModelSpace, f0: &uniton::ExactMatrix) -> Result<(Value, bool), Error> {
    let adapted = f0_adapted_check(&w.spanning, w.blocks, w.ambient, f0)?;
    let stable = w.shift_stable();
    let basis: Vec<Vec<String>> = w.basis.iter().map(|v| strings(v)).collect();
    let ok = stable && adapted.all_adapted;
    let v = json!({
        "point": w.point.to_string(),
        "blocks": w.blocks,
        "ambient": w.ambient,
        "dim": w.dim(),
        "basis": basis,
        "adapted": adapted,
        "shift_stable": stable,
        "pass": ok,
    });
    Ok((v, ok))
}

fn cmd_model(input: &Input, raw: Option<&PathBuf>, count: usize) -> Result<Outcome, Error> {
    let mut models = Vec::new();
    let mut pass = true;
    if let Some(path) = raw {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
        let m = RawModel::from_json(&text)?;
        let (v, ok) = model_json(&m.model_space()?, &m.f0_projector())?;
        models.push(v);
        pass &= ok;
    } else {
        let s = load(input)?;
        let chain = s.build_chain()?;
        for z in chain.generic_points().iter().take(count.max(1)) {
            let (v, ok) = model_json(&model_space(&chain, z, None)?, &chain.f0_projector)?;
            models.push(v);
            pass &= ok;
        }
    }
    let summary = format!(
        "model: dim W = {}; {}",
        models.first().map_or(0, |m| m["dim"].as_u64().unwrap_or(0)),
        if pass { "adapted and shift-stable" } else { "verdict fail" }
    );
    Ok(Outcome { report: json!({ "models": models, "pass": pass }), summary, pass })
}

fn cmd_preset(name: Option<&str>) -> Result<Outcome, Error> {
    match name {
        None => Ok(Outcome { report: json!(PRESET_NAMES), summary: format!("{} presets", PRESET_NAMES.len()), pass: true }),
        Some(n) => {
            let s = preset(n)?;
            let report = serde_json::from_str(&s.to_json()).map_err(|e| Error::Parse(e.to_string()))?;
            Ok(Outcome { report, summary: format!("preset {n}"), pass: true })
        }
    }
}

/// Writes a line to stdout, ignoring a closed pipe (as with `| head`).
fn emit(text: &str) {
    let _ = writeln!(std::io::stdout().lock(), "{text}");
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Build { input } => cmd_build(input),
        Command::Verify { input, checks, tol, h, points } => cmd_verify(input, checks, *tol, *h, *points),
        Command::Enumerate { n, p, r, no_bound, no_realize, k, seed } => cmd_enumerate(*n, *p, *r, *no_bound, *no_realize, *k, *seed),
        Command::Bound { n, p } => cmd_bound(*n, *p),
        Command::Model { input, raw_model, points } => cmd_model(input, raw_model.as_ref(), *points),
        Command::Preset { name } => cmd_preset(name.as_deref()),
    };
    match result {
        Ok(out) => {
            let text = if cli.json { out.report.to_string() } else { serde_json::to_string_pretty(&out.report).expect("JSON values serialize") };
            emit(&text);
            if !cli.quiet {
                eprintln!("{}", out.summary);
            }
            ExitCode::from(if out.pass { 0 } else { 5 })
        }
        Err(e) => {
            let code = exit_code(&e);
            emit(&json!({ "error": e.to_string(), "exit_code": code }).to_string());
            if !cli.quiet {
                eprintln!("error: {e}");
            }
            ExitCode::from(code)
        }
    }
}
