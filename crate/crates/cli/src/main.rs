//! `nageo` batch driver.

mod config;
mod output;
mod tasks;

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use config::{Format, Object, Task};
use tasks::{run_task, Objects};

#[derive(Parser)]
#[command(name = "nageo", version, about = "Exact non-Archimedean norm geometry and toric segment checks")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Clone)]
struct Out {
    /// Output file or directory (`csv` / `json` select the format and print to stdout).
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_parser = parse_format)]
    format: Option<Format>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run every task of an experiment config.
    Run {
        #[arg(long)]
        config: PathBuf,
        #[command(flatten)]
        out: Out,
    },
    /// Run a seeded property suite (`all`, `norms`, `geodesics`, `graded`, `quantization`,
    /// `kiselman`, `theoremB`, `negative`).
    Suite {
        name: String,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[command(flatten)]
        out: Out,
    },
    /// Norm geodesic dump from `{"geodesic": {"n0", "n1", "ts"}}`.
    Geodesic {
        #[arg(long)]
        config: PathBuf,
        #[command(flatten)]
        out: Out,
    },
    #[command(subcommand)]
    Graded(GradedCmd),
    #[command(subcommand)]
    Toric(ToricCmd),
    #[command(subcommand)]
    Segments(SegmentsCmd),
}

#[derive(Subcommand)]
enum GradedCmd {
    /// Per-degree normalized `d_p` and its limit, from `{"g0", "g1"}`.
    Stats {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        kmax: Option<usize>,
        #[arg(long, default_value = "1")]
        p: String,
        #[command(flatten)]
        out: Out,
    },
    /// Submultiplicativity of `{"graded": …}` up to `--kmax`.
    Check {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        kmax: Option<usize>,
        #[command(flatten)]
        out: Out,
    },
}

#[derive(Subcommand)]
enum ToricCmd {
    /// Energy sequence and its limit for `{"phi0", "phi1"}`.
    Energy {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, default_value_t = 8)]
        kmax: usize,
        #[command(flatten)]
        out: Out,
    },
    /// `d₁` sequence, limit and envelope formula for `{"phi0", "phi1"}`.
    D1 {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, default_value_t = 8)]
        kmax: usize,
        #[command(flatten)]
        out: Out,
    },
}

#[derive(Subcommand)]
enum SegmentsCmd {
    /// Maximal (quantized) segment of `{"phi0", "phi1"}` at `t`.
    Maximal {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        t: String,
        #[arg(long, default_value_t = 8)]
        kmax: usize,
        #[command(flatten)]
        out: Out,
    },
    /// Legendre segment of `{"phi0", "phi1"}` at `t`.
    Legendre {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        t: String,
        #[command(flatten)]
        out: Out,
    },
    /// Verification report: a suite, or the segment diagnostics of `--config` for `theoremB`.
    Verify {
        #[arg(long, default_value = "theoremB")]
        suite: String,
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        kmax: Option<usize>,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[command(flatten)]
        out: Out,
    },
}

fn parse_format(s: &str) -> std::result::Result<Format, String> {
    match s {
        "csv" => Ok(Format::Csv),
        "json" => Ok(Format::Json),
        other => Err(format!("unknown format {other:?} (expected csv or json)")),
    }
}

fn read_json(path: &Path) -> Result<Value> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text)
        .map_err(|e| anyhow!("{e} (line {}, column {})", e.line(), e.column()))
        .with_context(|| format!("in {}", path.display()))
}

fn field<'a>(v: &'a Value, key: &str, path: &Path) -> Result<&'a Value> {
    v.get(key).ok_or_else(|| anyhow!("{} needs a \"{key}\" entry", path.display()))
}

/// Objects `phi0`, `phi1` from a pair file.
fn metric_pair(path: &Path) -> Result<BTreeMap<String, Object>> {
    let v = read_json(path)?;
    let mut objs = BTreeMap::new();
    for key in ["phi0", "phi1"] {
        let m = config::metric_from_json(field(&v, key, path)?, None).with_context(|| format!("metric `{key}`"))?;
        objs.insert(key.to_string(), Object::Metric(m));
    }
    Ok(objs)
}

fn graded_objects(path: &Path, keys: &[&str]) -> Result<BTreeMap<String, Object>> {
    let v = read_json(path)?;
    let mut objs = BTreeMap::new();
    for &key in keys {
        let g = nageo::graded::GradedNorm::from_json(field(&v, key, path)?)
            .with_context(|| format!("graded norm `{key}`"))?;
        objs.insert(key.to_string(), Object::Graded(g));
    }
    Ok(objs)
}

fn single(objs: &BTreeMap<String, Object>, task: Task, name: &str, out: &Out) -> Result<ExitCode> {
    let art = run_task(&task, &Objects(objs))?;
    output::emit(&art, name, out.out.as_deref(), out.format.unwrap_or_default())?;
    Ok(output::status(&art))
}

fn run_config(path: &Path, out: &Out) -> Result<ExitCode> {
    let cfg = config::load(path)?;
    let objs = config::resolve(&cfg)?;
    let format = out.format.unwrap_or(cfg.output.format);
    let dest = out.out.clone().or(cfg.output.path.clone());
    let mut index = Vec::new();
    let mut failed = false;
    for (i, task) in cfg.tasks.iter().enumerate() {
        let art = run_task(task, &Objects(&objs)).with_context(|| format!("task {i} ({})", task.op()))?;
        let name = format!("task{i:02}_{}", task.op());
        let written = output::emit(&art, &name, dest.as_deref(), format)?;
        if art.verdict == Some(false) {
            failed = true;
            output::report_failures(&art);
        }
        index.push(json!({ "index": i, "op": task.op(), "output": written, "verdict": art.verdict }));
    }
    if !cfg.tasks.is_empty() {
        if let Some(dir) = dest.as_deref().filter(|d| output::is_dir_target(d)) {
            output::write_atomic(
                &dir.join("index.json"),
                &format!("{:#}\n", json!({ "tasks": index, "passed": !failed })),
            )?;
        }
    }
    Ok(if failed { ExitCode::FAILURE } else { ExitCode::SUCCESS })
}

fn dispatch(cli: Cli) -> Result<ExitCode> {
    match cli.cmd {
        Cmd::Run { config, out } => run_config(&config, &out),
        Cmd::Suite { name, seed, out } => {
            let task = Task::Verify { check: name.clone(), phi0: None, phi1: None, graded: None, kmax: None, seed };
            single(&BTreeMap::new(), task, &format!("suite_{name}"), &out)
        }
        Cmd::Geodesic { config, out } => {
            let v = read_json(&config)?;
            let g = field(&v, "geodesic", &config)?;
            let mut objs = BTreeMap::new();
            for key in ["n0", "n1"] {
                let n = nageo::norms::AnyNorm::from_json(field(g, key, &config)?)
                    .with_context(|| format!("norm `{key}`"))?;
                objs.insert(key.to_string(), Object::Norm(n));
            }
            let ts = field(g, "ts", &config)?
                .as_array()
                .ok_or_else(|| anyhow!("\"ts\" must be an array"))?
                .iter()
                .map(|t| {
                    t.as_str().map(String::from).ok_or_else(|| anyhow!("\"ts\" entries must be \"num/den\" strings"))
                })
                .collect::<Result<_>>()?;
            single(&objs, Task::Geodesic { n0: "n0".into(), n1: "n1".into(), ts }, "geodesic", &out)
        }
        Cmd::Graded(GradedCmd::Stats { config, kmax, p, out }) => {
            let objs = graded_objects(&config, &["g0", "g1"])?;
            single(&objs, Task::GradedStats { g0: "g0".into(), g1: "g1".into(), p, kmax }, "graded_stats", &out)
        }
        Cmd::Graded(GradedCmd::Check { config, kmax, out }) => {
            let objs = graded_objects(&config, &["graded"])?;
            let task = Task::Verify {
                check: "submultiplicative".into(),
                phi0: None,
                phi1: None,
                graded: Some("graded".into()),
                kmax,
                seed: 0,
            };
            single(&objs, task, "submultiplicative", &out)
        }
        Cmd::Toric(ToricCmd::Energy { config, kmax, out }) => single(
            &metric_pair(&config)?,
            Task::Energy { phi0: "phi0".into(), phi1: "phi1".into(), kmax },
            "energy",
            &out,
        ),
        Cmd::Toric(ToricCmd::D1 { config, kmax, out }) => {
            single(&metric_pair(&config)?, Task::D1 { phi0: "phi0".into(), phi1: "phi1".into(), kmax }, "d1", &out)
        }
        Cmd::Segments(SegmentsCmd::Maximal { config, t, kmax, out }) => {
            let task = Task::MaximalSegment { phi0: "phi0".into(), phi1: "phi1".into(), t, kmax };
            single(&metric_pair(&config)?, task, "maximal_segment", &out)
        }
        Cmd::Segments(SegmentsCmd::Legendre { config, t, out }) => {
            let task = Task::LegendreSegment { phi0: "phi0".into(), phi1: "phi1".into(), t };
            single(&metric_pair(&config)?, task, "legendre_segment", &out)
        }
        Cmd::Segments(SegmentsCmd::Verify { suite, config, kmax, seed, out }) => {
            let (objs, pair) = match &config {
                Some(c) => (metric_pair(c)?, true),
                None => (BTreeMap::new(), false),
            };
            let name = |s: &str| pair.then(|| s.to_string());
            let task =
                Task::Verify { check: suite.clone(), phi0: name("phi0"), phi1: name("phi1"), graded: None, kmax, seed };
            let code = single(&objs, task, &format!("verify_{suite}"), &out)?;
            Ok(code)
        }
    }
}

fn main() -> ExitCode {
    match dispatch(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
