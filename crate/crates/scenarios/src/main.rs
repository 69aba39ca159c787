use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::json;

use rmpump_scenarios::{run_scenario, run_sweep, Result, ScenarioConfig, ScenarioError, ScenarioKind};

/// Run rmpump scenarios from TOML configs (MHz, µs).
#[derive(Debug, Parser)]
#[command(name = "rmpump", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Worker threads for sweeps (default: available cores).
    #[arg(long, global = true)]
    workers: Option<usize>,
    /// Output directory (overrides `output_dir` in the config).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Base seed (overrides `seed` in the config).
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Original-index site range FIRST:LAST (overrides `lattice.sites`).
    #[arg(long, global = true, value_parser = parse_range)]
    sites: Option<[usize; 2]>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run one scenario (sweep scenarios run their sweep).
    Run { config: PathBuf },
    /// Run the config's sweep axes.
    Sweep { config: PathBuf },
    /// Run a band-structure scenario.
    Bands { config: PathBuf },
    /// Resolve and validate a config; print the resolved parameters.
    Validate { config: PathBuf },
}

fn parse_range(s: &str) -> std::result::Result<[usize; 2], String> {
    let (a, b) = s.split_once(':').ok_or("expected FIRST:LAST")?;
    let p = |x: &str| x.trim().parse::<usize>().map_err(|e| format!("{x}: {e}"));
    Ok([p(a)?, p(b)?])
}

fn load(cli: &Cli, path: &Path) -> Result<ScenarioConfig> {
    let mut cfg = ScenarioConfig::from_path(path)?;
    if cli.seed.is_some() {
        cfg.seed = cli.seed;
    }
    if cli.sites.is_some() {
        cfg.lattice.sites = cli.sites;
    }
    Ok(cfg)
}

fn execute(cli: &Cli) -> Result<serde_json::Value> {
    let workers = cli.workers.unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
    let (path, mode) = match &cli.command {
        Command::Run { config } => (config, "run"),
        Command::Sweep { config } => (config, "sweep"),
        Command::Bands { config } => (config, "bands"),
        Command::Validate { config } => (config, "validate"),
    };
    let cfg = load(cli, path)?;
    let out = cli.out.clone().unwrap_or_else(|| cfg.output_dir());
    let kind = cfg.scenario.kind();
    match mode {
        "validate" => Ok(json!({ "valid": true, "resolved": cfg.resolve()? })),
        "bands" if kind != ScenarioKind::Bands => {
            Err(ScenarioError::Config(format!("{} is not a band-structure scenario", cfg.scenario)))
        }
        "sweep" => sweep(&cfg, workers, &out),
        "run" if kind == ScenarioKind::Sweep => sweep(&cfg, workers, &out),
        _ => {
            let r = run_scenario(&cfg, &out)?;
            Ok(json!({
                "dir": r.dir,
                "status": r.manifest.status,
                "wall_clock_s": r.manifest.wall_clock_s,
                "summary": r.summary,
            }))
        }
    }
}

fn sweep(cfg: &ScenarioConfig, workers: usize, out: &Path) -> Result<serde_json::Value> {
    let s = run_sweep(cfg, workers, out)?;
    Ok(json!({
        "dir": s.dir,
        "status": s.manifest.status,
        "points": s.points.len(),
        "failures": s.manifest.failures,
        "wall_clock_s": s.manifest.wall_clock_s,
    }))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(v) => {
            println!("{}", serde_json::to_string_pretty(&v).unwrap_or_default());
            ExitCode::SUCCESS
        }
        Err(e) => {
            let err = json!({ "error": { "kind": e.kind(), "message": e.to_string() } });
            eprintln!("{err}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
