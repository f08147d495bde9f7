//! Argument parsing and the run driver shared by `main` and the tests.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::commands::{self, Command, Outcome};
use crate::config::{Config, Resolver};
use crate::error::{CliError, Result};
use crate::output::{self, RunManifest};
use crate::presets;

#[derive(Debug, Parser)]
#[command(name = "ypfa", version, about = "PFA and EPFA Yukawa force sweeps, finite-disk ratios, oracle checks and exclusion limits")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Cmd,

    #[command(flatten)]
    pub opts: Opts,
}

#[derive(Debug, Clone, Copy, Subcommand)]
pub enum Cmd {
    /// η = F_EPFA / F_PFA for a homogeneous sphere over a slab
    EtaSweep,
    /// η_Δ for the layered sphere and slab, with the homogeneous η and their ratio
    EtaLayeredSweep,
    /// Closest-to-farthest force ratio over a finite disk for r^-N forces
    XiPowerSweep,
    /// ln of the same ratio for Yukawa forces
    XiYukawaSweep,
    /// Closed forms against adaptive quadrature; exit status 2 on disagreement
    OracleVerify,
    /// α bounds from a residual file
    Limits,
}

impl Cmd {
    pub fn command(&self) -> Command {
        match self {
            Cmd::EtaSweep => Command::EtaSweep,
            Cmd::EtaLayeredSweep => Command::EtaLayeredSweep,
            Cmd::XiPowerSweep => Command::XiPowerSweep,
            Cmd::XiYukawaSweep => Command::XiYukawaSweep,
            Cmd::OracleVerify => Command::OracleVerify,
            Cmd::Limits => Command::Limits,
        }
    }
}

#[derive(Debug, Clone, Default, Args)]
pub struct Opts {
    /// Configuration file of `key = value` lines
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,

    /// CSV destination; a manifest is written to `<output>.manifest.json`. Stdout if omitted
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,

    /// Named preset: fig2-left, fig2-right, fig3-left, fig3-right, fig4-left, fig4-right, fig5
    #[arg(long, global = true)]
    pub preset: Option<String>,

    #[arg(long, global = true, value_name = "LEN")]
    pub lambda_min: Option<String>,

    #[arg(long, global = true, value_name = "LEN")]
    pub lambda_max: Option<String>,

    #[arg(long, global = true, value_name = "N")]
    pub lambda_points: Option<String>,

    /// pfa or epfa
    #[arg(long, global = true)]
    pub method: Option<String>,

    /// Metaphysical slab thickness(es), e.g. `inf` or `10 um`
    #[arg(long, global = true, value_name = "LEN|inf")]
    pub d2: Option<String>,

    /// Whether sphere radii are core or outer radii of the layered sphere
    #[arg(long, global = true, value_name = "core|outer")]
    pub radius_kind: Option<String>,

    /// Residual bound CSV for `limits`
    #[arg(long, global = true, value_name = "PATH")]
    pub residuals: Option<PathBuf>,

    /// Replaces every per-check tolerance of `oracle-verify`
    #[arg(long, global = true)]
    pub tolerance: Option<String>,

    /// Worker threads; defaults to YPFA_WORKERS, then the number of CPUs
    #[arg(long, global = true, env = "YPFA_WORKERS")]
    pub workers: Option<usize>,

    /// Any configuration key, e.g. `--set separation=200nm`; repeatable
    #[arg(long = "set", global = true, value_name = "KEY=VALUE")]
    pub set: Vec<String>,
}

/// Defaults, then preset, config file and flags.
pub fn build_config(cmd: Command, opts: &Opts) -> Result<Config> {
    let mut cfg = Config::defaults();
    if let Some(name) = &opts.preset {
        cfg.merge(presets::load(name, cmd.name())?);
    }
    if let Some(path) = &opts.config {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        cfg.merge(Config::parse(&text, &path.display().to_string())?);
    }
    let flags = [
        ("lambda.min", "--lambda-min", &opts.lambda_min),
        ("lambda.max", "--lambda-max", &opts.lambda_max),
        ("lambda.points", "--lambda-points", &opts.lambda_points),
        ("limits.method", "--method", &opts.method),
        ("pfa.d2", "--d2", &opts.d2),
        ("sphere.radius_kind", "--radius-kind", &opts.radius_kind),
        ("verify.tolerance", "--tolerance", &opts.tolerance),
    ];
    for (key, flag, value) in flags {
        if let Some(v) = value {
            cfg.set(key, v, flag)?;
        }
    }
    if opts.radius_kind.is_some() {
        // an explicit kind applies to sphere.radius
        cfg.remove("sphere.core_radius");
    }
    if let Some(p) = &opts.residuals {
        cfg.set("limits.residuals", &p.display().to_string(), "--residuals")?;
    }
    for kv in &opts.set {
        let (k, v) = kv
            .split_once('=')
            .ok_or_else(|| CliError::input(format!("--set expects KEY=VALUE, got `{kv}`")))?;
        cfg.set(k.trim(), v, "--set")?;
    }
    Ok(cfg)
}

pub fn worker_pool(workers: Option<usize>) -> Result<rayon::ThreadPool> {
    let n = match workers {
        Some(0) => return Err(CliError::input("--workers must be at least 1")),
        Some(n) => n,
        None => std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1),
    };
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build()
        .map_err(|e| CliError::input(format!("cannot start {n} workers: {e}")))
}

/// Runs `cmd` on a fully merged configuration.
pub fn compute(cmd: Command, cfg: &Config, pool: &rayon::ThreadPool, preset: Option<&str>) -> Result<(Outcome, RunManifest)> {
    let mut r = Resolver::new(cfg);
    let outcome = commands::run(cmd, &mut r, pool)?;
    let manifest = RunManifest {
        command: cmd.name().to_string(),
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        preset: preset.map(str::to_string),
        config: r.into_resolved(),
        grid: outcome.grid.clone(),
        rows: outcome.table.rows.len(),
        regime_counts: outcome.regime_counts.clone(),
        notes: outcome.notes.clone(),
        workers: pool.current_num_threads(),
        timestamp_unix: output::now_unix(),
    };
    Ok((outcome, manifest))
}

/// Runs a parsed command line and writes its output.
/// Returns the process exit status.
pub fn execute(cli: &Cli) -> Result<i32> {
    let cmd = cli.command.command();
    let cfg = build_config(cmd, &cli.opts)?;
    let pool = worker_pool(cli.opts.workers)?;
    let (outcome, manifest) = compute(cmd, &cfg, &pool, cli.opts.preset.as_deref())?;
    output::emit(&outcome.table, &manifest, cli.opts.output.as_deref())?;
    if let Some(msg) = &outcome.failure {
        eprintln!("{}: {msg}", cmd.name());
        return Ok(2);
    }
    if cmd == Command::OracleVerify {
        eprintln!("{}: all {} checks passed", cmd.name(), outcome.table.rows.len());
    }
    Ok(0)
}

pub fn exit_status(result: Result<i32>) -> i32 {
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

