//! `mchain`: run quasi-free chain computations from a TOML config and write
//! JSON/CSV reports.
//!
//! Exit status: 0 on success, 1 if any task (or writing the report) failed,
//! 2 for an invalid config or command line.

mod config;
mod report;
mod tasks;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use majorana_chain::{parallel, Execution};

use config::{ConfigError, Format, RunConfig, TaskKind, TaskSpec};
use report::Report;

#[derive(Parser)]
#[command(name = "mchain", version, about = "Quasi-free fermion chains: string order, Z2 index, split defect")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Mode energies and ground energy.
    Spectrum(Common),
    /// String-order correlator series and its large-k detection.
    StringOrder(Common),
    /// Z2 index by the wedge, momentum and string estimators.
    Z2Index(Common),
    /// Split-defect norms over increasing windows.
    Split(Common),
    /// Exact-diagonalization cross-checks (at most 14 sites).
    Oracle(Common),
    /// Every task at every value of the `[sweep]` parameter.
    Sweep(Common),
    /// Every task in the config, in order.
    Run(Common),
}

#[derive(Args)]
struct Common {
    #[arg(long)]
    config: PathBuf,
    /// Output directory (overrides `output.dir`).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Output formats (overrides `output.formats`).
    #[arg(long, value_enum, value_delimiter = ',')]
    format: Vec<Format>,
    /// Seed for randomized probes (overrides `seed`).
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads; more than one evaluates sweep points in parallel.
    #[arg(long)]
    threads: Option<usize>,
}

impl Command {
    fn parts(&self) -> (&'static str, &Common, Option<TaskKind>) {
        match self {
            Command::Spectrum(c) => ("spectrum", c, Some(TaskKind::Spectrum)),
            Command::StringOrder(c) => ("string-order", c, Some(TaskKind::StringOrder)),
            Command::Z2Index(c) => ("z2-index", c, Some(TaskKind::Z2Index)),
            Command::Split(c) => ("split", c, Some(TaskKind::Split)),
            Command::Oracle(c) => ("oracle", c, Some(TaskKind::Oracle)),
            Command::Sweep(c) => ("sweep", c, None),
            Command::Run(c) => ("run", c, None),
        }
    }
}

fn prepare(common: &Common, use_sweep: bool) -> Result<RunConfig, ConfigError> {
    let mut cfg = config::load(&common.config)?;
    if let Some(dir) = &common.out {
        cfg.output.dir = dir.clone();
    }
    if !common.format.is_empty() {
        let mut f = common.format.clone();
        f.sort();
        f.dedup();
        cfg.output.formats = f;
    }
    if let Some(seed) = common.seed {
        cfg.seed = seed;
    }
    if common.threads == Some(0) {
        return Err(ConfigError("--threads must be positive".into()));
    }
    cfg.validate(use_sweep)?;
    Ok(cfg)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (name, common, only) = cli.command.parts();
    let use_sweep = name == "sweep";
    let cfg = match prepare(common, use_sweep) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("mchain: config error: {e}");
            return ExitCode::from(2);
        }
    };

    let tasks: Vec<TaskSpec> = match only {
        Some(kind) => {
            let picked: Vec<TaskSpec> = cfg.tasks.iter().filter(|t| t.kind() == kind).cloned().collect();
            if picked.is_empty() {
                vec![TaskSpec::default_for(kind)]
            } else {
                picked
            }
        }
        None => cfg.tasks.clone(),
    };

    let exec = match common.threads {
        Some(n) if n > 1 => {
            if !parallel::configure_threads(n) {
                eprintln!("mchain: warning: parallel execution unavailable, running sequentially");
            }
            Execution::Parallel
        }
        _ => Execution::Sequential,
    };

    let start = Instant::now();
    let points = cfg.points(use_sweep);
    let records = parallel::map(exec, &points, |(value, params)| {
        tasks::run_point(&cfg.model, &cfg.tolerances, *value, params.clone(), &tasks, cfg.seed)
    });
    let report = Report {
        command: name.to_string(),
        config: cfg.clone(),
        points: records,
        total_seconds: start.elapsed().as_secs_f64(),
    };

    for p in &report.points {
        for t in &p.tasks {
            if let Err(e) = &t.outcome {
                let at = p.sweep_value.map(|v| format!(" at {v}")).unwrap_or_default();
                eprintln!("mchain: task {}{at} failed: {e}", t.kind);
            }
        }
    }
    match report.emit(&cfg.output.dir, &cfg.output.formats) {
        Ok(paths) => {
            for p in paths {
                println!("{}", p.display());
            }
        }
        Err(e) => {
            eprintln!("mchain: {e:#}");
            return ExitCode::from(1);
        }
    }
    if report.failed() {
        ExitCode::from(1)
    } else {
        ExitCode::SUCCESS
    }
}
