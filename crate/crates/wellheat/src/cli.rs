//! Subcommands of the `wellheat` binary.

use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::thread;

use clap::{Args, Parser, Subcommand};
use thiserror::Error;
use wellheat_core::{
    volterra_residual, with_arrangement, ComparisonReport, FlowArrangement, KernelError, Simulation,
    SolverError, TimeSeries, WellConfig,
};

use crate::config_file::{parse_config, parse_soil, ParseError};
use crate::kernel_check::{run_kernel_check, write_kernel_csv, write_oracle_csv};
use crate::output::{comparison_text, summary_text, write_profiles, write_scalars};

#[derive(Debug, Parser)]
#[command(name = "wellheat", version, about = "Hot-water circulation heating of an oil well")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the configured arrangement and write profiles, scalars and a summary.
    Simulate {
        #[command(flatten)]
        io: IoArgs,
        /// Profile snapshots per cycle, overriding the config.
        #[arg(long)]
        snapshots: Option<u32>,
    },
    /// Run both arrangements with the same parameters and report the oil temperature drops.
    Compare {
        #[command(flatten)]
        io: IoArgs,
    },
    /// Compare the closed-form formation kernel with the radial conduction solver.
    KernelCheck {
        #[command(flatten)]
        io: IoArgs,
    },
}

#[derive(Debug, Clone, Args)]
pub struct IoArgs {
    /// Configuration file.
    #[arg(long)]
    pub config: PathBuf,
    /// Output directory, created if missing.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Error)]
pub enum CommandError {
    #[error("cannot read config file {}: {source}", path.display())]
    ReadConfig { path: PathBuf, source: std::io::Error },
    #[error("{}: {source}", path.display())]
    Config { path: PathBuf, source: ParseError },
    #[error("{0}")]
    Solver(#[from] SolverError),
    #[error("{0}")]
    Kernel(#[from] KernelError),
    #[error("cannot write {}: {source}", path.display())]
    Write { path: PathBuf, source: std::io::Error },
    #[error("scenario thread panicked")]
    Panicked,
}

impl CommandError {
    /// Pipeline stage that failed: `config`, `cfl`, `stepping` or `io`.
    pub fn stage(&self) -> &'static str {
        match self {
            CommandError::ReadConfig { .. } | CommandError::Config { .. } => "config",
            CommandError::Solver(e) => e.stage(),
            CommandError::Kernel(_) | CommandError::Panicked => "stepping",
            CommandError::Write { .. } => "io",
        }
    }

    /// 1 for usage and config errors, 2 for numerical failures, 3 for I/O.
    pub fn exit_code(&self) -> i32 {
        match self.stage() {
            "config" => 1,
            "io" => 3,
            _ => 2,
        }
    }
}

fn read_text(path: &Path) -> Result<String, CommandError> {
    fs::read_to_string(path).map_err(|source| CommandError::ReadConfig { path: path.to_path_buf(), source })
}

pub fn load_config(path: &Path) -> Result<WellConfig, CommandError> {
    parse_config(&read_text(path)?).map_err(|source| CommandError::Config { path: path.to_path_buf(), source })
}

fn create_dir(dir: &Path) -> Result<(), CommandError> {
    fs::create_dir_all(dir).map_err(|source| CommandError::Write { path: dir.to_path_buf(), source })
}

fn write_file<F>(path: PathBuf, fill: F) -> Result<(), CommandError>
where
    F: FnOnce(BufWriter<File>) -> std::io::Result<()>,
{
    File::create(&path)
        .and_then(|f| fill(BufWriter::new(f)))
        .map_err(|source| CommandError::Write { path, source })
}

fn write_series(dir: &Path, prefix: &str, series: &TimeSeries) -> Result<(), CommandError> {
    write_file(dir.join(format!("{prefix}profiles.csv")), |w| write_profiles(w, series))?;
    write_file(dir.join(format!("{prefix}scalars.csv")), |w| write_scalars(w, series))
}

fn formation_residual(cfg: &WellConfig, series: &TimeSeries) -> Result<Vec<f64>, CommandError> {
    volterra_residual(&series.history, &cfg.soil(), cfg.b_f, series.tau).map_err(|e| SolverError::from(e).into())
}

/// Runs the configured arrangement, optionally overriding the snapshot
/// cadence, without writing anything.
pub fn simulate(cfg: &WellConfig, snapshots: Option<u32>) -> Result<TimeSeries, CommandError> {
    let cadence = snapshots.unwrap_or(cfg.snapshots_per_cycle);
    Ok(Simulation::new(cfg)?.run(cadence)?)
}

/// Runs both arrangements on separate threads.
pub fn compare(cfg: &WellConfig) -> Result<ComparisonReport, CommandError> {
    let counter_cfg = with_arrangement(cfg, FlowArrangement::Counter);
    let parallel_cfg = with_arrangement(cfg, FlowArrangement::Parallel);
    let (counter, parallel) = thread::scope(|scope| {
        let counter = scope.spawn(|| simulate(&counter_cfg, None));
        let parallel = scope.spawn(|| simulate(&parallel_cfg, None));
        (counter.join(), parallel.join())
    });
    let counter = counter.map_err(|_| CommandError::Panicked)??;
    let parallel = parallel.map_err(|_| CommandError::Panicked)??;
    Ok(ComparisonReport::from_runs(counter, parallel))
}

pub fn cmd_simulate(io: &IoArgs, snapshots: Option<u32>) -> Result<(), CommandError> {
    let cfg = load_config(&io.config)?;
    let series = simulate(&cfg, snapshots)?;
    let residual = formation_residual(&cfg, &series)?;
    create_dir(&io.out)?;
    write_series(&io.out, "", &series)?;
    let summary = summary_text(&series, Some(&residual));
    write_file(io.out.join("summary.txt"), |mut w| w.write_all(summary.as_bytes()).and_then(|_| w.flush()))
}

pub fn cmd_compare(io: &IoArgs) -> Result<(), CommandError> {
    let cfg = load_config(&io.config)?;
    let report = compare(&cfg)?;
    create_dir(&io.out)?;
    write_series(&io.out, "counter_", &report.counter)?;
    write_series(&io.out, "parallel_", &report.parallel)?;
    let text = comparison_text(&report);
    write_file(io.out.join("comparison.txt"), |mut w| w.write_all(text.as_bytes()).and_then(|_| w.flush()))?;
    print!("{text}");
    Ok(())
}

pub fn cmd_kernel_check(io: &IoArgs) -> Result<(), CommandError> {
    let text = read_text(&io.config)?;
    let soil = parse_soil(&text).map_err(|source| CommandError::Config { path: io.config.clone(), source })?;
    let (check, oracle) = run_kernel_check(&soil)?;
    create_dir(&io.out)?;
    write_file(io.out.join("kernel.csv"), |w| write_kernel_csv(w, &check))?;
    write_file(io.out.join("oracle.csv"), |w| write_oracle_csv(w, &oracle))?;
    let line = check.verdict_line();
    write_file(io.out.join("kernel_check.txt"), |mut w| writeln!(w, "{line}").and_then(|_| w.flush()))?;
    println!("{line}");
    Ok(())
}

pub fn run(cli: &Cli) -> Result<(), CommandError> {
    match &cli.command {
        Command::Simulate { io, snapshots } => cmd_simulate(io, *snapshots),
        Command::Compare { io } => cmd_compare(io),
        Command::KernelCheck { io } => cmd_kernel_check(io),
    }
}
