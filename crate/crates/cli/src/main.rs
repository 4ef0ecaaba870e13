use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use drudefd_cli::config::{ConfigFile, ExperimentConfig, ExperimentKind, OutputFormat};
use drudefd_cli::{experiments, HarnessError};

/// Energy-conserving finite-difference solvers for Maxwell's equations in
/// Drude metamaterials.
///
/// Exit codes: 0 success, 2 configuration error, 3 instability, 4 I/O error.
#[derive(Debug, Parser)]
#[command(name = "drudefd", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run one simulation and summarize errors and energy.
    Simulate(Flags),
    /// Convergence study: `levels` runs halving dt and h together.
    Converge(Flags),
    /// Energy history of a long run.
    Longtime(Flags),
    /// Max relative energy error over a (scheme, nu, dt) grid.
    EnergyTable(Flags),
}

#[derive(Debug, Args)]
struct Flags {
    /// JSON configuration file with flat keys; flags override its values.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Scheme order pair (time, space).
    #[arg(long, value_parser = ["22", "24", "44"])]
    scheme: Option<String>,
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=2))]
    dim: Option<u8>,
    /// Field pair; hj is available in 1D only.
    #[arg(long, value_parser = ["ek", "hj"])]
    pair: Option<String>,
    /// Courant number c dt / h.
    #[arg(long)]
    nu: Option<f64>,
    /// Time step (the coarsest one for convergence studies).
    #[arg(long)]
    dt: Option<f64>,
    /// Number of refinement levels.
    #[arg(long)]
    levels: Option<usize>,
    /// Final time.
    #[arg(long = "T", value_name = "T")]
    t_final: Option<f64>,
    /// Output file; standard output when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Permit Courant numbers at or above 1 (for stability probing).
    #[arg(long)]
    allow_unstable: bool,
}

#[derive(Debug, Clone, Copy, clap::ValueEnum)]
enum Format {
    Csv,
    Json,
}

impl Flags {
    fn into_config(self) -> Result<ConfigFile, HarnessError> {
        let file = match &self.config {
            Some(p) => ConfigFile::load(p)?,
            None => ConfigFile::default(),
        };
        let flags = ConfigFile {
            scheme: self.scheme,
            dim: self.dim.map(usize::from),
            pair: self.pair,
            nu: self.nu,
            dt: self.dt,
            levels: self.levels,
            t_final: self.t_final,
            out: self.out,
            format: self.format.map(|f| match f {
                Format::Csv => OutputFormat::Csv,
                Format::Json => OutputFormat::Json,
            }),
            allow_unstable: self.allow_unstable.then_some(true),
            ..ConfigFile::default()
        };
        Ok(file.overridden_by(flags))
    }
}

fn run(cli: Cli) -> Result<(), HarnessError> {
    let (kind, flags) = match cli.command {
        Command::Simulate(f) => (ExperimentKind::Simulate, f),
        Command::Converge(f) => (ExperimentKind::Converge, f),
        Command::Longtime(f) => (ExperimentKind::Longtime, f),
        Command::EnergyTable(f) => (ExperimentKind::EnergyTable, f),
    };
    let cfg = ExperimentConfig::resolve(kind, flags.into_config()?)?;
    let report = experiments::run(&cfg)?;
    report.table.emit(cfg.format, cfg.out.as_deref())?;
    match report.instability() {
        Some(e) => Err(e),
        None => Ok(()),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("drudefd: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
