use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use rotdirac_cli::{run, CliError, Command, Format, RunConfig};

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Subcommand {
    Spectrum,
    Phases,
    Evolve,
    Verify,
    Pauli,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

/// Dirac particle in a precessing magnetic field: spectra, cyclic phases,
/// trajectories and invariant checks.
#[derive(Debug, Parser)]
#[command(name = "rotdirac", version)]
struct Args {
    #[arg(value_enum)]
    command: Subcommand,
    /// Flat `key = value` configuration file.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory, overriding the config.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Output format, overriding the config.
    #[arg(long, value_enum)]
    format: Option<FormatArg>,
    /// Cross-check closed-form evolution against the adaptive integrator.
    #[arg(long)]
    oracle: bool,
    /// Seed for random superpositions, overriding the config.
    #[arg(long)]
    seed: Option<u64>,
}

fn load(args: &Args) -> Result<RunConfig, CliError> {
    let mut cfg = match &args.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
            RunConfig::parse(&text)?
        }
        None => RunConfig::default(),
    };
    if let Some(out) = &args.out {
        cfg.out = out.clone();
    }
    if let Some(f) = args.format {
        cfg.format = match f {
            FormatArg::Csv => Format::Csv,
            FormatArg::Json => Format::Json,
        };
    }
    if let Some(seed) = args.seed {
        cfg.seed = seed;
    }
    Ok(cfg)
}

fn execute(args: &Args) -> Result<(), CliError> {
    let cfg = load(args)?;
    let command = match args.command {
        Subcommand::Spectrum => Command::Spectrum,
        Subcommand::Phases => Command::Phases,
        Subcommand::Evolve => Command::Evolve,
        Subcommand::Verify => Command::Verify,
        Subcommand::Pauli => Command::Pauli,
    };
    let outcome = run(command, &cfg, args.oracle)?;
    let path = outcome.table.write(&cfg.out, cfg.format)?;
    println!("wrote {}", path.display());
    match outcome.failure {
        Some(e) => Err(e),
        None => Ok(()),
    }
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match execute(&args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("rotdirac: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
