//! Thin command-line front end: parse arguments and a config file, call the
//! library, write CSV. Exit codes: 0 success, 1 config/usage error,
//! 2 numerical failure.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use dce_cavity::cli::{self, CliError, Table};
use dce_cavity::config::RunConfig;

#[derive(Parser)]
#[command(name = "dce-cavity", version, about = "Photon creation in a cylindrical cavity with a laser-driven plasma sheet", disable_help_subcommand = true)]
struct Args {
    /// Config file in `section.key = value` form; omit for defaults.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output CSV path; stdout when omitted.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Concurrency bound for sweep points (0 = all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Plasma-strength waveform V(t) over the pulse train.
    DumpProfile,
    /// Longitudinal wavenumbers k_p(t) and frequencies over the train.
    Spectrum,
    /// Intermode coupling matrix M(t) at the output cadence.
    Coupling,
    /// Photon numbers and unitarity defect over one run.
    Evolve {
        /// Only emit samples at pulse junctions (inter-pulse field minima).
        #[arg(long)]
        field_free_only: bool,
    },
    /// One run per driving period in `sweep.periods_ps`.
    SweepTuning,
    /// One run per sheet position in `sweep.etas`.
    SweepPosition,
    /// Drude polarization-loss diagnostics for the dominant mode.
    Losses,
}

fn load_config(path: &Option<PathBuf>) -> Result<RunConfig, CliError> {
    match path {
        None => Ok(RunConfig::default()),
        Some(p) => {
            let text = std::fs::read_to_string(p)?;
            Ok(RunConfig::parse(&text)?)
        }
    }
}

fn build_table(args: &Args) -> Result<Table, CliError> {
    let cfg = load_config(&args.config)?;
    let jobs = args.jobs.unwrap_or(cfg.jobs);
    match &args.command {
        Command::DumpProfile => cli::dump_profile_table(&cfg),
        Command::Spectrum => cli::spectrum_table(&cfg),
        Command::Coupling => cli::coupling_table(&cfg),
        Command::Evolve { field_free_only } => cli::evolve_table(&cfg, *field_free_only),
        Command::SweepTuning => {
            if cfg.sweep_periods_ps.is_empty() {
                return Err(CliError::Usage(
                    "sweep-tuning needs `sweep.periods_ps` in the config".to_string(),
                ));
            }
            Ok(cli::sweep_tuning(&cfg, &cfg.sweep_periods_ps, jobs))
        }
        Command::SweepPosition => {
            if cfg.sweep_etas.is_empty() {
                return Err(CliError::Usage(
                    "sweep-position needs `sweep.etas` in the config".to_string(),
                ));
            }
            Ok(cli::sweep_position(&cfg, &cfg.sweep_etas, &cfg.sweep_eta_period_overrides, jobs))
        }
        Command::Losses => cli::losses_table(&cfg),
    }
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(args) => args,
        Err(e) => {
            // clap prints help/version through the error path with status 0.
            if e.use_stderr() {
                eprint!("{e}");
                return ExitCode::from(1);
            }
            print!("{e}");
            return ExitCode::SUCCESS;
        }
    };
    let result = build_table(&args).and_then(|table| {
        match &args.out {
            Some(path) => cli::emit_to_path(&table, path)?,
            None => cli::emit(&table, &mut std::io::stdout().lock())?,
        }
        Ok(())
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
