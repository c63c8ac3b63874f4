//! `inversive`: billiard orbits, inversive-family invariants, triangle-center
//! loci and table reproduction from the command line.
//!
//! Exit codes: 0 when every check passes, 1 when a check fails, 2 for an
//! invalid configuration, 3 when a solver or output stage fails.

mod commands;
mod config;
mod report;
mod svg;

use std::process::ExitCode;

use clap::{Parser, Subcommand};

use crate::commands::Failure;
use crate::config::{GeometryArgs, LociArgs, OutputArgs, RunConfig, ToleranceArgs};
use crate::report::Report;

#[derive(Parser)]
#[command(
    name = "inversive",
    version,
    about = "Elliptic billiard and inversive polygon toolkit"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args)]
struct Common {
    #[command(flatten)]
    geometry: GeometryArgs,
    #[command(flatten)]
    output: OutputArgs,
    #[command(flatten)]
    tolerances: ToleranceArgs,
}

#[derive(Subcommand)]
enum Command {
    /// Solve one N-periodic and report J, L and its caustic.
    Orbit(Common),
    /// Sweep the focus-inversive family and compare invariants with their closed forms.
    Invariants(Common),
    /// Sweep triangle-center loci and classify them.
    Loci {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        loci: LociArgs,
    },
    /// Regenerate the J and L tables and diff them against the published values.
    Tables {
        #[command(flatten)]
        common: Common,
        /// Largest N in the regenerated tables.
        #[arg(long, default_value_t = 12)]
        max_n: usize,
    },
}

fn config(name: &'static str, c: &Common) -> Result<RunConfig, Failure> {
    RunConfig::new(name, &c.geometry, &c.output, &c.tolerances).map_err(Failure::Validation)
}

fn run(cli: Cli) -> Result<(RunConfig, Report), Failure> {
    let (cfg, report) = match cli.command {
        Command::Orbit(c) => {
            let cfg = config("orbit", &c)?;
            let r = commands::orbit_cmd(&cfg)?;
            (cfg, r)
        }
        Command::Invariants(c) => {
            let cfg = config("invariants", &c)?;
            let r = commands::invariants_cmd(&cfg)?;
            (cfg, r)
        }
        Command::Loci { common, loci } => {
            let cfg = config("loci", &common)?
                .with_loci(&loci)
                .map_err(Failure::Validation)?;
            let r = commands::loci_cmd(&cfg)?;
            (cfg, r)
        }
        Command::Tables { common, max_n } => {
            let cfg = config("tables", &common)?
                .with_max_n(max_n)
                .map_err(Failure::Validation)?;
            let r = commands::tables_cmd(&cfg)?;
            (cfg, r)
        }
    };
    for p in report.write(&cfg).map_err(Failure::Output)? {
        println!("wrote {}", p.display());
    }
    Ok((cfg, report))
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok((cfg, report)) => {
            let failed: Vec<_> = report.failures().collect();
            for c in &failed {
                println!("FAIL {}: {:e} > {:e}", c.name, c.value, c.tolerance);
            }
            println!(
                "{}: {} checks, {} failed",
                cfg.command,
                report.checks.len(),
                failed.len()
            );
            if report.passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(f) => {
            eprintln!("error: {f}");
            ExitCode::from(f.exit_code() as u8)
        }
    }
}
