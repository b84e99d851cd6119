//! `ossidamp` — thermodynamics of damped oscillators coupled to reservoirs.
//!
//! Library surface behind the binary, exposed so integration tests can drive
//! the commands directly.

// `!(x > 0)` rejects NaN along with non-positive values; `x <= 0` does not.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod commands;
pub mod config;
pub mod pool;
pub mod report;

use clap::Parser;
use commands::CommandContext;
use config::{extract_overrides, load_config};
use std::path::PathBuf;

pub const EXIT_CONFIG_ERROR: i32 = 64;

#[derive(Debug, Parser)]
#[command(
    name = "ossidamp",
    version,
    about = "Equilibrium thermodynamics of damped classical and quantum oscillators",
    after_help = "Any flag of the form --section.key=value overrides the \
                  corresponding config entry (e.g. --model.chi0=0.5)."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, clap::Subcommand)]
enum Command {
    /// Compute U, U*, F*, S* over the temperature grid (CSV + JSON).
    Energy(CommonArgs),
    /// Render the damping-comparison table (text + JSON).
    Table1(CommonArgs),
    /// Run the physicality and consistency checks; nonzero exit on failure.
    Validate(CommonArgs),
    /// Discrete-bath convergence study against the spectral integrals (CSV).
    BathConverge(CommonArgs),
    /// Position autocorrelation over a time grid, via both code paths (CSV).
    Autocorr(CommonArgs),
    /// Sweep a config parameter and tabulate the energies (CSV).
    Sweep(CommonArgs),
}

#[derive(Debug, clap::Args)]
struct CommonArgs {
    /// Path to the TOML run configuration.
    config: PathBuf,
    /// Output directory for data files (created if missing).
    #[arg(long, default_value = ".")]
    out: PathBuf,
}

impl Command {
    fn common(&self) -> &CommonArgs {
        match self {
            Command::Energy(a)
            | Command::Table1(a)
            | Command::Validate(a)
            | Command::BathConverge(a)
            | Command::Autocorr(a)
            | Command::Sweep(a) => a,
        }
    }
}

/// Runs the CLI on explicit argv (element 0 is the program name) and returns
/// the process exit code.
pub fn run(argv: Vec<String>) -> i32 {
    let (rest, overrides) = extract_overrides(argv);
    let cli = match Cli::try_parse_from(rest) {
        Ok(cli) => cli,
        Err(e) => {
            // --help/--version print and exit cleanly; usage errors count as
            // config errors.
            let _ = e.print();
            return if e.use_stderr() { EXIT_CONFIG_ERROR } else { 0 };
        }
    };

    let common = cli.command.common();
    let config = match load_config(&common.config, &overrides) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("config error: {e:#}");
            return EXIT_CONFIG_ERROR;
        }
    };
    let ctx = match CommandContext::new(config, common.config.clone(), common.out.clone()) {
        Ok(ctx) => ctx,
        Err(e) => {
            eprintln!("config error: {e:#}");
            return EXIT_CONFIG_ERROR;
        }
    };

    let outcome = match &cli.command {
        Command::Energy(_) => commands::cmd_energy(&ctx),
        Command::Table1(_) => commands::cmd_table1(&ctx).map(|(outcome, text)| {
            print!("{text}");
            outcome
        }),
        Command::Validate(_) => commands::cmd_validate(&ctx).map(|(outcome, text)| {
            print!("{text}");
            outcome
        }),
        Command::BathConverge(_) => commands::cmd_bath_converge(&ctx),
        Command::Autocorr(_) => commands::cmd_autocorr(&ctx),
        Command::Sweep(_) => commands::cmd_sweep(&ctx),
    };

    match outcome {
        Ok(outcome) => outcome.exit_code(),
        Err(e) => {
            eprintln!("error: {e:#}");
            // Everything recoverable here traces back to the configuration.
            EXIT_CONFIG_ERROR
        }
    }
}

pub use commands::Outcome as CommandOutcome;

#[cfg(test)]
mod tests {
    use super::commands::Outcome;

    #[test]
    fn outcome_exit_codes() {
        assert_eq!(Outcome::Clean.exit_code(), 0);
        assert_eq!(Outcome::Divergences.exit_code(), 2);
        assert_eq!(Outcome::ValidationFailed.exit_code(), 3);
    }
}
