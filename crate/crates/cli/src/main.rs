use std::path::PathBuf;
use std::process::ExitCode;

use betweenness_cli::{exit_code, run, Command, Config};
use clap::{Args, Parser, Subcommand};

/// Build and audit implicit mixture-linear representations of
/// betweenness preferences.
#[derive(Parser)]
#[command(name = "betweenness", version)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Tabulate U(x) and u(x, t) over a simplex grid.
    Repr(Flags),
    /// Run the axiom checks.
    Check(Flags),
    /// Trace indifference curves in the 3-outcome triangle.
    Triangle(Flags),
    /// Solve and verify the separation programs.
    Separation(Flags),
}

#[derive(Args)]
struct Flags {
    /// Model specification (JSON).
    #[arg(long)]
    model: PathBuf,
    /// Grid resolution; number of slices for `triangle`.
    #[arg(long)]
    grid: Option<usize>,
    #[arg(long = "t-grid", default_value_t = 10)]
    t_grid: usize,
    /// Comma-separated levels, e.g. 0.2,0.5,0.8.
    #[arg(long, value_delimiter = ',')]
    levels: Option<Vec<f64>>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output directory.
    #[arg(long, default_value = ".")]
    out: PathBuf,
}

const MAX_REPORTED: usize = 10;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (command, flags) = match cli.command {
        Cmd::Repr(f) => (Command::Repr, f),
        Cmd::Check(f) => (Command::Check, f),
        Cmd::Triangle(f) => (Command::Triangle, f),
        Cmd::Separation(f) => (Command::Separation, f),
    };
    let config = Config {
        model: flags.model,
        grid: flags.grid,
        t_grid: flags.t_grid,
        levels: flags.levels,
        seed: flags.seed,
        out: flags.out,
    };
    let result = run(command, &config);
    match &result {
        Ok(outcome) => {
            for f in outcome.failures.iter().take(MAX_REPORTED) {
                eprintln!("{}: {f}", command.name());
            }
            if outcome.failures.len() > MAX_REPORTED {
                eprintln!(
                    "{}: ... {} more failure(s), see the report",
                    command.name(),
                    outcome.failures.len() - MAX_REPORTED
                );
            }
            for f in &outcome.files {
                println!("{}", f.display());
            }
        }
        Err(e) => eprintln!("{}: {e}", command.name()),
    }
    exit_code(&result)
}
