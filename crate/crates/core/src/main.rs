use std::path::PathBuf;
use std::process::ExitCode;

use breuil::cli::{self, Command, Flags, GridSpec, EXIT_INPUT};
use clap::Parser;

/// Validate mod-p Breuil modules and compute their inertia weights.
#[derive(Parser, Debug)]
#[command(name = "breuil", version)]
struct Args {
    /// validate | adapted-basis | weights | character | serre-check | pairing-check | oracle | lift-check
    command: Command,
    /// JSON jobfile; `-` reads standard input.
    jobfile: Option<PathBuf>,
    /// Emit the report as JSON.
    #[arg(long)]
    json: bool,
    /// Override the S₁ truncation degree (default 2p²).
    #[arg(long, value_name = "D")]
    trunc_degree: Option<usize>,
    /// Run the oracle over a grid instead of a jobfile, e.g. `--grid pmax=5 dmax=2`.
    #[arg(long, num_args = 1.., value_name = "KEY=VALUE")]
    grid: Option<Vec<String>>,
}

fn read_job(path: &PathBuf) -> std::io::Result<String> {
    if path.as_os_str() == "-" {
        std::io::read_to_string(std::io::stdin())
    } else {
        std::fs::read_to_string(path)
    }
}

fn main() -> ExitCode {
    let args = Args::parse();
    let flags = Flags { json: args.json, trunc_degree: args.trunc_degree };
    let outcome = match (&args.grid, &args.jobfile) {
        (Some(_), _) if args.command != Command::Oracle => {
            eprintln!("error: --grid is only accepted by the oracle command");
            return ExitCode::from(EXIT_INPUT as u8);
        }
        (Some(items), None) => match GridSpec::parse(items) {
            Ok(spec) => cli::run_grid(spec),
            Err(e) => {
                eprintln!("error: {e}");
                return ExitCode::from(EXIT_INPUT as u8);
            }
        },
        (Some(_), Some(_)) => {
            eprintln!("error: give either a jobfile or --grid, not both");
            return ExitCode::from(EXIT_INPUT as u8);
        }
        (None, None) => {
            eprintln!("error: a jobfile is required");
            return ExitCode::from(EXIT_INPUT as u8);
        }
        (None, Some(path)) => match read_job(path) {
            Ok(text) => cli::run(args.command, &text, &flags),
            Err(e) => {
                eprintln!("error: cannot read {}: {e}", path.display());
                return ExitCode::from(EXIT_INPUT as u8);
            }
        },
    };
    print!("{}", outcome.render(flags.json));
    if let Some(e) = &outcome.error {
        eprintln!("error: {e}");
    }
    ExitCode::from(outcome.exit_code as u8)
}
