use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use gdiscord::cli::{
    parse_dims, run_bounds, run_decompose, run_sweep, run_verify, StateInput, SweepSpec,
    SUPPORTED_DIMS,
};
use gdiscord::states::Family;

/// Lower bounds on the geometric measure of quantum discord.
///
/// Exit codes: 0 on success, 1 on invalid input or computation errors,
/// 2 on argument syntax errors (clap default), 3 when `verify` finds a
/// failing check.
#[derive(Parser)]
#[command(name = "gdiscord", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct StateArgs {
    /// Built-in family: eq52, eq53 or werner.
    #[arg(long, conflicts_with = "state_file", requires = "p")]
    family: Option<String>,
    /// Mixing parameter in [0, 1] for --family.
    #[arg(long)]
    p: Option<f64>,
    /// Read the state from a file instead (format: header `m n`, then
    /// `i j re im` lines).
    #[arg(long)]
    state_file: Option<PathBuf>,
}

impl StateArgs {
    fn input(&self) -> Result<StateInput<'_>, gdiscord::Error> {
        match (&self.family, &self.state_file) {
            (Some(name), None) => Ok(StateInput::Family {
                family: Family::parse(name)?,
                p: self.p.ok_or_else(|| {
                    gdiscord::Error::InvalidParameter("--family requires --p".to_string())
                })?,
            }),
            (None, Some(path)) => Ok(StateInput::File(path)),
            _ => Err(gdiscord::Error::InvalidParameter(
                "provide exactly one of --family (with --p) or --state-file".to_string(),
            )),
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Print both discord bounds and the supporting spectra for one state.
    Bounds {
        #[command(flatten)]
        state: StateArgs,
    },
    /// Write a CSV sweep of the bounds over the family parameter.
    Sweep {
        /// Family to sweep: eq52, eq53 or werner.
        #[arg(long)]
        family: String,
        #[arg(long, default_value_t = 0.0)]
        p_min: f64,
        #[arg(long, default_value_t = 1.0)]
        p_max: f64,
        #[arg(long, default_value_t = 101)]
        steps: usize,
        /// Output CSV path.
        #[arg(long)]
        out: PathBuf,
        /// Add an oracle_upper column (exact qubit search for werner,
        /// seeded Monte-Carlo upper bound for the qutrit families).
        #[arg(long)]
        oracle: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Run the internal invariant suite on random states.
    Verify {
        /// Comma-separated dims list, e.g. 2x2,3x3 (default: all supported).
        #[arg(long)]
        dims: Option<String>,
        #[arg(long, default_value_t = 50)]
        instances: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Print the Bloch decomposition (x, y, T) and the G spectrum.
    Decompose {
        #[command(flatten)]
        state: StateArgs,
    },
}

fn run(cli: Cli) -> Result<ExitCode, gdiscord::Error> {
    match cli.command {
        Command::Bounds { state } => {
            print!("{}", run_bounds(&state.input()?)?);
            Ok(ExitCode::SUCCESS)
        }
        Command::Sweep {
            family,
            p_min,
            p_max,
            steps,
            out,
            oracle,
            seed,
        } => {
            let spec = SweepSpec {
                family: Family::parse(&family)?,
                p_min,
                p_max,
                steps,
                include_oracle: oracle,
                seed,
            };
            run_sweep(&spec, &out)?;
            println!("wrote {} rows to {}", steps, out.display());
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify {
            dims,
            instances,
            seed,
        } => {
            let dims = match dims {
                Some(text) => parse_dims(&text)?,
                None => SUPPORTED_DIMS.to_vec(),
            };
            let report = run_verify(&dims, instances, seed)?;
            print!("{}", report.render());
            if report.ok() {
                Ok(ExitCode::SUCCESS)
            } else {
                Ok(ExitCode::from(3))
            }
        }
        Command::Decompose { state } => {
            print!("{}", run_decompose(&state.input()?)?);
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::FAILURE
        }
    }
}
