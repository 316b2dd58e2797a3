use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use coisored::report::write_atomic;
use coisored::{run_command, Command, Options, Outcome, RouteArg};

/// Exact coisotropic reduction of affine Poisson schemes.
#[derive(Parser, Debug)]
#[command(name = "coisored", version)]
struct Cli {
    /// What to run.
    #[arg(value_enum)]
    command: Command,
    /// Session file.
    session: PathBuf,
    /// Largest total degree searched for invariants.
    #[arg(long, default_value_t = 4)]
    degree_bound: u32,
    /// Monomial order (only `grevlex`).
    #[arg(long, default_value = "grevlex")]
    order: String,
    /// Seed for randomized verification.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Random trials per verification check.
    #[arg(long, default_value_t = 10)]
    verify_trials: usize,
    /// S-pair cap per Groebner computation [default: $COISORED_BUDGET or 50000].
    #[arg(long)]
    budget: Option<usize>,
    /// Most generators the closure loop may add.
    #[arg(long, default_value_t = coisored_core::reduction::CLOSURE_CAP)]
    closure_cap: usize,
    /// How invariants of the fibre are computed (`reduce`).
    #[arg(long, value_enum, default_value = "restrict-first")]
    route: RouteArg,
    /// Write the JSON report here.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Record wall-clock time in the report.
    #[arg(long)]
    timing: bool,
    /// Groupoid to check.
    #[arg(long)]
    groupoid: Option<String>,
    /// Action to check or reduce by.
    #[arg(long)]
    action: Option<String>,
    /// Commuting action to descend (`residual`).
    #[arg(long)]
    residual: Option<String>,
    /// Stabilizer to reduce at.
    #[arg(long)]
    subgroupoid: Option<String>,
    /// Bimodules to compose, in order (`compose`, given twice).
    #[arg(long)]
    bimodule: Vec<String>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(Outcome::InputError.exit_code() as u8)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let budget = match cli.budget {
        Some(b) if b > 0 => b,
        Some(_) => {
            eprintln!("error: --budget must be positive");
            return ExitCode::from(Outcome::InputError.exit_code() as u8);
        }
        None => match Options::default_budget() {
            Ok(b) => b,
            Err(msg) => {
                eprintln!("error: {msg}");
                return ExitCode::from(Outcome::InputError.exit_code() as u8);
            }
        },
    };
    let opts = Options {
        degree_bound: cli.degree_bound,
        order: cli.order,
        seed: cli.seed,
        verify_trials: cli.verify_trials,
        budget,
        closure_cap: cli.closure_cap,
        route: cli.route,
        timing: cli.timing,
        groupoid: cli.groupoid,
        action: cli.action,
        residual: cli.residual,
        subgroupoid: cli.subgroupoid,
        bimodules: cli.bimodule,
    };
    let report = run_command(cli.command, &cli.session, &opts);
    print!("{}", report.to_text());
    if let Some(path) = &cli.out {
        if let Err(e) = write_atomic(path, &report.to_json_string()) {
            eprintln!("error: cannot write {}: {e}", path.display());
            return ExitCode::from(Outcome::InputError.exit_code() as u8);
        }
    }
    ExitCode::from(report.exit_code() as u8)
}
