use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use plate_cli::{compare_runs, output_dir, run, CliError, Experiment, Outcome, RunConfig};

/// Experiments for the damped plate equation with rotational inertia.
#[derive(Parser)]
#[command(name = "plate", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Mild solution by Duhamel march (or the method-of-lines reference)
    Simulate(RunArgs),
    /// Picard iteration with contraction diagnostics
    Picard(RunArgs),
    /// Decay and boundedness checks of the linear propagators
    VerifyLinear(RunArgs),
    /// Bounded-ratio checks of the nonlinear difference estimates
    VerifyNonlinear(RunArgs),
    /// Quadrature checks of the scalar integral lemmas
    VerifyIntegrals(RunArgs),
    /// Solver against an independent oracle
    OracleCompare(RunArgs),
    /// One experiment over a list of values for one key
    Sweep(RunArgs),
    /// The experiment named by the config's `experiment` key
    Run(RunArgs),
    /// Per-column deviation between the CSVs of two runs
    Compare {
        a: PathBuf,
        b: PathBuf,
        #[arg(long, default_value_t = 1e-4)]
        tolerance: f64,
    },
}

#[derive(Args)]
struct RunArgs {
    #[arg(long)]
    config: PathBuf,
    /// Run directory; defaults to `output.dir`, then $PLATE_OUT/<experiment>-<config>
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads
    #[arg(long)]
    jobs: Option<usize>,
}

fn execute(args: RunArgs, experiment: Option<Experiment>) -> Result<Outcome, CliError> {
    if let Some(jobs) = args.jobs {
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs.max(1))
            .build_global()
            .map_err(|e| CliError::Config(format!("--jobs: {e}")))?;
    }
    let mut cfg = RunConfig::load(&args.config, experiment)?;
    if let Some(seed) = args.seed {
        cfg = cfg.with_seed(seed)?;
    }
    let dir = output_dir(&cfg, args.out.as_deref(), &args.config);
    run(&cfg, &dir)
}

fn report(outcome: &Outcome) -> i32 {
    for c in &outcome.criteria {
        println!("{} {}: {}", if c.pass { "PASS" } else { "FAIL" }, c.name, c.detail);
    }
    for n in &outcome.notes {
        println!("note: {n}");
    }
    println!("{} {} -> {}", outcome.experiment, outcome.status.label(), outcome.dir.display());
    outcome.exit_code()
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let (args, experiment) = match cli.command {
        Command::Compare { a, b, tolerance } => {
            let code = match compare_runs(&a, &b, tolerance) {
                Ok(r) => {
                    for c in &r.columns {
                        println!("{}:{} {:e}", c.file, c.column, c.deviation);
                    }
                    let verdict = if r.passed() { "PASS" } else { "FAIL" };
                    println!("{verdict} max deviation {:e} (tolerance {tolerance:e})", r.max_deviation());
                    if r.passed() { 0 } else { 3 }
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    e.exit_code()
                }
            };
            return ExitCode::from(code as u8);
        }
        Command::Simulate(a) => (a, Some(Experiment::Simulate)),
        Command::Picard(a) => (a, Some(Experiment::Picard)),
        Command::VerifyLinear(a) => (a, Some(Experiment::VerifyLinear)),
        Command::VerifyNonlinear(a) => (a, Some(Experiment::VerifyNonlinear)),
        Command::VerifyIntegrals(a) => (a, Some(Experiment::VerifyIntegrals)),
        Command::OracleCompare(a) => (a, Some(Experiment::OracleCompare)),
        Command::Sweep(a) => (a, Some(Experiment::Sweep)),
        Command::Run(a) => (a, None),
    };
    let code = match execute(args, experiment) {
        Ok(outcome) => report(&outcome),
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    };
    ExitCode::from(code as u8)
}
