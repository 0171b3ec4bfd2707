//! `camps`: experiment runner for the Clifford-augmented MPS solver.

mod config;
mod jobs;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use config::{ExperimentSpec, JobKind, Overrides};

#[derive(Parser)]
#[command(
    name = "camps",
    version,
    about = "Ground states of spin chains with Clifford-augmented MPS"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run DMRG or CAMPS over the (L, D) grid.
    Run(Args),
    /// Fit entropy scaling, entropy reduction and energy errors from earlier runs.
    Analyze(Args),
    /// Canonicalize circuits, detect patterns and match dual models.
    Circuit(Args),
    /// Exact diagonalization references.
    Oracle(Args),
}

#[derive(clap::Args)]
struct Args {
    /// Experiment configuration (TOML).
    #[arg(long)]
    config: PathBuf,
    /// Output directory, overriding `job.output`.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Seed, overriding `job.seed`.
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads for independent grid points.
    #[arg(long)]
    threads: Option<usize>,
}

fn allowed(command: &Command) -> (&'static [JobKind], JobKind, &Args) {
    match command {
        Command::Run(a) => (&[JobKind::Dmrg, JobKind::Camps], JobKind::Camps, a),
        Command::Analyze(a) => (&[JobKind::Analyze], JobKind::Analyze, a),
        Command::Circuit(a) => (&[JobKind::Circuit], JobKind::Circuit, a),
        Command::Oracle(a) => (&[JobKind::Ed], JobKind::Ed, a),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (kinds, default_kind, args) = allowed(&cli.command);
    let overrides = Overrides {
        output: args.out.clone(),
        seed: args.seed,
    };
    let spec = match ExperimentSpec::load(&args.config, default_kind, &overrides) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: {}: {e}", args.config.display());
            return ExitCode::from(2);
        }
    };
    if !kinds.contains(&spec.kind) {
        eprintln!(
            "error: job kind {:?} cannot run under this subcommand (expected {})",
            spec.kind.name(),
            kinds
                .iter()
                .map(|k| k.name())
                .collect::<Vec<_>>()
                .join(" or ")
        );
        return ExitCode::from(2);
    }

    let pool = match rayon::ThreadPoolBuilder::new()
        .num_threads(args.threads.unwrap_or(0))
        .build()
    {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: thread pool: {e}");
            return ExitCode::from(2);
        }
    };
    let outcomes = match pool.install(|| jobs::run_experiment(&spec)) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };

    let mut failed = 0;
    for o in &outcomes {
        match &o.error {
            None => println!("ok {} ({} files)", o.name, o.files.len()),
            Some(e) => {
                failed += 1;
                println!("FAILED {}: {e}", o.name);
            }
        }
    }
    println!("spec_hash={} output={}", spec.hash(), spec.output.display());
    if failed > 0 {
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    }
}
