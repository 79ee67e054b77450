use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Result;
use clap::{Args, Parser, Subcommand};

use sic_rach_cli::spec::{Experiment, ExperimentSpec};
use sic_rach_cli::validate::Options;

#[derive(Parser)]
#[command(name = "sic-rach", about = "SIC-based RACH experiments: sweeps, mechanism comparison and validation")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Successes per cycle over the entry fraction E.
    SweepE(Common),
    /// Successes per cycle over the repetition rate R.
    SweepR(Common),
    /// Successes per cycle over the cycle length T.
    SweepT(Common),
    /// Successes per cycle over the preamble count K.
    SweepK(Common),
    /// Successes per cycle over the packet error probability.
    SweepPe(Common),
    /// Drains a device pool with EAB, FRM and SIC.
    Compare(Common),
    /// Checks the analytic model against the oracle, simulation and
    /// reference values; exits nonzero on any breach.
    Validate(ValidateArgs),
}

/// Grid flags take a comma list (`500,1000`) or `start:stop:step`.
#[derive(Args, Clone, Default)]
struct Common {
    #[arg(long, value_name = "GRID")]
    t: Option<String>,
    #[arg(long, value_name = "GRID")]
    k: Option<String>,
    #[arg(long, value_name = "GRID")]
    e: Option<String>,
    #[arg(long, value_name = "GRID")]
    r: Option<String>,
    #[arg(long, value_name = "GRID")]
    pe: Option<String>,
    #[arg(long)]
    pool: Option<String>,
    #[arg(long)]
    trials: Option<String>,
    #[arg(long)]
    seed: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Flat `key = value` file; flags given on the command line win.
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Args, Clone)]
struct ValidateArgs {
    #[command(flatten)]
    common: Common,
    /// Shift every stage-2 SIC probability by this amount.
    #[arg(long, hide = true, allow_hyphen_values = true)]
    perturb_psic2: Option<f64>,
}

fn build(experiment: Experiment, c: &Common) -> Result<ExperimentSpec> {
    let mut spec = ExperimentSpec::defaults(experiment);
    if let Some(path) = &c.config {
        spec.load_config(path)?;
    }
    let flags = [
        ("t", &c.t),
        ("k", &c.k),
        ("e", &c.e),
        ("r", &c.r),
        ("pe", &c.pe),
        ("pool", &c.pool),
        ("trials", &c.trials),
        ("seed", &c.seed),
    ];
    for (key, value) in flags {
        if let Some(v) = value {
            spec.set(key, v)?;
        }
    }
    if let Some(out) = &c.out {
        spec.out = out.clone();
    }
    spec.check()?;
    Ok(spec)
}

fn main() -> Result<ExitCode> {
    let cli = Cli::parse();
    let mut opts = Options::default();
    let (experiment, common) = match &cli.command {
        Command::SweepE(c) => (Experiment::SweepE, c),
        Command::SweepR(c) => (Experiment::SweepR, c),
        Command::SweepT(c) => (Experiment::SweepT, c),
        Command::SweepK(c) => (Experiment::SweepK, c),
        Command::SweepPe(c) => (Experiment::SweepPe, c),
        Command::Compare(c) => (Experiment::Compare, c),
        Command::Validate(v) => {
            opts.perturb_p_sic2 = v.perturb_psic2;
            (Experiment::Validate, &v.common)
        }
    };
    let spec = build(experiment, common)?;
    let run = sic_rach_cli::run(&spec, &opts)?;
    run.table.write_file(&spec.out)?;
    for line in &run.summary {
        println!("{line}");
    }
    println!("wrote {} ({} rows)", spec.out.display(), run.table.rows.len());
    Ok(if run.passed { ExitCode::SUCCESS } else { ExitCode::FAILURE })
}
