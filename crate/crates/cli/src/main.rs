//! `kcbs-qkd`: witness evaluation, protocol simulation, source sweeps,
//! attack analysis and randomness bounds from the command line.

mod commands;
mod manifest;

use std::path::PathBuf;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Debug, Parser)]
#[command(
    name = "kcbs-qkd",
    version,
    about = "Contextuality-certified QKD toolkit"
)]
struct Cli {
    /// Directory for output files.
    #[arg(long, global = true, default_value = ".")]
    out_dir: PathBuf,

    /// Worker threads; defaults to the number of cores.
    #[arg(long, global = true, env = "KCBS_QKD_WORKERS")]
    workers: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate the witness on a context table.
    Witness(WitnessArgs),
    /// Simulate protocol rounds, sift keys and estimate the witness.
    Simulate(SimulateArgs),
    /// Witness values of the ideal strategy against mean photon number.
    SweepMu(SweepArgs),
    /// SeeSaw attack optimization at chosen attack probabilities.
    Attack(AttackArgs),
    /// Key rate against witness value over a grid of attack probabilities.
    Keyrate(KeyrateArgs),
    /// Randomness bounds for observed (S1, S2).
    Randomness(RandomnessArgs),
    /// Exhaustive classical bound of the witness.
    ClassicalBound,
}

#[derive(Debug, Clone, Copy, Serialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Bundled {
    /// Measured single-photon context tables.
    Measured,
    /// Born probabilities of the ideal strategy.
    Ideal,
    /// Every detector at 1/2.
    Uniform,
}

#[derive(Debug, Clone, Copy, Serialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Duplicates {
    Average,
    Max,
}

#[derive(Debug, Args, Serialize)]
#[command(group = clap::ArgGroup::new("table").required(true))]
pub struct WitnessArgs {
    /// Context table CSV.
    #[arg(long, group = "table")]
    pub input: Option<PathBuf>,
    /// Use a bundled table instead of a file.
    #[arg(long, group = "table")]
    pub bundled: Option<Bundled>,
    /// How pairs measured in several contexts are combined.
    #[arg(long, value_enum, default_value = "average")]
    pub duplicates: Duplicates,
    /// Monte Carlo resamples for error bars when click counts are present.
    #[arg(long, default_value_t = 1000)]
    pub resamples: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, Serialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum SourceArg {
    /// Quantum-dot single photons with residual two-photon emission set by --g2.
    Qd,
    /// Perfect single photons.
    Single,
    /// Weak coherent pulses with mean photon number --mu.
    Coherent,
}

#[derive(Debug, Args, Serialize)]
pub struct SimulateArgs {
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub rounds: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value = "qd")]
    pub source: SourceArg,
    #[arg(long, default_value_t = 0.1)]
    pub mu: f64,
    #[arg(long, default_value_t = 0.036)]
    pub g2: f64,
    /// Per-detector dark click probability.
    #[arg(long, default_value_t = 0.0)]
    pub dark_count: f64,
    /// Share of key-eligible rounds kept for verification.
    #[arg(long, default_value_t = 0.5)]
    pub verification_fraction: f64,
    /// Cloning-attack probability applied to the ideal states.
    #[arg(long, default_value_t = 0.0)]
    pub q: f64,
    /// Resamples for the witness error bars.
    #[arg(long, default_value_t = 200)]
    pub resamples: usize,
    /// Do not write the per-round CSV.
    #[arg(long)]
    pub no_round_log: bool,
}

#[derive(Debug, Args, Serialize)]
pub struct SweepArgs {
    /// Explicit mean photon numbers, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub mu: Vec<f64>,
    #[arg(long, default_value_t = 0.01)]
    pub mu_min: f64,
    #[arg(long, default_value_t = 1.0)]
    pub mu_max: f64,
    #[arg(long, default_value_t = 100)]
    pub points: usize,
    #[arg(long, default_value_t = 0.0)]
    pub dark_count: f64,
    /// KCBS level whose crossing is reported.
    #[arg(long, default_value_t = 2.1762)]
    pub level: f64,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SeesawArgs {
    /// `reference`, `all`, or eight comma-separated colors for vertices 1..8.
    #[arg(long, default_value = "reference")]
    pub coloring: String,
    #[arg(long, default_value_t = 20)]
    pub restarts: usize,
    #[arg(long, default_value_t = 500)]
    pub max_iterations: usize,
    #[arg(long, default_value_t = 1e-10)]
    pub tolerance: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Args, Serialize)]
pub struct AttackArgs {
    /// Attack probabilities, comma separated.
    #[arg(long, value_delimiter = ',', default_value = "0.54")]
    pub q: Vec<f64>,
    #[command(flatten)]
    pub seesaw: SeesawArgs,
}

#[derive(Debug, Args, Serialize)]
pub struct KeyrateArgs {
    /// Number of equal steps from q = 0 to q = 1.
    #[arg(long, default_value_t = 100)]
    pub steps: usize,
    #[command(flatten)]
    pub seesaw: SeesawArgs,
}

#[derive(Debug, Args, Serialize)]
pub struct RandomnessArgs {
    #[arg(long)]
    pub s1: f64,
    #[arg(long)]
    pub s2: f64,
    #[arg(long, default_value_t = 3)]
    pub restarts: usize,
    #[arg(long, default_value_t = 150)]
    pub outer_iterations: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

fn main() -> Result<()> {
    let cli = Cli::parse();
    if let Some(n) = cli.workers {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .context("configuring worker pool")?;
    }
    let dir = &cli.out_dir;
    match cli.command {
        Command::Witness(a) => commands::witness(&a, dir),
        Command::Simulate(a) => commands::simulate(&a, dir),
        Command::SweepMu(a) => commands::sweep_mu(&a, dir),
        Command::Attack(a) => commands::attack(&a, dir),
        Command::Keyrate(a) => commands::keyrate(&a, dir),
        Command::Randomness(a) => commands::randomness(&a, dir),
        Command::ClassicalBound => commands::classical_bound(dir),
    }
}
