use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use quasistatic_core::bath::{DEFAULT_HIGH_FIELD_TESLA, DEFAULT_R_MAX_NM, DEFAULT_R_MIN_NM};
use quasistatic_core::spectrum::DEFAULT_BINS;
use quasistatic_core::MeasurementModel;

/// Measurement-sequence statistics of a qubit in a quasi-static nuclear-spin
/// bath. Times in μs, fields in tesla, distances in nm, frequencies in rad/μs.
#[derive(Debug, Parser)]
#[command(name = "quasistatic", version)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sample a random bath and write it as JSON.
    BathGen(BathGenArgs),
    /// Coarse-grained Δω histogram of a bath.
    Spectrum(SpectrumArgs),
    /// Probability of every n-outcome record.
    Probs(ProbsArgs),
    /// Conditional probability of repeating an identical outcome.
    Adaptive(AdaptiveArgs),
    /// Qubit coherence after a post-selected record.
    Coherence(CoherenceArgs),
}

#[derive(Debug, Args)]
pub struct BathGenArgs {
    #[arg(long)]
    pub n_spins: usize,
    #[arg(long, default_value_t = DEFAULT_R_MIN_NM)]
    pub r_min_nm: f64,
    #[arg(long, default_value_t = DEFAULT_R_MAX_NM)]
    pub r_max_nm: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FieldKind {
    Zero,
    High,
    /// High field without the leading-order approximation.
    HighExact,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum EngineKind {
    Exact,
    Gaussian,
    Both,
}

#[derive(Debug, Args)]
pub struct FieldArgs {
    #[arg(long, value_enum, default_value = "zero")]
    pub field: FieldKind,
    #[arg(long, default_value_t = DEFAULT_HIGH_FIELD_TESLA)]
    pub b_tesla: f64,
}

#[derive(Debug, Args)]
pub struct SpectrumArgs {
    #[arg(long)]
    pub bath: PathBuf,
    #[command(flatten)]
    pub field: FieldArgs,
    #[arg(long, default_value_t = DEFAULT_BINS)]
    pub bins: usize,
    /// Output CSV; standard output when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct EngineArgs {
    /// Bath JSON for the exact engine.
    #[arg(long)]
    pub bath: Option<PathBuf>,
    /// Gaussian width in rad/μs. Defaults to the bath's moment σ.
    #[arg(long)]
    pub sigma: Option<f64>,
    /// Defaults to `exact` when a bath is given, else `gaussian`.
    #[arg(long, value_enum)]
    pub engine: Option<EngineKind>,
    /// `projective` or `povm:<theta>` with 0 < θ ≤ π/4.
    #[arg(long, default_value = "projective", value_parser = parse_model)]
    pub model: MeasurementModel,
    #[command(flatten)]
    pub field: FieldArgs,
}

#[derive(Debug, Args)]
pub struct ProbsArgs {
    #[command(flatten)]
    pub engine: EngineArgs,
    #[arg(long)]
    pub n: u32,
    /// Repeat for several τ values.
    #[arg(long = "tau-us", required = true)]
    pub tau_us: Vec<f64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct AdaptiveArgs {
    #[command(flatten)]
    pub engine: EngineArgs,
    #[arg(long)]
    pub n_max: u32,
    #[arg(long = "tau-us")]
    pub tau_us: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CoherenceArgs {
    #[command(flatten)]
    pub engine: EngineArgs,
    /// Binary record, first measurement last (e.g. `0011`).
    #[arg(long, conflicts_with_all = ["n", "k"])]
    pub seq: Option<String>,
    #[arg(long, default_value_t = 0)]
    pub n: u32,
    #[arg(long, default_value_t = 0)]
    pub k: u32,
    #[arg(long = "tau-us")]
    pub tau_us: f64,
    #[arg(long, default_value_t = 0.0)]
    pub t_start: f64,
    #[arg(long)]
    pub t_stop: f64,
    #[arg(long)]
    pub t_step: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

pub fn parse_model(s: &str) -> Result<MeasurementModel, String> {
    if s == "projective" {
        return Ok(MeasurementModel::Projective);
    }
    let theta = s
        .strip_prefix("povm:")
        .ok_or_else(|| "expected `projective` or `povm:<theta>`".to_string())?;
    let theta: f64 = theta.parse().map_err(|_| format!("`{theta}` is not a number"))?;
    MeasurementModel::weak(theta).map_err(|_| "POVM θ must lie in (0, π/4]".to_string())
}
