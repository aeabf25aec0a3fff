use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use gausskey::threshold::{DEFAULT_STEPS, DEFAULT_TAU_MAX, DEFAULT_TAU_MIN, DEFAULT_TOL};
use gausskey::{PortModel, SimMode};

#[derive(Debug, Parser)]
#[command(
    name = "gausskey",
    version,
    about = "Secret-key rate bounds for one-mode Gaussian channels"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// E_R, Q1g and the noisy reverse rate at one channel
    Rates(RatesArgs),
    /// Threshold curves eps_q, eps_r, eps_rev over a tau grid (CSV)
    Thresholds(ThresholdsArgs),
    /// Finite-mu engine values against their closed-form limits
    Converge(ConvergeArgs),
    /// Dilation-based protocol rate against the closed-form reverse rate
    Verify(VerifyArgs),
    /// Seeded Monte Carlo of the homodyne protocol (JSON)
    Simulate(SimulateArgs),
    /// Region label of a (tau, eps) point
    Classify(ClassifyArgs),
}

/// Transmission; any finite value except 1.
pub fn parse_tau(s: &str) -> Result<f64, String> {
    let tau: f64 = s
        .trim()
        .parse()
        .map_err(|_| format!("'{s}' is not a number"))?;
    if !tau.is_finite() {
        return Err("must be finite".into());
    }
    if tau == 1.0 {
        return Err(gausskey::Error::UnsupportedClass.to_string());
    }
    Ok(tau)
}

/// Comma-separated source variances.
#[derive(Debug, Clone, PartialEq)]
pub struct MuList(pub Vec<f64>);

fn parse_mu_list(s: &str) -> Result<MuList, String> {
    s.split(',')
        .map(|x| {
            x.trim()
                .parse::<f64>()
                .map_err(|_| format!("'{x}' is not a number"))
        })
        .collect::<Result<Vec<_>, _>>()
        .map(MuList)
}

#[derive(Debug, Clone, Copy, Args)]
#[group(required = true, multiple = false)]
pub struct NoiseArgs {
    /// Mean thermal photon number n̄ >= 0
    #[arg(long, allow_hyphen_values = true)]
    pub nbar: Option<f64>,
    /// Scaled thermal noise eps = 2 n̄ |1 - tau|
    #[arg(long, allow_hyphen_values = true)]
    pub eps: Option<f64>,
}

#[derive(Debug, Args)]
pub struct RatesArgs {
    #[arg(long, value_parser = parse_tau, allow_hyphen_values = true)]
    pub tau: f64,
    #[command(flatten)]
    pub noise: NoiseArgs,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct ThresholdsArgs {
    #[arg(long, default_value_t = DEFAULT_TAU_MIN, allow_hyphen_values = true)]
    pub tau_min: f64,
    #[arg(long, default_value_t = DEFAULT_TAU_MAX, allow_hyphen_values = true)]
    pub tau_max: f64,
    #[arg(long, default_value_t = DEFAULT_STEPS)]
    pub steps: usize,
    /// Bisection tolerance on eps
    #[arg(long, default_value_t = DEFAULT_TOL, allow_hyphen_values = true)]
    pub tol: f64,
    /// CSV destination, `-` for standard output
    #[arg(long)]
    pub out: PathBuf,
    /// Also render the three curves as an SVG line plot
    #[arg(long)]
    pub svg: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum EngineArg {
    Rci,
    Ci,
    Protocol,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PortsArg {
    Trusted,
    Untrusted,
}

impl From<PortsArg> for PortModel {
    fn from(p: PortsArg) -> Self {
        match p {
            PortsArg::Trusted => PortModel::Trusted,
            PortsArg::Untrusted => PortModel::Untrusted,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Memory,
    Sifted,
}

impl From<ModeArg> for SimMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Memory => SimMode::Memory,
            ModeArg::Sifted => SimMode::Sifted,
        }
    }
}

#[derive(Debug, Args)]
pub struct ConvergeArgs {
    #[arg(long, value_parser = parse_tau, allow_hyphen_values = true)]
    pub tau: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub nbar: f64,
    /// Comma-separated source variances, e.g. 1,10,100,1e4
    #[arg(long, value_parser = parse_mu_list, allow_hyphen_values = true)]
    pub mu_list: MuList,
    #[arg(long, value_enum, default_value_t = EngineArg::Rci)]
    pub engine: EngineArg,
    /// Eve's access to the discarded port (protocol engine only)
    #[arg(long, value_enum, default_value_t = PortsArg::Trusted)]
    pub ports: PortsArg,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, value_parser = parse_tau, allow_hyphen_values = true)]
    pub tau: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub nbar: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub mu: f64,
    #[arg(long, value_enum)]
    pub ports: PortsArg,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[arg(long, value_parser = parse_tau, allow_hyphen_values = true)]
    pub tau: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub nbar: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub mu: f64,
    #[arg(long)]
    pub rounds: u64,
    #[arg(long)]
    pub seed: u64,
    #[arg(long, value_enum)]
    pub mode: ModeArg,
    /// Per-round CSV destination
    #[arg(long)]
    pub rounds_csv: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ClassifyArgs {
    #[arg(long, value_parser = parse_tau, allow_hyphen_values = true)]
    pub tau: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub eps: f64,
    #[arg(long)]
    pub json: bool,
}
