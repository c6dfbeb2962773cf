use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::error::CliError;

#[derive(Debug, Parser)]
#[command(
    name = "optham",
    version,
    about = "Optimal grounded Hamiltonians and minimal Gibbs entropies"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the optimal Hamiltonian H(rho, E0, E) and its Gibbs entropy
    Optimal(OptimalArgs),
    /// Write the minimal-entropy curve over an energy grid as CSV
    Curve(CurveArgs),
    /// Solve for the Gibbs state of a Hamiltonian at a given mean energy
    Gibbs(GibbsArgs),
    /// Evaluate a semicontinuity bound for a characteristic
    Lsb(LsbArgs),
    /// Run every oracle check and print a JSON report
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Default)]
pub enum Units {
    #[default]
    Nats,
    Bits,
}

impl Units {
    pub fn convert(self, nats: f64) -> f64 {
        match self {
            Units::Nats => nats,
            Units::Bits => nats / std::f64::consts::LN_2,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// Entropy units
    #[arg(long, value_enum, default_value_t = Units::Nats)]
    pub units: Units,
    /// Write to this file instead of stdout
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct OptimalArgs {
    /// `uniform:N`, `linear:N`, `geometric:E0` or a JSON spectrum file
    #[arg(long)]
    pub spectrum: String,
    #[arg(long = "E0", default_value_t = 1.0)]
    pub e0: f64,
    #[arg(long = "E")]
    pub e: f64,
    /// Number of levels to print
    #[arg(long, default_value_t = 10)]
    pub levels: usize,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct CurveArgs {
    #[arg(long)]
    pub spectrum: String,
    #[arg(long = "E0", default_value_t = 1.0)]
    pub e0: f64,
    /// `min:max:points`, evenly spaced and inclusive
    #[arg(long)]
    pub grid: Grid,
    /// Add the column S_ref = g(E), the oscillator entropy at mean occupation E
    #[arg(long)]
    pub reference: bool,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct GibbsArgs {
    /// JSON file `{"levels": [...], "finite_domain": bool}`
    #[arg(long)]
    pub hamiltonian: PathBuf,
    #[arg(long = "E")]
    pub e: f64,
    /// Number of weights to print
    #[arg(long, default_value_t = 10)]
    pub weights: usize,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct LsbArgs {
    /// Preset slug or name
    #[arg(long)]
    pub characteristic: String,
    #[arg(long)]
    pub eps: f64,
    #[arg(long)]
    pub spectrum: String,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub min: f64,
    pub max: f64,
    pub points: usize,
}

impl Grid {
    pub fn values(&self) -> Vec<f64> {
        let step = (self.max - self.min) / (self.points - 1) as f64;
        (0..self.points)
            .map(|i| {
                if i + 1 == self.points {
                    self.max
                } else {
                    self.min + step * i as f64
                }
            })
            .collect()
    }
}

impl FromStr for Grid {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = |why: &str| CliError::BadConfig(format!("grid `{s}`: {why}"));
        let parts: Vec<&str> = s.split(':').collect();
        let [min, max, points] = parts[..] else {
            return Err(bad("expected min:max:points"));
        };
        let min: f64 = min.parse().map_err(|_| bad("min is not a number"))?;
        let max: f64 = max.parse().map_err(|_| bad("max is not a number"))?;
        let points: usize = points
            .parse()
            .map_err(|_| bad("points is not an integer"))?;
        if !(min < max) || !min.is_finite() || !max.is_finite() {
            return Err(bad("need finite min < max"));
        }
        if points < 2 {
            return Err(bad("need at least two points"));
        }
        Ok(Grid { min, max, points })
    }
}
