use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use qes_core::GridSpec;

#[derive(Debug, Parser)]
#[command(name = "qes", version, about = "Build, solve and verify exactly and quasi-exactly solvable Schrödinger models")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solvability class, polynomial degrees and normalizability.
    Classify(ModelArgs),
    /// Potential, coordinate map and prepotential of a model.
    Build(ModelArgs),
    /// All Bethe ansatz solutions with energies and residuals.
    Solve(SolveArgs),
    /// Run every applicable oracle; exit code 2 if any check fails.
    Verify(SolveArgs),
    /// Normalized eigenfunctions sampled on a grid.
    States(StatesArgs),
    /// The rationally extended radial oscillator.
    Extended(ExtendedArgs),
    /// Potential and states for levels 1 and 2 of a preset in one CSV.
    PlotData(PlotArgs),
    /// List the built-in presets and their parameters.
    Presets(OutputArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    /// Write output to this file instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Output format; `states`, `plot-data` default to csv, the rest to json.
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

#[derive(Debug, Default, Args)]
pub struct PresetParams {
    /// Preset parameter a (radial, sextic).
    #[arg(long, allow_negative_numbers = true)]
    pub a: Option<f64>,
    /// Preset parameter b (harmonic, sextic).
    #[arg(long, allow_negative_numbers = true)]
    pub b: Option<f64>,
    /// Preset parameter c (qnm-harmonic).
    #[arg(long, allow_negative_numbers = true)]
    pub c: Option<f64>,
    /// Preset parameter l (radial, x-laguerre).
    #[arg(long, allow_negative_numbers = true)]
    pub ell: Option<f64>,
    /// Preset parameter alpha (pt-quartic, x-laguerre).
    #[arg(long, allow_negative_numbers = true)]
    pub alpha: Option<f64>,
    /// Preset parameter beta (pt-quartic, sextic-imag-b).
    #[arg(long, allow_negative_numbers = true)]
    pub beta: Option<f64>,
    /// Preset parameter gamma (pt-quartic).
    #[arg(long, allow_negative_numbers = true)]
    pub gamma: Option<f64>,
}

#[derive(Debug, Args)]
pub struct ModelArgs {
    /// Built-in model name (see `qes presets`).
    #[arg(long, conflicts_with = "spec")]
    pub preset: Option<String>,
    /// Model as inline JSON or a path to a JSON file.
    #[arg(long)]
    pub spec: Option<String>,
    #[command(flatten)]
    pub params: PresetParams,
    /// Level count N, overriding the spec.
    #[arg(long = "N", visible_alias = "n")]
    pub n: Option<usize>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    /// Multi-start budget; defaults to 64 (N + 1).
    #[arg(long)]
    pub starts: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub rng_seed: u64,
    /// Sampling grid as `min:max:points`.
    #[arg(long, allow_hyphen_values = true)]
    pub grid: Option<GridArg>,
}

#[derive(Debug, Args)]
pub struct StatesArgs {
    #[command(flatten)]
    pub solve: SolveArgs,
    /// Scale factor applied to the phi columns.
    #[arg(long, default_value_t = 1.0)]
    pub magnify: f64,
    /// Emit every k-th grid point.
    #[arg(long, default_value_t = 1)]
    pub stride: usize,
}

#[derive(Debug, Args)]
pub struct ExtendedArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    /// Highest state index n.
    #[arg(long, default_value_t = 4)]
    pub n_max: usize,
    #[arg(long, allow_hyphen_values = true)]
    pub grid: Option<GridArg>,
    #[arg(long, default_value_t = 1.0)]
    pub magnify: f64,
    #[arg(long, default_value_t = 1)]
    pub stride: usize,
}

#[derive(Debug, Args)]
pub struct PlotArgs {
    #[command(flatten)]
    pub solve: SolveArgs,
    #[arg(long, default_value_t = 10.0)]
    pub magnify: f64,
    #[arg(long, default_value_t = 10)]
    pub stride: usize,
    /// Levels N to include, comma separated.
    #[arg(long, value_delimiter = ',', default_value = "1,2")]
    pub levels: Vec<usize>,
}

/// A grid given as `min:max:points`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GridArg(pub GridSpec);

impl FromStr for GridArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<&str> = s.split(':').collect();
        let [lo, hi, n] = parts.as_slice() else {
            return Err(format!("expected min:max:points, got {s:?}"));
        };
        let lo: f64 = lo.trim().parse().map_err(|e| format!("grid min: {e}"))?;
        let hi: f64 = hi.trim().parse().map_err(|e| format!("grid max: {e}"))?;
        let n: usize = n.trim().parse().map_err(|e| format!("grid points: {e}"))?;
        GridSpec::new(lo, hi, n).map(GridArg).map_err(|e| e.to_string())
    }
}
