use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use sierpinski_walks::NetworkKind;

#[derive(Debug, Parser)]
#[command(name = "sierpinski", version, about = "Walks, spectra and trapping on Sierpinski networks")]
pub struct Cli {
    #[command(flatten)]
    pub common: Common,
    #[command(subcommand)]
    pub command: Command,
}

/// Options shared by every command.
#[derive(Clone, Debug, Args, Serialize, Deserialize)]
pub struct Common {
    /// Output directory for artifacts and the manifest.
    #[arg(long, global = true, default_value = "out")]
    pub out: PathBuf,
    /// Spectrum cache directory (overrides the environment variable).
    #[arg(long, global = true)]
    pub cache_dir: Option<PathBuf>,
    /// Disable the spectrum cache.
    #[arg(long, global = true)]
    #[serde(default)]
    pub no_cache: bool,
    /// Seed for all randomness (Poissonian grids, bootstrap).
    #[arg(long, global = true, default_value_t = 0)]
    #[serde(default)]
    pub seed: u64,
}

/// Serializable description of one invocation; replayed with `run`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ExperimentSpec {
    #[serde(flatten)]
    pub common: Common,
    pub command: Command,
}

#[derive(Clone, Debug, Subcommand, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "name")]
pub enum Command {
    /// Build a network and write it as graph JSON.
    Generate(NetworkArgs),
    /// Eigenvalues, degeneracies and the long-time average bound.
    Spectrum(SpectrumArgs),
    /// Sample a walk observable on a time grid.
    Dynamics(DynamicsArgs),
    /// Complex spectrum and survival with absorbing traps.
    Trap(TrapArgs),
    /// Pólya partial product and decay-exponent verdict.
    Recurrence(RecurrenceArgs),
    /// Normalized cumulative eigenvalue counting function.
    Counting(CountingArgs),
    /// Recompute the reference tables and tag each row.
    ReportTables(TablesArgs),
    /// Replay a saved experiment spec.
    Run(RunArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Generate(_) => "generate",
            Command::Spectrum(_) => "spectrum",
            Command::Dynamics(_) => "dynamics",
            Command::Trap(_) => "trap",
            Command::Recurrence(_) => "recurrence",
            Command::Counting(_) => "counting",
            Command::ReportTables(_) => "report-tables",
            Command::Run(_) => "run",
        }
    }
}

#[derive(Clone, Debug, Args, Serialize, Deserialize)]
pub struct NetworkArgs {
    /// Network family.
    #[arg(long, value_parser = parse_kind, required_unless_present = "graph")]
    pub kind: Option<NetworkKind>,
    /// Generation.
    #[arg(long = "g", required_unless_present = "graph")]
    pub generation: Option<u32>,
    /// Graph JSON file instead of a generated network.
    #[arg(long, conflicts_with_all = ["kind", "generation"])]
    pub graph: Option<PathBuf>,
}

fn parse_kind(s: &str) -> Result<NetworkKind, String> {
    s.parse::<NetworkKind>().map_err(|e| e.to_string())
}

#[derive(Clone, Debug, Args, Serialize, Deserialize)]
pub struct SpectrumArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub network: NetworkArgs,
    /// Level clustering tolerance (default: max(1e-8, 1e-12·E_max)).
    #[arg(long)]
    pub tolerance: Option<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GridKind {
    Lin,
    Log,
    Poisson,
}

#[derive(Clone, Debug, Args, Serialize, Deserialize)]
pub struct GridArgs {
    #[arg(long, value_enum, default_value = "log")]
    pub grid: GridKind,
    #[arg(long)]
    pub tmin: Option<f64>,
    #[arg(long)]
    pub tmax: Option<f64>,
    #[arg(long)]
    pub npoints: Option<usize>,
    /// Sampling rate for Poissonian grids.
    #[arg(long, default_value_t = 1.0)]
    pub rate: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
#[value(rename_all = "snake_case")]
pub enum ObservableArg {
    PKj,
    PiKj,
    ExactCosine,
    PBar,
    AlphaBound,
    PiBar,
    DominantApprox,
}

#[derive(Clone, Debug, Args, Serialize, Deserialize)]
pub struct DynamicsArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub network: NetworkArgs,
    #[arg(long, value_enum, default_value = "p_bar")]
    pub observable: ObservableArg,
    /// Target node (0-based).
    #[arg(long, default_value_t = 0)]
    pub k: usize,
    /// Start node (0-based).
    #[arg(long, default_value_t = 0)]
    pub j: usize,
    /// Level for the single-level approximation.
    #[arg(long)]
    pub energy: Option<f64>,
    #[command(flatten)]
    #[serde(flatten)]
    pub grid: GridArgs,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SchemeArg {
    Outer,
    Inner,
    Explicit,
}

#[derive(Clone, Debug, Args, Serialize, Deserialize)]
pub struct TrapArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub network: NetworkArgs,
    #[arg(long, value_enum, default_value = "outer")]
    pub scheme: SchemeArg,
    /// Trap nodes for the explicit scheme (0-based, comma separated).
    #[arg(long, value_delimiter = ',')]
    #[serde(default)]
    pub traps: Vec<usize>,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub gamma: f64,
    /// Zero-rate cutoff relative to the trapping rate.
    #[arg(long, allow_negative_numbers = true)]
    pub threshold: Option<f64>,
    /// Also count dark states exactly.
    #[arg(long)]
    #[serde(default)]
    pub exact: bool,
    /// Also write Π(t) and P(t) on this grid.
    #[arg(long)]
    #[serde(default)]
    pub survival: bool,
    #[command(flatten)]
    #[serde(flatten)]
    pub grid: GridArgs,
}

#[derive(Clone, Debug, Args, Serialize, Deserialize)]
pub struct RecurrenceArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub network: NetworkArgs,
    /// Origin node (0-based).
    #[arg(long, default_value_t = 0)]
    pub node: usize,
    #[command(flatten)]
    #[serde(flatten)]
    pub grid: GridArgs,
    #[arg(long, default_value_t = 1000)]
    pub resamples: usize,
}

#[derive(Clone, Debug, Args, Serialize, Deserialize)]
pub struct CountingArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub network: NetworkArgs,
    #[arg(long, default_value_t = 1001)]
    pub npoints: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum N0Method {
    /// Threshold-free rank computation.
    Exact,
    /// Zero rates of the complex spectrum.
    Spectrum,
}

#[derive(Clone, Debug, Args, Serialize, Deserialize)]
pub struct TablesArgs {
    /// Table to report (I..VIII); all when omitted.
    #[arg(long)]
    pub table: Option<String>,
    /// Upper generation limit applied to every table.
    #[arg(long)]
    pub max_g: Option<u32>,
    #[arg(long, value_enum, default_value = "exact")]
    pub n0_method: N0Method,
}

#[derive(Clone, Debug, Args, Serialize, Deserialize)]
pub struct RunArgs {
    /// Experiment spec JSON.
    pub spec: PathBuf,
}
