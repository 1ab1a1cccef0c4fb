use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::output::Format;

#[derive(Debug, Parser)]
#[command(name = "gralab", version, about = "Single-photon beam-splitter and interferometer laboratory")]
pub struct Cli {
    /// Seed for every random stream; overrides any seed in a config file.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Directory for tables, plots and manifests.
    #[arg(long, global = true, env = "GRALAB_OUT_DIR")]
    pub out_dir: Option<PathBuf>,
    /// Table format for primary outputs.
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Degree of second-order coherence behind a beam splitter.
    G2(G2Args),
    /// Gated cascade-source Monte Carlo and the anticorrelation curve.
    Cascade(CascadeArgs),
    /// Field-beable trajectories, fields and interference checks.
    Beables(BeablesArgs),
    /// Photo-ionization amplitudes and the whole-quantum selection rule.
    Photodetect(PhotodetectArgs),
    /// Semiclassical anticorrelation parameter of intensity ensembles.
    Classical(ClassicalArgs),
}

#[derive(Debug, Args)]
pub struct G2Args {
    /// Input state: `number:N`, `coherent:RE[,IM]` or `chaotic:U`.
    pub state: String,
    /// Beam-splitter transmittance |t|².
    #[arg(long, default_value_t = 0.5)]
    pub transmittance: f64,
    /// Also evaluate the truncated Fock-space oracle.
    #[arg(long)]
    pub oracle: bool,
    /// Oracle truncation; raised to the state's default when smaller.
    #[arg(long)]
    pub n_max: Option<usize>,
    /// Largest accepted |closed form − oracle|.
    #[arg(long, default_value_t = 1e-8)]
    pub tolerance: f64,
}

#[derive(Debug, Args)]
pub struct CascadeArgs {
    /// JSON configuration file.
    pub config: Option<PathBuf>,
    /// Run every Nω of the sweep list instead of a single point.
    #[arg(long)]
    pub sweep: bool,
    /// Gates per run (per sweep point).
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub gates: Option<u64>,
    /// Worker streams per run.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub workers: Option<u64>,
}

#[derive(Debug, Args)]
pub struct BeablesArgs {
    /// JSON configuration file.
    pub config: Option<PathBuf>,
    /// 1: behind the beam splitter; 2: behind the interferometer.
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u8).range(1..=2))]
    pub region: u8,
    /// Interferometer phase for region 2.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub phi: f64,
    /// Points per side of the field grid.
    #[arg(long, default_value_t = 21, value_parser = clap::value_parser!(u64).range(2..))]
    pub grid: u64,
    /// Evaluate the modified wave equation along the trajectory.
    #[arg(long)]
    pub check_wave_eq: bool,
    /// Sweep the interferometer phase over one turn and report visibility.
    #[arg(long)]
    pub visibility_sweep: bool,
}

#[derive(Debug, Args)]
pub struct PhotodetectArgs {
    /// JSON configuration file.
    pub config: Option<PathBuf>,
    /// Interferometer phase; overrides the config.
    #[arg(long, allow_negative_numbers = true)]
    pub phi: Option<f64>,
}

#[derive(Debug, Args)]
pub struct ClassicalArgs {
    /// CSV file whose first column holds one intensity per gate.
    #[arg(long)]
    pub intensities: Option<PathBuf>,
    /// Gates per generated ensemble.
    #[arg(long, default_value_t = 10_000, value_parser = clap::value_parser!(u64).range(1..))]
    pub gates: u64,
}
