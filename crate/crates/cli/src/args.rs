use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "hgbos", version, about = "Hidden-grid BOS phase extraction")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Render a synthetic frame sequence with ground truth.
    Synth(SynthArgs),
    /// Extract phase differences against frame 0 for a frame list.
    Extract(ExtractArgs),
    /// Wrapped difference of two phase maps.
    Diff(DiffArgs),
    /// Export one row of a phase map as CSV.
    Profile(ProfileArgs),
    /// Export contour segments of a phase map as CSV.
    Contour(ContourArgs),
    /// Time the ridge search on a synthetic frame.
    Bench(BenchArgs),
}

#[derive(Debug, Args)]
pub struct SizeArgs {
    #[arg(long, default_value_t = 256, conflicts_with = "size")]
    pub width: usize,
    #[arg(long, default_value_t = 256, conflicts_with = "size")]
    pub height: usize,
    /// `WIDTHxHEIGHT`, e.g. 2048x1536.
    #[arg(long, value_parser = parse_size)]
    pub size: Option<(usize, usize)>,
}

impl SizeArgs {
    pub fn dims(&self) -> (usize, usize) {
        self.size.unwrap_or((self.width, self.height))
    }
}

#[derive(Debug, Args)]
pub struct WorkerArgs {
    /// Worker threads; 0 uses every core.
    #[arg(long, env = "HGBOS_WORKERS", default_value_t = 0)]
    pub workers: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Preset {
    Zero,
    Ramp,
    Plume,
    BoundaryLayer,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum WaveformArg {
    Cosine,
    Square,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DepthArg {
    #[value(name = "8")]
    Eight,
    #[value(name = "16")]
    Sixteen,
}

#[derive(Debug, Args)]
pub struct SynthArgs {
    #[arg(long, short)]
    pub out: PathBuf,
    #[arg(long, value_enum, default_value = "plume")]
    pub preset: Preset,
    #[arg(long, default_value_t = 10)]
    pub frames: usize,
    /// Modulation amplitude of the last frame, radians (ramp: slope multiplier).
    #[arg(long, default_value_t = 2.0)]
    pub amp_max: f64,
    #[command(flatten)]
    pub size: SizeArgs,

    /// Plume Gaussian width, pixels.
    #[arg(long, default_value_t = 30.0)]
    pub plume_width: f64,
    /// Plume center (default: image center) or wall position (default: a quarter of the width).
    #[arg(long)]
    pub center_x: Option<f64>,
    #[arg(long)]
    pub center_y: Option<f64>,
    /// Boundary-layer decay length, pixels.
    #[arg(long, default_value_t = 40.0)]
    pub decay: f64,
    #[arg(long, default_value_t = 0.01)]
    pub slope_x: f64,
    #[arg(long, default_value_t = 0.0)]
    pub slope_y: f64,

    #[arg(long, default_value_t = 0.5)]
    pub background: f64,
    #[arg(long, default_value_t = 0.25)]
    pub amp_x: f64,
    #[arg(long, default_value_t = 0.025)]
    pub amp_y: f64,
    #[arg(long, default_value_t = 0.7)]
    pub carrier_x: f64,
    #[arg(long, default_value_t = 0.7)]
    pub carrier_y: f64,
    #[arg(long, value_enum, default_value = "cosine")]
    pub waveform: WaveformArg,

    /// Additive Gaussian noise standard deviation, intensity units.
    #[arg(long, default_value_t = 0.0)]
    pub noise: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value = "16")]
    pub bit_depth: DepthArg,
    /// Reference temperature recorded for frame 0, kelvin.
    #[arg(long)]
    pub temperature_start: Option<f64>,
    #[arg(long, default_value_t = 3.0, requires = "temperature_start")]
    pub temperature_step: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Wfr,
    Ft,
    Cwt,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TaperArg {
    Hard,
    RaisedCosine,
}

#[derive(Debug, Args)]
pub struct WindowArgs {
    #[arg(long, default_value_t = 10.0)]
    pub sigma_x: f64,
    #[arg(long, default_value_t = 10.0)]
    pub sigma_y: f64,
    /// Truncation radius; defaults to ceil(3 * max sigma).
    #[arg(long)]
    pub radius: Option<usize>,
}

#[derive(Debug, Args)]
pub struct GridArgs {
    #[arg(long, default_value_t = 0.5)]
    pub wxl: f64,
    #[arg(long, default_value_t = 0.01)]
    pub wxi: f64,
    #[arg(long, default_value_t = 1.0)]
    pub wxh: f64,
    #[arg(long, default_value_t = 0.0)]
    pub wyl: f64,
    #[arg(long, default_value_t = 0.00025)]
    pub wyi: f64,
    #[arg(long, default_value_t = 0.001)]
    pub wyh: f64,
}

#[derive(Debug, Args)]
pub struct ExtractArgs {
    /// Text file with one frame path per line (optional second column: temperature in K).
    #[arg(long)]
    pub frames: PathBuf,
    #[arg(long, short)]
    pub out: PathBuf,
    /// PGM mask; pixels at or above the threshold are excluded.
    #[arg(long)]
    pub mask: Option<PathBuf>,
    #[arg(long, default_value_t = 0.5)]
    pub mask_threshold: f64,
    /// Dilation of the mask, pixels.
    #[arg(long, default_value_t = 10)]
    pub margin: usize,
    #[arg(long, value_enum, default_value = "wfr")]
    pub method: MethodArg,
    #[command(flatten)]
    pub window: WindowArgs,
    #[command(flatten)]
    pub grid: GridArgs,
    #[arg(long, default_value_t = 1e-3)]
    pub relative_threshold: f64,
    #[arg(long, default_value_t = 1e-2)]
    pub contrast_threshold: f64,

    /// Fixed FT passband center; located on frame 0 when omitted.
    #[arg(long, requires = "roi_eta")]
    pub roi_xi: Option<f64>,
    #[arg(long, requires = "roi_xi")]
    pub roi_eta: Option<f64>,
    /// Passband half-widths; default xi0/2 and pi/8.
    #[arg(long, requires = "roi_xi")]
    pub roi_half_xi: Option<f64>,
    #[arg(long, requires = "roi_xi")]
    pub roi_half_eta: Option<f64>,
    #[arg(long, value_enum, requires = "roi_xi")]
    pub taper: Option<TaperArg>,
    #[arg(long, default_value_t = 0.25)]
    pub exclusion: f64,
    #[arg(long, default_value_t = 30)]
    pub border: usize,

    #[arg(long, default_value_t = 6.0)]
    pub omega0: f64,
    #[arg(long)]
    pub normalize_rows: bool,

    #[command(flatten)]
    pub workers: WorkerArgs,
}

#[derive(Debug, Args)]
pub struct DiffArgs {
    pub current: PathBuf,
    pub reference: PathBuf,
    #[arg(long, short)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct ProfileArgs {
    pub input: PathBuf,
    #[arg(long)]
    pub row: usize,
    #[arg(long, short)]
    pub out: PathBuf,
    /// Unwrap the row before export.
    #[arg(long)]
    pub unwrap: bool,
}

#[derive(Debug, Args)]
pub struct ContourArgs {
    pub input: PathBuf,
    #[arg(long, value_delimiter = ',', required = true)]
    pub levels: Vec<f64>,
    #[arg(long, short)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[command(flatten)]
    pub size: SizeArgs,
    #[command(flatten)]
    pub window: WindowArgs,
    #[command(flatten)]
    pub grid: GridArgs,
    /// Worker counts to compare; 0 means every core.
    #[arg(long, value_delimiter = ',', default_value = "1,0")]
    pub workers: Vec<usize>,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// JSON report path; printed to stdout when omitted.
    #[arg(long, short)]
    pub out: Option<PathBuf>,
}

fn parse_size(s: &str) -> Result<(usize, usize), String> {
    let (w, h) = s
        .split_once(['x', 'X'])
        .ok_or_else(|| format!("expected WIDTHxHEIGHT, got {s:?}"))?;
    let parse = |v: &str| {
        v.trim()
            .parse::<usize>()
            .map_err(|e| format!("bad size component {v:?}: {e}"))
    };
    Ok((parse(w)?, parse(h)?))
}
