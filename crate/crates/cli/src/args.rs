use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::range::SweepRange;

#[derive(Debug, Parser)]
#[command(
    name = "wavescatter",
    version,
    about = "Reflection and transmission of 1-D wave packets from piecewise-constant potentials"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Plane-wave R, T and amplitudes over a k grid
    #[command(args_override_self = true, allow_negative_numbers = true)]
    Planewave(PlanewaveArgs),
    /// Sampled psi(x, 0) and P(k) of a Gaussian packet
    #[command(args_override_self = true, allow_negative_numbers = true)]
    Packet(PacketArgs),
    /// Packet R and T from the spectral integrals, the series or the bounce estimate
    #[command(args_override_self = true, allow_negative_numbers = true)]
    Exact(ExactArgs),
    /// Plane-wave, exact and kinematic reflection for a wide barrier
    #[command(args_override_self = true, allow_negative_numbers = true)]
    BarrierStudy(BarrierStudyArgs),
    /// Direct time-dependent simulation of the collision
    #[command(args_override_self = true, allow_negative_numbers = true)]
    Tdse(TdseArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Planewave(_) => "planewave",
            Command::Packet(_) => "packet",
            Command::Exact(_) => "exact",
            Command::BarrierStudy(_) => "barrier-study",
            Command::Tdse(_) => "tdse",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    /// One JSON object per line
    Record,
}

#[derive(Debug, Args)]
pub struct CommonArgs {
    /// Output file (stdout if omitted)
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv, global = true)]
    pub format: Format,
    /// TOML file with one section per subcommand; flags override it
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
}

/// Exactly one of `--step`, `--barrier`, `--V0` or `--potential`.
#[derive(Debug, Clone, Args)]
pub struct PotentialArgs {
    /// Step height as 2mV0/hbar^2
    #[arg(long, value_name = "U")]
    pub step: Option<f64>,
    /// Barrier height as 2mV0/hbar^2 (needs --a)
    #[arg(long, value_name = "U")]
    pub barrier: Option<f64>,
    /// Height as an energy V0; a barrier with --a, a step without
    #[arg(long = "V0", value_name = "V0")]
    pub v0: Option<f64>,
    /// Barrier width
    #[arg(long)]
    pub a: Option<f64>,
    /// Piecewise potential `leading;x1:v1;x2:v2;...` with energies
    #[arg(long, value_name = "SPEC")]
    pub potential: Option<String>,
}

#[derive(Debug, Clone, Args)]
pub struct PacketSpecArgs {
    /// Central wave number
    #[arg(long)]
    pub k0: Option<f64>,
    /// Position-space width parameter
    #[arg(long)]
    pub sigma: Option<f64>,
    /// Initial distance of the packet center left of x = 0 (default 10 sigma)
    #[arg(long)]
    pub offset: Option<f64>,
}

#[derive(Debug, Args)]
pub struct PlanewaveArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    #[command(flatten)]
    pub potential: PotentialArgs,
    /// Wave numbers: a value or `lo:hi:count[:lin|log]`
    #[arg(long)]
    pub k: SweepRange,
}

#[derive(Debug, Args)]
pub struct PacketArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    #[command(flatten)]
    pub packet: PacketSpecArgs,
    #[command(flatten)]
    pub potential: PotentialArgs,
    /// Samples per table
    #[arg(long, default_value_t = 1024)]
    pub points: usize,
    /// Where to write P(k); stdout output puts it after psi
    #[arg(long)]
    pub density_out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodChoice {
    Exact,
    Series,
    Kinematic,
    Planewave,
    All,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SweepAxis {
    Sigma,
    K0,
}

#[derive(Debug, Args)]
pub struct ExactArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    #[command(flatten)]
    pub potential: PotentialArgs,
    #[command(flatten)]
    pub packet: PacketSpecArgs,
    #[arg(long, value_enum, default_value_t = MethodChoice::Exact)]
    pub method: MethodChoice,
    /// Sweep one packet parameter, e.g. `--sweep sigma 50:400:4:log`
    #[arg(long, num_args = 2, value_names = ["PARAM", "RANGE"])]
    pub sweep: Option<Vec<String>>,
}

#[derive(Debug, Args)]
pub struct BarrierStudyArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Barrier height as an energy
    #[arg(long = "V0", value_name = "V0")]
    pub v0: f64,
    /// Barrier width
    #[arg(long)]
    pub a: f64,
    #[arg(long)]
    pub k0: f64,
    #[arg(long)]
    pub sigma: f64,
    /// Rows spread over one period of kappa0 a starting at k0
    #[arg(long, default_value_t = 1)]
    pub scan: usize,
}

#[derive(Debug, Args)]
pub struct TdseArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    #[command(flatten)]
    pub potential: PotentialArgs,
    #[command(flatten)]
    pub packet: PacketSpecArgs,
    /// Grid left edge (with --x-max and --n; otherwise sized automatically)
    #[arg(long)]
    pub x_min: Option<f64>,
    #[arg(long)]
    pub x_max: Option<f64>,
    /// Grid points, a power of two
    #[arg(long)]
    pub n: Option<usize>,
    /// Time step (default from the grid spacing)
    #[arg(long)]
    pub dt: Option<f64>,
    #[arg(long, default_value_t = 100_000_000)]
    pub max_steps: usize,
    /// Required gap between outgoing packets and the scatterer, in RMS widths
    #[arg(long, default_value_t = wavescatter::tdse::SEPARATION_WIDTHS)]
    pub separation_widths: f64,
    /// Write this many equally spaced |psi| snapshots
    #[arg(long)]
    pub frames: Option<usize>,
    #[arg(long, default_value = "frames")]
    pub frames_dir: PathBuf,
}
