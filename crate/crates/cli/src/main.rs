//! `wchaos`: command-line front end for the wiener-chaos toolkit.

mod commands;
mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, CommandFactory, Parser, Subcommand, ValueEnum};
use thiserror::Error;

use output::Format;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("resource cap: {0}")]
    Cap(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("i/o error: {0}")]
    Io(String),
    #[error("{0}")]
    Failure(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Cap(_) => 3,
            CliError::Parse(_) => 4,
            CliError::Io(_) | CliError::Failure(_) => 1,
        }
    }
}

impl From<wiener_chaos::Error> for CliError {
    fn from(e: wiener_chaos::Error) -> Self {
        use wiener_chaos::Error as E;
        let msg = e.to_string();
        match e {
            E::CapExceeded { .. } => CliError::Cap(msg),
            E::Parse { .. } => CliError::Parse(msg),
            E::Io(_) => CliError::Io(msg),
            E::Numerical(_) | E::StreamCollision(_) => CliError::Failure(msg),
            _ => CliError::Usage(msg),
        }
    }
}

const AFTER_HELP: &str = "\
Exit codes: 0 ok, 1 runtime failure, 2 usage, 3 resource cap exceeded, 4 input parse error.

--config FILE reads `key = value` lines whose keys are long flag names of the
chosen subcommand (`command = mc tail` selects the subcommand). Flags given on
the command line take precedence. WCHAOS_SEED sets the default --seed.";

#[derive(Debug, Parser)]
#[command(name = "wchaos", version, about = "Diagram-formula cumulants, deviation bounds and Monte Carlo checks for Wiener chaos", after_help = AFTER_HELP)]
pub struct Cli {
    /// key = value configuration file.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Pair partitions Π(q[m]) behind the diagram formula.
    #[command(subcommand)]
    Diagrams(DiagramsCmd),
    /// Matching numbers of all diagram multigraphs against L(q, m).
    Matching(QmArgs),
    /// Cumulant reports for a chaos element I_q(h).
    #[command(subcommand)]
    Cumulant(CumulantCmd),
    /// Deviation scale and tail bounds.
    #[command(subcommand)]
    Bounds(BoundsCmd),
    /// Parameter tables of the worked models.
    #[command(subcommand)]
    App(AppCmd),
    /// Monte Carlo tail and MDP diagnostics.
    #[command(subcommand)]
    Mc(McCmd),
}

#[derive(Debug, Args)]
pub struct OutArgs {
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write to this file instead of stdout.
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct QmArgs {
    /// Chaos order.
    #[arg(long)]
    pub q: usize,
    /// Number of copies.
    #[arg(long)]
    pub m: usize,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Debug, Subcommand)]
pub enum DiagramsCmd {
    /// |Π(q[m])| with its lower and upper counting bounds.
    Count(QmArgs),
    /// Lists every partition, one `(a,b)(c,d)…` line each.
    Enum(EnumArgs),
}

#[derive(Debug, Args)]
pub struct EnumArgs {
    #[arg(long)]
    pub q: usize,
    #[arg(long)]
    pub m: usize,
    /// Largest admissible q·m.
    #[arg(long)]
    pub cap: Option<usize>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct KernelArgs {
    /// Kernel file (`order q dim N` header, then `i_1 … i_q value` lines).
    #[arg(long, value_name = "PATH", conflicts_with_all = ["q", "n_dim"])]
    pub kernel: Option<PathBuf>,
    /// Order of the normalized Hermite-sum kernel used without --kernel.
    #[arg(long)]
    pub q: Option<usize>,
    /// Dimension of the normalized Hermite-sum kernel used without --kernel.
    #[arg(long = "N", value_name = "N")]
    pub n_dim: Option<usize>,
}

#[derive(Debug, Subcommand)]
pub enum CumulantCmd {
    /// Diagram-formula cumulants of orders 1..=m with both bounds.
    Exact(CumulantArgs),
    /// As `exact`, plus k-statistics from Monte Carlo samples.
    Mc(CumulantMcArgs),
}

#[derive(Debug, Args)]
pub struct CumulantArgs {
    #[command(flatten)]
    pub kernel: KernelArgs,
    /// Highest cumulant order.
    #[arg(long, default_value_t = 4)]
    pub m: usize,
    /// Work cap (multiply-adds) of one diagram contraction.
    #[arg(long)]
    pub cap: Option<u128>,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Debug, Args)]
pub struct McArgs {
    #[arg(long, env = "WCHAOS_SEED", default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 100_000)]
    pub samples: usize,
    /// Worker threads; 0 uses all cores. Never changes the results.
    #[arg(long, default_value_t = 0)]
    pub workers: usize,
}

#[derive(Debug, Args)]
pub struct CumulantMcArgs {
    #[command(flatten)]
    pub base: CumulantArgs,
    #[command(flatten)]
    pub mc: McArgs,
    /// Bootstrap resamples for the standard errors.
    #[arg(long, default_value_t = 200)]
    pub bootstrap: usize,
}

#[derive(Debug, Args)]
pub struct DeltaArgs {
    /// Δ given directly.
    #[arg(long, conflicts_with_all = ["k", "l"])]
    pub delta: Option<f64>,
    /// Δ from the maximal contraction norm K.
    #[arg(long = "K", value_name = "K", conflicts_with = "l")]
    pub k: Option<f64>,
    /// Δ from the fourth-cumulant proxy L.
    #[arg(long = "L", value_name = "L")]
    pub l: Option<f64>,
}

#[derive(Debug, Subcommand)]
pub enum BoundsCmd {
    /// Δ, α(q) and γ from K or L.
    Delta {
        #[arg(long)]
        q: usize,
        #[arg(long = "K", value_name = "K", conflicts_with = "l", required_unless_present = "l")]
        k: Option<f64>,
        #[arg(long = "L", value_name = "L")]
        l: Option<f64>,
        #[command(flatten)]
        out: OutArgs,
    },
    /// 2 exp(−¼ min{z²/2^{q/2}, (zΔ)^{2/q}}); Δ defaults to unbounded.
    Tail {
        #[arg(long, num_args = 1.., required = true)]
        z: Vec<f64>,
        #[arg(long, default_value_t = 2)]
        q: usize,
        #[command(flatten)]
        delta: DeltaArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Major's bound c·exp(−½(z/√q!)^{2/q}) against the tail bound.
    Major {
        #[arg(long, num_args = 1.., required = true)]
        z: Vec<f64>,
        #[arg(long, default_value_t = 2)]
        q: usize,
        /// Unspecified constant; defaults to 1 and is then flagged.
        #[arg(long)]
        c: Option<f64>,
        #[command(flatten)]
        delta: DeltaArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// |log(p / Gaussian tail)| next to its constant-free shape.
    Ratio {
        /// Observed tail probability.
        #[arg(long)]
        p: f64,
        #[arg(long)]
        z: f64,
        #[arg(long, default_value_t = 2)]
        q: usize,
        #[command(flatten)]
        delta: DeltaArgs,
        #[command(flatten)]
        out: OutArgs,
    },
}

#[derive(Debug, Subcommand)]
pub enum AppCmd {
    /// Brownian-sheet explosive integral.
    Sheet {
        #[arg(long, default_value_t = 1)]
        d: u32,
        /// Cutoffs n (one row each).
        #[arg(long, num_args = 1.., required = true)]
        n: Vec<u64>,
        /// Add 2‖h‖² by kink-aware quadrature.
        #[arg(long)]
        quadrature: bool,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Quadratic variation of fractional Brownian motion.
    Fbm {
        /// Hurst index in (0, 3/4).
        #[arg(long = "H", value_name = "H")]
        hurst: f64,
        #[arg(long, num_args = 1.., default_values_t = [512u64])]
        n: Vec<u64>,
        /// Unspecified constant in A_n; defaults to 1.
        #[arg(long = "c-h")]
        c_h: Option<f64>,
        /// Emit one simulated increment path (k, increment) instead.
        #[arg(long)]
        path: bool,
        #[arg(long, env = "WCHAOS_SEED", default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Spherical bispectrum frequency triple.
    Bispectrum {
        /// ℓ1 ℓ2 ℓ3 in increasing order.
        #[arg(long, num_args = 3, required = true, value_names = ["L1", "L2", "L3"])]
        l: Vec<u64>,
        /// Add the deviation parameters at this n.
        #[arg(long)]
        n: Option<f64>,
        #[command(flatten)]
        out: OutArgs,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Model {
    /// n^{-1/2} Σ H_q(Z_k).
    HermiteSum,
    /// Exact Gaussian with variance q!.
    Gaussian,
    /// I_q(h) for the normalized --kernel.
    Chaos,
    /// Normalized fBm quadratic variation (q = 2).
    Fbm,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Upper,
    Absolute,
}

#[derive(Debug, Subcommand)]
pub enum McCmd {
    /// Tail probabilities with exact binomial intervals and the tail bound.
    Tail {
        #[arg(long, value_enum, default_value_t = Model::HermiteSum)]
        model: Model,
        #[arg(long, default_value_t = 2)]
        q: usize,
        /// Hermite-sum length or fBm path length.
        #[arg(long, default_value_t = 10_000)]
        n: u64,
        #[arg(long = "H", value_name = "H")]
        hurst: Option<f64>,
        #[arg(long, value_name = "PATH")]
        kernel: Option<PathBuf>,
        #[arg(long, num_args = 1.., default_values_t = [1.0, 2.0, 3.0, 4.0])]
        z: Vec<f64>,
        #[arg(long, value_enum, default_value_t = Mode::Upper)]
        mode: Mode,
        #[command(flatten)]
        mc: McArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// a_n^{-2} log P(F_n ≥ a_n z) across a scale grid.
    Mdp {
        #[arg(long, value_enum, default_value_t = Model::HermiteSum)]
        model: Model,
        #[arg(long, default_value_t = 2)]
        q: usize,
        /// Hermite-sum lengths (hermite-sum model).
        #[arg(long, num_args = 1.., default_values_t = [100u64, 1000, 10_000])]
        n: Vec<u64>,
        /// a_n = n^e; defaults to half the MDP window exponent.
        #[arg(long = "a-exponent")]
        a_exponent: Option<f64>,
        /// Scales a_n (gaussian model).
        #[arg(long, num_args = 1.., default_values_t = [2.0, 4.0, 8.0])]
        a: Vec<f64>,
        #[arg(long, num_args = 1.., default_values_t = [0.5, 1.0])]
        z: Vec<f64>,
        #[command(flatten)]
        mc: McArgs,
        #[command(flatten)]
        out: OutArgs,
    },
}

fn parse_args() -> Result<Cli, CliError> {
    let mut args: Vec<String> = std::env::args().collect();
    if let Some(path) = config::take_config_flag(&mut args)? {
        let entries = config::load(path.as_ref())?;
        args = config::merge(&Cli::command(), args, &entries)?;
    }
    Ok(Cli::try_parse_from(args).unwrap_or_else(|e| e.exit()))
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let result = parse_args().and_then(commands::run);
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("wchaos: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
