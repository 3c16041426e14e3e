//! `twrc` command-line front end.
//!
//! stdout carries data, stderr carries one-line diagnostics. Exit status is
//! 0 on success, 2 on argument or validation errors, 1 on I/O errors.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::de::DeserializeOwned;
use serde::Serialize;
use thiserror::Error;

use twrc::experiments::{to_csv, to_json, write_output, Tabular};
use twrc::format::sig9;
use twrc::{
    optimize_sum_rate, pareto_frontier, sum_rate_sweep, winner_map, ChannelParams, MapSpec, Range,
    Scheme, SchemeParams, SearchConfig, SweepSpec, SEARCHED_TIE_TOL,
};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Io(_) => 1,
        }
    }
}

impl From<twrc::Error> for CliError {
    fn from(e: twrc::Error) -> Self {
        match e {
            twrc::Error::Io { .. } => CliError::Io(e.to_string()),
            other => CliError::Usage(other.to_string()),
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "twrc",
    version,
    about = "Rate regions and sum-rate comparisons for the AWGN two-way relay channel"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Maximum sum rate of one scheme, as JSON
    Rate(RateArgs),
    /// Pareto frontier of one scheme's achievable region, as CSV
    Region(RegionArgs),
    /// Sum rate of every scheme as P1 varies
    Sweep(SweepArgs),
    /// Best scheme over a grid of (P1/N0, P2/N0)
    Map(MapArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Args)]
pub struct ChannelArgs {
    /// User 1 uplink power
    #[arg(long)]
    pub p1: f64,
    /// User 2 uplink power
    #[arg(long)]
    pub p2: f64,
    /// Uplink noise power at the relay
    #[arg(long)]
    pub n0: f64,
    #[command(flatten)]
    pub downlink: DownlinkArgs,
    /// Read powers and noise powers in dB
    #[arg(long)]
    pub db: bool,
}

/// Leaving all three out makes the downlink inactive.
#[derive(Debug, Args)]
pub struct DownlinkArgs {
    /// Relay power (enables the downlink; requires --n1 and --n2)
    #[arg(long, requires_all = ["n1", "n2"])]
    pub p0: Option<f64>,
    /// Downlink noise power at user 1
    #[arg(long, requires = "p0")]
    pub n1: Option<f64>,
    /// Downlink noise power at user 2
    #[arg(long, requires = "p0")]
    pub n2: Option<f64>,
}

#[derive(Debug, Args)]
pub struct SearchArgs {
    /// Coarse grid points per scheme-parameter axis [default: 201]
    #[arg(long)]
    pub grid: Option<usize>,
    /// Refinement passes after the coarse grid [default: 3]
    #[arg(long)]
    pub refine_iters: Option<usize>,
    /// Step shrink factor per refinement pass [default: 0.1]
    #[arg(long)]
    pub shrink: Option<f64>,
    /// Stop refining once a pass gains less than this [default: 1e-6]
    #[arg(long)]
    pub tol: Option<f64>,
}

impl SearchArgs {
    fn apply(&self, mut cfg: SearchConfig) -> SearchConfig {
        if let Some(g) = self.grid {
            cfg.coarse_grid = g;
        }
        if let Some(r) = self.refine_iters {
            cfg.refine_iters = r;
        }
        if let Some(s) = self.shrink {
            cfg.refine_shrink = s;
        }
        if let Some(t) = self.tol {
            cfg.tol = t;
        }
        cfg
    }
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    /// Output format
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
    /// Write to this file instead of stdout
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct RateArgs {
    /// outer, cdf, fdf_nested, fdf_rs_sim or fdf_rs_tdm
    #[arg(long)]
    pub scheme: Scheme,
    #[command(flatten)]
    pub channel: ChannelArgs,
    #[command(flatten)]
    pub search: SearchArgs,
}

#[derive(Debug, Args)]
pub struct RegionArgs {
    /// outer, cdf, fdf_nested, fdf_rs_sim or fdf_rs_tdm
    #[arg(long)]
    pub scheme: Scheme,
    #[command(flatten)]
    pub channel: ChannelArgs,
    #[command(flatten)]
    pub search: SearchArgs,
    /// Number of frontier points
    #[arg(long, default_value_t = 21)]
    pub points: usize,
    /// Write to this file instead of stdout
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    /// JSON sweep configuration
    #[arg(long, conflicts_with_all = ["n0", "p2", "p1_start", "p1_stop", "p1_count", "p0"])]
    pub config: Option<PathBuf>,
    /// Uplink noise power
    #[arg(long)]
    pub n0: Option<f64>,
    /// Fixed user 2 power
    #[arg(long)]
    pub p2: Option<f64>,
    /// First P1 value
    #[arg(long)]
    pub p1_start: Option<f64>,
    /// Last P1 value
    #[arg(long)]
    pub p1_stop: Option<f64>,
    /// Number of P1 values
    #[arg(long)]
    pub p1_count: Option<usize>,
    #[command(flatten)]
    pub downlink: DownlinkArgs,
    /// Read powers and noise powers in dB
    #[arg(long)]
    pub db: bool,
    #[command(flatten)]
    pub search: SearchArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct MapArgs {
    /// JSON map configuration
    #[arg(long, conflicts_with_all = ["snr_start", "snr_stop", "snr_count", "n0", "tie_tol"])]
    pub config: Option<PathBuf>,
    /// Smallest SNR on both axes [default: 0]
    #[arg(long)]
    pub snr_start: Option<f64>,
    /// Largest SNR on both axes [default: 5]
    #[arg(long)]
    pub snr_stop: Option<f64>,
    /// Grid points per axis [default: 101]
    #[arg(long)]
    pub snr_count: Option<usize>,
    /// Uplink noise power [default: 2]
    #[arg(long)]
    pub n0: Option<f64>,
    /// Sum rates within this of the best count as ties [default: 1e-4]
    #[arg(long)]
    pub tie_tol: Option<f64>,
    #[command(flatten)]
    pub search: SearchArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

fn from_db(x: f64) -> f64 {
    10f64.powf(x / 10.0)
}

impl ChannelArgs {
    fn params(&self) -> ChannelParams {
        let conv = |x: f64| if self.db { from_db(x) } else { x };
        let mut ch = ChannelParams::uplink(conv(self.p1), conv(self.p2), conv(self.n0));
        if let (Some(p0), Some(n1), Some(n2)) =
            (self.downlink.p0, self.downlink.n1, self.downlink.n2)
        {
            ch = ch.with_downlink(conv(p0), conv(n1), conv(n2));
        }
        ch
    }
}

/// A parsed configuration file.
#[derive(Debug, Clone, PartialEq)]
pub enum Config {
    Sweep(SweepSpec),
    Map(MapSpec),
}

fn parse_json<T: DeserializeOwned>(path: &Path, text: &str) -> Result<T, CliError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let at = e.path().to_string();
        let inner = e.into_inner();
        if at.is_empty() || at == "." {
            CliError::Usage(format!("{}: {inner}", path.display()))
        } else {
            CliError::Usage(format!("{}: {at}: {inner}", path.display()))
        }
    })
}

fn read_config(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

pub fn load_sweep_config(path: &Path) -> Result<SweepSpec, CliError> {
    let spec: SweepSpec = parse_json(path, &read_config(path)?)?;
    spec.validate()?;
    Ok(spec)
}

pub fn load_map_config(path: &Path) -> Result<MapSpec, CliError> {
    let spec: MapSpec = parse_json(path, &read_config(path)?)?;
    spec.validate()?;
    Ok(spec)
}

/// Loads a sweep configuration if the file has a `p1_range` key, a map
/// configuration otherwise. Unknown keys are rejected.
pub fn load_config(path: &Path) -> Result<Config, CliError> {
    let text = read_config(path)?;
    let value: serde_json::Value = parse_json(path, &text)?;
    if value.get("p1_range").is_some() {
        let spec: SweepSpec = parse_json(path, &text)?;
        spec.validate()?;
        Ok(Config::Sweep(spec))
    } else {
        let spec: MapSpec = parse_json(path, &text)?;
        spec.validate()?;
        Ok(Config::Map(spec))
    }
}

#[derive(Serialize)]
struct RateOutput {
    scheme: &'static str,
    sum_rate: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    delta1: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    delta2: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    eta1: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    eta2: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    alpha: Option<f64>,
    r1: f64,
    r2: f64,
    swapped: bool,
}

fn rate(args: &RateArgs) -> Result<Vec<u8>, CliError> {
    let cfg = args.search.apply(SearchConfig::default());
    let r = optimize_sum_rate(args.scheme, &args.channel.params(), &cfg)?;
    let mut out = RateOutput {
        scheme: args.scheme.key(),
        sum_rate: r.sum_rate,
        delta1: None,
        delta2: None,
        eta1: None,
        eta2: None,
        alpha: None,
        r1: r.argmax.r1,
        r2: r.argmax.r2,
        swapped: r.swapped,
    };
    match r.best_params {
        SchemeParams::Nested(p) => {
            out.delta1 = Some(p.delta1);
            out.delta2 = Some(p.delta2);
        }
        SchemeParams::RsSim(p) => {
            out.eta1 = Some(p.eta1);
            out.eta2 = Some(p.eta2);
        }
        SchemeParams::Tdm(p) => out.alpha = Some(p.alpha),
        SchemeParams::None {} => {}
    }
    let mut s = serde_json::to_string_pretty(&out).map_err(|e| CliError::Usage(e.to_string()))?;
    s.push('\n');
    Ok(s.into_bytes())
}

fn region(args: &RegionArgs) -> Result<Vec<u8>, CliError> {
    let cfg = args.search.apply(SearchConfig::default());
    let pts = pareto_frontier(args.scheme, &args.channel.params(), &cfg, args.points)?;
    let mut s = String::from("r1,r2\n");
    for p in pts {
        s.push_str(&format!("{},{}\n", sig9(p.r1), sig9(p.r2)));
    }
    Ok(s.into_bytes())
}

fn missing(flag: &str) -> CliError {
    CliError::Usage(format!("{flag} is required without --config"))
}

fn sweep_spec(args: &SweepArgs) -> Result<SweepSpec, CliError> {
    let mut spec = match &args.config {
        Some(path) => load_sweep_config(path)?,
        None => {
            let conv = |x: f64| if args.db { from_db(x) } else { x };
            let downlink = match (args.downlink.p0, args.downlink.n1, args.downlink.n2) {
                (Some(p0), Some(n1), Some(n2)) => Some(twrc::Downlink {
                    p0: conv(p0),
                    n1: conv(n1),
                    n2: conv(n2),
                }),
                _ => None,
            };
            SweepSpec {
                n0: conv(args.n0.ok_or_else(|| missing("--n0"))?),
                p2: conv(args.p2.ok_or_else(|| missing("--p2"))?),
                p1_range: Range::new(
                    conv(args.p1_start.ok_or_else(|| missing("--p1-start"))?),
                    conv(args.p1_stop.ok_or_else(|| missing("--p1-stop"))?),
                    args.p1_count.ok_or_else(|| missing("--p1-count"))?,
                ),
                downlink,
                search: SearchConfig::default(),
            }
        }
    };
    spec.search = args.search.apply(spec.search);
    spec.validate()?;
    Ok(spec)
}

fn map_spec(args: &MapArgs) -> Result<MapSpec, CliError> {
    let mut spec = match &args.config {
        Some(path) => load_map_config(path)?,
        None => {
            let mut spec = MapSpec::default();
            let mut axis = spec.snr1_range;
            if let Some(v) = args.snr_start {
                axis.start = v;
            }
            if let Some(v) = args.snr_stop {
                axis.stop = v;
            }
            if let Some(v) = args.snr_count {
                axis.count = v;
            }
            spec.snr1_range = axis;
            spec.snr2_range = axis;
            spec.n0 = args.n0.unwrap_or(spec.n0);
            spec.tie_tol = args.tie_tol.unwrap_or(SEARCHED_TIE_TOL);
            spec
        }
    };
    spec.search = args.search.apply(spec.search);
    spec.validate()?;
    Ok(spec)
}

fn render<T: Tabular>(data: &T, format: Format) -> Result<Vec<u8>, CliError> {
    Ok(match format {
        Format::Csv => to_csv(data).into_bytes(),
        Format::Json => to_json(data)?.into_bytes(),
    })
}

fn execute(cli: &Cli) -> Result<(Vec<u8>, Option<PathBuf>), CliError> {
    Ok(match &cli.command {
        Command::Rate(a) => (rate(a)?, None),
        Command::Region(a) => (region(a)?, a.out.clone()),
        Command::Sweep(a) => {
            let table = sum_rate_sweep(&sweep_spec(a)?)?;
            (render(&table, a.output.format)?, a.output.out.clone())
        }
        Command::Map(a) => {
            let map = winner_map(&map_spec(a)?)?;
            (render(&map, a.output.format)?, a.output.out.clone())
        }
    })
}

/// Runs one invocation and returns the process exit status.
pub fn run<I, T>(argv: I, stdout: &mut impl Write, stderr: &mut impl Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            if !e.use_stderr() {
                // --help and --version.
                let _ = write!(stdout, "{}", e.render());
                return 0;
            }
            let text = e.render().to_string();
            let line = text.lines().next().unwrap_or("invalid arguments");
            let _ = writeln!(stderr, "{line}");
            return 2;
        }
    };
    let result = execute(&cli).and_then(|(bytes, dest)| match dest {
        Some(path) => write_output(Some(&path), &bytes).map_err(CliError::from),
        None => stdout
            .write_all(&bytes)
            .and_then(|_| stdout.flush())
            .map_err(|e| CliError::Io(format!("<stdout>: {e}"))),
    });
    match result {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}
