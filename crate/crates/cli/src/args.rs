//! Flags and config files. Every option is optional here so that a config
//! file can fill in what the command line leaves out; defaults are applied
//! by the commands.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;

use crate::CliError;

#[derive(Debug, Parser)]
#[command(name = "signwalk", version, about = "Greedy signed sums of moment sequences")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the greedy recursion and write a trace plus checkpoint CSV.
    Approximate(ApproximateArgs),
    /// Hits, densities, liminf and sign-pattern report for a saved trace.
    Analyze(AnalyzeArgs),
    /// Window conditions, sums, band starts and the N/k inequality.
    Check(CheckArgs),
    /// Planar vector walk as a point-cloud CSV.
    Walk(WalkArgs),
    /// Named presets reproducing the reference numbers.
    Repro(ReproArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Gen {
    Rotation,
    Nearestint,
    Explicit,
}

/// Fill every unset field of `self` from `other`; flags set on the command
/// line always win.
macro_rules! merge_impl {
    ($ty:ty; opt: $($o:ident),*; flag: $($b:ident),*) => {
        impl $ty {
            fn merge(&mut self, other: Self) {
                $( if self.$o.is_none() { self.$o = other.$o; } )*
                $( self.$b |= other.$b; )*
            }

            /// Apply `--config` if present.
            pub fn resolve(mut self) -> Result<Self, CliError> {
                if let Some(path) = self.config.take() {
                    let file: Self = read_config(&path)?;
                    self.merge(file);
                }
                Ok(self)
            }
        }
    };
}

fn read_config<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| CliError::Usage(format!("bad config {}: {e}", path.display())))
}

#[derive(Debug, Default, Args, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct ApproximateArgs {
    /// Target: p/q, a decimal, sqrt(p/q) or log(p/q).
    #[arg(long)]
    pub target: Option<String>,
    /// Sequence: harmonic, invsq, gammaratio, wigner, cantor, primes or diff(<seq>,<j>).
    #[arg(long)]
    pub seq: Option<String>,
    #[arg(long)]
    pub steps: Option<u64>,
    /// Checkpoint stride [default: 100].
    #[arg(long)]
    pub stride: Option<u64>,
    /// Initial working precision in bits [default: 256].
    #[arg(long)]
    pub prec_init: Option<u32>,
    /// Precision cap in bits [default: 1048576].
    #[arg(long, env = "SIGNWALK_PREC_CAP")]
    pub prec_cap: Option<u32>,
    /// Smallest index counted as a hit [default: 10].
    #[arg(long)]
    pub nmin: Option<u64>,
    /// Alternation window [default: 1000].
    #[arg(long)]
    pub window: Option<u64>,
    /// Track partial sums as exact rationals (small runs only).
    #[arg(long)]
    #[serde(default)]
    pub exact: bool,
    /// Trace path; the checkpoint CSV goes next to it [default: trace.json].
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Summary format on stdout; text when omitted.
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
}
merge_impl!(ApproximateArgs; opt: target, seq, steps, stride, prec_init, prec_cap, nmin, window, out, format; flag: exact);

#[derive(Debug, Default, Args, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct AnalyzeArgs {
    /// Trace file written by `approximate`.
    #[arg(long)]
    pub file: Option<PathBuf>,
    /// Hit levels, comma separated [default: 1,2,3,4,5,6].
    #[arg(long, value_delimiter = ',')]
    pub k: Option<Vec<u32>>,
    #[arg(long)]
    pub nmin: Option<u64>,
    /// Level-density exponent; the density section is omitted without it.
    #[arg(long)]
    pub beta: Option<f64>,
    /// Level-density constant [default: 1].
    #[arg(long)]
    pub c: Option<f64>,
    /// Minimum Thue–Morse match length to report [default: 12].
    #[arg(long)]
    pub tm_min: Option<u64>,
    #[arg(long)]
    pub window: Option<u64>,
    /// Skip the liminf statistic.
    #[arg(long)]
    #[serde(default)]
    pub no_liminf: bool,
    /// Report path; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// json: full report; csv: hit indices.
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
}
merge_impl!(AnalyzeArgs; opt: file, k, nmin, beta, c, tm_min, window, out, format; flag: no_liminf);

#[derive(Debug, Default, Args, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct CheckArgs {
    #[arg(long)]
    pub seq: Option<String>,
    /// Window length for the window condition.
    #[arg(long)]
    pub ell: Option<u64>,
    /// Largest start index for the window condition [default: 1000].
    #[arg(long)]
    pub jmax: Option<u64>,
    /// Enclose the sum of all terms.
    #[arg(long)]
    #[serde(default)]
    pub sum: bool,
    /// First index of the factor-2 band for differences up to order k.
    #[arg(long)]
    #[serde(default)]
    pub band: bool,
    /// Evaluate 1/N^k against (1/5)·Σ_{m=1}^{10} (N+m)^-(k+1).
    #[arg(long)]
    #[serde(default)]
    pub sec33: bool,
    #[arg(long)]
    pub n: Option<u64>,
    #[arg(long)]
    pub k: Option<u32>,
    /// Bits for the sum enclosure [default: 64].
    #[arg(long)]
    pub prec_init: Option<u32>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
}
merge_impl!(CheckArgs; opt: seq, ell, jmax, n, k, prec_init, out, format; flag: sum, band, sec33);

#[derive(Debug, Default, Args, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct WalkArgs {
    #[arg(long, value_enum)]
    pub gen: Option<Gen>,
    /// Rotation angle in turns.
    #[arg(long)]
    pub alpha: Option<String>,
    /// Nearest-integer phase multiplier.
    #[arg(long)]
    pub beta: Option<String>,
    /// CSV of `x,y` vectors for the explicit generator.
    #[arg(long)]
    pub file: Option<PathBuf>,
    /// Number of steps; all vectors of `--file` when omitted.
    #[arg(long)]
    pub steps: Option<u64>,
    /// Point CSV path; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
}
merge_impl!(WalkArgs; opt: gen, alpha, beta, file, steps, out, format; flag: );

#[derive(Debug, Args)]
pub struct ReproArgs {
    /// Preset name; see `--list`.
    pub preset: Option<String>,
    #[arg(long)]
    pub list: bool,
    /// Directory for the preset's output files [default: repro-out].
    #[arg(long)]
    pub out: Option<PathBuf>,
}
