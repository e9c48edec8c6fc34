//! Flag and configuration plumbing: clap definitions, `start:stop:count`
//! range parsing, and the three-layer precedence flags > config file >
//! defaults.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use dnwave::stability::Tolerances;
use serde::Deserialize;

#[derive(Parser, Debug)]
#[command(
    name = "dnwave",
    version,
    about = "Construct periodic dnoidal waves of a coupled Schrödinger–KdV system and certify their spectral stability",
    after_help = "Environment:\n  DNWAVE_LOG    log filter (error, warn, info, debug, trace); diagnostics go to stderr"
)]
pub struct Cli {
    /// JSON config file supplying defaults; explicit flags override it.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,

    /// Verbose diagnostics (log level debug unless DNWAVE_LOG is set).
    #[arg(long, global = true)]
    pub verbose: bool,

    #[command(subcommand)]
    pub command: Cmd,
}

#[derive(Subcommand, Debug)]
pub enum Cmd {
    /// Construct one dnoidal wave; report its parameters and residuals.
    Wave(CommonArgs),
    /// Run every spectral check at one parameter tuple.
    Check(CheckArgs),
    /// Emit the κ ↦ ⟨Q̂⁻¹dn², dn²⟩ closed-form/oracle comparison table.
    Figure1(CommonArgs),
    /// Evaluate the stability verdict across a parameter grid.
    Sweep(CommonArgs),
    /// Run the built-in numerical cross-check battery.
    Selftest(CommonArgs),
}

#[derive(Args, Debug, Default)]
pub struct CommonArgs {
    /// Wave speed c > 1 (scalar, or start:stop:count in sweeps).
    #[arg(long)]
    pub c: Option<String>,

    /// Frequency ω > c²/4 (scalar or range).
    #[arg(long)]
    pub omega: Option<String>,

    /// Dispersion coefficient 0 < α < (c−1)/(4σ) (scalar or range).
    #[arg(long)]
    pub alpha: Option<String>,

    /// Elliptic modulus 0 < κ < 1 (scalar or range).
    #[arg(long)]
    pub kappa: Option<String>,

    /// Collocation grid size (even, ≥ 32).
    #[arg(long = "N", value_name = "N")]
    pub n: Option<usize>,

    /// Budget for max |Re λ(J𝓗)|, relative to ‖𝓗‖.
    #[arg(long)]
    pub tol_stab: Option<f64>,

    /// Allowance below zero for min eig(𝓗), relative to ‖𝓗‖.
    #[arg(long)]
    pub tol_pos: Option<f64>,

    /// Output format (wave/check default to json, figure1/sweep to csv).
    #[arg(long, value_enum)]
    pub format: Option<OutputFormat>,

    /// Write data to this file instead of stdout.
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,

    /// Overwrite --out if it already exists.
    #[arg(long)]
    pub force: bool,

    /// Thread count for sweep evaluation (default: all cores).
    #[arg(long, value_name = "K")]
    pub parallel: Option<usize>,

    /// Seed for the optional randomized self-test sample points.
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Args, Debug)]
pub struct CheckArgs {
    #[command(flatten)]
    pub common: CommonArgs,

    /// Break the off-diagonal coupling before the spectrum record
    /// (detector-sensitivity non-example; the verdict must be unstable).
    #[arg(long, hide = true)]
    pub broken_coupling: bool,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum OutputFormat {
    Json,
    Csv,
}

/// One CLI parameter: a single value or an inclusive linspace.
#[derive(Debug, Clone, Copy)]
pub enum ParamValue {
    Scalar(f64),
    Range { start: f64, stop: f64, count: usize },
}

impl ParamValue {
    pub fn parse(text: &str) -> Result<ParamValue, String> {
        if text.contains(':') {
            let parts: Vec<&str> = text.split(':').collect();
            if parts.len() != 3 {
                return Err(format!("`{text}`: ranges are start:stop:count"));
            }
            let start: f64 = parts[0]
                .trim()
                .parse()
                .map_err(|_| format!("`{}`: not a number", parts[0]))?;
            let stop: f64 = parts[1]
                .trim()
                .parse()
                .map_err(|_| format!("`{}`: not a number", parts[1]))?;
            let count: usize = parts[2]
                .trim()
                .parse()
                .map_err(|_| format!("`{}`: not a count", parts[2]))?;
            if count < 1 {
                return Err(format!("`{text}`: range count must be ≥ 1"));
            }
            Ok(ParamValue::Range { start, stop, count })
        } else {
            let v: f64 = text
                .trim()
                .parse()
                .map_err(|_| format!("`{text}`: not a number"))?;
            Ok(ParamValue::Scalar(v))
        }
    }

    /// The evaluation grid: a singleton, or count points from start to stop
    /// inclusive (count = 1 degenerates to start).
    pub fn points(&self) -> Vec<f64> {
        match *self {
            ParamValue::Scalar(v) => vec![v],
            ParamValue::Range { start, stop, count } => {
                if count == 1 {
                    vec![start]
                } else {
                    (0..count)
                        .map(|i| start + (stop - start) * i as f64 / (count - 1) as f64)
                        .collect()
                }
            }
        }
    }

    /// Requires a single value; sweeping parameters name themselves in the
    /// error so usage failures are self-explanatory.
    pub fn scalar(&self, name: &str) -> Result<f64, String> {
        match *self {
            ParamValue::Scalar(v) => Ok(v),
            ParamValue::Range { .. } => {
                Err(format!("--{name} must be a single value for this command"))
            }
        }
    }
}

/// A config-file entry that may be a number or a range string.
#[derive(Deserialize, Debug, Clone)]
#[serde(untagged)]
pub enum NumOrRange {
    Num(f64),
    Text(String),
}

impl NumOrRange {
    fn to_param(&self) -> Result<ParamValue, String> {
        match self {
            NumOrRange::Num(v) => Ok(ParamValue::Scalar(*v)),
            NumOrRange::Text(s) => ParamValue::parse(s),
        }
    }
}

/// The config-file schema; every field optional, unknown fields rejected
/// so typos fail loudly instead of silently using defaults.
#[derive(Deserialize, Debug, Default)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub c: Option<NumOrRange>,
    pub omega: Option<NumOrRange>,
    pub alpha: Option<NumOrRange>,
    pub kappa: Option<NumOrRange>,
    #[serde(rename = "N")]
    pub n: Option<usize>,
    pub tol_stab: Option<f64>,
    pub tol_pos: Option<f64>,
    pub format: Option<String>,
    pub out: Option<PathBuf>,
    pub parallel: Option<usize>,
    pub seed: Option<u64>,
}

impl FileConfig {
    pub fn load(path: &std::path::Path) -> Result<FileConfig, String> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
        serde_json::from_str(&text).map_err(|e| format!("bad config {}: {e}", path.display()))
    }
}

/// Defaults: the pinned reference wave at mid-modulus.
pub const DEFAULT_C: f64 = 2.0;
pub const DEFAULT_OMEGA: f64 = 1.5;
pub const DEFAULT_ALPHA: f64 = 0.25;
pub const DEFAULT_KAPPA: f64 = 0.5;
pub const DEFAULT_N: usize = 256;

/// Fully resolved run configuration after the precedence merge.
#[derive(Debug)]
pub struct Resolved {
    pub c: ParamValue,
    pub omega: ParamValue,
    pub alpha: ParamValue,
    pub kappa: ParamValue,
    pub n: usize,
    pub tols: Tolerances,
    pub format: OutputFormat,
    pub out: Option<PathBuf>,
    pub force: bool,
    pub parallel: Option<usize>,
    pub seed: Option<u64>,
    /// Whether any tuple coordinate was given explicitly (flag or config);
    /// a bare `sweep` runs the default three-tuple sweep instead of a
    /// cartesian product over the single default point.
    pub tuple_given: bool,
    /// Whether κ specifically was given; a bare `figure1` tabulates the
    /// default 91-point modulus grid instead of the single default κ.
    pub kappa_given: bool,
    /// Whether the format came from a flag or config rather than the
    /// per-command default (selftest prints human lines unless asked).
    pub format_given: bool,
    /// Whether N came from a flag or config; figure1 picks its own oracle
    /// resolution when not told otherwise.
    pub n_given: bool,
}

fn merge_param(
    flag: &Option<String>,
    file: &Option<NumOrRange>,
    default: f64,
) -> Result<(ParamValue, bool), String> {
    if let Some(text) = flag {
        return ParamValue::parse(text).map(|p| (p, true));
    }
    if let Some(entry) = file {
        return entry.to_param().map(|p| (p, true));
    }
    Ok((ParamValue::Scalar(default), false))
}

pub fn resolve(
    args: &CommonArgs,
    file: &FileConfig,
    default_format: OutputFormat,
) -> Result<Resolved, String> {
    let (c, c_given) = merge_param(&args.c, &file.c, DEFAULT_C)?;
    let (omega, omega_given) = merge_param(&args.omega, &file.omega, DEFAULT_OMEGA)?;
    let (alpha, alpha_given) = merge_param(&args.alpha, &file.alpha, DEFAULT_ALPHA)?;
    let (kappa, kappa_given) = merge_param(&args.kappa, &file.kappa, DEFAULT_KAPPA)?;

    let n_given = args.n.or(file.n);
    let n = n_given.unwrap_or(DEFAULT_N);
    if n < 32 || n % 2 != 0 {
        return Err(format!("--N must be even and ≥ 32, got {n}"));
    }

    let defaults = Tolerances::default();
    let tols = Tolerances {
        tol_stab: args.tol_stab.or(file.tol_stab).unwrap_or(defaults.tol_stab),
        tol_pos: args.tol_pos.or(file.tol_pos).unwrap_or(defaults.tol_pos),
    };
    if !(tols.tol_stab > 0.0) || !(tols.tol_pos > 0.0) {
        return Err("tolerances must be positive".to_string());
    }

    let (format, format_given) = match (&args.format, &file.format) {
        (Some(f), _) => (*f, true),
        (None, Some(text)) => match text.as_str() {
            "json" => (OutputFormat::Json, true),
            "csv" => (OutputFormat::Csv, true),
            other => return Err(format!("config format must be json or csv, got `{other}`")),
        },
        (None, None) => (default_format, false),
    };

    Ok(Resolved {
        c,
        omega,
        alpha,
        kappa,
        n,
        tols,
        format,
        out: args.out.clone().or_else(|| file.out.clone()),
        force: args.force,
        parallel: args.parallel.or(file.parallel),
        seed: args.seed.or(file.seed),
        tuple_given: c_given || omega_given || alpha_given || kappa_given,
        kappa_given,
        format_given,
        n_given: n_given.is_some(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_scalars_and_ranges() {
        assert!(matches!(
            ParamValue::parse("0.5").unwrap(),
            ParamValue::Scalar(v) if v == 0.5
        ));
        let r = ParamValue::parse("0.1:0.9:9").unwrap();
        let pts = r.points();
        assert_eq!(pts.len(), 9);
        assert_eq!(pts[0], 0.1);
        assert_eq!(pts[8], 0.9);
        assert!((pts[4] - 0.5).abs() < 1e-15);
    }

    #[test]
    fn rejects_malformed_ranges() {
        assert!(ParamValue::parse("1:2").is_err());
        assert!(ParamValue::parse("a:2:3").is_err());
        assert!(ParamValue::parse("1:2:0").is_err());
        assert!(ParamValue::parse("").is_err());
    }

    #[test]
    fn single_count_range_is_start() {
        let pts = ParamValue::parse("0.3:0.9:1").unwrap().points();
        assert_eq!(pts, vec![0.3]);
    }

    #[test]
    fn precedence_flags_over_config_over_defaults() {
        let args = CommonArgs {
            alpha: Some("0.1".into()),
            ..CommonArgs::default()
        };
        let file = FileConfig {
            alpha: Some(NumOrRange::Num(0.2)),
            omega: Some(NumOrRange::Num(2.5)),
            n: Some(64),
            ..FileConfig::default()
        };
        let r = resolve(&args, &file, OutputFormat::Json).unwrap();
        assert_eq!(r.alpha.scalar("alpha").unwrap(), 0.1); // flag wins
        assert_eq!(r.omega.scalar("omega").unwrap(), 2.5); // config wins
        assert_eq!(r.c.scalar("c").unwrap(), DEFAULT_C); // default
        assert_eq!(r.n, 64);
        assert!(r.tuple_given);
    }

    #[test]
    fn odd_or_small_n_rejected() {
        let args = CommonArgs {
            n: Some(33),
            ..CommonArgs::default()
        };
        assert!(resolve(&args, &FileConfig::default(), OutputFormat::Json).is_err());
        let args = CommonArgs {
            n: Some(16),
            ..CommonArgs::default()
        };
        assert!(resolve(&args, &FileConfig::default(), OutputFormat::Json).is_err());
    }
}
