//! Command-line front end. Every subcommand builds an [`ExperimentConfig`]
//! and goes through [`run_experiment`], so single runs, repeated trials and
//! sweeps share one code path.

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::error::{config, Error, Result};
use crate::harness::{
    run_experiment, write_csv, write_json, Estimator, EstimatorParams, ExperimentConfig, GaussianSpec,
    SweepAxis,
};
use crate::mean_known::{Phase1Sizing, Phase2Noise};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_PRECONDITION: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "ldp-meanest", version, about = "Locally private mean and quantile estimation for Gaussian data")]
pub struct Cli {
    /// Experiment seed.
    #[arg(long, global = true, env = "LDP_MEANEST_SEED")]
    seed: Option<u64>,
    /// Number of independent trials.
    #[arg(long, global = true)]
    trials: Option<usize>,
    /// Output file (stdout if omitted).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads for running trials.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Parameter sweep, e.g. `--sweep mu=0,0.5,1`. Repeat for a grid.
    #[arg(long, global = true, value_parser = parse_sweep)]
    sweep: Vec<SweepAxis>,
    /// Include per-trial records in JSON summaries.
    #[arg(long, global = true)]
    records: bool,
    /// Write the audit log of a single run as JSON lines to this file.
    #[arg(long, global = true)]
    audit: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Confidence interval with known sigma.
    MeanKnown(KnownArgs),
    /// Private two-sided Z-test of H0: mu = mu0.
    Ztest(ZTestArgs),
    /// Private quantile search.
    Quantile(QuantileArgs),
    /// Confidence interval with sigma unknown in [sigma_min, sigma_max].
    MeanUnknown(UnknownArgs),
    /// Confidence interval for the very-large-variance regime.
    MeanLarge(LargeArgs),
    /// Regime check followed by the matching estimator.
    MeanAuto(AutoArgs),
    /// Run an experiment described by a JSON config file.
    Experiment(ExperimentArgs),
}

#[derive(Args, Debug)]
#[command(allow_negative_numbers = true)]
struct Common {
    /// Pool size.
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 1.0)]
    eps: f64,
    #[arg(long)]
    beta: Option<f64>,
    /// Bound on |mu|.
    #[arg(long = "R", alias = "r", default_value_t = 200.0)]
    r: f64,
}

#[derive(Args, Debug)]
#[command(allow_negative_numbers = true)]
struct KnownArgs {
    #[command(flatten)]
    common: Common,
    /// Mean of the generated data.
    #[arg(long, default_value_t = 0.0)]
    mu: f64,
    /// Known standard deviation (also used to generate the data).
    #[arg(long, default_value_t = 1.0)]
    sigma: f64,
    #[arg(long, default_value_t = 1e-9)]
    delta: f64,
    /// strict, relaxed, or share:<fraction>.
    #[arg(long, default_value = "strict", value_parser = parse_phase1)]
    phase1: Phase1Sizing,
    #[arg(long, value_enum, default_value = "gaussian")]
    noise: NoiseArg,
}

#[derive(Args, Debug)]
#[command(allow_negative_numbers = true)]
struct ZTestArgs {
    #[command(flatten)]
    common: Common,
    /// Mean of the generated data (the alternative).
    #[arg(long = "mu-alt", alias = "mu", default_value_t = 0.0)]
    mu_alt: f64,
    #[arg(long, default_value_t = 0.0)]
    mu0: f64,
    #[arg(long, default_value_t = 1.0)]
    sigma: f64,
    #[arg(long, default_value_t = 1e-9)]
    delta: f64,
    #[arg(long, default_value_t = 0.05)]
    significance: f64,
    #[arg(long, default_value = "strict", value_parser = parse_phase1)]
    phase1: Phase1Sizing,
}

#[derive(Args, Debug)]
#[command(allow_negative_numbers = true)]
struct QuantileArgs {
    #[command(flatten)]
    common: Common,
    /// Target quantile p*.
    #[arg(long = "p")]
    p: f64,
    #[arg(long, default_value_t = 0.0)]
    mu: f64,
    #[arg(long = "sigma-true", alias = "sigma", default_value_t = 1.0)]
    sigma_true: f64,
    #[arg(long = "q-min")]
    q_min: Option<f64>,
    #[arg(long = "q-max")]
    q_max: Option<f64>,
    #[arg(long, default_value_t = 0.05)]
    lambda: f64,
    #[arg(long, default_value_t = 0.25)]
    tau: f64,
    #[arg(long)]
    iterations: Option<usize>,
}

#[derive(Args, Debug)]
#[command(allow_negative_numbers = true)]
struct UnknownArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long, default_value_t = 0.0)]
    mu: f64,
    #[arg(long = "sigma-true")]
    sigma_true: f64,
    #[arg(long = "sigma-min")]
    sigma_min: f64,
    #[arg(long = "sigma-max")]
    sigma_max: Option<f64>,
    #[arg(long, default_value_t = 1e-9)]
    delta: f64,
}

#[derive(Args, Debug)]
#[command(allow_negative_numbers = true)]
struct LargeArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long, default_value_t = 0.0)]
    mu: f64,
    #[arg(long = "sigma-true")]
    sigma_true: f64,
}

#[derive(Args, Debug)]
#[command(allow_negative_numbers = true)]
struct AutoArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long, default_value_t = 0.0)]
    mu: f64,
    #[arg(long = "sigma-true")]
    sigma_true: f64,
    /// Defaults to R/1000.
    #[arg(long = "sigma-min")]
    sigma_min: Option<f64>,
    #[arg(long, default_value_t = 1e-9)]
    delta: f64,
}

#[derive(Args, Debug)]
#[command(allow_negative_numbers = true)]
struct ExperimentArgs {
    #[arg(long)]
    config: PathBuf,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum NoiseArg {
    Gaussian,
    Laplace,
}

fn parse_sweep(s: &str) -> std::result::Result<SweepAxis, String> {
    let (name, values) = s.split_once('=').ok_or("expected name=v1,v2,...")?;
    let values = values
        .split(',')
        .map(|v| v.trim().parse::<f64>().map_err(|e| format!("bad sweep value `{v}`: {e}")))
        .collect::<std::result::Result<Vec<_>, _>>()?;
    Ok(SweepAxis { name: crate::harness::canonical_sweep_name(name), values })
}

fn parse_phase1(s: &str) -> std::result::Result<Phase1Sizing, String> {
    match s {
        "strict" => Ok(Phase1Sizing::Strict),
        "relaxed" => Ok(Phase1Sizing::Relaxed),
        _ => {
            let f = s
                .strip_prefix("share:")
                .ok_or("expected strict, relaxed, or share:<fraction>")?
                .parse::<f64>()
                .map_err(|e| e.to_string())?;
            Ok(Phase1Sizing::Share(f))
        }
    }
}

fn params(common: &Common, default_beta: f64) -> EstimatorParams {
    EstimatorParams {
        epsilon: common.eps,
        beta: common.beta.unwrap_or(default_beta),
        r: common.r,
        ..EstimatorParams::default()
    }
}

impl Cli {
    fn experiment(&self) -> Result<ExperimentConfig> {
        let spec = |mu, sigma| GaussianSpec { mu, sigma };
        let mut cfg = match &self.command {
            Command::MeanKnown(a) => {
                let p = EstimatorParams {
                    delta: a.delta,
                    sigma: Some(a.sigma),
                    phase1: a.phase1,
                    noise: match a.noise {
                        NoiseArg::Gaussian => Phase2Noise::Gaussian,
                        NoiseArg::Laplace => Phase2Noise::Laplace,
                    },
                    ..params(&a.common, 0.01)
                };
                ExperimentConfig::new(Estimator::KnownBF, spec(a.mu, a.sigma), p, a.common.n)
            }
            Command::Ztest(a) => {
                let p = EstimatorParams {
                    delta: a.delta,
                    sigma: Some(a.sigma),
                    phase1: a.phase1,
                    mu0: a.mu0,
                    significance: a.significance,
                    ..params(&a.common, 0.01)
                };
                ExperimentConfig::new(Estimator::ZTest, spec(a.mu_alt, a.sigma), p, a.common.n)
            }
            Command::Quantile(a) => {
                let p = EstimatorParams {
                    p_star: a.p,
                    q_min: a.q_min,
                    q_max: a.q_max,
                    lambda: a.lambda,
                    tau: a.tau,
                    iterations: a.iterations,
                    ..params(&a.common, 0.05)
                };
                ExperimentConfig::new(Estimator::BinRR, spec(a.mu, a.sigma_true), p, a.common.n)
            }
            Command::MeanUnknown(a) => {
                let p = EstimatorParams {
                    delta: a.delta,
                    sigma_min: Some(a.sigma_min),
                    sigma_max: a.sigma_max,
                    ..params(&a.common, 0.05)
                };
                ExperimentConfig::new(Estimator::UnkVar, spec(a.mu, a.sigma_true), p, a.common.n)
            }
            Command::MeanLarge(a) => {
                ExperimentConfig::new(Estimator::LargeVar, spec(a.mu, a.sigma_true), params(&a.common, 0.05), a.common.n)
            }
            Command::MeanAuto(a) => {
                let p = EstimatorParams {
                    delta: a.delta,
                    sigma_min: Some(a.sigma_min.unwrap_or(a.common.r / 1000.0)),
                    ..params(&a.common, 0.05)
                };
                ExperimentConfig::new(Estimator::Auto, spec(a.mu, a.sigma_true), p, a.common.n)
            }
            Command::Experiment(a) => {
                let text = std::fs::read_to_string(&a.config)
                    .map_err(|e| config(format!("cannot read {}: {e}", a.config.display())))?;
                ExperimentConfig::from_json(&text)?
            }
        };
        if let Some(seed) = self.seed {
            cfg.seed = seed;
        }
        if let Some(trials) = self.trials {
            cfg.trials = trials;
        }
        if !self.sweep.is_empty() {
            cfg.sweep = self.sweep.clone();
        }
        cfg.keep_records |= self.records;
        cfg.validate()?;
        Ok(cfg)
    }

    fn output(&self) -> io::Result<Box<dyn Write>> {
        Ok(match &self.out {
            Some(path) => Box::new(BufWriter::new(File::create(path)?)),
            None => Box::new(BufWriter::new(io::stdout().lock())),
        })
    }
}

enum Failure {
    Config(String),
    Precondition(String),
    Io(io::Error),
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e)
    }
}

fn classify(e: Error) -> Failure {
    if e.is_precondition_failure() {
        Failure::Precondition(e.to_string())
    } else if matches!(e, Error::Config(_) | Error::Domain(_) | Error::Contract(_)) {
        Failure::Config(e.to_string())
    } else {
        Failure::Precondition(e.to_string())
    }
}

fn execute(cli: &Cli) -> std::result::Result<(), Failure> {
    let cfg = cli.experiment().map_err(classify)?;

    if cfg.is_single_run() && cli.format != Some(Format::Csv) {
        let (outcome, pool) = cfg.run_trial(0);
        let outcome = outcome.map_err(classify)?;
        if let Some(path) = &cli.audit {
            pool.audit().write_json_lines(BufWriter::new(File::create(path)?))?;
        }
        let mut out = cli.output()?;
        write_json(&outcome, &mut out)?;
        out.flush()?;
        return Ok(());
    }

    let summaries = run_experiment(&cfg, cli.jobs).map_err(classify)?;
    let mut out = cli.output()?;
    match cli.format.unwrap_or(Format::Csv) {
        Format::Csv => write_csv(&cfg, &summaries, &mut out)?,
        Format::Json => write_json(&summaries, &mut out)?,
    }
    out.flush()?;
    if cfg.sweep.is_empty() {
        if let Some(err) = summaries.iter().find_map(|s| s.error.clone()) {
            return Err(Failure::Precondition(err));
        }
    }
    for s in &summaries {
        if let Some(err) = &s.error {
            eprintln!("warning: {}: {err}", describe_point(s));
        }
    }
    Ok(())
}

fn describe_point(s: &crate::harness::TrialSummary) -> String {
    if s.point.is_empty() {
        return "run".to_string();
    }
    s.point.iter().map(|p| format!("{}={}", p.name, p.value)).collect::<Vec<_>>().join(" ")
}

/// Parses `argv`, runs the command and returns the process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli) {
        Ok(()) => EXIT_OK,
        Err(Failure::Config(msg)) => {
            eprintln!("error: {msg}");
            EXIT_CONFIG
        }
        Err(Failure::Precondition(msg)) => {
            eprintln!("error: {msg}");
            EXIT_PRECONDITION
        }
        Err(Failure::Io(e)) => {
            eprintln!("error: {e}");
            1
        }
    }
}
