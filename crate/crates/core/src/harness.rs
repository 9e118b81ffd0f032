//! Seeded Monte Carlo runner: draws Gaussian user pools, runs an estimator
//! over many trials and parameter grids, and aggregates coverage, width,
//! power and p-value statistics.
//!
//! Trial `t` always draws its data from stream `2t` and its mechanism noise
//! from stream `2t + 1` of the experiment seed, so results do not depend on
//! scheduling and every sweep point sees the same underlying samples.

use std::collections::BTreeMap;
use std::io::{self, Write};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{config, Error, Result};
use crate::interval::{ConfidenceInterval, Method};
use crate::mean_known::{known_bf, ztest, KnownVarConfig, Phase1Sizing, Phase2Noise, ZTestResult};
use crate::mean_unknown::{estimate_mean_auto, large_var, unk_var, AutoConfig, UnknownVarConfig};
use crate::mechanisms::{check_half_open, PrivacyParams, UserPool};
use crate::normal_math::{phi, phi_inv, standard_gaussian, RngStream};
use crate::quantile::{bin_rr, iterations_for, QuantileQuery, QuantileResult};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Estimator {
    #[serde(alias = "known_bf")]
    KnownBF,
    #[serde(alias = "ztest")]
    ZTest,
    #[serde(alias = "bin_rr", alias = "quantile")]
    BinRR,
    #[serde(alias = "unk_var")]
    UnkVar,
    #[serde(alias = "large_var")]
    LargeVar,
    #[serde(alias = "auto")]
    Auto,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GaussianSpec {
    pub mu: f64,
    pub sigma: f64,
}

/// Parameters of every estimator in one flat record; each estimator reads
/// the fields it needs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EstimatorParams {
    pub epsilon: f64,
    pub delta: f64,
    pub beta: f64,
    #[serde(alias = "R")]
    pub r: f64,
    /// Known σ handed to KnownBF / ZTest; defaults to the data σ.
    pub sigma: Option<f64>,
    pub sigma_min: Option<f64>,
    /// Defaults to 2R.
    pub sigma_max: Option<f64>,
    pub phase1: Phase1Sizing,
    pub noise: Phase2Noise,
    pub mu0: f64,
    pub significance: f64,
    pub p_star: f64,
    /// Search bracket; defaults to [−R, R].
    pub q_min: Option<f64>,
    pub q_max: Option<f64>,
    pub lambda: f64,
    /// Resolution of the quantile search; sets the iteration count unless
    /// `iterations` is given.
    pub tau: f64,
    pub iterations: Option<usize>,
}

impl Default for EstimatorParams {
    fn default() -> Self {
        Self {
            epsilon: 1.0,
            delta: 1e-9,
            beta: 0.05,
            r: 200.0,
            sigma: None,
            sigma_min: None,
            sigma_max: None,
            phase1: Phase1Sizing::Strict,
            noise: Phase2Noise::Gaussian,
            mu0: 0.0,
            significance: 0.05,
            p_star: 0.5,
            q_min: None,
            q_max: None,
            lambda: 0.05,
            tau: 0.25,
            iterations: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepAxis {
    pub name: String,
    pub values: Vec<f64>,
}

/// Parameter names accepted by sweeps.
pub const SWEEP_PARAMS: &[&str] = &[
    "mu", "sigma_true", "n", "epsilon", "delta", "beta", "r", "sigma", "sigma_min", "sigma_max",
    "mu0", "significance", "p_star", "lambda", "tau", "iterations", "phase1_share",
];

/// Maps CLI spellings (`eps`, `mu-alt`, `R`, ...) onto [`SWEEP_PARAMS`] names.
/// Unknown names pass through unchanged.
pub fn canonical_sweep_name(name: &str) -> String {
    let snake = name.trim().replace('-', "_");
    match snake.as_str() {
        "eps" => "epsilon".into(),
        "mu_alt" => "mu".into(),
        "R" => "r".into(),
        "p" => "p_star".into(),
        _ => snake,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub estimator: Estimator,
    pub data: GaussianSpec,
    #[serde(default)]
    pub params: EstimatorParams,
    pub n: usize,
    #[serde(default = "one")]
    pub trials: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub sweep: Vec<SweepAxis>,
    /// Attach every trial's record to its summary.
    #[serde(default)]
    pub keep_records: bool,
}

fn one() -> usize {
    1
}

impl ExperimentConfig {
    pub fn new(estimator: Estimator, data: GaussianSpec, params: EstimatorParams, n: usize) -> Self {
        Self { estimator, data, params, n, trials: 1, seed: 0, sweep: Vec::new(), keep_records: false }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let mut cfg: Self = serde_json::from_str(text).map_err(|e| config(format!("experiment config: {e}")))?;
        for axis in &mut cfg.sweep {
            axis.name = canonical_sweep_name(&axis.name);
        }
        cfg.validate()?;
        Ok(cfg)
    }

    /// A single trial with no sweep: the CLI prints the raw estimator output.
    pub fn is_single_run(&self) -> bool {
        self.trials == 1 && self.sweep.is_empty()
    }

    /// Checks the configuration at every grid point.
    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(config("trials must be at least 1"));
        }
        for axis in &self.sweep {
            if !SWEEP_PARAMS.contains(&axis.name.as_str()) {
                return Err(config(format!(
                    "unknown sweep parameter `{}` (expected one of {})",
                    axis.name,
                    SWEEP_PARAMS.join(", ")
                )));
            }
            if axis.values.is_empty() {
                return Err(config(format!("sweep over `{}` has no values", axis.name)));
            }
        }
        for point in self.grid() {
            self.at(&point)?.check_point()?;
        }
        Ok(())
    }

    /// Cartesian product of the sweep axes, first axis slowest.
    pub fn grid(&self) -> Vec<Vec<SweepValue>> {
        let mut points = vec![Vec::new()];
        for axis in &self.sweep {
            points = points
                .into_iter()
                .flat_map(|p| {
                    axis.values.iter().map(move |&v| {
                        let mut q = p.clone();
                        q.push(SweepValue { name: axis.name.clone(), value: v });
                        q
                    })
                })
                .collect();
        }
        points
    }

    /// This configuration with the given sweep values applied.
    pub fn at(&self, point: &[SweepValue]) -> Result<Self> {
        let mut cfg = self.clone();
        for sv in point {
            cfg.set(&sv.name, sv.value)?;
        }
        Ok(cfg)
    }

    fn set(&mut self, name: &str, v: f64) -> Result<()> {
        let p = &mut self.params;
        let count = |v: f64| -> Result<usize> {
            if v >= 0.0 && v.fract() == 0.0 && v <= 1e15 {
                Ok(v as usize)
            } else {
                Err(config(format!("`{name}` needs a non-negative integer, got {v}")))
            }
        };
        match name {
            "mu" => self.data.mu = v,
            "sigma_true" => self.data.sigma = v,
            "n" => self.n = count(v)?,
            "epsilon" => p.epsilon = v,
            "delta" => p.delta = v,
            "beta" => p.beta = v,
            "r" => p.r = v,
            "sigma" => p.sigma = Some(v),
            "sigma_min" => p.sigma_min = Some(v),
            "sigma_max" => p.sigma_max = Some(v),
            "mu0" => p.mu0 = v,
            "significance" => p.significance = v,
            "p_star" => p.p_star = v,
            "lambda" => p.lambda = v,
            "tau" => p.tau = v,
            "iterations" => p.iterations = Some(count(v)?),
            "phase1_share" => p.phase1 = Phase1Sizing::Share(v),
            other => return Err(config(format!("unknown sweep parameter `{other}`"))),
        }
        Ok(())
    }

    fn check_point(&self) -> Result<()> {
        if self.n == 0 {
            return Err(config("n must be at least 1"));
        }
        if !(self.data.sigma > 0.0 && self.data.sigma.is_finite() && self.data.mu.is_finite()) {
            return Err(config(format!("data must be N(mu, sigma^2) with sigma > 0, got {:?}", self.data)));
        }
        match self.estimator {
            Estimator::KnownBF => self.known_cfg().map(drop),
            Estimator::ZTest => {
                let cfg = self.known_cfg()?;
                let s = self.params.significance;
                if !(s > cfg.beta && s < 1.0) {
                    return Err(config(format!("significance {s} must lie in (beta, 1) = ({}, 1)", cfg.beta)));
                }
                if cfg.noise != Phase2Noise::Gaussian {
                    return Err(config("the z-test needs gaussian phase-2 noise"));
                }
                Ok(())
            }
            Estimator::BinRR => self.quantile_query().map(drop),
            Estimator::UnkVar => self.unknown_cfg().map(drop),
            Estimator::LargeVar => {
                PrivacyParams::pure(self.params.epsilon).map_err(|e| config(e.to_string()))?;
                check_half_open("beta", self.params.beta).map_err(|e| config(e.to_string()))?;
                if !(self.params.r > 0.0 && self.params.r.is_finite()) {
                    return Err(config("R must be positive"));
                }
                Ok(())
            }
            Estimator::Auto => self.auto_cfg()?.bounded().map(drop),
        }
    }

    fn privacy(&self) -> Result<PrivacyParams> {
        PrivacyParams::new(self.params.epsilon, self.params.delta).map_err(|e| config(e.to_string()))
    }

    fn known_cfg(&self) -> Result<KnownVarConfig> {
        let p = &self.params;
        let cfg = KnownVarConfig {
            sigma: p.sigma.unwrap_or(self.data.sigma),
            beta: p.beta,
            privacy: self.privacy()?,
            r: p.r,
            phase1: p.phase1,
            noise: p.noise,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    fn sigma_min(&self) -> Result<f64> {
        self.params.sigma_min.ok_or_else(|| config("sigma_min is required for unknown-variance estimation"))
    }

    fn unknown_cfg(&self) -> Result<UnknownVarConfig> {
        let p = &self.params;
        UnknownVarConfig::new(self.sigma_min()?, p.sigma_max.unwrap_or(2.0 * p.r), p.beta, self.privacy()?, p.r)
    }

    fn auto_cfg(&self) -> Result<AutoConfig> {
        let p = &self.params;
        Ok(AutoConfig { sigma_min: self.sigma_min()?, beta: p.beta, privacy: self.privacy()?, r: p.r })
    }

    fn quantile_query(&self) -> Result<QuantileQuery> {
        let p = &self.params;
        let (q_min, q_max) = (p.q_min.unwrap_or(-p.r), p.q_max.unwrap_or(p.r));
        let iterations = match p.iterations {
            Some(t) => t,
            None => iterations_for(q_min, q_max, p.tau).map_err(|e| config(e.to_string()))?,
        };
        if !(p.tau > 0.0) {
            return Err(config(format!("tau must be positive, got {}", p.tau)));
        }
        PrivacyParams::pure(p.epsilon).map_err(|e| config(e.to_string()))?;
        QuantileQuery::new(p.p_star, q_min, q_max, p.lambda, iterations)
    }

    /// Fresh pool for trial `trial`.
    pub fn draw_pool(&self, trial: u64) -> UserPool {
        let mut rng = RngStream::new(self.seed, 2 * trial);
        let GaussianSpec { mu, sigma } = self.data;
        UserPool::new((0..self.n).map(|_| mu + sigma * standard_gaussian(&mut rng)).collect())
    }

    /// Runs trial `trial` and returns its raw output with the consumed pool.
    pub fn run_trial(&self, trial: u64) -> (Result<Outcome>, UserPool) {
        let mut pool = self.draw_pool(trial);
        let mut rng = RngStream::new(self.seed, 2 * trial + 1);
        let out = self.estimate(&mut pool, &mut rng);
        (out, pool)
    }

    fn estimate(&self, pool: &mut UserPool, rng: &mut RngStream) -> Result<Outcome> {
        let p = &self.params;
        Ok(match self.estimator {
            Estimator::KnownBF => Outcome::Interval(known_bf(pool, &self.known_cfg()?, rng)?),
            Estimator::ZTest => Outcome::ZTest(ztest(pool, &self.known_cfg()?, p.mu0, p.significance, rng)?),
            Estimator::BinRR => Outcome::Quantile(bin_rr(pool, self.n, &self.quantile_query()?, p.epsilon, rng)?),
            Estimator::UnkVar => Outcome::Interval(unk_var(pool, &self.unknown_cfg()?, rng)?),
            Estimator::LargeVar => Outcome::Interval(large_var(pool, p.epsilon, p.r, p.beta, rng)?),
            Estimator::Auto => Outcome::Interval(estimate_mean_auto(pool, &self.auto_cfg()?, rng)?),
        })
    }

    fn record(&self, trial: u64, out: &Result<Outcome>) -> TrialRecord {
        let mut rec = TrialRecord { trial, ..TrialRecord::default() };
        match out {
            Err(e) => rec.error = Some(e.to_string()),
            Ok(Outcome::Interval(ci)) => {
                rec.lo = Some(ci.lo);
                rec.hi = Some(ci.hi);
                rec.mu_tilde = Some(ci.mu_tilde);
                rec.covered = Some(ci.contains(self.data.mu));
                rec.method = Some(ci.method);
            }
            Ok(Outcome::ZTest(t)) => {
                rec.mu_tilde = Some(t.mu_tilde);
                rec.p_value = Some(t.p_value);
                rec.reject = Some(t.reject);
            }
            Ok(Outcome::Quantile(q)) => {
                let GaussianSpec { mu, sigma } = self.data;
                let t = q.threshold;
                let truth = mu + sigma * phi_inv(self.params.p_star);
                let mass_err = (phi((t - mu) / sigma) - self.params.p_star).abs();
                rec.threshold = Some(t);
                rec.success = Some(mass_err <= self.params.lambda || (t - truth).abs() <= self.params.tau);
            }
        }
        rec
    }
}

/// Raw output of one estimator run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Outcome {
    Interval(ConfidenceInterval),
    ZTest(ZTestResult),
    Quantile(QuantileResult),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepValue {
    pub name: String,
    pub value: f64,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub trial: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lo: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hi: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mu_tilde: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub covered: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub method: Option<Method>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p_value: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reject: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub threshold: Option<f64>,
    /// Quantile search landed within λ in mass or τ in location.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub success: Option<bool>,
}

impl TrialRecord {
    pub fn width(&self) -> Option<f64> {
        Some(self.hi? - self.lo?)
    }
}

/// Aggregate over the trials of one grid point. Rates count failed trials
/// as misses; means are over completed trials.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct TrialSummary {
    pub point: Vec<SweepValue>,
    pub trials: usize,
    pub completed: usize,
    pub failures: usize,
    /// Set when the estimator's preconditions fail at this point.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub coverage_rate: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub coverage_ci: Option<[f64; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mean_width: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub width_std: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub power: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub power_ci: Option<[f64; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mean_p_value: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub success_rate: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub success_ci: Option<[f64; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mean_threshold: Option<f64>,
    #[serde(skip_serializing_if = "BTreeMap::is_empty", default)]
    pub methods: BTreeMap<String, usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub per_trial_records: Option<Vec<TrialRecord>>,
}

/// 95% Wilson score interval for `k` successes out of `n`.
pub fn wilson_interval(k: usize, n: usize) -> [f64; 2] {
    if n == 0 {
        return [0.0, 1.0];
    }
    let z = 1.959_963_984_540_054_f64;
    let (nf, p) = (n as f64, k as f64 / n as f64);
    let denom = 1.0 + z * z / nf;
    let center = (p + z * z / (2.0 * nf)) / denom;
    let half = z / denom * (p * (1.0 - p) / nf + z * z / (4.0 * nf * nf)).sqrt();
    // the bounds are exactly 0 and 1 at the extremes; avoid rounding residue there
    let lo = if k == 0 { 0.0 } else { (center - half).max(0.0) };
    let hi = if k == n { 1.0 } else { (center + half).min(1.0) };
    [lo, hi]
}

fn mean_std(xs: &[f64]) -> Option<(f64, f64)> {
    if xs.is_empty() {
        return None;
    }
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = if xs.len() > 1 { xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0) } else { 0.0 };
    Some((mean, var.sqrt()))
}

fn rate(flags: impl Iterator<Item = bool>, trials: usize) -> (f64, [f64; 2]) {
    let k = flags.filter(|&b| b).count();
    (k as f64 / trials as f64, wilson_interval(k, trials))
}

/// Aggregates per-trial records.
pub fn summarize(estimator: Estimator, point: Vec<SweepValue>, records: Vec<TrialRecord>, keep: bool) -> TrialSummary {
    let trials = records.len();
    let failures = records.iter().filter(|r| r.error.is_some()).count();
    let mut s = TrialSummary { point, trials, completed: trials - failures, failures, ..Default::default() };
    let ok = || records.iter().filter(|r| r.error.is_none());
    match estimator {
        Estimator::ZTest => {
            let (p, ci) = rate(ok().map(|r| r.reject == Some(true)), trials);
            s.power = Some(p);
            s.power_ci = Some(ci);
            let ps: Vec<f64> = ok().filter_map(|r| r.p_value).collect();
            s.mean_p_value = mean_std(&ps).map(|m| m.0);
        }
        Estimator::BinRR => {
            let (p, ci) = rate(ok().map(|r| r.success == Some(true)), trials);
            s.success_rate = Some(p);
            s.success_ci = Some(ci);
            let ts: Vec<f64> = ok().filter_map(|r| r.threshold).collect();
            s.mean_threshold = mean_std(&ts).map(|m| m.0);
        }
        _ => {
            let (p, ci) = rate(ok().map(|r| r.covered == Some(true)), trials);
            s.coverage_rate = Some(p);
            s.coverage_ci = Some(ci);
            let ws: Vec<f64> = ok().filter_map(TrialRecord::width).collect();
            if let Some((m, sd)) = mean_std(&ws) {
                s.mean_width = Some(m);
                s.width_std = Some(sd);
            }
            for r in ok() {
                if let Some(m) = r.method {
                    *s.methods.entry(m.name().to_string()).or_default() += 1;
                }
            }
        }
    }
    if keep {
        s.per_trial_records = Some(records);
    }
    s
}

fn precondition_summary(point: Vec<SweepValue>, trials: usize, err: &Error) -> TrialSummary {
    TrialSummary { point, trials, failures: trials, error: Some(err.to_string()), ..Default::default() }
}

/// Runs every grid point of `cfg`. Configuration errors are returned;
/// estimator precondition failures are reported in the affected summaries.
/// `jobs` bounds the worker threads (None: rayon's default).
pub fn run_experiment(cfg: &ExperimentConfig, jobs: Option<usize>) -> Result<Vec<TrialSummary>> {
    cfg.validate()?;
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(j) = jobs {
        builder = builder.num_threads(j.max(1));
    }
    let workers = builder.build().map_err(|e| config(format!("thread pool: {e}")))?;
    workers.install(|| {
        cfg.grid()
            .into_iter()
            .map(|point| {
                let at = cfg.at(&point)?;
                let outcomes: Vec<(TrialRecord, Option<Error>)> = (0..cfg.trials as u64)
                    .into_par_iter()
                    .map(|t| {
                        let (out, _) = at.run_trial(t);
                        let rec = at.record(t, &out);
                        (rec, out.err().filter(Error::is_precondition_failure))
                    })
                    .collect();
                if let Some(err) = outcomes.iter().find_map(|(_, e)| e.as_ref()) {
                    return Ok(precondition_summary(point, cfg.trials, err));
                }
                let records = outcomes.into_iter().map(|(r, _)| r).collect();
                Ok(summarize(cfg.estimator, point, records, cfg.keep_records))
            })
            .collect()
    })
}

fn cell(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

/// One CSV row per summary. With at most one sweep axis the first column is
/// `sweep_value`; otherwise there is one column per axis.
pub fn write_csv<W: Write>(cfg: &ExperimentConfig, summaries: &[TrialSummary], mut out: W) -> io::Result<()> {
    let keys: Vec<String> = if cfg.sweep.len() <= 1 {
        vec!["sweep_value".to_string()]
    } else {
        cfg.sweep.iter().map(|a| a.name.clone()).collect()
    };
    let metrics: &[&str] = match cfg.estimator {
        Estimator::ZTest => &["power", "power_ci_lo", "power_ci_hi", "mean_p"],
        Estimator::BinRR => &["success", "success_ci_lo", "success_ci_hi", "mean_threshold", "failures"],
        _ => &["coverage", "coverage_ci_lo", "coverage_ci_hi", "mean_width", "width_std", "failures"],
    };
    writeln!(out, "{},{}", keys.join(","), metrics.join(","))?;
    for s in summaries {
        let mut row: Vec<String> = if cfg.sweep.is_empty() {
            vec![String::new()]
        } else {
            s.point.iter().map(|sv| sv.value.to_string()).collect()
        };
        let failures = Some(s.failures as f64);
        let lo_hi = |ci: Option<[f64; 2]>| (cell(ci.map(|c| c[0])), cell(ci.map(|c| c[1])));
        match cfg.estimator {
            Estimator::ZTest => {
                let (lo, hi) = lo_hi(s.power_ci);
                row.extend([cell(s.power), lo, hi, cell(s.mean_p_value)]);
            }
            Estimator::BinRR => {
                let (lo, hi) = lo_hi(s.success_ci);
                row.extend([cell(s.success_rate), lo, hi, cell(s.mean_threshold), cell(failures)]);
            }
            _ => {
                let (lo, hi) = lo_hi(s.coverage_ci);
                row.extend([cell(s.coverage_rate), lo, hi, cell(s.mean_width), cell(s.width_std), cell(failures)]);
            }
        }
        writeln!(out, "{}", row.join(","))?;
    }
    Ok(())
}

pub fn write_json<W: Write, T: Serialize + ?Sized>(value: &T, mut out: W) -> io::Result<()> {
    serde_json::to_writer_pretty(&mut out, value)?;
    out.write_all(b"\n")
}
