//! Confidence intervals for the mean of N(μ, σ²) with σ known, and the
//! private Z-test built on the same two-phase protocol.
//!
//! Phase 1 locates μ to within a couple of σ with a bit-flipping histogram
//! over width-σ bins. Phase 2 projects the remaining users onto a window
//! around that bin, adds Gaussian noise and averages.

use serde::{Deserialize, Serialize};

use crate::error::{config, domain, Error, Result};
use crate::interval::{intersect_with_range, ConfidenceInterval, Method};
use crate::mechanisms::{
    bf_debias_counts, ceil_count, check_half_open, clamp_to, gaussian_noise_variance,
    laplace_noise_scale, rr_coefficient, Bins, BitFlipper, HistogramEstimate, MechanismKind,
    MechanismUse, PrivacyParams, UserPool,
};
use crate::normal_math::{phi_inv, standard_gaussian, standard_laplace, two_sided_tail, RngStream};

/// How many users the histogram phase gets.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Phase1Sizing {
    /// n₁ = ⌈800·c²·ln(8d/β)⌉ and the pool must hold at least 2n₁ users.
    Strict,
    /// Same n₁, but any pool with n > n₁ is accepted.
    Relaxed,
    /// n₁ = ⌈f·n⌉ for the given fraction f ∈ (0, 1).
    Share(f64),
}

/// Noise for the averaging phase. Laplace gives pure ε-LDP but the sampling
/// distribution is no longer Gaussian, so the Z-test refuses it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Phase2Noise {
    Gaussian,
    Laplace,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct KnownVarConfig {
    pub sigma: f64,
    pub beta: f64,
    pub privacy: PrivacyParams,
    pub r: f64,
    pub phase1: Phase1Sizing,
    pub noise: Phase2Noise,
}

impl KnownVarConfig {
    pub fn new(sigma: f64, beta: f64, privacy: PrivacyParams, r: f64) -> Result<Self> {
        let cfg = Self { sigma, beta, privacy, r, phase1: Phase1Sizing::Strict, noise: Phase2Noise::Gaussian };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn with_phase1(mut self, phase1: Phase1Sizing) -> Result<Self> {
        self.phase1 = phase1;
        self.validate()?;
        Ok(self)
    }

    pub fn with_noise(mut self, noise: Phase2Noise) -> Result<Self> {
        self.noise = noise;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.sigma > 0.0 && self.sigma.is_finite()) {
            return Err(config(format!("sigma must be positive, got {}", self.sigma)));
        }
        if !(self.r > 0.0 && self.r.is_finite()) {
            return Err(config(format!("R must be positive, got {}", self.r)));
        }
        if self.r < self.sigma / 2.0 {
            return Err(config(format!("R = {} is below sigma/2 = {}", self.r, self.sigma / 2.0)));
        }
        check_half_open("beta", self.beta).map_err(|e| config(e.to_string()))?;
        self.privacy.validate()?;
        if self.noise == Phase2Noise::Gaussian && self.privacy.delta() <= 0.0 {
            return Err(config("the gaussian mechanism needs delta in (0, 1)"));
        }
        if let Phase1Sizing::Share(f) = self.phase1 {
            if !(f > 0.0 && f < 1.0) {
                return Err(config(format!("phase-1 share must lie in (0, 1), got {f}")));
            }
        }
        Ok(())
    }

    pub fn epsilon(&self) -> f64 {
        self.privacy.epsilon()
    }

    /// d = 2⌈R/σ⌉ + 1 histogram bins.
    pub fn bins(&self) -> usize {
        2 * (self.r / self.sigma).ceil() as usize + 1
    }
}

fn histogram_constant(cfg: &KnownVarConfig) -> f64 {
    let c = rr_coefficient(cfg.epsilon() / 2.0);
    c * c * (8.0 * cfg.bins() as f64 / cfg.beta).ln()
}

/// ⌈1600·((e^{ε/2}+1)/(e^{ε/2}−1))²·ln(8d/β)⌉, the pool size the coverage
/// guarantee is stated for.
pub fn min_sample_size_known(cfg: &KnownVarConfig) -> Result<u64> {
    cfg.validate()?;
    ceil_count(1600.0 * histogram_constant(cfg))
}

/// Users assigned to the histogram phase for a pool of `n`, after checking
/// the configured sizing policy admits `n`.
pub fn phase1_size(cfg: &KnownVarConfig, n: usize) -> Result<usize> {
    cfg.validate()?;
    let default_n1 = ceil_count(800.0 * histogram_constant(cfg))? as usize;
    let n1 = match cfg.phase1 {
        Phase1Sizing::Strict => {
            let required = min_sample_size_known(cfg)?;
            if (n as u64) < required {
                return Err(Error::InsufficientSamples { required, available: n as u64 });
            }
            default_n1
        }
        Phase1Sizing::Relaxed => default_n1,
        Phase1Sizing::Share(f) => (f * n as f64).ceil() as usize,
    };
    if n1 == 0 || n1 >= n {
        return Err(Error::InsufficientSamples { required: n1.max(1) as u64 + 1, available: n as u64 });
    }
    Ok(n1)
}

/// Outcome of the histogram phase.
#[derive(Clone, Debug, PartialEq)]
pub struct PhaseOne {
    pub histogram: HistogramEstimate,
    /// Signed bin index; the bin is centered at `j_star · σ`.
    pub j_star: i64,
    pub center: f64,
    pub n1: usize,
}

/// Bit-flipping histogram over the first `n1` users of the pool.
pub fn histogram_phase(pool: &mut UserPool, cfg: &KnownVarConfig, n1: usize, rng: &mut RngStream) -> Result<PhaseOne> {
    cfg.validate()?;
    let bins = Bins::centered_grid(cfg.r, cfg.sigma)?;
    let flipper = BitFlipper::new(cfg.epsilon(), bins.len())?;
    let values = pool.take(n1, MechanismUse::new(MechanismKind::BitFlipping, cfg.epsilon(), 0.0))?;
    let mut counts = vec![0u64; bins.len()];
    for &x in &values {
        flipper.flip_into(bins.locate(x), &mut counts, rng);
    }
    let histogram = bf_debias_counts(&counts, n1, cfg.epsilon())?;
    let k = (bins.len() / 2) as i64;
    let j_star = histogram.argmax() as i64 - k;
    Ok(PhaseOne { histogram, j_star, center: j_star as f64 * cfg.sigma, n1 })
}

/// Δ = 2σ + σ·√(2·ln(8n/β)), with n the full pool size.
pub fn window_half_width(sigma: f64, n: usize, beta: f64) -> f64 {
    2.0 * sigma + sigma * (2.0 * (8.0 * n as f64 / beta).ln()).sqrt()
}

/// Average of `n2` projected-and-noised users plus the noise variance used.
pub(crate) fn noisy_average(
    pool: &mut UserPool,
    n2: usize,
    window: (f64, f64),
    privacy: &PrivacyParams,
    noise: Phase2Noise,
    rng: &mut RngStream,
) -> Result<(f64, f64)> {
    let (s1, s2) = window;
    let eps = privacy.epsilon();
    let (kind, noise_var, scale) = match noise {
        Phase2Noise::Gaussian => {
            let var = gaussian_noise_variance(s2 - s1, eps, privacy.delta())?;
            (MechanismKind::Gaussian, var, var.sqrt())
        }
        Phase2Noise::Laplace => {
            let b = laplace_noise_scale(s2 - s1, eps)?;
            (MechanismKind::Laplace, 2.0 * b * b, b)
        }
    };
    let delta = if noise == Phase2Noise::Gaussian { privacy.delta() } else { 0.0 };
    let values = pool.take(n2, MechanismUse::new(kind, eps, delta))?;
    let mut sum = 0.0;
    for &x in &values {
        let projected = clamp_to(x, s1, s2);
        debug_assert!((s1..=s2).contains(&projected));
        let z = match noise {
            Phase2Noise::Gaussian => standard_gaussian(rng),
            Phase2Noise::Laplace => standard_laplace(rng),
        };
        sum += projected + scale * z;
    }
    Ok((sum / n2 as f64, noise_var))
}

struct KnownRun {
    phase_one: PhaseOne,
    n2: usize,
    mu_tilde: f64,
    sampling_var: f64,
}

fn run_known(pool: &mut UserPool, cfg: &KnownVarConfig, rng: &mut RngStream) -> Result<KnownRun> {
    let n = pool.remaining();
    let n1 = phase1_size(cfg, n)?;
    let n2 = n - n1;
    let phase_one = histogram_phase(pool, cfg, n1, rng)?;
    let delta = window_half_width(cfg.sigma, n, cfg.beta);
    let window = (phase_one.center - delta, phase_one.center + delta);
    let (mu_tilde, noise_var) = noisy_average(pool, n2, window, &cfg.privacy, cfg.noise, rng)?;
    let sampling_var = (cfg.sigma * cfg.sigma + noise_var) / n2 as f64;
    Ok(KnownRun { phase_one, n2, mu_tilde, sampling_var })
}

/// (1 − β) confidence interval for μ ∈ [−R, R] from every remaining user of
/// the pool.
pub fn known_bf(pool: &mut UserPool, cfg: &KnownVarConfig, rng: &mut RngStream) -> Result<ConfidenceInterval> {
    let run = run_known(pool, cfg, rng)?;
    let tau = run.sampling_var.sqrt() * phi_inv(1.0 - cfg.beta / 8.0);
    let (lo, hi) = intersect_with_range(run.mu_tilde, tau, cfg.r);
    let mut ci = ConfidenceInterval::bare(lo, hi, 1.0 - cfg.beta, run.mu_tilde, Method::KnownBF);
    ci.sigma_tilde_sq = Some(run.sampling_var);
    ci.n1 = Some(run.phase_one.n1);
    ci.n2 = Some(run.n2);
    ci.j_star = Some(run.phase_one.j_star);
    ci.push_phase("histogram", run.phase_one.n1);
    ci.push_phase("average", run.n2);
    Ok(ci)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ZTestResult {
    pub mu_tilde: f64,
    pub sampling_sd: f64,
    pub z_score: f64,
    pub p_value: f64,
    pub reject: bool,
    pub significance: f64,
    pub n1: usize,
    pub n2: usize,
    pub j_star: i64,
}

/// Two-sided test of H₀: μ = `mu0`, treating μ̃ as N(μ, (σ² + σ̂²)/n₂).
pub fn ztest(
    pool: &mut UserPool,
    cfg: &KnownVarConfig,
    mu0: f64,
    significance: f64,
    rng: &mut RngStream,
) -> Result<ZTestResult> {
    if !(significance > 0.0 && significance < 1.0) {
        return Err(domain(format!("significance must lie in (0, 1), got {significance}")));
    }
    if significance <= cfg.beta {
        return Err(Error::Contract(format!(
            "significance {significance} must exceed beta {}: with probability beta the sampling \
             distribution of the estimate is not the assumed Gaussian",
            cfg.beta
        )));
    }
    if cfg.noise != Phase2Noise::Gaussian {
        return Err(Error::Contract("the z-test needs gaussian phase-2 noise".into()));
    }
    if !mu0.is_finite() {
        return Err(domain("hypothesized mean must be finite"));
    }
    let run = run_known(pool, cfg, rng)?;
    let sampling_sd = run.sampling_var.sqrt();
    let z_score = (run.mu_tilde - mu0) / sampling_sd;
    let p_value = two_sided_tail(z_score);
    Ok(ZTestResult {
        mu_tilde: run.mu_tilde,
        sampling_sd,
        z_score,
        p_value,
        reject: p_value < significance,
        significance,
        n1: run.phase_one.n1,
        n2: run.n2,
        j_star: run.phase_one.j_star,
    })
}
