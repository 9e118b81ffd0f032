//! Mean estimation when σ is unknown.
//!
//! Bounded variance (σ_min ≤ σ ≤ σ_max ≤ 2R): two private binary searches
//! locate the median and the Φ(1)-quantile, whose gap brackets σ; the
//! averaging phase of the known-variance estimator then runs around the
//! median. Very large variance (σ > R): the masses below ±R are estimated
//! and inverted through Φ⁻¹. A randomized-response check on the mass of
//! [−2R, 2R] chooses between the two.

use serde::{Deserialize, Serialize};

use crate::error::{config, Error, Result};
use crate::interval::{intersect_with_range, ConfidenceInterval, Method};
use crate::mean_known::{noisy_average, Phase2Noise};
use crate::mechanisms::{
    ceil_count, check_epsilon, check_half_open, rr_coefficient, rr_fraction_of, MechanismKind,
    MechanismUse, PrivacyParams, UserPool,
};
use crate::normal_math::{phi, phi_inv, RngStream};
use crate::quantile::{bin_rr, QuantileQuery, QuantileResult};

/// Tolerance of the median search.
pub const LAMBDA_MEDIAN: f64 = 0.098;
/// Tolerance of the Φ(1)-quantile search.
pub const LAMBDA_SD: f64 = 0.052;
/// Regime threshold on the estimated mass of [−2R, 2R].
pub const REGIME_THRESHOLD: f64 = 0.76;
/// Accuracy the regime check's fraction estimate is sized for.
pub const REGIME_ACCURACY: f64 = 0.07;
/// Fractions are kept this far from {0, 1} before Φ⁻¹.
pub const CLAMP_EPS: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct UnknownVarConfig {
    pub sigma_min: f64,
    pub sigma_max: f64,
    pub beta: f64,
    pub privacy: PrivacyParams,
    pub r: f64,
}

impl UnknownVarConfig {
    pub fn new(sigma_min: f64, sigma_max: f64, beta: f64, privacy: PrivacyParams, r: f64) -> Result<Self> {
        let cfg = Self { sigma_min, sigma_max, beta, privacy, r };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.r > 0.0 && self.r.is_finite()) {
            return Err(config(format!("R must be positive, got {}", self.r)));
        }
        if !(self.sigma_min > 0.0 && self.sigma_min <= self.sigma_max && self.sigma_max <= 2.0 * self.r) {
            return Err(config(format!(
                "need 0 < sigma_min <= sigma_max <= 2R, got sigma_min={}, sigma_max={}, R={}",
                self.sigma_min, self.sigma_max, self.r
            )));
        }
        check_half_open("beta", self.beta).map_err(|e| config(e.to_string()))?;
        self.privacy.validate()?;
        if self.privacy.delta() <= 0.0 {
            return Err(config("the averaging phase needs delta in (0, 1)"));
        }
        Ok(())
    }

    pub fn epsilon(&self) -> f64 {
        self.privacy.epsilon()
    }
}

/// Phase sizes and the pool-size gate of [`unk_var`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct UnkVarPlan {
    pub t_med: usize,
    pub t_sd: usize,
    pub n1: usize,
    pub n2: usize,
    /// n₁ + n₂ + 1.
    pub phase_gate: u64,
    /// ⌈1500·log₂(16R/σ_min)·c²·ln(16·log₂(16R/σ_min)/β)⌉.
    pub aggregate_gate: u64,
}

impl UnkVarPlan {
    pub fn required(&self) -> u64 {
        self.phase_gate.max(self.aggregate_gate)
    }
}

pub fn unk_var_plan(cfg: &UnknownVarConfig) -> Result<UnkVarPlan> {
    cfg.validate()?;
    let (r, smin) = (cfg.r, cfg.sigma_min);
    let t_med = (8.0 * r / smin).log2().ceil().max(1.0) as usize;
    let t_sd = ((8.0 * r + 4.0 * cfg.sigma_max) / smin).log2().ceil().max(1.0) as usize;
    let c = rr_coefficient(cfg.epsilon());
    let c2 = c * c;
    let size = |t: usize, lambda: f64| {
        let t = t as f64;
        ceil_count(t / (lambda * lambda) * c2 * (16.0 * t / cfg.beta).ln())
    };
    let n1 = size(t_med, LAMBDA_MEDIAN)? as usize;
    let n2 = size(t_sd, LAMBDA_SD)? as usize;
    let l = (16.0 * r / smin).log2();
    let aggregate_gate = ceil_count(1500.0 * l * c2 * (16.0 * l / cfg.beta).ln())?;
    Ok(UnkVarPlan { t_med, t_sd, n1, n2, phase_gate: (n1 + n2 + 1) as u64, aggregate_gate })
}

/// Output of the two quantile searches.
#[derive(Clone, Debug, PartialEq)]
pub struct ScaleSearch {
    pub median: QuantileResult,
    pub upper: QuantileResult,
}

impl ScaleSearch {
    pub fn t_mu_hat(&self) -> f64 {
        self.median.threshold
    }

    pub fn t_sigma_hat(&self) -> f64 {
        self.upper.threshold
    }
}

/// Phases A and B: the median search over [−R, R] on n₁ users, then the
/// Φ(1)-quantile search over [−R, R + σ_max] on the next n₂. Budgeted but
/// unused users of each phase are discarded.
pub fn scale_search(pool: &mut UserPool, cfg: &UnknownVarConfig, plan: &UnkVarPlan, rng: &mut RngStream) -> Result<ScaleSearch> {
    let eps = cfg.epsilon();
    let q_med = QuantileQuery::new(0.5, -cfg.r, cfg.r, LAMBDA_MEDIAN, plan.t_med)?;
    let median = bin_rr(pool, plan.n1, &q_med, eps, rng)?;
    pool.discard(plan.n1 - median.users_consumed())?;

    let q_sd = QuantileQuery::new(phi(1.0), -cfg.r, cfg.r + cfg.sigma_max, LAMBDA_SD, plan.t_sd)?;
    let upper = bin_rr(pool, plan.n2, &q_sd, eps, rng)?;
    pool.discard(plan.n2 - upper.users_consumed())?;
    Ok(ScaleSearch { median, upper })
}

/// (1 − β) confidence interval for μ ∈ [−R, R] with σ ∈ [σ_min, σ_max]
/// unknown, from every remaining user of the pool.
pub fn unk_var(pool: &mut UserPool, cfg: &UnknownVarConfig, rng: &mut RngStream) -> Result<ConfidenceInterval> {
    let plan = unk_var_plan(cfg)?;
    let n = pool.remaining();
    if (n as u64) < plan.required() {
        return Err(Error::InsufficientSamples { required: plan.required(), available: n as u64 });
    }
    let search = scale_search(pool, cfg, &plan, rng)?;
    let (t_mu, t_sigma) = (search.t_mu_hat(), search.t_sigma_hat());
    if t_sigma <= t_mu {
        return Err(Error::EstimationFailure(format!(
            "quantile searches crossed: median estimate {t_mu} is not below the upper estimate {t_sigma}"
        )));
    }

    let gap = t_sigma - t_mu;
    let delta = gap * (0.5 + 2.0 * (2.0 * (8.0 * n as f64 / cfg.beta).ln()).sqrt());
    let n3 = n - plan.n1 - plan.n2;
    let (mu_tilde, noise_var) =
        noisy_average(pool, n3, (t_mu - delta, t_mu + delta), &cfg.privacy, Phase2Noise::Gaussian, rng)?;
    // 2·gap bounds σ from above whenever both searches succeeded
    let sigma_proxy = 2.0 * gap;
    let sampling_var = (sigma_proxy * sigma_proxy + noise_var) / n3 as f64;
    let tau = sampling_var.sqrt() * phi_inv(1.0 - cfg.beta / 8.0);
    let (lo, hi) = intersect_with_range(mu_tilde, tau, cfg.r);

    let mut ci = ConfidenceInterval::bare(lo, hi, 1.0 - cfg.beta, mu_tilde, Method::UnkVar);
    ci.sigma_tilde_sq = Some(sampling_var);
    ci.t_mu_hat = Some(t_mu);
    ci.t_sigma_hat = Some(t_sigma);
    ci.n1 = Some(plan.n1);
    ci.n2 = Some(plan.n2);
    ci.push_phase("median_search", plan.n1);
    ci.push_phase("sd_search", plan.n2);
    ci.push_phase("average", n3);
    Ok(ci)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Regime {
    BoundedVariance,
    LargeVariance,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RegimeDecision {
    pub decision: Regime,
    pub fraction_estimate: f64,
    pub users_consumed: usize,
}

/// ⌈(2/0.07²)·((e^ε+1)/(e^ε−1))²·ln(4/β)⌉ users for the regime check.
pub fn detection_sample_size(epsilon: f64, beta: f64) -> Result<u64> {
    check_epsilon(epsilon)?;
    check_half_open("beta", beta)?;
    let c = rr_coefficient(epsilon);
    ceil_count(2.0 / (REGIME_ACCURACY * REGIME_ACCURACY) * c * c * (4.0 / beta).ln())
}

/// Estimates P[|X| ≤ 2R] on the next m users; bounded variance iff the
/// estimate is at least 0.76.
pub fn detect_regime(pool: &mut UserPool, epsilon: f64, beta: f64, r: f64, rng: &mut RngStream) -> Result<RegimeDecision> {
    if !(r > 0.0 && r.is_finite()) {
        return Err(config(format!("R must be positive, got {r}")));
    }
    let m = detection_sample_size(epsilon, beta)?;
    if (pool.remaining() as u64) < m {
        return Err(Error::InsufficientSamples { required: m, available: pool.remaining() as u64 });
    }
    let m = m as usize;
    let values = pool.take(m, MechanismUse::new(MechanismKind::RandomizedResponse, epsilon, 0.0))?;
    let fraction_estimate = rr_fraction_of(&values, |x| x.abs() <= 2.0 * r, epsilon, rng);
    let decision = if fraction_estimate >= REGIME_THRESHOLD {
        Regime::BoundedVariance
    } else {
        Regime::LargeVariance
    };
    Ok(RegimeDecision { decision, fraction_estimate, users_consumed: m })
}

/// B = √((1/n)·((e^ε+1)/(e^ε−1))²·ln(8/β)).
pub fn large_var_b(n: usize, epsilon: f64, beta: f64) -> f64 {
    let c = rr_coefficient(epsilon);
    (c * c * (8.0 / beta).ln() / n as f64).sqrt()
}

/// The interpolation step's threshold on p̃₊ − p̃₋; below it the estimator
/// returns [−R, R].
pub fn large_var_guard(n: usize, epsilon: f64, beta: f64) -> f64 {
    800.0 * large_var_b(n, epsilon, beta)
}

/// Mean and σ of N(μ, σ²) recovered from P[X ≤ −R] and P[X ≤ R]. Returns
/// (μ̃, t₊ − t₋) with σ = 2R/(t₊ − t₋).
pub fn interpolate_from_tails(p_minus: f64, p_plus: f64, r: f64) -> Result<(f64, f64)> {
    let t_minus = phi_inv(p_minus.clamp(CLAMP_EPS, 1.0 - CLAMP_EPS));
    let t_plus = phi_inv(p_plus.clamp(CLAMP_EPS, 1.0 - CLAMP_EPS));
    let spread = t_plus - t_minus;
    if !(spread > 0.0) {
        return Err(Error::EstimationFailure(format!(
            "tail estimates {p_minus} and {p_plus} do not determine a scale"
        )));
    }
    Ok((r * (-t_plus - t_minus) / spread, spread))
}

/// Confidence interval for μ ∈ [−R, R] when σ > R, from every remaining user:
/// the first ⌈n/2⌉ estimate P[X ≤ −R] and the rest P[X ≤ R].
pub fn large_var(pool: &mut UserPool, epsilon: f64, r: f64, beta: f64, rng: &mut RngStream) -> Result<ConfidenceInterval> {
    check_epsilon(epsilon)?;
    check_half_open("beta", beta).map_err(|e| config(e.to_string()))?;
    if !(r > 0.0 && r.is_finite()) {
        return Err(config(format!("R must be positive, got {r}")));
    }
    let n = pool.remaining();
    if n < 2 {
        return Err(Error::InsufficientSamples { required: 2, available: n as u64 });
    }
    let (first, second) = (n.div_ceil(2), n / 2);
    let usage = MechanismUse::new(MechanismKind::RandomizedResponse, epsilon, 0.0);
    let lower = pool.take(first, usage)?;
    let p_minus = rr_fraction_of(&lower, |x| x <= -r, epsilon, rng);
    let upper = pool.take(second, usage)?;
    let p_plus = rr_fraction_of(&upper, |x| x <= r, epsilon, rng);

    let b = large_var_b(n, epsilon, beta);
    let guard_fired = p_plus - p_minus < 800.0 * b;
    let mut ci = if guard_fired {
        ConfidenceInterval::bare(-r, r, 1.0 - beta, 0.0, Method::TrivialFullRange)
    } else {
        let (mu_tilde, spread) = interpolate_from_tails(p_minus, p_plus, r)?;
        let tau = 9.0 * r * b / spread;
        ConfidenceInterval::bare(mu_tilde - tau, mu_tilde + tau, 1.0 - beta, mu_tilde, Method::LargeVar)
    };
    ci.guard_fired = Some(guard_fired);
    ci.push_phase("lower_tail", first);
    ci.push_phase("upper_tail", second);
    Ok(ci)
}

/// Width bound 20000·σ·((e^ε+1)/(e^ε−1))·√(ln(8/β)/n) of the large-variance interval.
pub fn large_var_width_bound(sigma: f64, n: usize, epsilon: f64, beta: f64) -> f64 {
    20_000.0 * sigma * rr_coefficient(epsilon) * ((8.0 / beta).ln() / n as f64).sqrt()
}

/// Parameters of [`estimate_mean_auto`]; σ_max is fixed to 2R.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AutoConfig {
    pub sigma_min: f64,
    pub beta: f64,
    pub privacy: PrivacyParams,
    pub r: f64,
}

impl AutoConfig {
    pub fn bounded(&self) -> Result<UnknownVarConfig> {
        UnknownVarConfig::new(self.sigma_min, 2.0 * self.r, self.beta, self.privacy, self.r)
    }
}

/// Regime check on a dedicated prefix, then [`unk_var`] (σ_max = 2R) or
/// [`large_var`] on the remaining users.
pub fn estimate_mean_auto(pool: &mut UserPool, cfg: &AutoConfig, rng: &mut RngStream) -> Result<ConfidenceInterval> {
    let bounded = cfg.bounded()?;
    let regime = detect_regime(pool, cfg.privacy.epsilon(), cfg.beta, cfg.r, rng)?;
    let mut ci = match regime.decision {
        Regime::BoundedVariance => unk_var(pool, &bounded, rng)?,
        Regime::LargeVariance => large_var(pool, cfg.privacy.epsilon(), cfg.r, cfg.beta, rng)?,
    };
    ci.regime_fraction = Some(regime.fraction_estimate);
    ci.users_per_phase.insert(
        0,
        crate::interval::PhaseUsers { phase: "regime_check".into(), users: regime.users_consumed },
    );
    Ok(ci)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::normal_math::sample_gaussian;
    use proptest::prelude::*;

    fn privacy(eps: f64) -> PrivacyParams {
        PrivacyParams::new(eps, 1e-6).unwrap()
    }

    fn gaussian_pool(seed: u64, n: usize, mu: f64, sigma: f64) -> UserPool {
        let mut rng = RngStream::new(seed, 0xda7a);
        UserPool::new((0..n).map(|_| sample_gaussian(&mut rng, mu, sigma).unwrap()).collect())
    }

    #[test]
    fn plan_matches_formulas() {
        let cfg = UnknownVarConfig::new(0.25, 200.0, 0.05, privacy(1.0), 100.0).unwrap();
        let plan = unk_var_plan(&cfg).unwrap();
        assert_eq!(plan.t_med, 12);
        assert_eq!(plan.t_sd, 13);
        let e = std::f64::consts::E;
        let c2 = ((e + 1.0) / (e - 1.0)).powi(2);
        let n1 = 12.0 / (0.098f64 * 0.098) * c2 * (16.0 * 12.0 / 0.05f64).ln();
        let n2 = 13.0 / (0.052f64 * 0.052) * c2 * (16.0 * 13.0 / 0.05f64).ln();
        assert_eq!(plan.n1, n1.ceil() as usize);
        assert_eq!(plan.n2, n2.ceil() as usize);
        let l = 6400f64.log2();
        let agg = 1500.0 * l * c2 * (16.0 * l / 0.05).ln();
        assert_eq!(plan.aggregate_gate, agg.ceil() as u64);
        assert_eq!(plan.required(), plan.aggregate_gate);
        assert!(plan.n2 >= plan.n1);
    }

    #[test]
    fn config_validation() {
        assert!(UnknownVarConfig::new(0.0, 1.0, 0.05, privacy(1.0), 1.0).is_err());
        assert!(UnknownVarConfig::new(2.0, 1.0, 0.05, privacy(1.0), 1.0).is_err());
        assert!(UnknownVarConfig::new(0.1, 2.5, 0.05, privacy(1.0), 1.0).is_err());
        assert!(UnknownVarConfig::new(0.1, 2.0, 0.05, PrivacyParams::pure(1.0).unwrap(), 1.0).is_err());
        assert!(UnknownVarConfig::new(0.1, 2.0, 0.05, privacy(1.0), 1.0).is_ok());
    }

    #[test]
    fn unk_var_refuses_small_pool() {
        let cfg = UnknownVarConfig::new(0.25, 200.0, 0.05, privacy(1.0), 100.0).unwrap();
        let mut pool = gaussian_pool(1, 10_000, 10.0, 2.0);
        let err = unk_var(&mut pool, &cfg, &mut RngStream::new(0, 0)).unwrap_err();
        assert!(matches!(err, Error::InsufficientSamples { .. }));
        assert_eq!(pool.remaining(), 10_000);
    }

    #[test]
    fn unk_var_phases_are_disjoint_and_ordered() {
        // large ε keeps the searches accurate with a small pool
        let cfg = UnknownVarConfig::new(0.5, 20.0, 0.1, privacy(8.0), 10.0).unwrap();
        let plan = unk_var_plan(&cfg).unwrap();
        let n = plan.required() as usize + 500;
        let mut pool = gaussian_pool(4, n, 2.0, 1.5);
        let ci = unk_var(&mut pool, &cfg, &mut RngStream::new(4, 1)).unwrap();
        assert_eq!(ci.method, Method::UnkVar);
        assert_eq!(ci.users_consumed(), n);
        assert!(ci.contains(2.0), "{ci:?}");
        let gap = ci.t_sigma_hat.unwrap() - ci.t_mu_hat.unwrap();
        assert!((0.75..=2.25).contains(&gap), "gap {gap}");

        let audit = pool.audit();
        audit.verify_one_shot().unwrap();
        let records: Vec<_> = audit.records().collect();
        assert!(records.windows(2).all(|w| w[0].user_index < w[1].user_index));
        // the Gaussian phase starts right after the two search budgets
        let first_gauss = records.iter().find(|r| r.mechanism_name == "gaussian").unwrap();
        assert_eq!(first_gauss.user_index, plan.n1 + plan.n2);
        assert_eq!(pool.discarded() + audit.len(), n);
    }

    #[test]
    fn detection_sample_size_formula() {
        let e = std::f64::consts::E;
        let want = 2.0 / 0.0049 * ((e + 1.0) / (e - 1.0)).powi(2) * 80f64.ln();
        assert_eq!(detection_sample_size(1.0, 0.05).unwrap(), want.ceil() as u64);
        assert!(detection_sample_size(0.0, 0.05).is_err());
    }

    #[test]
    fn point_mass_is_bounded_variance() {
        let m = detection_sample_size(1.0, 0.05).unwrap() as usize;
        let mut pool = UserPool::new(vec![0.0; m]);
        let d = detect_regime(&mut pool, 1.0, 0.05, 1.0, &mut RngStream::new(2, 2)).unwrap();
        assert_eq!(d.decision, Regime::BoundedVariance);
        assert!((d.fraction_estimate - 1.0).abs() < 0.07);
        assert_eq!(d.users_consumed, m);
        assert_eq!(pool.remaining(), 0);
        assert!(detect_regime(&mut pool, 1.0, 0.05, 1.0, &mut RngStream::new(2, 2)).is_err());
    }

    #[test]
    fn tiny_pool_fires_guard() {
        let mut pool = gaussian_pool(3, 100, 0.3, 5.0);
        let ci = large_var(&mut pool, 1.0, 1.0, 0.05, &mut RngStream::new(3, 3)).unwrap();
        assert_eq!(ci.method, Method::TrivialFullRange);
        assert_eq!((ci.lo, ci.hi), (-1.0, 1.0));
        assert_eq!(ci.guard_fired, Some(true));
        assert_eq!(ci.users_per_phase[0].users, 50);
    }

    #[test]
    fn odd_pool_split() {
        let mut pool = gaussian_pool(3, 101, 0.3, 5.0);
        let ci = large_var(&mut pool, 1.0, 1.0, 0.05, &mut RngStream::new(3, 3)).unwrap();
        assert_eq!(ci.users_per_phase[0].users, 51);
        assert_eq!(ci.users_per_phase[1].users, 50);
    }

    #[test]
    fn interpolation_branch_with_huge_epsilon() {
        // c → 1 makes B small enough for the guard to pass at moderate n
        let n = 12_000_000;
        let (r, mu, sigma) = (1.0, 0.3, 1.2);
        let mass = phi((r - mu) / sigma) - phi((-r - mu) / sigma);
        assert!(large_var_guard(n, 30.0, 0.05) < mass - 0.02);
        let mut pool = gaussian_pool(9, n, mu, sigma);
        let ci = large_var(&mut pool, 30.0, r, 0.05, &mut RngStream::new(9, 9)).unwrap();
        assert_eq!(ci.method, Method::LargeVar);
        assert!(ci.contains(mu));
        assert!(ci.width() <= large_var_width_bound(sigma, n, 30.0, 0.05));
    }

    #[test]
    fn interpolation_rejects_degenerate_tails() {
        assert!(interpolate_from_tails(1.0, 1.0, 1.0).is_err());
        assert!(interpolate_from_tails(0.6, 0.4, 1.0).is_err());
        let (m, s) = interpolate_from_tails(-0.2, 1.3, 1.0).unwrap();
        assert!(m.abs() < 1e-9 && s > 12.0);
    }

    #[test]
    fn guard_examples() {
        let b = large_var_b(100, 1.0, 0.05);
        assert!(800.0 * b > 2.0);
        assert_eq!(large_var_guard(100, 1.0, 0.05), 800.0 * b);
    }

    proptest! {
        #[test]
        fn noiseless_interpolation_inverts(mu_frac in -1.0f64..1.0, sigma_frac in 1.01f64..10.0, r in 0.1f64..1000.0) {
            let (mu, sigma) = (mu_frac * r, sigma_frac * r);
            let p_minus = phi((-r - mu) / sigma);
            let p_plus = phi((r - mu) / sigma);
            let (m, spread) = interpolate_from_tails(p_minus, p_plus, r).unwrap();
            prop_assert!((m - mu).abs() <= 1e-6 * r);
            prop_assert!((2.0 * r / spread - sigma).abs() <= 1e-6 * sigma);
        }

        #[test]
        fn guard_decreases_in_n_and_epsilon(n in 2usize..10_000_000, extra in 1usize..1_000_000,
                                            eps in 0.05f64..10.0, d_eps in 0.01f64..5.0, beta in 0.001f64..0.49) {
            prop_assert!(large_var_guard(n + extra, eps, beta) < large_var_guard(n, eps, beta));
            prop_assert!(large_var_guard(n, eps + d_eps, beta) < large_var_guard(n, eps, beta));
        }
    }

    #[test]
    fn auto_dispatch_accounting() {
        let cfg = AutoConfig { sigma_min: 0.5, beta: 0.1, privacy: privacy(1.0), r: 10.0 };
        let mut pool = gaussian_pool(12, 300_000, 1.0, 50.0);
        let ci = estimate_mean_auto(&mut pool, &cfg, &mut RngStream::new(12, 0)).unwrap();
        assert!(matches!(ci.method, Method::LargeVar | Method::TrivialFullRange));
        let m = detection_sample_size(1.0, 0.1).unwrap() as usize;
        assert_eq!(ci.users_per_phase[0].users, m);
        assert_eq!(ci.users_consumed(), 300_000);
        assert_eq!(pool.audit().len(), 300_000);
        assert!(ci.regime_fraction.unwrap() < REGIME_THRESHOLD);
    }
}
