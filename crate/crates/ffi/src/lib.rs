//! C ABI over `ldp_meanest`.
//!
//! Pools and random streams are opaque heap handles created by `*_new` and
//! released by `*_free`. Every fallible call returns an [`LdpStatus`] and
//! writes its result through an out-pointer; on failure a description is
//! available from [`ldp_last_error_message`] on the same thread.
//!
//! # Safety
//!
//! Pointers passed in must be valid for the access described on each
//! function, and handles must come from this library and not be used after
//! they are freed.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use ldp_meanest::interval::{ConfidenceInterval, Method};
use ldp_meanest::mean_known::{self, KnownVarConfig, Phase1Sizing, Phase2Noise};
use ldp_meanest::mean_unknown::{self, AutoConfig, Regime, UnknownVarConfig};
use ldp_meanest::mechanisms::{bf_sample_size, rr_sample_size, PrivacyParams, UserPool};
use ldp_meanest::normal_math::{self, RngStream};
use ldp_meanest::quantile::{self, QuantileQuery, Termination};
use ldp_meanest::Error;

/// Result code of every fallible call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LdpStatus {
    Ok = 0,
    Domain = 1,
    Config = 2,
    InsufficientSamples = 3,
    PoolExhausted = 4,
    AlreadyConsumed = 5,
    DimensionMismatch = 6,
    EstimationFailure = 7,
    Contract = 8,
    NullPointer = 9,
    Panic = 10,
    Io = 11,
}

fn status_of(e: &Error) -> LdpStatus {
    match e {
        Error::Domain(_) => LdpStatus::Domain,
        Error::Config(_) => LdpStatus::Config,
        Error::InsufficientSamples { .. } => LdpStatus::InsufficientSamples,
        Error::PoolExhausted { .. } => LdpStatus::PoolExhausted,
        Error::AlreadyConsumed { .. } => LdpStatus::AlreadyConsumed,
        Error::DimensionMismatch { .. } => LdpStatus::DimensionMismatch,
        Error::EstimationFailure(_) => LdpStatus::EstimationFailure,
        Error::Contract(_) => LdpStatus::Contract,
        Error::SearchIteration { source, .. } => status_of(source),
    }
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(c));
}

enum Failure {
    Lib(Error),
    Null(&'static str),
    Io(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

type FfiResult<T> = Result<T, Failure>;

/// Runs `f`, converting errors and panics into a status code.
fn guard<F: FnOnce() -> FfiResult<()>>(f: F) -> LdpStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => LdpStatus::Ok,
        Ok(Err(Failure::Lib(e))) => {
            set_last_error(e.to_string());
            status_of(&e)
        }
        Ok(Err(Failure::Null(what))) => {
            set_last_error(format!("null pointer passed for `{what}`"));
            LdpStatus::NullPointer
        }
        Ok(Err(Failure::Io(msg))) => {
            set_last_error(msg);
            LdpStatus::Io
        }
        Err(_) => {
            set_last_error("internal panic".to_string());
            LdpStatus::Panic
        }
    }
}

unsafe fn deref<'a, T>(p: *const T, what: &'static str) -> FfiResult<&'a T> {
    p.as_ref().ok_or(Failure::Null(what))
}

unsafe fn deref_mut<'a, T>(p: *mut T, what: &'static str) -> FfiResult<&'a mut T> {
    p.as_mut().ok_or(Failure::Null(what))
}

unsafe fn write_out<T>(out: *mut T, value: T) -> FfiResult<()> {
    if out.is_null() {
        return Err(Failure::Null("out"));
    }
    out.write(value);
    Ok(())
}

/// Message of the last failed call on this thread, or NULL. The pointer is
/// valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn ldp_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Frees a string returned by this library.
///
/// # Safety
/// `s` must come from this library (or be NULL) and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn ldp_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

// ---------------------------------------------------------------- handles

/// Opaque one-shot user pool.
pub struct LdpPool(UserPool);

/// Opaque seeded random stream.
pub struct LdpRng(RngStream);

/// Copies `len` values into a new pool. Returns NULL if `values` is NULL
/// while `len > 0`.
///
/// # Safety
/// `values` must point to `len` readable doubles.
#[no_mangle]
pub unsafe extern "C" fn ldp_pool_new(values: *const f64, len: usize) -> *mut LdpPool {
    if values.is_null() && len > 0 {
        set_last_error("null pointer passed for `values`".into());
        return ptr::null_mut();
    }
    let data = if len == 0 { Vec::new() } else { std::slice::from_raw_parts(values, len).to_vec() };
    Box::into_raw(Box::new(LdpPool(UserPool::new(data))))
}

/// # Safety
/// `pool` must come from [`ldp_pool_new`] (or be NULL).
#[no_mangle]
pub unsafe extern "C" fn ldp_pool_free(pool: *mut LdpPool) {
    if !pool.is_null() {
        drop(Box::from_raw(pool));
    }
}

/// Unconsumed users left in the pool (0 for NULL).
///
/// # Safety
/// `pool` must be a live handle or NULL.
#[no_mangle]
pub unsafe extern "C" fn ldp_pool_remaining(pool: *const LdpPool) -> usize {
    pool.as_ref().map_or(0, |p| p.0.remaining())
}

/// Audit log as JSON lines, one `{user_index, mechanism_name, epsilon, delta}`
/// object per consumed user. Free the result with [`ldp_string_free`].
///
/// # Safety
/// `pool` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ldp_pool_audit_json(pool: *const LdpPool, out: *mut *mut c_char) -> LdpStatus {
    guard(|| {
        let pool = deref(pool, "pool")?;
        let mut buf = Vec::new();
        pool.0.audit().write_json_lines(&mut buf).map_err(|e| Failure::Io(e.to_string()))?;
        let s = CString::new(buf).map_err(|e| Failure::Io(e.to_string()))?;
        write_out(out, s.into_raw())
    })
}

#[no_mangle]
pub extern "C" fn ldp_rng_new(seed: u64, stream_id: u64) -> *mut LdpRng {
    Box::into_raw(Box::new(LdpRng(RngStream::new(seed, stream_id))))
}

/// # Safety
/// `rng` must come from [`ldp_rng_new`] (or be NULL).
#[no_mangle]
pub unsafe extern "C" fn ldp_rng_free(rng: *mut LdpRng) {
    if !rng.is_null() {
        drop(Box::from_raw(rng));
    }
}

/// Fills `out` with `len` draws from N(mu, sigma²).
///
/// # Safety
/// `rng` must be a live handle; `out` must point to `len` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn ldp_sample_gaussian(rng: *mut LdpRng, mu: f64, sigma: f64, out: *mut f64, len: usize) -> LdpStatus {
    guard(|| {
        let rng = deref_mut(rng, "rng")?;
        if out.is_null() && len > 0 {
            return Err(Failure::Null("out"));
        }
        for i in 0..len {
            out.add(i).write(normal_math::sample_gaussian(&mut rng.0, mu, sigma)?);
        }
        Ok(())
    })
}

// ---------------------------------------------------------------- math

/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ldp_std_normal_cdf(x: f64, out: *mut f64) -> LdpStatus {
    guard(|| write_out(out, normal_math::std_normal_cdf(x)?))
}

/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ldp_std_normal_inv_cdf(p: f64, out: *mut f64) -> LdpStatus {
    guard(|| write_out(out, normal_math::std_normal_inv_cdf(p)?))
}

/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ldp_rr_sample_size(alpha: f64, beta: f64, epsilon: f64, out: *mut u64) -> LdpStatus {
    guard(|| write_out(out, rr_sample_size(alpha, beta, epsilon)?))
}

/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ldp_bf_sample_size(alpha: f64, beta: f64, epsilon: f64, d: usize, out: *mut u64) -> LdpStatus {
    guard(|| write_out(out, bf_sample_size(alpha, beta, epsilon, d)?))
}

/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ldp_quantile_sample_size(
    lambda: f64,
    beta: f64,
    epsilon: f64,
    iterations: usize,
    out: *mut u64,
) -> LdpStatus {
    guard(|| write_out(out, quantile::required_sample_size(lambda, beta, epsilon, iterations)?))
}

/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ldp_quantile_iterations(q_min: f64, q_max: f64, tau: f64, out: *mut usize) -> LdpStatus {
    guard(|| write_out(out, quantile::iterations_for(q_min, q_max, tau)?))
}

// ---------------------------------------------------------------- intervals

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LdpMethod {
    KnownBf = 0,
    UnkVar = 1,
    LargeVar = 2,
    TrivialFullRange = 3,
}

/// Confidence interval. Fields that do not apply to the producing method
/// are NaN (reals), 0 (counts) or -1 (`guard_fired`).
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LdpInterval {
    pub lo: f64,
    pub hi: f64,
    pub confidence: f64,
    pub mu_tilde: f64,
    pub sampling_var: f64,
    pub method: LdpMethod,
    pub n1: usize,
    pub n2: usize,
    pub j_star: i64,
    pub t_mu_hat: f64,
    pub t_sigma_hat: f64,
    pub regime_fraction: f64,
    pub guard_fired: i32,
    pub users_consumed: usize,
}

impl From<&ConfidenceInterval> for LdpInterval {
    fn from(ci: &ConfidenceInterval) -> Self {
        Self {
            lo: ci.lo,
            hi: ci.hi,
            confidence: ci.confidence,
            mu_tilde: ci.mu_tilde,
            sampling_var: ci.sigma_tilde_sq.unwrap_or(f64::NAN),
            method: match ci.method {
                Method::KnownBF => LdpMethod::KnownBf,
                Method::UnkVar => LdpMethod::UnkVar,
                Method::LargeVar => LdpMethod::LargeVar,
                Method::TrivialFullRange => LdpMethod::TrivialFullRange,
            },
            n1: ci.n1.unwrap_or(0),
            n2: ci.n2.unwrap_or(0),
            j_star: ci.j_star.unwrap_or(0),
            t_mu_hat: ci.t_mu_hat.unwrap_or(f64::NAN),
            t_sigma_hat: ci.t_sigma_hat.unwrap_or(f64::NAN),
            regime_fraction: ci.regime_fraction.unwrap_or(f64::NAN),
            guard_fired: ci.guard_fired.map_or(-1, i32::from),
            users_consumed: ci.users_consumed(),
        }
    }
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LdpPhase1 {
    Strict = 0,
    Relaxed = 1,
    /// Uses `phase1_share` of the pool.
    Share = 2,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LdpNoise {
    Gaussian = 0,
    Laplace = 1,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LdpKnownConfig {
    pub sigma: f64,
    pub beta: f64,
    pub epsilon: f64,
    pub delta: f64,
    pub r: f64,
    pub phase1: LdpPhase1,
    pub phase1_share: f64,
    pub noise: LdpNoise,
}

impl TryFrom<&LdpKnownConfig> for KnownVarConfig {
    type Error = Error;

    fn try_from(c: &LdpKnownConfig) -> Result<Self, Error> {
        let cfg = KnownVarConfig {
            sigma: c.sigma,
            beta: c.beta,
            privacy: PrivacyParams::new(c.epsilon, c.delta)?,
            r: c.r,
            phase1: match c.phase1 {
                LdpPhase1::Strict => Phase1Sizing::Strict,
                LdpPhase1::Relaxed => Phase1Sizing::Relaxed,
                LdpPhase1::Share => Phase1Sizing::Share(c.phase1_share),
            },
            noise: match c.noise {
                LdpNoise::Gaussian => Phase2Noise::Gaussian,
                LdpNoise::Laplace => Phase2Noise::Laplace,
            },
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

/// # Safety
/// `cfg` must be readable and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ldp_known_min_sample_size(cfg: *const LdpKnownConfig, out: *mut u64) -> LdpStatus {
    guard(|| {
        let cfg = KnownVarConfig::try_from(deref(cfg, "cfg")?)?;
        write_out(out, mean_known::min_sample_size_known(&cfg)?)
    })
}

/// Known-σ confidence interval from every remaining user of `pool`.
///
/// # Safety
/// Handles must be live; `cfg` readable; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ldp_known_bf(
    pool: *mut LdpPool,
    cfg: *const LdpKnownConfig,
    rng: *mut LdpRng,
    out: *mut LdpInterval,
) -> LdpStatus {
    guard(|| {
        let cfg = KnownVarConfig::try_from(deref(cfg, "cfg")?)?;
        let (pool, rng) = (deref_mut(pool, "pool")?, deref_mut(rng, "rng")?);
        let ci = mean_known::known_bf(&mut pool.0, &cfg, &mut rng.0)?;
        write_out(out, LdpInterval::from(&ci))
    })
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LdpZTestResult {
    pub mu_tilde: f64,
    pub sampling_sd: f64,
    pub z_score: f64,
    pub p_value: f64,
    pub reject: bool,
    pub n1: usize,
    pub n2: usize,
}

/// Two-sided private Z-test of H0: mu = `mu0`.
///
/// # Safety
/// Handles must be live; `cfg` readable; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ldp_ztest(
    pool: *mut LdpPool,
    cfg: *const LdpKnownConfig,
    mu0: f64,
    significance: f64,
    rng: *mut LdpRng,
    out: *mut LdpZTestResult,
) -> LdpStatus {
    guard(|| {
        let cfg = KnownVarConfig::try_from(deref(cfg, "cfg")?)?;
        let (pool, rng) = (deref_mut(pool, "pool")?, deref_mut(rng, "rng")?);
        let t = mean_known::ztest(&mut pool.0, &cfg, mu0, significance, &mut rng.0)?;
        write_out(
            out,
            LdpZTestResult {
                mu_tilde: t.mu_tilde,
                sampling_sd: t.sampling_sd,
                z_score: t.z_score,
                p_value: t.p_value,
                reject: t.reject,
                n1: t.n1,
                n2: t.n2,
            },
        )
    })
}

// ---------------------------------------------------------------- quantiles

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LdpQuantileQuery {
    pub p_star: f64,
    pub q_min: f64,
    pub q_max: f64,
    pub lambda: f64,
    pub iterations: usize,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LdpTermination {
    EstimateWithinLambda = 0,
    IterationBudgetExhausted = 1,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LdpQuantileResult {
    pub threshold: f64,
    pub iterations_used: usize,
    pub terminated_by: LdpTermination,
    pub bracket_lo: f64,
    pub bracket_hi: f64,
    pub users_per_iteration: usize,
}

/// Private quantile search over `budget` users of `pool`.
///
/// # Safety
/// Handles must be live; `query` readable; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ldp_bin_rr(
    pool: *mut LdpPool,
    budget: usize,
    query: *const LdpQuantileQuery,
    epsilon: f64,
    rng: *mut LdpRng,
    out: *mut LdpQuantileResult,
) -> LdpStatus {
    guard(|| {
        let q = deref(query, "query")?;
        let query = QuantileQuery::new(q.p_star, q.q_min, q.q_max, q.lambda, q.iterations)?;
        let (pool, rng) = (deref_mut(pool, "pool")?, deref_mut(rng, "rng")?);
        let r = quantile::bin_rr(&mut pool.0, budget, &query, epsilon, &mut rng.0)?;
        write_out(
            out,
            LdpQuantileResult {
                threshold: r.threshold,
                iterations_used: r.iterations_used,
                terminated_by: match r.terminated_by {
                    Termination::EstimateWithinLambda => LdpTermination::EstimateWithinLambda,
                    Termination::IterationBudgetExhausted => LdpTermination::IterationBudgetExhausted,
                },
                bracket_lo: r.bracket[0],
                bracket_hi: r.bracket[1],
                users_per_iteration: r.users_per_iteration,
            },
        )
    })
}

// ---------------------------------------------------------------- unknown variance

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LdpUnknownConfig {
    pub sigma_min: f64,
    pub sigma_max: f64,
    pub beta: f64,
    pub epsilon: f64,
    pub delta: f64,
    pub r: f64,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LdpRegime {
    BoundedVariance = 0,
    LargeVariance = 1,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LdpRegimeDecision {
    pub regime: LdpRegime,
    pub fraction_estimate: f64,
    pub users_consumed: usize,
}

/// Unknown-σ confidence interval from every remaining user of `pool`.
///
/// # Safety
/// Handles must be live; `cfg` readable; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ldp_unk_var(
    pool: *mut LdpPool,
    cfg: *const LdpUnknownConfig,
    rng: *mut LdpRng,
    out: *mut LdpInterval,
) -> LdpStatus {
    guard(|| {
        let c = deref(cfg, "cfg")?;
        let cfg = UnknownVarConfig::new(c.sigma_min, c.sigma_max, c.beta, PrivacyParams::new(c.epsilon, c.delta)?, c.r)?;
        let (pool, rng) = (deref_mut(pool, "pool")?, deref_mut(rng, "rng")?);
        let ci = mean_unknown::unk_var(&mut pool.0, &cfg, &mut rng.0)?;
        write_out(out, LdpInterval::from(&ci))
    })
}

/// Minimum pool size accepted by [`ldp_unk_var`].
///
/// # Safety
/// `cfg` readable; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ldp_unk_var_min_sample_size(cfg: *const LdpUnknownConfig, out: *mut u64) -> LdpStatus {
    guard(|| {
        let c = deref(cfg, "cfg")?;
        let cfg = UnknownVarConfig::new(c.sigma_min, c.sigma_max, c.beta, PrivacyParams::new(c.epsilon, c.delta)?, c.r)?;
        write_out(out, mean_unknown::unk_var_plan(&cfg)?.required())
    })
}

/// Very-large-variance interval from every remaining user of `pool`.
///
/// # Safety
/// Handles must be live; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ldp_large_var(
    pool: *mut LdpPool,
    epsilon: f64,
    r: f64,
    beta: f64,
    rng: *mut LdpRng,
    out: *mut LdpInterval,
) -> LdpStatus {
    guard(|| {
        let (pool, rng) = (deref_mut(pool, "pool")?, deref_mut(rng, "rng")?);
        let ci = mean_unknown::large_var(&mut pool.0, epsilon, r, beta, &mut rng.0)?;
        write_out(out, LdpInterval::from(&ci))
    })
}

/// Regime check on the next users of `pool`.
///
/// # Safety
/// Handles must be live; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ldp_detect_regime(
    pool: *mut LdpPool,
    epsilon: f64,
    beta: f64,
    r: f64,
    rng: *mut LdpRng,
    out: *mut LdpRegimeDecision,
) -> LdpStatus {
    guard(|| {
        let (pool, rng) = (deref_mut(pool, "pool")?, deref_mut(rng, "rng")?);
        let d = mean_unknown::detect_regime(&mut pool.0, epsilon, beta, r, &mut rng.0)?;
        write_out(
            out,
            LdpRegimeDecision {
                regime: match d.decision {
                    Regime::BoundedVariance => LdpRegime::BoundedVariance,
                    Regime::LargeVariance => LdpRegime::LargeVariance,
                },
                fraction_estimate: d.fraction_estimate,
                users_consumed: d.users_consumed,
            },
        )
    })
}

/// Regime check followed by the matching estimator (σ_max = 2R).
///
/// # Safety
/// Handles must be live; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ldp_estimate_mean_auto(
    pool: *mut LdpPool,
    sigma_min: f64,
    beta: f64,
    epsilon: f64,
    delta: f64,
    r: f64,
    rng: *mut LdpRng,
    out: *mut LdpInterval,
) -> LdpStatus {
    guard(|| {
        let cfg = AutoConfig { sigma_min, beta, privacy: PrivacyParams::new(epsilon, delta)?, r };
        let (pool, rng) = (deref_mut(pool, "pool")?, deref_mut(rng, "rng")?);
        let ci = mean_unknown::estimate_mean_auto(&mut pool.0, &cfg, &mut rng.0)?;
        write_out(out, LdpInterval::from(&ci))
    })
}

/// JSON rendering of an interval with the same field names as the CLI.
/// Free the result with [`ldp_string_free`].
///
/// # Safety
/// `ci` readable; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ldp_interval_json(ci: *const LdpInterval, out: *mut *mut c_char) -> LdpStatus {
    guard(|| {
        let ci = deref(ci, "ci")?;
        let opt = |x: f64| (!x.is_nan()).then_some(x);
        let method = match ci.method {
            LdpMethod::KnownBf => Method::KnownBF,
            LdpMethod::UnkVar => Method::UnkVar,
            LdpMethod::LargeVar => Method::LargeVar,
            LdpMethod::TrivialFullRange => Method::TrivialFullRange,
        };
        let mut v = serde_json::json!({
            "lo": ci.lo,
            "hi": ci.hi,
            "confidence": ci.confidence,
            "mu_tilde": ci.mu_tilde,
            "method": method.name(),
        });
        let obj = v.as_object_mut().expect("object literal");
        let mut put = |k: &str, x: Option<serde_json::Value>| {
            if let Some(x) = x {
                obj.insert(k.to_string(), x);
            }
        };
        put("sampling_var", opt(ci.sampling_var).map(Into::into));
        put("n1", (ci.n1 > 0).then(|| ci.n1.into()));
        put("n2", (ci.n2 > 0).then(|| ci.n2.into()));
        put("j_star", (method == Method::KnownBF).then(|| ci.j_star.into()));
        put("t_mu_hat", opt(ci.t_mu_hat).map(Into::into));
        put("t_sigma_hat", opt(ci.t_sigma_hat).map(Into::into));
        put("regime_fraction", opt(ci.regime_fraction).map(Into::into));
        put("guard_fired", (ci.guard_fired >= 0).then(|| (ci.guard_fired == 1).into()));
        let s = CString::new(v.to_string()).map_err(|e| Failure::Io(e.to_string()))?;
        write_out(out, s.into_raw())
    })
}
