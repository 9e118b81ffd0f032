use std::ffi::CStr;
use std::process::Command;
use std::ptr;

use ldp_meanest_ffi::*;

fn last_error() -> String {
    let p = ldp_last_error_message();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

fn gaussian_pool(seed: u64, mu: f64, sigma: f64, n: usize) -> *mut LdpPool {
    let rng = ldp_rng_new(seed, 0);
    let mut data = vec![0.0; n];
    let st = unsafe { ldp_sample_gaussian(rng, mu, sigma, data.as_mut_ptr(), n) };
    assert_eq!(st, LdpStatus::Ok);
    unsafe { ldp_rng_free(rng) };
    unsafe { ldp_pool_new(data.as_ptr(), n) }
}

fn known_cfg() -> LdpKnownConfig {
    LdpKnownConfig {
        sigma: 1.0,
        beta: 0.05,
        epsilon: 1.5,
        delta: 1e-9,
        r: 50.0,
        phase1: LdpPhase1::Share,
        phase1_share: 0.2,
        noise: LdpNoise::Gaussian,
    }
}

#[test]
fn normal_math_round_trip() {
    let mut p = 0.0;
    let mut x = 0.0;
    unsafe {
        assert_eq!(ldp_std_normal_cdf(1.0, &mut p), LdpStatus::Ok);
        assert_eq!(ldp_std_normal_inv_cdf(p, &mut x), LdpStatus::Ok);
    }
    assert!((p - 0.841_344_746_068_542_9).abs() < 1e-12);
    assert!((x - 1.0).abs() < 1e-9);
}

#[test]
fn domain_errors_set_message() {
    let mut x = 0.0;
    let st = unsafe { ldp_std_normal_inv_cdf(1.5, &mut x) };
    assert_eq!(st, LdpStatus::Domain);
    assert!(!last_error().is_empty());
}

#[test]
fn null_out_pointer_is_reported() {
    let st = unsafe { ldp_std_normal_cdf(0.0, ptr::null_mut()) };
    assert_eq!(st, LdpStatus::NullPointer);
    assert!(last_error().contains("out"));
}

#[test]
fn sample_sizes_are_positive() {
    let (mut a, mut b, mut c) = (0u64, 0u64, 0u64);
    unsafe {
        assert_eq!(ldp_rr_sample_size(0.05, 0.05, 1.0, &mut a), LdpStatus::Ok);
        assert_eq!(ldp_bf_sample_size(0.05, 0.05, 1.0, 11, &mut b), LdpStatus::Ok);
        assert_eq!(ldp_quantile_sample_size(0.05, 0.1, 1.0, 7, &mut c), LdpStatus::Ok);
    }
    assert!(a > 0 && b > a && c > 0);
    let mut m = 0u64;
    assert_eq!(unsafe { ldp_known_min_sample_size(&known_cfg(), &mut m) }, LdpStatus::Ok);
    assert!(m > 0);
}

#[test]
fn known_bf_covers_and_consumes_pool() {
    let pool = gaussian_pool(1, 3.0, 1.0, 50_000);
    let rng = ldp_rng_new(7, 1);
    let mut ci = std::mem::MaybeUninit::<LdpInterval>::uninit();
    let st = unsafe { ldp_known_bf(pool, &known_cfg(), rng, ci.as_mut_ptr()) };
    assert_eq!(st, LdpStatus::Ok);
    let ci = unsafe { ci.assume_init() };
    assert_eq!(ci.method, LdpMethod::KnownBf);
    assert!(ci.lo <= 3.0 && 3.0 <= ci.hi, "{ci:?}");
    assert_eq!(ci.users_consumed, 50_000);
    assert_eq!(ci.guard_fired, -1);
    assert!(ci.t_mu_hat.is_nan());
    assert_eq!(unsafe { ldp_pool_remaining(pool) }, 0);

    let mut json = ptr::null_mut();
    assert_eq!(unsafe { ldp_interval_json(&ci, &mut json) }, LdpStatus::Ok);
    let v: serde_json::Value = serde_json::from_str(unsafe { CStr::from_ptr(json) }.to_str().unwrap()).unwrap();
    assert_eq!(v["method"], "KnownBF");
    assert!(v.get("t_mu_hat").is_none());
    unsafe { ldp_string_free(json) };

    let mut audit = ptr::null_mut();
    assert_eq!(unsafe { ldp_pool_audit_json(pool, &mut audit) }, LdpStatus::Ok);
    let text = unsafe { CStr::from_ptr(audit) }.to_str().unwrap().to_owned();
    assert_eq!(text.lines().count(), 50_000);
    unsafe { ldp_string_free(audit) };

    unsafe {
        ldp_rng_free(rng);
        ldp_pool_free(pool);
    }
}

#[test]
fn small_pool_is_a_precondition_failure() {
    let pool = gaussian_pool(2, 0.0, 1.0, 100);
    let rng = ldp_rng_new(1, 1);
    let mut cfg = known_cfg();
    cfg.phase1 = LdpPhase1::Strict;
    let mut ci = std::mem::MaybeUninit::<LdpInterval>::uninit();
    let st = unsafe { ldp_known_bf(pool, &cfg, rng, ci.as_mut_ptr()) };
    assert_eq!(st, LdpStatus::InsufficientSamples);
    unsafe {
        ldp_rng_free(rng);
        ldp_pool_free(pool);
    }
}

#[test]
fn invalid_config_is_rejected() {
    let pool = gaussian_pool(3, 0.0, 1.0, 1000);
    let rng = ldp_rng_new(1, 1);
    let mut cfg = known_cfg();
    cfg.epsilon = -1.0;
    let mut ci = std::mem::MaybeUninit::<LdpInterval>::uninit();
    let st = unsafe { ldp_known_bf(pool, &cfg, rng, ci.as_mut_ptr()) };
    assert!(matches!(st, LdpStatus::Domain | LdpStatus::Config), "{st:?}");
    unsafe {
        ldp_rng_free(rng);
        ldp_pool_free(pool);
    }
}

#[test]
fn null_handles_are_reported() {
    let mut ci = std::mem::MaybeUninit::<LdpInterval>::uninit();
    let st = unsafe { ldp_known_bf(ptr::null_mut(), &known_cfg(), ptr::null_mut(), ci.as_mut_ptr()) };
    assert_eq!(st, LdpStatus::NullPointer);
    assert_eq!(unsafe { ldp_pool_remaining(ptr::null()) }, 0);
    unsafe {
        ldp_pool_free(ptr::null_mut());
        ldp_rng_free(ptr::null_mut());
        ldp_string_free(ptr::null_mut());
    }
}

#[test]
fn ztest_rejects_far_alternative() {
    let pool = gaussian_pool(4, 1.0, 1.0, 20_000);
    let rng = ldp_rng_new(5, 1);
    let mut out = std::mem::MaybeUninit::<LdpZTestResult>::uninit();
    let mut cfg = known_cfg();
    cfg.beta = 0.01;
    let st = unsafe { ldp_ztest(pool, &cfg, 0.0, 0.05, rng, out.as_mut_ptr()) };
    assert_eq!(st, LdpStatus::Ok, "{}", last_error());
    let out = unsafe { out.assume_init() };
    assert!(out.reject && out.p_value < 0.05);
    assert_eq!(out.n1 + out.n2, 20_000);
    unsafe {
        ldp_rng_free(rng);
        ldp_pool_free(pool);
    }
}

#[test]
fn bin_rr_finds_median() {
    let mut n = 0u64;
    let mut t = 0usize;
    unsafe {
        assert_eq!(ldp_quantile_iterations(-10.0, 20.0, 0.25, &mut t), LdpStatus::Ok);
        assert_eq!(ldp_quantile_sample_size(0.052, 0.1, 1.0, t, &mut n), LdpStatus::Ok);
    }
    let pool = gaussian_pool(6, 2.0, 3.0, n as usize);
    let rng = ldp_rng_new(9, 1);
    let q = LdpQuantileQuery { p_star: 0.5, q_min: -10.0, q_max: 20.0, lambda: 0.052, iterations: t };
    let mut out = std::mem::MaybeUninit::<LdpQuantileResult>::uninit();
    let st = unsafe { ldp_bin_rr(pool, n as usize, &q, 1.0, rng, out.as_mut_ptr()) };
    assert_eq!(st, LdpStatus::Ok, "{}", last_error());
    let out = unsafe { out.assume_init() };
    assert!((out.threshold - 2.0).abs() < 1.0, "{out:?}");
    assert!(out.bracket_lo <= out.threshold && out.threshold <= out.bracket_hi);
    unsafe {
        ldp_rng_free(rng);
        ldp_pool_free(pool);
    }
}

#[test]
fn unk_var_and_auto_run() {
    let cfg = LdpUnknownConfig { sigma_min: 0.25, sigma_max: 200.0, beta: 0.05, epsilon: 1.0, delta: 1e-9, r: 100.0 };
    let mut need = 0u64;
    assert_eq!(unsafe { ldp_unk_var_min_sample_size(&cfg, &mut need) }, LdpStatus::Ok);
    let pool = gaussian_pool(10, 10.0, 2.0, need as usize);
    let rng = ldp_rng_new(11, 1);
    let mut ci = std::mem::MaybeUninit::<LdpInterval>::uninit();
    let st = unsafe { ldp_unk_var(pool, &cfg, rng, ci.as_mut_ptr()) };
    assert_eq!(st, LdpStatus::Ok, "{}", last_error());
    let ci = unsafe { ci.assume_init() };
    assert_eq!(ci.method, LdpMethod::UnkVar);
    assert!(ci.t_sigma_hat > ci.t_mu_hat);
    unsafe { ldp_pool_free(pool) };

    let pool = gaussian_pool(12, 0.0, 1000.0, 100_000);
    let mut d = std::mem::MaybeUninit::<LdpRegimeDecision>::uninit();
    assert_eq!(unsafe { ldp_detect_regime(pool, 1.0, 0.05, 200.0, rng, d.as_mut_ptr()) }, LdpStatus::Ok);
    let d = unsafe { d.assume_init() };
    assert_eq!(d.regime, LdpRegime::LargeVariance);
    let mut ci = std::mem::MaybeUninit::<LdpInterval>::uninit();
    assert_eq!(unsafe { ldp_large_var(pool, 1.0, 200.0, 0.05, rng, ci.as_mut_ptr()) }, LdpStatus::Ok);
    let ci = unsafe { ci.assume_init() };
    assert!(ci.guard_fired == 0 || ci.guard_fired == 1);
    assert!(ci.lo >= -200.0 && ci.hi <= 200.0);
    unsafe { ldp_pool_free(pool) };

    let pool = gaussian_pool(13, 0.0, 1000.0, 100_000);
    let mut ci = std::mem::MaybeUninit::<LdpInterval>::uninit();
    let st = unsafe { ldp_estimate_mean_auto(pool, 0.2, 0.05, 1.0, 1e-9, 200.0, rng, ci.as_mut_ptr()) };
    assert_eq!(st, LdpStatus::Ok, "{}", last_error());
    let ci = unsafe { ci.assume_init() };
    assert!(!ci.regime_fraction.is_nan());
    unsafe {
        ldp_pool_free(pool);
        ldp_rng_free(rng);
    }
}

#[test]
fn header_declares_api_and_compiles() {
    let header = concat!(env!("CARGO_MANIFEST_DIR"), "/include/ldp_meanest.h");
    let text = std::fs::read_to_string(header).unwrap();
    for sym in ["ldp_known_bf", "ldp_ztest", "ldp_bin_rr", "ldp_unk_var", "ldp_estimate_mean_auto", "LDP_STATUS_OK", "typedef struct LdpPool LdpPool"] {
        assert!(text.contains(sym), "missing {sym}");
    }
    let Ok(status) = Command::new("cc").args(["-fsyntax-only", "-x", "c", "-std=c99", header]).status() else {
        eprintln!("no C compiler found; skipping syntax check");
        return;
    };
    assert!(status.success());
}
