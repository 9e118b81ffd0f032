use super::check_epsilon;
use crate::error::{config, domain, Result};
use crate::normal_math::{standard_gaussian, standard_laplace, RngStream};

/// π_[s1,s2](x) = min{s2, max{s1, x}}.
#[inline]
pub fn clamp_to(x: f64, s1: f64, s2: f64) -> f64 {
    s2.min(s1.max(x))
}

fn check_interval(s1: f64, s2: f64) -> Result<f64> {
    if !(s1.is_finite() && s2.is_finite() && s1 < s2) {
        return Err(config(format!("projection interval [{s1}, {s2}] must satisfy s1 < s2")));
    }
    Ok(s2 - s1)
}

/// 2ℓ²·ln(2/δ)/ε², the Gaussian noise variance for data of range ℓ.
pub fn gaussian_noise_variance(width: f64, epsilon: f64, delta: f64) -> Result<f64> {
    check_epsilon(epsilon)?;
    if !(delta > 0.0 && delta < 1.0) {
        return Err(domain(format!("gaussian mechanism needs delta in (0, 1), got {delta}")));
    }
    if !(width > 0.0 && width.is_finite()) {
        return Err(domain(format!("data range must be positive, got {width}")));
    }
    Ok(2.0 * width * width * (2.0 / delta).ln() / (epsilon * epsilon))
}

/// ℓ/ε, the Laplace scale for data of range ℓ.
pub fn laplace_noise_scale(width: f64, epsilon: f64) -> Result<f64> {
    check_epsilon(epsilon)?;
    if !(width > 0.0 && width.is_finite()) {
        return Err(domain(format!("data range must be positive, got {width}")));
    }
    Ok(width / epsilon)
}

/// Projects `x` onto `[s1, s2]` and adds N(0, 2(s2−s1)²ln(2/δ)/ε²) noise.
pub fn gaussian_mechanism(
    x: f64,
    interval: (f64, f64),
    epsilon: f64,
    delta: f64,
    rng: &mut RngStream,
) -> Result<f64> {
    let (s1, s2) = interval;
    let width = check_interval(s1, s2)?;
    let sd = gaussian_noise_variance(width, epsilon, delta)?.sqrt();
    Ok(clamp_to(x, s1, s2) + sd * standard_gaussian(rng))
}

/// Projects `x` onto `[s1, s2]` and adds Lap((s2−s1)/ε) noise (pure ε-LDP).
pub fn laplace_mechanism(x: f64, interval: (f64, f64), epsilon: f64, rng: &mut RngStream) -> Result<f64> {
    let (s1, s2) = interval;
    let width = check_interval(s1, s2)?;
    let scale = laplace_noise_scale(width, epsilon)?;
    Ok(clamp_to(x, s1, s2) + scale * standard_laplace(rng))
}
