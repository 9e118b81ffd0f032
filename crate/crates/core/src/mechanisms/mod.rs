//! Local randomizers, their debiased estimators and sample-size calculators,
//! and the one-shot user pool every estimator consumes from.

mod additive;
mod bit_flipping;
mod pool;
mod privacy;
mod randomized_response;

pub use additive::{
    clamp_to, gaussian_mechanism, gaussian_noise_variance, laplace_mechanism, laplace_noise_scale,
};
pub use bit_flipping::{
    bf_debias, bf_debias_counts, bf_encode, bf_flip, bf_sample_size, Bins, BitFlipper,
    HistogramEstimate,
};
pub use pool::{AuditLog, AuditRecord, MechanismKind, MechanismUse, UserPool};
pub use privacy::PrivacyParams;
pub use randomized_response::{
    keep_probability, privacy_ratio_table, rr_coefficient, rr_debias, rr_estimate_fraction,
    rr_flip, rr_sample_size,
};

pub(crate) use randomized_response::rr_fraction_of;

use crate::error::{domain, Result};

pub(crate) fn check_epsilon(epsilon: f64) -> Result<()> {
    if epsilon > 0.0 && epsilon.is_finite() {
        Ok(())
    } else {
        Err(domain(format!("epsilon must be finite and > 0, got {epsilon}")))
    }
}

/// Accuracy / failure-probability parameters of the sample-size calculators.
pub(crate) fn check_half_open(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v < 0.5 {
        Ok(())
    } else {
        Err(domain(format!("{name} must lie in (0, 1/2), got {v}")))
    }
}

/// Ceiling of a positive sample-size expression, as a count.
pub(crate) fn ceil_count(x: f64) -> Result<u64> {
    if !(x.is_finite() && x >= 0.0) || x > u64::MAX as f64 {
        return Err(domain(format!("sample size is not representable: {x}")));
    }
    Ok(x.ceil() as u64)
}
