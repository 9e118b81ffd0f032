use rand::RngCore;

use super::pool::{MechanismKind, MechanismUse, UserPool};
use super::{ceil_count, check_epsilon, check_half_open};
use crate::error::{domain, Result};
use crate::normal_math::RngStream;

/// e^ε / (1 + e^ε), the probability randomized response reports the true bit.
/// Defined for ε ≥ 0; ε = 0 gives the uniform 1/2.
pub fn keep_probability(epsilon: f64) -> f64 {
    1.0 / (1.0 + (-epsilon).exp())
}

/// (e^ε + 1)/(e^ε − 1), the per-user sensitivity of the debiased count.
pub fn rr_coefficient(epsilon: f64) -> f64 {
    1.0 + 2.0 / epsilon.exp_m1()
}

/// Closed-form output distribution: `table[input][output]`.
pub fn privacy_ratio_table(epsilon: f64) -> Result<[[f64; 2]; 2]> {
    check_epsilon(epsilon)?;
    let keep = keep_probability(epsilon);
    let flip = 1.0 - keep;
    Ok([[keep, flip], [flip, keep]])
}

/// Bernoulli(p) via a 64-bit threshold; exact to within 2⁻⁶⁴.
#[derive(Clone, Copy, Debug)]
pub(crate) struct Coin {
    threshold: u64,
    always: bool,
}

impl Coin {
    pub(crate) fn new(p: f64) -> Self {
        debug_assert!((0.0..=1.0).contains(&p));
        if p >= 1.0 {
            return Self { threshold: u64::MAX, always: true };
        }
        // p·2⁶⁴ < 2⁶⁴ so the cast cannot saturate incorrectly
        Self { threshold: (p * 18_446_744_073_709_551_616.0) as u64, always: false }
    }

    #[inline]
    pub(crate) fn toss(&self, rng: &mut RngStream) -> bool {
        self.always || rng.next_u64() < self.threshold
    }
}

/// Randomized response on one bit: keeps it w.p. e^ε/(1+e^ε), otherwise flips.
pub fn rr_flip(bit: bool, epsilon: f64, rng: &mut RngStream) -> Result<bool> {
    check_epsilon(epsilon)?;
    let keep = Coin::new(keep_probability(epsilon));
    Ok(if keep.toss(rng) { bit } else { !bit })
}

/// Debiased count of ones from `report_sum` randomized bits out of `n`.
pub fn rr_debias(report_sum: u64, n: u64, epsilon: f64) -> Result<f64> {
    check_epsilon(epsilon)?;
    if report_sum > n {
        return Err(domain(format!("report sum {report_sum} exceeds sample count {n}")));
    }
    Ok(debias_linear(report_sum as f64, n as f64, epsilon))
}

pub(crate) fn debias_linear(report_sum: f64, n: f64, epsilon: f64) -> f64 {
    let em1 = epsilon.exp_m1();
    rr_coefficient(epsilon) * report_sum - n / em1
}

/// Fraction of the next `m` pool users satisfying `predicate`, estimated from
/// their randomized-response reports. The raw estimate is returned, so it
/// may fall outside [0, 1].
pub fn rr_estimate_fraction<F>(
    pool: &mut UserPool,
    m: usize,
    predicate: F,
    epsilon: f64,
    rng: &mut RngStream,
) -> Result<f64>
where
    F: Fn(f64) -> bool,
{
    check_epsilon(epsilon)?;
    if m == 0 {
        return Err(domain("randomized response needs at least one user"));
    }
    let values = pool.take(m, MechanismUse::new(MechanismKind::RandomizedResponse, epsilon, 0.0))?;
    Ok(rr_fraction_of(&values, predicate, epsilon, rng))
}

/// Core of [`rr_estimate_fraction`] on users already claimed from a pool.
pub(crate) fn rr_fraction_of<F>(values: &[f64], predicate: F, epsilon: f64, rng: &mut RngStream) -> f64
where
    F: Fn(f64) -> bool,
{
    let keep = Coin::new(keep_probability(epsilon));
    let reports = values
        .iter()
        .filter(|&&x| predicate(x) == keep.toss(rng))
        .count();
    debias_linear(reports as f64, values.len() as f64, epsilon) / values.len() as f64
}

/// ⌈(2/α²)·((e^ε+1)/(e^ε−1))²·ln(4/β)⌉ users give an α-accurate fraction w.p. 1−β.
pub fn rr_sample_size(alpha: f64, beta: f64, epsilon: f64) -> Result<u64> {
    check_half_open("alpha", alpha)?;
    check_half_open("beta", beta)?;
    check_epsilon(epsilon)?;
    let coef = rr_coefficient(epsilon);
    ceil_count(2.0 / (alpha * alpha) * coef * coef * (4.0 / beta).ln())
}
