//! Standard normal CDF and quantile function, plus the seeded random streams
//! and samplers every estimator draws from.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use rand::distr::{Distribution, Open01};
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{domain, Result};

/// A reproducible random stream identified by `(seed, stream_id)`.
///
/// Backed by ChaCha8, whose 64-bit stream selector gives every `stream_id`
/// an independent keystream under the same seed. Child streams are derived
/// from labels, so the stream a trial or phase sees depends only on its
/// position in the experiment and never on scheduling.
#[derive(Clone, Debug)]
pub struct RngStream {
    seed: u64,
    stream_id: u64,
    rng: ChaCha8Rng,
}

impl RngStream {
    pub fn new(seed: u64, stream_id: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream_id);
        Self { seed, stream_id, rng }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream_id(&self) -> u64 {
        self.stream_id
    }

    /// Fresh stream for a labelled sub-task. The result does not depend on how
    /// much of `self` has been consumed.
    pub fn derive(&self, label: u64) -> RngStream {
        let mixed = splitmix64(self.stream_id ^ splitmix64(label ^ 0xA076_1D64_78BD_642F));
        RngStream::new(self.seed, mixed)
    }
}

impl RngCore for RngStream {
    #[inline]
    fn next_u32(&mut self) -> u32 {
        self.rng.next_u32()
    }

    #[inline]
    fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    fn fill_bytes(&mut self, dst: &mut [u8]) {
        self.rng.fill_bytes(dst)
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Φ(x), the standard normal CDF.
pub fn std_normal_cdf(x: f64) -> Result<f64> {
    if !x.is_finite() {
        return Err(domain(format!("normal CDF argument must be finite, got {x}")));
    }
    Ok(phi(x))
}

/// Unchecked Φ for internal callers with finite arguments.
#[inline]
pub(crate) fn phi(x: f64) -> f64 {
    0.5 * libm::erfc(-x * FRAC_1_SQRT_2)
}

/// Two-sided tail mass 2·(1 − Φ(|z|)), computed without cancellation.
pub(crate) fn two_sided_tail(z: f64) -> f64 {
    libm::erfc(z.abs() * FRAC_1_SQRT_2).min(1.0)
}

fn std_normal_pdf(x: f64) -> f64 {
    (-0.5 * x * x).exp() / (2.0 * PI).sqrt()
}

/// Φ⁻¹(p) for p strictly inside (0, 1).
///
/// Acklam's rational approximation (relative error ~1e-9) followed by two
/// Halley steps against [`std_normal_cdf`]. The upper half is mirrored from
/// the lower half, where `1 - p` is exact.
pub fn std_normal_inv_cdf(p: f64) -> Result<f64> {
    if !(p > 0.0 && p < 1.0) {
        return Err(domain(format!("normal quantile needs p in (0, 1), got {p}")));
    }
    Ok(if p > 0.5 { -lower_quantile(1.0 - p) } else { lower_quantile(p) })
}

/// Unchecked Φ⁻¹; callers guarantee p ∈ (0,1).
pub(crate) fn phi_inv(p: f64) -> f64 {
    debug_assert!(p > 0.0 && p < 1.0);
    if p > 0.5 {
        -lower_quantile(1.0 - p)
    } else {
        lower_quantile(p)
    }
}

const A: [f64; 6] = [
    -3.969_683_028_665_376e1,
    2.209_460_984_245_205e2,
    -2.759_285_104_469_687e2,
    1.383_577_518_672_69e2,
    -3.066_479_806_614_716e1,
    2.506_628_277_459_239,
];
const B: [f64; 5] = [
    -5.447_609_879_822_406e1,
    1.615_858_368_580_409e2,
    -1.556_989_798_598_866e2,
    6.680_131_188_771_972e1,
    -1.328_068_155_288_572e1,
];
const C: [f64; 6] = [
    -7.784_894_002_430_293e-3,
    -3.223_964_580_411_365e-1,
    -2.400_758_277_161_838,
    -2.549_732_539_343_734,
    4.374_664_141_464_968,
    2.938_163_982_698_783,
];
const D: [f64; 4] = [
    7.784_695_709_041_462e-3,
    3.224_671_290_700_398e-1,
    2.445_134_137_142_996,
    3.754_408_661_907_416,
];

// p in (0, 0.5]
fn lower_quantile(p: f64) -> f64 {
    const P_LOW: f64 = 0.024_25;
    let mut x = if p < P_LOW {
        let q = (-2.0 * p.ln()).sqrt();
        (((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5])
            / ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1.0)
    } else {
        let q = p - 0.5;
        let r = q * q;
        (((((A[0] * r + A[1]) * r + A[2]) * r + A[3]) * r + A[4]) * r + A[5]) * q
            / (((((B[0] * r + B[1]) * r + B[2]) * r + B[3]) * r + B[4]) * r + 1.0)
    };
    for _ in 0..2 {
        let density = std_normal_pdf(x);
        if density == 0.0 {
            break;
        }
        let u = (phi(x) - p) / density;
        x -= u / (1.0 + 0.5 * x * u);
    }
    x
}

/// One draw from N(mu, sigma²).
pub fn sample_gaussian(rng: &mut RngStream, mu: f64, sigma: f64) -> Result<f64> {
    if !(sigma > 0.0 && sigma.is_finite()) || !mu.is_finite() {
        return Err(domain(format!(
            "gaussian sampler needs finite mu and sigma > 0, got mu={mu}, sigma={sigma}"
        )));
    }
    Ok(mu + sigma * standard_gaussian(rng))
}

#[inline]
pub(crate) fn standard_gaussian(rng: &mut RngStream) -> f64 {
    StandardNormal.sample(rng)
}

/// One draw from Laplace(0, scale).
pub fn sample_laplace(rng: &mut RngStream, scale: f64) -> Result<f64> {
    if !(scale > 0.0 && scale.is_finite()) {
        return Err(domain(format!("laplace scale must be > 0, got {scale}")));
    }
    Ok(scale * standard_laplace(rng))
}

// inverse CDF on an open-interval uniform, so ln never sees zero
#[inline]
pub(crate) fn standard_laplace(rng: &mut RngStream) -> f64 {
    let u: f64 = Open01.sample(rng);
    if u < 0.5 {
        (2.0 * u).ln()
    } else {
        -(2.0 * (1.0 - u)).ln()
    }
}
