use serde::{Deserialize, Serialize};

use super::randomized_response::{keep_probability, rr_coefficient, Coin};
use super::{ceil_count, check_epsilon, check_half_open};
use crate::error::{config, domain, Error, Result};
use crate::normal_math::RngStream;

/// An ordered list of pairwise-disjoint half-open intervals `[lo, hi)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Bins {
    intervals: Vec<(f64, f64)>,
    // interval indices sorted by lower endpoint
    by_lo: Vec<usize>,
}

impl Bins {
    pub fn new(intervals: Vec<(f64, f64)>) -> Result<Self> {
        if intervals.is_empty() {
            return Err(config("at least one bin is required"));
        }
        for &(lo, hi) in &intervals {
            if !(lo.is_finite() && hi.is_finite() && lo < hi) {
                return Err(config(format!("bin [{lo}, {hi}) is empty or non-finite")));
            }
        }
        let mut by_lo: Vec<usize> = (0..intervals.len()).collect();
        by_lo.sort_by(|&a, &b| intervals[a].0.total_cmp(&intervals[b].0));
        for w in by_lo.windows(2) {
            let (a, b) = (intervals[w[0]], intervals[w[1]]);
            if b.0 < a.1 {
                return Err(config(format!(
                    "bins [{}, {}) and [{}, {}) overlap",
                    a.0, a.1, b.0, b.1
                )));
            }
        }
        Ok(Self { intervals, by_lo })
    }

    /// The width-`width` partition of [−R − width/2, R + width/2] into
    /// 2⌈R/width⌉ + 1 bins `[(i − ½)·width, (i + ½)·width)`, i = −⌈R/width⌉..=⌈R/width⌉.
    pub fn centered_grid(r: f64, width: f64) -> Result<Self> {
        if !(r > 0.0 && width > 0.0 && r.is_finite() && width.is_finite()) {
            return Err(config(format!("grid needs R > 0 and width > 0, got R={r}, width={width}")));
        }
        let k = (r / width).ceil() as i64;
        let intervals = (-k..=k)
            .map(|i| ((i as f64 - 0.5) * width, (i as f64 + 0.5) * width))
            .collect();
        Self::new(intervals)
    }

    pub fn len(&self) -> usize {
        self.intervals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    pub fn intervals(&self) -> &[(f64, f64)] {
        &self.intervals
    }

    /// Index of the bin containing `x`, if any.
    pub fn locate(&self, x: f64) -> Option<usize> {
        // last bin (in lo order) whose lower endpoint is <= x
        let pos = self.by_lo.partition_point(|&i| self.intervals[i].0 <= x);
        let idx = *self.by_lo.get(pos.checked_sub(1)?)?;
        (x < self.intervals[idx].1).then_some(idx)
    }
}

/// One-hot encoding of `x` over `bins`; the zero vector when `x` is in no bin.
pub fn bf_encode(x: f64, bins: &Bins) -> Vec<u8> {
    let mut v = vec![0u8; bins.len()];
    if let Some(i) = bins.locate(x) {
        v[i] = 1;
    }
    v
}

/// Per-coordinate randomized response at budget ε/2.
#[derive(Clone, Copy, Debug)]
pub struct BitFlipper {
    keep: Coin,
    dim: usize,
}

impl BitFlipper {
    pub fn new(epsilon: f64, dim: usize) -> Result<Self> {
        check_epsilon(epsilon)?;
        if dim == 0 {
            return Err(domain("bit flipping needs at least one coordinate"));
        }
        Ok(Self { keep: Coin::new(keep_probability(epsilon / 2.0)), dim })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Randomizes the one-hot vector with its single 1 at `hot` (or the zero
    /// vector for `None`) and adds the report into `counts`.
    #[inline]
    pub fn flip_into(&self, hot: Option<usize>, counts: &mut [u64], rng: &mut RngStream) {
        debug_assert_eq!(counts.len(), self.dim);
        let hot = hot.unwrap_or(usize::MAX);
        for (j, c) in counts.iter_mut().enumerate() {
            let kept = self.keep.toss(rng);
            *c += u64::from((j == hot) == kept);
        }
    }

    pub fn flip(&self, onehot: &[u8], rng: &mut RngStream) -> Result<Vec<u8>> {
        if onehot.len() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: onehot.len() });
        }
        onehot
            .iter()
            .map(|&b| match b {
                0 | 1 => Ok(if self.keep.toss(rng) { b } else { 1 - b }),
                other => Err(domain(format!("bit-flip input must be 0/1, got {other}"))),
            })
            .collect()
    }
}

/// Randomizes every coordinate of a 0/1 vector independently, each kept
/// w.p. e^{ε/2}/(1+e^{ε/2}).
pub fn bf_flip(onehot: &[u8], epsilon: f64, rng: &mut RngStream) -> Result<Vec<u8>> {
    BitFlipper::new(epsilon, onehot.len())?.flip(onehot, rng)
}

/// Debiased per-bin counts from bit-flipping reports.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HistogramEstimate {
    pub estimates: Vec<f64>,
    pub n: usize,
}

impl HistogramEstimate {
    /// Index of the largest estimate; ties go to the lowest index.
    pub fn argmax(&self) -> usize {
        let mut best = 0;
        for (i, &v) in self.estimates.iter().enumerate().skip(1) {
            if v > self.estimates[best] {
                best = i;
            }
        }
        best
    }

    /// Estimates divided by n.
    pub fn frequencies(&self) -> Vec<f64> {
        let n = self.n as f64;
        self.estimates.iter().map(|v| v / n).collect()
    }
}

pub fn bf_debias(reports: &[Vec<u8>], epsilon: f64) -> Result<HistogramEstimate> {
    check_epsilon(epsilon)?;
    let first = reports.first().ok_or_else(|| domain("bit-flip debiasing needs at least one report"))?;
    let d = first.len();
    let mut counts = vec![0u64; d];
    for r in reports {
        if r.len() != d {
            return Err(Error::DimensionMismatch { expected: d, found: r.len() });
        }
        for (c, &b) in counts.iter_mut().zip(r) {
            *c += u64::from(b);
        }
    }
    bf_debias_counts(&counts, reports.len(), epsilon)
}

/// Same estimator from column sums of `n` reports.
pub fn bf_debias_counts(counts: &[u64], n: usize, epsilon: f64) -> Result<HistogramEstimate> {
    check_epsilon(epsilon)?;
    if n == 0 {
        return Err(domain("bit-flip debiasing needs at least one report"));
    }
    if let Some(&c) = counts.iter().find(|&&c| c > n as u64) {
        return Err(domain(format!("column count {c} exceeds report count {n}")));
    }
    let half = epsilon / 2.0;
    let coef = rr_coefficient(half);
    let offset = n as f64 / (1.0 + half.exp());
    let estimates = counts.iter().map(|&c| coef * (c as f64 - offset)).collect();
    Ok(HistogramEstimate { estimates, n })
}

/// ⌈(2/α²)·((e^{ε/2}+1)/(e^{ε/2}−1))²·ln(4d/β)⌉.
pub fn bf_sample_size(alpha: f64, beta: f64, epsilon: f64, d: usize) -> Result<u64> {
    check_half_open("alpha", alpha)?;
    check_half_open("beta", beta)?;
    check_epsilon(epsilon)?;
    if d < 1 {
        return Err(domain("bin count must be at least 1"));
    }
    let coef = rr_coefficient(epsilon / 2.0);
    ceil_count(2.0 / (alpha * alpha) * coef * coef * (4.0 * d as f64 / beta).ln())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mechanisms::{rr_flip, rr_sample_size};
    use proptest::prelude::*;

    fn five_bins() -> Bins {
        Bins::new((0..5).map(|i| (i as f64, i as f64 + 1.0)).collect()).unwrap()
    }

    #[test]
    fn encode_examples() {
        let bins = five_bins();
        assert_eq!(bf_encode(2.5, &bins), vec![0, 0, 1, 0, 0]);
        assert_eq!(bf_encode(-3.0, &bins), vec![0; 5]);
        assert_eq!(bf_encode(5.0, &bins), vec![0; 5]);
        // shared endpoint goes to the right-hand bin under [lo, hi)
        assert_eq!(bf_encode(2.0, &bins), vec![0, 0, 1, 0, 0]);
    }

    #[test]
    fn overlapping_bins_rejected() {
        assert!(matches!(Bins::new(vec![(0.0, 2.0), (1.0, 3.0)]), Err(Error::Config(_))));
        assert!(Bins::new(vec![(2.0, 3.0), (0.0, 2.0)]).is_ok());
        assert!(Bins::new(vec![(1.0, 1.0)]).is_err());
    }

    #[test]
    fn unsorted_bins_keep_caller_order() {
        let bins = Bins::new(vec![(5.0, 6.0), (0.0, 1.0), (2.0, 4.0)]).unwrap();
        assert_eq!(bins.locate(0.5), Some(1));
        assert_eq!(bins.locate(5.5), Some(0));
        assert_eq!(bins.locate(1.5), None);
        assert_eq!(bins.locate(3.9), Some(2));
    }

    #[test]
    fn centered_grid_layout() {
        let bins = Bins::centered_grid(200.0, 1.0).unwrap();
        assert_eq!(bins.len(), 401);
        assert_eq!(bins.intervals()[0], (-200.5, -199.5));
        assert_eq!(bins.locate(0.0), Some(200));
        assert_eq!(bins.locate(200.5), None);
        assert_eq!(bins.locate(-200.5), Some(0));
        let small = Bins::centered_grid(0.5, 1.0).unwrap();
        assert_eq!(small.len(), 3);
    }

    proptest! {
        #[test]
        fn grid_boundaries_belong_to_upper_bin(i in -50i64..50, width in 0.1f64..10.0) {
            let bins = Bins::centered_grid(50.0 * width, width).unwrap();
            let k = (bins.len() as i64 - 1) / 2;
            let boundary = bins.intervals()[(i + k) as usize].1;
            prop_assert_eq!(bins.locate(boundary), Some((i + k + 1) as usize));
        }

        #[test]
        fn encode_is_one_hot_or_zero(x in -100.0f64..100.0) {
            let bins = Bins::centered_grid(40.0, 3.0).unwrap();
            let v = bf_encode(x, &bins);
            let ones: u32 = v.iter().map(|&b| u32::from(b)).sum();
            prop_assert!(ones <= 1);
            // k = ceil(40/3) = 14, so the grid covers [-43.5, 43.5)
            prop_assert_eq!(ones == 1, (-43.5..43.5).contains(&x));
        }
    }

    #[test]
    fn per_coordinate_privacy_ratio() {
        for eps in [0.1, 1.0, 4.0] {
            let keep = keep_probability(eps / 2.0);
            let ratio = keep / (1.0 - keep);
            assert!((ratio / (eps / 2.0).exp() - 1.0).abs() < 1e-12);
            // two one-hot inputs differ in exactly two coordinates
            assert!(ratio * ratio <= eps.exp() * (1.0 + 1e-12));
        }
    }

    #[test]
    fn flip_validates_input() {
        let mut rng = RngStream::new(0, 0);
        assert!(bf_flip(&[0, 2, 0], 1.0, &mut rng).is_err());
        assert!(bf_flip(&[0, 1, 0], 0.0, &mut rng).is_err());
        assert!(bf_flip(&[], 1.0, &mut rng).is_err());
    }

    #[test]
    fn near_zero_epsilon_is_uniform() {
        let mut rng = RngStream::new(2, 0);
        let trials = 100_000;
        let mut ones = [0usize; 3];
        for _ in 0..trials {
            let v = bf_flip(&[1, 0, 0], 1e-9, &mut rng).unwrap();
            for (o, b) in ones.iter_mut().zip(v) {
                *o += usize::from(b);
            }
        }
        let se = (0.25 / trials as f64).sqrt();
        for o in ones {
            assert!((o as f64 / trials as f64 - 0.5).abs() < 4.0 * se);
        }
    }

    #[test]
    fn single_coordinate_matches_rr_at_half_budget() {
        let mut a = RngStream::new(8, 3);
        let mut b = RngStream::new(8, 3);
        for i in 0..1000 {
            let bit = i % 3 == 0;
            let via_bf = bf_flip(&[u8::from(bit)], 2.0, &mut a).unwrap()[0] == 1;
            let via_rr = rr_flip(bit, 1.0, &mut b).unwrap();
            assert_eq!(via_bf, via_rr);
        }
    }

    #[test]
    fn hot_coordinate_keep_rate() {
        let mut rng = RngStream::new(4, 0);
        let trials = 100_000;
        let kept = (0..trials).filter(|_| bf_flip(&[1, 0, 0, 0], 2.0, &mut rng).unwrap()[0] == 1).count();
        let p = keep_probability(1.0);
        let se = (p * (1.0 - p) / trials as f64).sqrt();
        assert!((kept as f64 / trials as f64 - p).abs() < 3.0 * se);
    }

    #[test]
    fn flip_into_matches_flip() {
        let flipper = BitFlipper::new(1.3, 7).unwrap();
        let mut a = RngStream::new(6, 6);
        let mut b = RngStream::new(6, 6);
        let mut counts = vec![0u64; 7];
        let mut summed = vec![0u64; 7];
        for i in 0..200 {
            let hot = (i % 8 < 7).then_some(i % 8);
            flipper.flip_into(hot, &mut counts, &mut a);
            let mut onehot = vec![0u8; 7];
            if let Some(h) = hot {
                onehot[h] = 1;
            }
            for (s, r) in summed.iter_mut().zip(flipper.flip(&onehot, &mut b).unwrap()) {
                *s += u64::from(r);
            }
        }
        assert_eq!(counts, summed);
    }

    #[test]
    fn debias_examples() {
        // ε/2 = ln 3, single all-ones report
        let est = bf_debias(&[vec![1, 1, 1]], 2.0 * 3f64.ln()).unwrap();
        for v in est.estimates {
            assert!((v - 1.5).abs() < 1e-12);
        }
        assert!(matches!(
            bf_debias(&[vec![1, 0], vec![0, 1, 0]], 1.0),
            Err(Error::DimensionMismatch { expected: 2, found: 3 })
        ));
        assert!(bf_debias(&[], 1.0).is_err());
    }

    #[test]
    fn debias_inverts_expectation_exactly() {
        for eps in [0.1, 1.0, 5.0] {
            let q = 1.0 / (1.0 + (eps / 2.0f64).exp());
            let n = 50usize;
            let counts: Vec<f64> = vec![0.0, 3.0, 17.0, 30.0];
            let coef = rr_coefficient(eps / 2.0);
            for &c in &counts {
                let expected_reports = c * (1.0 - q) + (n as f64 - c) * q;
                let got = coef * (expected_reports - n as f64 * q);
                assert!((got - c).abs() < 1e-9, "eps={eps} c={c} got={got}");
            }
        }
    }

    #[test]
    fn argmax_prefers_lowest_index() {
        let h = HistogramEstimate { estimates: vec![1.0, 3.0, 3.0, 2.0], n: 4 };
        assert_eq!(h.argmax(), 1);
    }

    #[test]
    fn sample_size_examples() {
        // d = 1 has the structure of the RR bound at ε/2
        assert_eq!(bf_sample_size(0.05, 0.05, 2.0, 1).unwrap(), rr_sample_size(0.05, 0.05, 1.0).unwrap());

        let coef = rr_coefficient(0.5);
        let step = 2.0 / 0.0025 * coef * coef * 2f64.ln();
        let a = bf_sample_size(0.05, 0.05, 1.0, 10).unwrap() as f64;
        let b = bf_sample_size(0.05, 0.05, 1.0, 20).unwrap() as f64;
        assert!((b - a - step).abs() <= 1.0);

        let want = (800.0 * coef * coef * (4.0 * 401.0 / 0.05f64).ln()).ceil() as u64;
        assert_eq!(bf_sample_size(0.05, 0.05, 1.0, 401).unwrap(), want);
        assert!(bf_sample_size(0.05, 0.05, 1.0, 0).is_err());
    }
}
