//! Locally private quantile estimation by noisy binary search.
//!
//! Each probe threshold is evaluated on a fresh batch of users through
//! randomized response, so the search as a whole stays ε-LDP under one-shot
//! access. The probing is abstracted behind [`FractionEstimator`] so the
//! bisection logic can also be driven by an exact CDF.

use std::io::{self, Write};

use serde::{Deserialize, Serialize};

use crate::error::{config, domain, Error, Result};
use crate::mechanisms::{
    ceil_count, check_epsilon, check_half_open, rr_coefficient, rr_fraction_of,
    MechanismKind, MechanismUse, UserPool,
};
use crate::normal_math::RngStream;

/// Target quantile, search bracket, tolerance and iteration budget.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuantileQuery {
    pub p_star: f64,
    pub q_min: f64,
    pub q_max: f64,
    pub lambda: f64,
    pub iterations: usize,
}

impl QuantileQuery {
    pub fn new(p_star: f64, q_min: f64, q_max: f64, lambda: f64, iterations: usize) -> Result<Self> {
        let q = Self { p_star, q_min, q_max, lambda, iterations };
        q.validate()?;
        Ok(q)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.p_star > 0.0 && self.p_star < 1.0) {
            return Err(config(format!("target quantile must lie in (0, 1), got {}", self.p_star)));
        }
        if !(self.q_min.is_finite() && self.q_max.is_finite() && self.q_min < self.q_max) {
            return Err(config(format!("bracket [{}, {}] must satisfy q_min < q_max", self.q_min, self.q_max)));
        }
        if !(self.lambda > 0.0 && self.lambda < 0.5) {
            return Err(config(format!("lambda must lie in (0, 1/2), got {}", self.lambda)));
        }
        if self.iterations == 0 {
            return Err(config("iteration budget must be at least 1"));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Termination {
    EstimateWithinLambda,
    IterationBudgetExhausted,
}

/// Which way one probe moved the bracket.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Branch {
    /// Estimate above p* + λ/2: the upper end moves down to the probe.
    Lower,
    /// Estimate below p* − λ/2: the lower end moves up to the probe.
    Upper,
    Halt,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TraceStep {
    pub j: usize,
    pub t_j: f64,
    pub z_j: f64,
    pub branch: Branch,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuantileResult {
    /// The last probed threshold.
    pub threshold: f64,
    pub iterations_used: usize,
    pub terminated_by: Termination,
    /// Final `[s1, s2]`.
    pub bracket: [f64; 2],
    /// Users consumed per probe (0 in oracle mode).
    pub users_per_iteration: usize,
    pub trace: Vec<TraceStep>,
}

impl QuantileResult {
    pub fn users_consumed(&self) -> usize {
        self.users_per_iteration * self.iterations_used
    }

    /// One JSON object per probe: `{j, t_j, z_j, branch}`.
    pub fn write_trace_json_lines<W: Write>(&self, mut out: W) -> io::Result<()> {
        for step in &self.trace {
            serde_json::to_writer(&mut out, step)?;
            out.write_all(b"\n")?;
        }
        Ok(())
    }
}

/// Source of P[X < t] estimates for the search.
pub trait FractionEstimator {
    /// Estimate for probe number `iteration` (1-based) at `threshold`.
    fn fraction_below(&mut self, iteration: usize, threshold: f64) -> Result<f64>;
}

/// Oracle mode: answers every probe with an exact CDF.
pub struct ExactFraction<F>(pub F);

impl<F: FnMut(f64) -> f64> FractionEstimator for ExactFraction<F> {
    fn fraction_below(&mut self, _iteration: usize, threshold: f64) -> Result<f64> {
        Ok((self.0)(threshold))
    }
}

/// Randomized response on a fresh batch of pool users per probe.
pub struct RrFraction<'a> {
    pool: &'a mut UserPool,
    batch: usize,
    epsilon: f64,
    rng: &'a mut RngStream,
}

impl<'a> RrFraction<'a> {
    pub fn new(pool: &'a mut UserPool, batch: usize, epsilon: f64, rng: &'a mut RngStream) -> Result<Self> {
        check_epsilon(epsilon)?;
        if batch == 0 {
            return Err(domain("each probe needs at least one user"));
        }
        Ok(Self { pool, batch, epsilon, rng })
    }
}

impl FractionEstimator for RrFraction<'_> {
    fn fraction_below(&mut self, _iteration: usize, threshold: f64) -> Result<f64> {
        let usage = MechanismUse::new(MechanismKind::RandomizedResponse, self.epsilon, 0.0);
        let values = self.pool.take(self.batch, usage)?;
        Ok(rr_fraction_of(&values, |x| x < threshold, self.epsilon, self.rng))
    }
}

/// The bisection loop shared by the private search and oracle mode.
pub fn binary_search<E: FractionEstimator>(query: &QuantileQuery, estimator: &mut E) -> Result<QuantileResult> {
    query.validate()?;
    let half_tol = query.lambda / 2.0;
    let (mut s1, mut s2) = (query.q_min, query.q_max);
    let mut trace = Vec::with_capacity(query.iterations);
    let mut threshold = 0.5 * (s1 + s2);
    let mut terminated_by = Termination::IterationBudgetExhausted;

    for j in 1..=query.iterations {
        threshold = 0.5 * (s1 + s2);
        let z = estimator
            .fraction_below(j, threshold)
            .map_err(|e| Error::SearchIteration { iteration: j, source: Box::new(e) })?;
        let branch = if z > query.p_star + half_tol {
            s2 = threshold;
            Branch::Lower
        } else if z < query.p_star - half_tol {
            s1 = threshold;
            Branch::Upper
        } else {
            Branch::Halt
        };
        trace.push(TraceStep { j, t_j: threshold, z_j: z, branch });
        if branch == Branch::Halt {
            terminated_by = Termination::EstimateWithinLambda;
            break;
        }
    }

    Ok(QuantileResult {
        threshold,
        iterations_used: trace.len(),
        terminated_by,
        bracket: [s1, s2],
        users_per_iteration: 0,
        trace,
    })
}

/// Private binary search for the `p_star`-quantile over `budget` users of the
/// pool, split into `query.iterations` equal batches of ⌊budget/T⌋. Users of
/// probes skipped by an early stop are left unconsumed.
pub fn bin_rr(
    pool: &mut UserPool,
    budget: usize,
    query: &QuantileQuery,
    epsilon: f64,
    rng: &mut RngStream,
) -> Result<QuantileResult> {
    query.validate()?;
    check_epsilon(epsilon)?;
    let batch = budget / query.iterations;
    if batch == 0 {
        return Err(Error::InsufficientSamples { required: query.iterations as u64, available: budget as u64 });
    }
    let mut estimator = RrFraction::new(pool, batch, epsilon, rng)?;
    let mut result = binary_search(query, &mut estimator)?;
    result.users_per_iteration = batch;
    Ok(result)
}

/// ⌈(8T/λ²)·((e^ε+1)/(e^ε−1))²·ln(4T/β)⌉ users for a (τ, λ, β) approximation.
pub fn required_sample_size(lambda: f64, beta: f64, epsilon: f64, iterations: usize) -> Result<u64> {
    check_half_open("lambda", lambda)?;
    check_half_open("beta", beta)?;
    check_epsilon(epsilon)?;
    if iterations < 1 {
        return Err(domain("iteration count must be at least 1"));
    }
    let t = iterations as f64;
    let coef = rr_coefficient(epsilon);
    ceil_count(8.0 * t / (lambda * lambda) * coef * coef * (4.0 * t / beta).ln())
}

/// ⌈log₂((q_max − q_min)/τ)⌉, floored at one probe.
pub fn iterations_for(q_min: f64, q_max: f64, tau: f64) -> Result<usize> {
    if !(q_min.is_finite() && q_max.is_finite() && q_min < q_max) {
        return Err(config(format!("bracket [{q_min}, {q_max}] must satisfy q_min < q_max")));
    }
    if !(tau > 0.0 && tau.is_finite()) {
        return Err(domain(format!("resolution must be positive, got {tau}")));
    }
    // halve until within tau; the slack absorbs rounding in width/tau at exact powers of two
    let mut width = q_max - q_min;
    let mut t = 0usize;
    while width > tau * (1.0 + 1e-12) {
        width /= 2.0;
        t += 1;
    }
    Ok(t.max(1))
}
