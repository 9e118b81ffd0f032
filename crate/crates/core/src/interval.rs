use serde::{Deserialize, Serialize};

/// Which estimator produced an interval.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Method {
    KnownBF,
    UnkVar,
    LargeVar,
    TrivialFullRange,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::KnownBF => "KnownBF",
            Method::UnkVar => "UnkVar",
            Method::LargeVar => "LargeVar",
            Method::TrivialFullRange => "TrivialFullRange",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PhaseUsers {
    pub phase: String,
    pub users: usize,
}

/// A (1 − β) confidence interval for the mean, with the intermediate
/// quantities of the estimator that produced it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConfidenceInterval {
    pub lo: f64,
    pub hi: f64,
    pub confidence: f64,
    pub mu_tilde: f64,
    /// Variance of the sampling distribution of `mu_tilde`, where defined.
    #[serde(rename = "sampling_var", skip_serializing_if = "Option::is_none", default)]
    pub sigma_tilde_sq: Option<f64>,
    pub method: Method,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub n1: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub n2: Option<usize>,
    /// Signed index of the heaviest histogram bin (center j*·σ).
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub j_star: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub t_mu_hat: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub t_sigma_hat: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub regime_fraction: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub guard_fired: Option<bool>,
    #[serde(default)]
    pub users_per_phase: Vec<PhaseUsers>,
}

impl ConfidenceInterval {
    pub(crate) fn bare(lo: f64, hi: f64, confidence: f64, mu_tilde: f64, method: Method) -> Self {
        Self {
            lo,
            hi,
            confidence,
            mu_tilde,
            sigma_tilde_sq: None,
            method,
            n1: None,
            n2: None,
            j_star: None,
            t_mu_hat: None,
            t_sigma_hat: None,
            regime_fraction: None,
            guard_fired: None,
            users_per_phase: Vec::new(),
        }
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn contains(&self, mu: f64) -> bool {
        self.lo <= mu && mu <= self.hi
    }

    pub fn users_consumed(&self) -> usize {
        self.users_per_phase.iter().map(|p| p.users).sum()
    }

    pub(crate) fn push_phase(&mut self, phase: &str, users: usize) {
        self.users_per_phase.push(PhaseUsers { phase: phase.to_string(), users });
    }
}

/// [center − τ, center + τ] ∩ [−R, R]. When the two are disjoint the result
/// collapses onto the nearer endpoint of [−R, R].
pub(crate) fn intersect_with_range(center: f64, tau: f64, r: f64) -> (f64, f64) {
    let lo = (center - tau).clamp(-r, r);
    let hi = (center + tau).clamp(-r, r);
    (lo, hi)
}
