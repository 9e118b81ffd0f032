use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};

/// An (ε, δ) budget attached to a mechanism invocation.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PrivacyParams {
    epsilon: f64,
    delta: f64,
}

impl PrivacyParams {
    pub fn new(epsilon: f64, delta: f64) -> Result<Self> {
        let p = Self { epsilon, delta };
        p.validate()?;
        Ok(p)
    }

    /// Re-checks the ranges, e.g. after deserializing.
    pub fn validate(&self) -> Result<()> {
        super::check_epsilon(self.epsilon)?;
        if !(0.0..1.0).contains(&self.delta) {
            return Err(domain(format!("delta must lie in [0, 1), got {}", self.delta)));
        }
        Ok(())
    }

    /// Pure ε-LDP budget.
    pub fn pure(epsilon: f64) -> Result<Self> {
        Self::new(epsilon, 0.0)
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }
}
