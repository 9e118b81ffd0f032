//! Locally differentially private confidence intervals and quantiles for
//! Gaussian data.
//!
//! Every estimator reads users from a [`UserPool`], which enforces one-shot
//! local access: each user is handed to exactly one local randomizer and the
//! assignment is written to an audit log.

// `!(x > 0.0)` is used on purpose: it also rejects NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod error;
pub mod harness;
pub mod interval;
pub mod mean_known;
pub mod mean_unknown;
pub mod mechanisms;
pub mod normal_math;
pub mod quantile;

pub use error::{Error, Result};
pub use mechanisms::{PrivacyParams, UserPool};
pub use normal_math::RngStream;
