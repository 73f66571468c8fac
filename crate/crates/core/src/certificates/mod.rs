//! Numeric certificates: each one evaluates both sides of a named
//! inequality on concrete trajectories and reports per-sample margins.

mod almost_orbit;
mod flow;
mod kobayashi;
mod monotone;

pub use almost_orbit::{almost_orbit_gap, SystemDescriptor};
pub use flow::{
    certify_chernoff, certify_chernoff_grid, certify_exponential_formula,
    certify_flow_vs_prox, certify_integral_solution,
};
pub use kobayashi::{certify_euler_kobayashi, certify_kobayashi, PairGrid};
pub use monotone::{certify_fejer, certify_velocity, certify_value_rates};

use crate::error::{Error, Result};
use serde::Serialize;

#[derive(Debug, Clone, Serialize)]
pub struct CertSample {
    /// where the inequality was evaluated ("n=12", "t=0.5", "k=3,l=7", ...)
    pub at: String,
    pub lhs: f64,
    pub rhs: f64,
    pub margin: f64,
}

/// Result of checking one named inequality: passed iff every margin
/// rhs - lhs stays above -slack.
#[derive(Debug, Clone, Serialize)]
pub struct Certificate {
    pub name: String,
    pub slack: f64,
    pub passed: bool,
    pub min_margin: f64,
    pub per_sample: Vec<CertSample>,
}

impl Certificate {
    pub fn from_samples(
        name: impl Into<String>,
        slack: f64,
        per_sample: Vec<CertSample>,
    ) -> Result<Self> {
        let name = name.into();
        for s in &per_sample {
            if !s.lhs.is_finite() || !s.rhs.is_finite() {
                return Err(Error::ValidationError(format!(
                    "certificate {name}: non-finite side at {}",
                    s.at
                )));
            }
        }
        let min_margin = per_sample
            .iter()
            .map(|s| s.margin)
            .fold(f64::INFINITY, f64::min);
        let passed = per_sample.is_empty() || min_margin >= -slack;
        Ok(Certificate { name, slack, passed, min_margin, per_sample })
    }
}

pub(crate) fn sample(at: String, lhs: f64, rhs: f64) -> CertSample {
    CertSample { at, lhs, rhs, margin: rhs - lhs }
}

#[cfg(test)]
mod tests;
