//! Model order and parameter types.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{ArimaError, Result};
use crate::poly::roots_outside_unit_circle;

/// The `(p, d, q)` triple.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ArimaOrder {
    pub p: usize,
    pub d: usize,
    pub q: usize,
}

impl ArimaOrder {
    pub const fn new(p: usize, d: usize, q: usize) -> Self {
        Self { p, d, q }
    }

    /// Parameters counted by the information criteria: φ, θ, μ and σ².
    pub fn n_params(&self) -> usize {
        self.p + self.q + 2
    }

    /// Fewest observations (after differencing) a fit will accept.
    pub fn min_observations(&self) -> usize {
        self.n_params()
    }
}

impl fmt::Display for ArimaOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.p, self.d, self.q)
    }
}

impl FromStr for ArimaOrder {
    type Err = String;

    /// Accepts `p,d,q` with optional surrounding parentheses.
    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        let inner = s.trim().trim_start_matches('(').trim_end_matches(')');
        let parts: Vec<&str> = inner.split(',').map(str::trim).collect();
        if parts.len() != 3 {
            return Err(format!("expected order as p,d,q, got '{s}'"));
        }
        let num = |t: &str| t.parse::<usize>().map_err(|_| format!("invalid order component '{t}'"));
        Ok(Self::new(num(parts[0])?, num(parts[1])?, num(parts[2])?))
    }
}

/// ARMA coefficients in the minus-MA convention
/// `z_t = Σ φ_i z_{t-i} + a_t - Σ θ_j a_{t-j}`, `z_t = w_t - μ`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ArimaParams {
    pub phi: Vec<f64>,
    pub theta: Vec<f64>,
    pub mu: f64,
    pub sigma2: f64,
}

impl ArimaParams {
    pub fn new(phi: Vec<f64>, theta: Vec<f64>, mu: f64, sigma2: f64) -> Self {
        Self { phi, theta, mu, sigma2 }
    }

    pub fn p(&self) -> usize {
        self.phi.len()
    }

    pub fn q(&self) -> usize {
        self.theta.len()
    }

    pub fn is_stationary(&self) -> bool {
        roots_outside_unit_circle(&self.phi)
    }

    pub fn is_invertible(&self) -> bool {
        roots_outside_unit_circle(&self.theta)
    }

    /// Checks the root conditions, a finite mean and a positive variance.
    pub fn validate(&self) -> Result<()> {
        if !self.is_stationary() {
            return Err(ArimaError::NonStationary);
        }
        if !self.is_invertible() {
            return Err(ArimaError::NonInvertible);
        }
        if !self.mu.is_finite() {
            return Err(ArimaError::InvalidSpec(format!("mean must be finite, got {}", self.mu)));
        }
        if !(self.sigma2 > 0.0 && self.sigma2.is_finite()) {
            return Err(ArimaError::InvalidVariance(self.sigma2));
        }
        Ok(())
    }

    pub(crate) fn check_order(&self, order: ArimaOrder) -> Result<()> {
        if self.p() != order.p || self.q() != order.q {
            return Err(ArimaError::DimensionMismatch { p: order.p, q: order.q });
        }
        Ok(())
    }
}
