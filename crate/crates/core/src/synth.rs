//! Seeded ARIMA simulation.
//!
//! Uniforms come from ChaCha8 (counter-based stream cipher) seeded with
//! `ChaCha8Rng::seed_from_u64`. Each uniform takes the top 53 bits of one
//! `next_u64` word, `u = (k + 0.5) / 2^53`, so it lies strictly in (0, 1).
//! Standard normals come from the Marsaglia polar method: draw
//! `v1, v2 = 2u - 1` until `0 < s = v1² + v2² < 1`, then emit
//! `v1·m` and `v2·m` (in that order) with `m = sqrt(-2 ln s / s)`.

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{ArimaError, Result};
use crate::model::ArimaParams;
use crate::series::Series;

pub const DEFAULT_BURN_IN: usize = 200;

/// Deterministic standard-normal stream.
#[derive(Debug, Clone)]
pub struct GaussianStream {
    rng: ChaCha8Rng,
    spare: Option<f64>,
}

impl GaussianStream {
    pub fn new(seed: u64) -> Self {
        Self { rng: ChaCha8Rng::seed_from_u64(seed), spare: None }
    }

    pub fn uniform(&mut self) -> f64 {
        const SCALE: f64 = 1.0 / (1u64 << 53) as f64;
        ((self.rng.next_u64() >> 11) as f64 + 0.5) * SCALE
    }

    pub fn next_normal(&mut self) -> f64 {
        if let Some(z) = self.spare.take() {
            return z;
        }
        loop {
            let v1 = 2.0 * self.uniform() - 1.0;
            let v2 = 2.0 * self.uniform() - 1.0;
            let s = v1 * v1 + v2 * v2;
            if s > 0.0 && s < 1.0 {
                let m = (-2.0 * s.ln() / s).sqrt();
                self.spare = Some(v2 * m);
                return v1 * m;
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimSpec {
    pub params: ArimaParams,
    pub d: usize,
    pub n: usize,
    pub burn_in: usize,
    pub seed: u64,
}

impl SimSpec {
    pub fn new(params: ArimaParams, n: usize, seed: u64) -> Self {
        Self { params, d: 0, n, burn_in: DEFAULT_BURN_IN, seed }
    }

    pub fn with_d(mut self, d: usize) -> Self {
        self.d = d;
        self
    }
}

/// Runs the ARMA recursion `x_t = μ + Σ φ_i (x_{t-i} - μ) + a_t - Σ θ_j a_{t-j}`
/// from a zero-deviation start for `burn_in + n` steps, keeps the last `n`
/// and integrates `d` times from zero. Returns a series named `simulated`
/// starting at year 1.
pub fn simulate(spec: &SimSpec) -> Result<Series> {
    spec.params.validate()?;
    if spec.n == 0 {
        return Err(ArimaError::InvalidSpec("sample size must be at least 1".into()));
    }
    let params = &spec.params;
    let sd = params.sigma2.sqrt();
    let total = spec.burn_in + spec.n;
    let mut gauss = GaussianStream::new(spec.seed);

    let mut dev = Vec::with_capacity(total);
    let mut shocks = Vec::with_capacity(total);
    for t in 0..total {
        let a = sd * gauss.next_normal();
        let mut x = a;
        for (i, phi) in params.phi.iter().enumerate() {
            if t > i {
                x += phi * dev[t - 1 - i];
            }
        }
        for (j, theta) in params.theta.iter().enumerate() {
            if t > j {
                x -= theta * shocks[t - 1 - j];
            }
        }
        dev.push(x);
        shocks.push(a);
    }

    let mut values: Vec<f64> = dev[spec.burn_in..].iter().map(|x| x + params.mu).collect();
    for _ in 0..spec.d {
        let mut acc = 0.0;
        for v in values.iter_mut() {
            acc += *v;
            *v = acc;
        }
    }
    Series::from_values("simulated", 1, &values)
}
