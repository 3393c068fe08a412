//! Point forecasts, ψ-weight prediction intervals and trend labelling.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{ArimaError, Result};
use crate::estimate::ArimaFit;
use crate::model::{ArimaOrder, ArimaParams};
use crate::poly;
use crate::series::{difference, Series};

/// Two-sided 95% normal quantile.
pub const Z95: f64 = 1.96;

pub const DEFAULT_HORIZON: usize = 14;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Forecast {
    pub horizon: usize,
    pub start_year: i32,
    pub points: Vec<f64>,
    pub lower95: Vec<f64>,
    pub upper95: Vec<f64>,
    /// ψ_1 .. ψ_H of the integrated operator.
    pub psi: Vec<f64>,
    pub sigma2: f64,
}

impl Forecast {
    pub fn years(&self) -> impl Iterator<Item = i32> + '_ {
        (0..self.horizon).map(move |h| self.start_year + h as i32)
    }

    /// Half-width of the band at 1-based step `h`.
    pub fn half_width(&self, h: usize) -> f64 {
        self.upper95[h - 1] - self.points[h - 1]
    }
}

/// ψ weights of `(1-B)^d φ(B)^{-1} θ(B)` in the minus-MA convention.
/// Returns `ψ_1 .. ψ_H`.
pub fn psi_weights(params: &ArimaParams, d: usize, horizon: usize) -> Vec<f64> {
    let mut ar_full = Vec::with_capacity(params.p() + 1);
    ar_full.push(1.0);
    ar_full.extend(params.phi.iter().map(|c| -c));
    let composite = poly::multiply(&ar_full, &poly::difference_operator(d));
    let phi_star: Vec<f64> = composite[1..].iter().map(|c| -c).collect();

    let mut psi = vec![1.0];
    for j in 1..=horizon {
        let mut v = -params.theta.get(j - 1).copied().unwrap_or(0.0);
        for (i, c) in phi_star.iter().enumerate().take(j) {
            v += c * psi[j - 1 - i];
        }
        psi.push(v);
    }
    psi.remove(0);
    psi
}

/// Forecasts `horizon` steps past the end of the series the fit was
/// estimated on.
pub fn forecast(fit: &ArimaFit, original: &Series, horizon: usize) -> Result<Forecast> {
    let run = original.contiguous_run()?;
    if run.years() != fit.source_years {
        return Err(ArimaError::FitMismatch(format!(
            "fit covers {}-{}, series run covers {}-{}",
            fit.source_years.first,
            fit.source_years.last,
            run.start_year,
            run.end_year()
        )));
    }
    if run.values.len() != fit.n_effective + fit.order.d {
        return Err(ArimaError::FitMismatch("observation count differs".into()));
    }
    let mut out = forecast_from_state(fit.order, &fit.params, &run.values, &fit.residuals, horizon)?;
    out.start_year = run.end_year() + 1;
    Ok(out)
}

/// Forecast from explicit state: `levels` are the undifferenced
/// observations and `residuals` the innovations aligned with their d-th
/// difference (presample entries zero). The returned `start_year` is 0;
/// [`forecast`] fills it in.
pub fn forecast_from_state(
    order: ArimaOrder,
    params: &ArimaParams,
    levels: &[f64],
    residuals: &[f64],
    horizon: usize,
) -> Result<Forecast> {
    if horizon < 1 {
        return Err(ArimaError::HorizonRange);
    }
    params.check_order(order)?;
    let d = order.d;
    let mut stack = vec![levels.to_vec()];
    for k in 0..d {
        stack.push(difference(&stack[k], 1)?);
    }
    let w = &stack[d];
    if residuals.len() != w.len() {
        return Err(ArimaError::FitMismatch(format!(
            "{} residuals for {} differenced observations",
            residuals.len(),
            w.len()
        )));
    }
    if w.len() < order.p.max(order.q) {
        return Err(ArimaError::InsufficientData { need: order.p.max(order.q), have: w.len() });
    }

    let n = w.len();
    let mu = params.mu;
    let mut ext_w = w.clone();
    let mut ext_a = residuals.to_vec();
    for t in n..n + horizon {
        let mut v = mu;
        for (i, phi) in params.phi.iter().enumerate() {
            v += phi * (ext_w[t - 1 - i] - mu);
        }
        for (j, theta) in params.theta.iter().enumerate() {
            v -= theta * ext_a[t - 1 - j];
        }
        ext_w.push(v);
        ext_a.push(0.0);
    }
    let mut points = ext_w.split_off(n);

    for level in stack[..d].iter().rev() {
        let mut acc = *level.last().expect("nonempty level");
        for p in points.iter_mut() {
            acc += *p;
            *p = acc;
        }
    }

    let psi = psi_weights(params, d, horizon);
    let mut lower95 = Vec::with_capacity(horizon);
    let mut upper95 = Vec::with_capacity(horizon);
    let mut psi_sq = 1.0;
    for (h, point) in points.iter().enumerate() {
        if h > 0 {
            psi_sq += psi[h - 1] * psi[h - 1];
        }
        let half = Z95 * (params.sigma2 * psi_sq).sqrt();
        lower95.push(point - half);
        upper95.push(point + half);
    }

    Ok(Forecast { horizon, start_year: 0, points, lower95, upper95, psi, sigma2: params.sigma2 })
}

// ---------------------------------------------------------------------------
// Trend labels
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Trend {
    Increasing,
    Decreasing,
    SlightChange,
    Unstable,
}

impl Trend {
    pub const ALL: [Trend; 4] = [Trend::Increasing, Trend::Decreasing, Trend::SlightChange, Trend::Unstable];

    pub fn as_str(&self) -> &'static str {
        match self {
            Trend::Increasing => "increasing",
            Trend::Decreasing => "decreasing",
            Trend::SlightChange => "slight_change",
            Trend::Unstable => "unstable",
        }
    }
}

impl fmt::Display for Trend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrendThresholds {
    /// |R| above this is a directional trend.
    pub relative_change: f64,
    /// S at or above this is unstable.
    pub unstable_sign_changes: usize,
    /// Step differences within `flat_tolerance * max(|last|, 1)` count as
    /// flat and carry no sign.
    pub flat_tolerance: f64,
}

impl Default for TrendThresholds {
    fn default() -> Self {
        Self { relative_change: 0.10, unstable_sign_changes: 3, flat_tolerance: 1e-9 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrendLabel {
    pub label: Trend,
    /// R = (points[H] - last) / max(|last|, 1).
    pub relative_change: f64,
    /// S = sign changes among successive forecast differences.
    pub sign_changes: usize,
    pub thresholds: TrendThresholds,
}

pub fn classify_trend(last_observed: f64, f: &Forecast) -> TrendLabel {
    classify_trend_with(last_observed, f, TrendThresholds::default())
}

pub fn classify_trend_with(last_observed: f64, f: &Forecast, thresholds: TrendThresholds) -> TrendLabel {
    let scale = last_observed.abs().max(1.0);
    let end = *f.points.last().expect("nonempty forecast");
    let relative_change = (end - last_observed) / scale;

    let flat = thresholds.flat_tolerance * scale;
    let signs: Vec<bool> =
        f.points.windows(2).map(|w| w[1] - w[0]).filter(|step| step.abs() > flat).map(|step| step > 0.0).collect();
    let sign_changes = signs.windows(2).filter(|w| w[0] != w[1]).count();

    let label = if sign_changes >= thresholds.unstable_sign_changes {
        Trend::Unstable
    } else if relative_change > thresholds.relative_change {
        Trend::Increasing
    } else if relative_change < -thresholds.relative_change {
        Trend::Decreasing
    } else {
        Trend::SlightChange
    };
    TrendLabel { label, relative_change, sign_changes, thresholds }
}
