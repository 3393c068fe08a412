//! Conditional-sum-of-squares estimation, Ljung-Box diagnostics and
//! AIC-based order selection.

use std::cmp::Ordering;
use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{ArimaError, Result};
use crate::model::{ArimaOrder, ArimaParams};
use crate::optimizer::{minimize, NelderMeadOptions};
use crate::series::{acf, difference, Series, YearRange};

/// Objective value assigned to parameter vectors outside the
/// stationarity/invertibility region.
pub const PENALTY: f64 = 1e10;

/// Relative objective spread at which the simplex is considered converged.
pub const REL_TOL: f64 = 1e-10;

/// Iteration allowance per coefficient, applied as `500 * (p + q + 1)`.
pub const ITERATIONS_PER_PARAM: usize = 500;

/// Initial simplex offset for every coordinate. The mean coordinate is
/// measured in standard deviations of the differenced series.
const INITIAL_STEP: f64 = 0.1;

/// Result of fitting one order to one series.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ArimaFit {
    pub order: ArimaOrder,
    pub params: ArimaParams,
    /// `a_1 .. a_n` aligned with the differenced series; the first `p`
    /// entries are the zero presample residuals.
    pub residuals: Vec<f64>,
    pub css: f64,
    pub loglik: f64,
    pub aic: f64,
    pub bic: f64,
    pub n_effective: usize,
    pub source_years: YearRange,
    pub iterations: usize,
    pub converged: bool,
}

impl ArimaFit {
    /// Residuals produced by the recursion, without the presample zeros.
    pub fn conditional_residuals(&self) -> &[f64] {
        &self.residuals[self.order.p..]
    }

    /// Set when there are fewer than three observations per parameter.
    pub fn small_sample_warning(&self) -> bool {
        self.n_effective < 3 * self.order.n_params()
    }

    /// Builds a fit for fixed, caller-supplied parameters: residuals and
    /// criteria are evaluated on `series` but nothing is estimated.
    /// `params.sigma2` is kept as given.
    pub fn with_params(series: &Series, order: ArimaOrder, params: ArimaParams) -> Result<Self> {
        params.check_order(order)?;
        params.validate()?;
        let run = series.contiguous_run()?;
        let w = difference(&run.values, order.d)?;
        let (css, cond) = css_objective(&params, &w)?;
        Ok(assemble(order, params, css, &cond, w.len(), run.years(), 0, true))
    }
}

/// Conditional sum of squares. Residuals are produced for `t = p+1 .. n`
/// with every presample residual set to zero; returns `(Σ a_t², a_{p+1..n})`.
pub fn css_objective(params: &ArimaParams, w: &[f64]) -> Result<(f64, Vec<f64>)> {
    let p = params.p();
    let n = w.len();
    if n < p + 1 {
        return Err(ArimaError::InsufficientData { need: p + 1, have: n });
    }
    let z: Vec<f64> = w.iter().map(|x| x - params.mu).collect();
    let mut a = vec![0.0; n];
    let mut css = 0.0;
    for t in p..n {
        let mut e = z[t];
        for (i, phi) in params.phi.iter().enumerate() {
            e -= phi * z[t - 1 - i];
        }
        for (j, theta) in params.theta.iter().enumerate() {
            if t > j {
                e += theta * a[t - 1 - j];
            }
        }
        a[t] = e;
        css += e * e;
    }
    Ok((css, a.split_off(p)))
}

/// Estimates `order` on the longest contiguous run of `series`.
///
/// For `d = 0` the process mean is estimated jointly with the ARMA
/// coefficients; for `d >= 1` the differenced series is taken to have zero
/// mean (no drift). Nelder-Mead starts from φ = 0, θ = 0, μ = sample mean;
/// points outside the stationarity/invertibility region score [`PENALTY`].
pub fn fit(series: &Series, order: ArimaOrder) -> Result<ArimaFit> {
    let run = series.contiguous_run()?;
    let have = run.values.len().saturating_sub(order.d);
    if have < order.min_observations() {
        return Err(ArimaError::InsufficientData { need: order.min_observations(), have });
    }
    let w = difference(&run.values, order.d)?;
    let n = w.len();
    let with_mean = order.d == 0;
    let center = if with_mean { w.iter().sum::<f64>() / n as f64 } else { 0.0 };

    if order.p == 0 && order.q == 0 {
        let resid: Vec<f64> = w.iter().map(|x| x - center).collect();
        let css: f64 = resid.iter().map(|a| a * a).sum();
        if css <= 0.0 {
            return Err(ArimaError::DegenerateSeries);
        }
        let params = ArimaParams::new(vec![], vec![], center, css / n as f64);
        return Ok(assemble(order, params, css, &resid, n, run.years(), 0, true));
    }

    let spread = (w.iter().map(|x| (x - center) * (x - center)).sum::<f64>() / n as f64).sqrt();
    let scale = if spread > 0.0 && spread.is_finite() { spread } else { 1.0 };
    let (p, q) = (order.p, order.q);
    let unpack = |x: &[f64]| {
        let mu = if with_mean { center + scale * x[p + q] } else { 0.0 };
        ArimaParams::new(x[..p].to_vec(), x[p..p + q].to_vec(), mu, 1.0)
    };
    // normalised so the objective is O(1) whatever the units of the data
    let norm = scale * scale * n as f64;
    let objective = |x: &[f64]| {
        let params = unpack(x);
        if !params.is_stationary() || !params.is_invertible() {
            return PENALTY;
        }
        match css_objective(&params, &w) {
            Ok((css, _)) if css.is_finite() => css / norm,
            _ => PENALTY,
        }
    };

    let dim = p + q + usize::from(with_mean);
    let opts = NelderMeadOptions {
        steps: vec![INITIAL_STEP; dim],
        max_iterations: ITERATIONS_PER_PARAM * (p + q + 1),
        rel_tol: REL_TOL,
    };
    let min = minimize(objective, &vec![0.0; dim], &opts);
    if min.simplex_values.iter().all(|&f| f >= PENALTY) {
        return Err(ArimaError::NonIdentifiable);
    }

    let mut params = unpack(&min.x);
    let (css, resid) = css_objective(&params, &w)?;
    if css <= 0.0 {
        return Err(ArimaError::DegenerateSeries);
    }
    params.sigma2 = css / n as f64;
    Ok(assemble(order, params, css, &resid, n, run.years(), min.iterations, min.converged))
}

#[allow(clippy::too_many_arguments)]
fn assemble(
    order: ArimaOrder,
    params: ArimaParams,
    css: f64,
    conditional: &[f64],
    n_effective: usize,
    source_years: YearRange,
    iterations: usize,
    converged: bool,
) -> ArimaFit {
    let mut residuals = vec![0.0; n_effective - conditional.len()];
    residuals.extend_from_slice(conditional);
    let n = n_effective as f64;
    let k = order.n_params() as f64;
    let loglik = -0.5 * n * ((2.0 * PI * params.sigma2).ln() + 1.0);
    ArimaFit {
        order,
        params,
        residuals,
        css,
        loglik,
        aic: -2.0 * loglik + 2.0 * k,
        bic: -2.0 * loglik + n.ln() * k,
        n_effective,
        source_years,
        iterations,
        converged,
    }
}

// ---------------------------------------------------------------------------
// Diagnostics
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LjungBox {
    pub statistic: f64,
    pub lags: usize,
    pub dof: usize,
}

/// Ljung-Box portmanteau statistic `Q = n(n+2) Σ_{k=1..lags} r_k² / (n-k)`
/// with `dof = lags - fitted_count`.
pub fn ljung_box(residuals: &[f64], lags: usize, fitted_count: usize) -> Result<LjungBox> {
    if lags <= fitted_count {
        return Err(ArimaError::NonPositiveDof { lags, fitted: fitted_count });
    }
    let r = acf(residuals, lags)?;
    let n = residuals.len() as f64;
    let sum: f64 = (1..=lags).map(|k| r.at(k) * r.at(k) / (n - k as f64)).sum();
    Ok(LjungBox { statistic: n * (n + 2.0) * sum, lags, dof: lags - fitted_count })
}

/// Ljung-Box on the fit's conditional residuals using `min(10, m - 1)` lags,
/// `m` being the number of conditional residuals.
pub fn diagnose(fit: &ArimaFit) -> Result<LjungBox> {
    let resid = fit.conditional_residuals();
    let lags = 10.min(resid.len().saturating_sub(1));
    ljung_box(resid, lags, fit.order.p + fit.order.q)
}

// ---------------------------------------------------------------------------
// Order selection
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum CellOutcome {
    Fitted { aic: f64, bic: f64 },
    Skipped { reason: String },
    Failed { reason: String },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridCell {
    pub order: ArimaOrder,
    #[serde(flatten)]
    pub outcome: CellOutcome,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Selection {
    pub best: ArimaFit,
    pub cells: Vec<GridCell>,
}

/// Fits every `(p, d, q)` with `p <= max_p`, `q <= max_q`, `d` in
/// `d_candidates` and keeps the smallest AIC. Ties go to smaller `p + q`,
/// then smaller `d`, then smaller `p`.
pub fn select_model(series: &Series, max_p: usize, max_q: usize, d_candidates: &[usize]) -> Result<Selection> {
    let mut ds = d_candidates.to_vec();
    ds.sort_unstable();
    ds.dedup();
    let mut orders = Vec::with_capacity(ds.len() * (max_p + 1) * (max_q + 1));
    for &d in &ds {
        for p in 0..=max_p {
            for q in 0..=max_q {
                orders.push(ArimaOrder::new(p, d, q));
            }
        }
    }
    select_orders(series, &orders)
}

/// [`select_model`] over an explicit list of candidate orders.
pub fn select_orders(series: &Series, orders: &[ArimaOrder]) -> Result<Selection> {
    if orders.is_empty() {
        return Err(ArimaError::NoViableModel(vec!["empty candidate grid".into()]));
    }
    let available = series.contiguous_run()?.values.len();

    let mut cells = Vec::with_capacity(orders.len());
    let mut fits = Vec::new();
    for &order in orders {
        let have = available.saturating_sub(order.d);
        if have < order.min_observations() {
            let reason = ArimaError::InsufficientData { need: order.min_observations(), have };
            cells.push(GridCell { order, outcome: CellOutcome::Skipped { reason: reason.to_string() } });
            continue;
        }
        match fit(series, order) {
            Ok(f) => {
                cells.push(GridCell { order, outcome: CellOutcome::Fitted { aic: f.aic, bic: f.bic } });
                fits.push(f);
            }
            Err(e) => cells.push(GridCell { order, outcome: CellOutcome::Failed { reason: e.to_string() } }),
        }
    }

    match fits.into_iter().min_by(rank) {
        Some(best) => Ok(Selection { best, cells }),
        None => Err(ArimaError::NoViableModel(
            cells
                .iter()
                .filter_map(|c| match &c.outcome {
                    CellOutcome::Skipped { reason } | CellOutcome::Failed { reason } => {
                        Some(format!("{}: {reason}", c.order))
                    }
                    CellOutcome::Fitted { .. } => None,
                })
                .collect(),
        )),
    }
}

fn rank(a: &ArimaFit, b: &ArimaFit) -> Ordering {
    let key = |f: &ArimaFit| (f.order.p + f.order.q, f.order.d, f.order.p);
    a.aic.total_cmp(&b.aic).then_with(|| key(a).cmp(&key(b)))
}
