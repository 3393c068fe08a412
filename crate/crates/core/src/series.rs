//! Annual series container and the stationarity toolkit: contiguous-run
//! extraction, differencing, sample ACF and Durbin-Levinson PACF.

use serde::{Deserialize, Serialize};

use crate::error::{ArimaError, Result};

/// A named annual series. Slot `i` holds the observation for
/// `start_year + i`; `None` marks a missing cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Series {
    name: String,
    start_year: i32,
    values: Vec<Option<f64>>,
}

impl Series {
    pub fn new(name: impl Into<String>, start_year: i32, values: Vec<Option<f64>>) -> Result<Self> {
        let name = name.into();
        if values.is_empty() {
            return Err(ArimaError::EmptySeries(name));
        }
        if let Some(i) = values.iter().position(|v| matches!(v, Some(x) if !x.is_finite())) {
            return Err(ArimaError::InvalidSpec(format!(
                "series '{name}' has a non-finite value at year {}",
                start_year + i as i32
            )));
        }
        Ok(Self { name, start_year, values })
    }

    /// Series with every slot present.
    pub fn from_values(name: impl Into<String>, start_year: i32, values: &[f64]) -> Result<Self> {
        Self::new(name, start_year, values.iter().copied().map(Some).collect())
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn start_year(&self) -> i32 {
        self.start_year
    }

    pub fn end_year(&self) -> i32 {
        self.start_year + self.values.len() as i32 - 1
    }

    pub fn values(&self) -> &[Option<f64>] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Longest run of present values, latest run on ties.
    pub fn contiguous_run(&self) -> Result<ContiguousRun> {
        let mut best: Option<(usize, usize)> = None;
        let mut start = None;
        for i in 0..=self.values.len() {
            let present = self.values.get(i).is_some_and(Option::is_some);
            match (present, start) {
                (true, None) => start = Some(i),
                (false, Some(s)) => {
                    let len = i - s;
                    // `>=` so a later run of equal length replaces an earlier one
                    if best.is_none_or(|(_, l)| len >= l) {
                        best = Some((s, len));
                    }
                    start = None;
                }
                _ => {}
            }
        }
        let (s, len) = best.ok_or_else(|| ArimaError::EmptySeries(self.name.clone()))?;
        Ok(ContiguousRun {
            start_year: self.start_year + s as i32,
            values: self.values[s..s + len].iter().map(|v| v.unwrap()).collect(),
        })
    }
}

/// A gap-free stretch of a [`Series`], with the year of its first value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContiguousRun {
    pub start_year: i32,
    pub values: Vec<f64>,
}

impl ContiguousRun {
    pub fn end_year(&self) -> i32 {
        self.start_year + self.values.len() as i32 - 1
    }

    pub fn years(&self) -> YearRange {
        YearRange { first: self.start_year, last: self.end_year() }
    }
}

/// Inclusive range of calendar years.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct YearRange {
    pub first: i32,
    pub last: i32,
}

/// Values of the longest contiguous run of `series`.
pub fn contiguous_values(series: &Series) -> Result<Vec<f64>> {
    series.contiguous_run().map(|run| run.values)
}

/// d-th order difference. `d = 0` returns the input unchanged.
pub fn difference(values: &[f64], d: usize) -> Result<Vec<f64>> {
    if values.len() <= d {
        return Err(ArimaError::OrderTooHigh { d, len: values.len() });
    }
    let mut out = values.to_vec();
    for _ in 0..d {
        out = out.windows(2).map(|w| w[1] - w[0]).collect();
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CorrelogramKind {
    Acf,
    Pacf,
}

/// Correlations at lags `0..=max_lag`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Correlogram {
    pub values: Vec<f64>,
    pub kind: CorrelogramKind,
    pub n: usize,
}

impl Correlogram {
    pub fn max_lag(&self) -> usize {
        self.values.len() - 1
    }

    pub fn at(&self, lag: usize) -> f64 {
        self.values[lag]
    }
}

/// Sample autocorrelation with the divisor-n convention:
/// `r_k = Σ (x_t - x̄)(x_{t+k} - x̄) / Σ (x_t - x̄)²`.
pub fn acf(values: &[f64], max_lag: usize) -> Result<Correlogram> {
    let n = values.len();
    if max_lag >= n || n < 2 {
        return Err(ArimaError::LagRange { max_lag, len: n });
    }
    let mean = values.iter().sum::<f64>() / n as f64;
    let centered: Vec<f64> = values.iter().map(|x| x - mean).collect();
    let denom: f64 = centered.iter().map(|c| c * c).sum();
    if denom <= 0.0 || !denom.is_finite() {
        return Err(ArimaError::DegenerateSeries);
    }
    let mut out = Vec::with_capacity(max_lag + 1);
    out.push(1.0);
    for k in 1..=max_lag {
        let num: f64 = centered.iter().zip(&centered[k..]).map(|(a, b)| a * b).sum();
        out.push(num / denom);
    }
    Ok(Correlogram { values: out, kind: CorrelogramKind::Acf, n })
}

/// Partial autocorrelation from an ACF via the Durbin-Levinson recursion.
/// Lag `k` holds the last coefficient of the order-k Yule-Walker solution;
/// lag 0 is 1 by convention.
pub fn pacf(acf: &Correlogram, max_lag: usize) -> Result<Correlogram> {
    if acf.kind != CorrelogramKind::Acf {
        return Err(ArimaError::InvalidSpec("pacf expects an ACF correlogram".into()));
    }
    if max_lag == 0 || max_lag > acf.max_lag() {
        return Err(ArimaError::LagRange { max_lag, len: acf.values.len() });
    }
    let r = &acf.values;
    let mut out = Vec::with_capacity(max_lag + 1);
    out.push(1.0);
    let mut prev: Vec<f64> = Vec::with_capacity(max_lag);
    for k in 1..=max_lag {
        let num = r[k] - (1..k).map(|j| prev[j - 1] * r[k - j]).sum::<f64>();
        let den = 1.0 - (1..k).map(|j| prev[j - 1] * r[j]).sum::<f64>();
        let kk = num / den;
        if !kk.is_finite() || kk.abs() > 1.0 {
            return Err(ArimaError::NumericalDegeneracy { lag: k, value: kk });
        }
        let mut next: Vec<f64> = (1..k).map(|j| prev[j - 1] - kk * prev[k - j - 1]).collect();
        next.push(kk);
        prev = next;
        out.push(kk);
    }
    Ok(Correlogram { values: out, kind: CorrelogramKind::Pacf, n: acf.n })
}
