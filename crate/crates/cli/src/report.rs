//! Per-series pipeline and the serialisable report model.
//!
//! A failure in one series is captured in its row; it never aborts the
//! rest of the report.

use arima_core::{
    classify_trend, diagnose, fit, forecast, select_model, ArimaFit, ArimaOrder, ArimaParams, Forecast, GridCell,
    LjungBox, Series, TrendLabel, YearRange,
};
use serde::Serialize;

use crate::args::ModelPlan;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Ok,
    Failed,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FitSummary {
    pub order: ArimaOrder,
    pub params: ArimaParams,
    pub n_effective: usize,
    pub small_sample_warning: bool,
    pub converged: bool,
    pub iterations: usize,
    pub css: f64,
    pub loglik: f64,
    pub aic: f64,
    pub bic: f64,
}

impl From<&ArimaFit> for FitSummary {
    fn from(f: &ArimaFit) -> Self {
        Self {
            order: f.order,
            params: f.params.clone(),
            n_effective: f.n_effective,
            small_sample_warning: f.small_sample_warning(),
            converged: f.converged,
            iterations: f.iterations,
            css: f.css,
            loglik: f.loglik,
            aic: f.aic,
            bic: f.bic,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Diagnostics {
    Ok { ljung_box: LjungBox },
    Failed { reason: String },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ForecastRow {
    pub year: i32,
    pub point: f64,
    pub lower95: f64,
    pub upper95: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ForecastSummary {
    pub start_year: i32,
    pub horizon: usize,
    pub sigma2: f64,
    pub psi: Vec<f64>,
    pub rows: Vec<ForecastRow>,
}

impl From<&Forecast> for ForecastSummary {
    fn from(f: &Forecast) -> Self {
        let rows = f
            .years()
            .enumerate()
            .map(|(h, year)| ForecastRow { year, point: f.points[h], lower95: f.lower95[h], upper95: f.upper95[h] })
            .collect();
        Self { start_year: f.start_year, horizon: f.horizon, sigma2: f.sigma2, psi: f.psi.clone(), rows }
    }
}

/// One series' outcome. Optional sections are omitted when the stage was
/// not requested or the series failed before reaching it.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportRow {
    pub series: String,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub source_years: Option<YearRange>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub last_observed: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fit: Option<FitSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub selection: Option<Vec<GridCell>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub diagnostics: Option<Diagnostics>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub forecast: Option<ForecastSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trend: Option<TrendLabel>,
}

impl ReportRow {
    fn failed(series: &Series, reason: String) -> Self {
        let run = series.contiguous_run().ok();
        Self {
            series: series.name().to_string(),
            status: Status::Failed,
            reason: Some(reason),
            source_years: run.as_ref().map(|r| r.years()),
            last_observed: run.and_then(|r| r.values.last().copied()),
            fit: None,
            selection: None,
            diagnostics: None,
            forecast: None,
            trend: None,
        }
    }

    pub fn is_ok(&self) -> bool {
        self.status == Status::Ok
    }
}

/// Fits `plan` to `series`; with `horizon` set, also forecasts and labels
/// the trend.
pub fn run_series(series: &Series, plan: &ModelPlan, horizon: Option<usize>) -> ReportRow {
    let run = match series.contiguous_run() {
        Ok(run) => run,
        Err(e) => return ReportRow::failed(series, e.to_string()),
    };
    let (fitted, selection) = match plan {
        ModelPlan::Fixed(order) => match fit(series, *order) {
            Ok(f) => (f, None),
            Err(e) => return ReportRow::failed(series, e.to_string()),
        },
        ModelPlan::Select { max_p, max_q, d_values } => match select_model(series, *max_p, *max_q, d_values) {
            Ok(sel) => (sel.best, Some(sel.cells)),
            Err(e) => return ReportRow::failed(series, e.to_string()),
        },
    };
    let diagnostics = match diagnose(&fitted) {
        Ok(lb) => Diagnostics::Ok { ljung_box: lb },
        Err(e) => Diagnostics::Failed { reason: e.to_string() },
    };
    let last = *run.values.last().expect("nonempty run");

    let mut row = ReportRow {
        series: series.name().to_string(),
        status: Status::Ok,
        reason: None,
        source_years: Some(run.years()),
        last_observed: Some(last),
        fit: Some(FitSummary::from(&fitted)),
        selection,
        diagnostics: Some(diagnostics),
        forecast: None,
        trend: None,
    };
    if let Some(h) = horizon {
        match forecast(&fitted, series, h) {
            Ok(f) => {
                row.trend = Some(classify_trend(last, &f));
                row.forecast = Some(ForecastSummary::from(&f));
            }
            Err(e) => {
                row.status = Status::Failed;
                row.reason = Some(format!("forecast failed: {e}"));
            }
        }
    }
    row
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DatasetRef {
    pub title: String,
    pub source: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub schema_version: u32,
    pub command: &'static str,
    pub dataset: DatasetRef,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub order: Option<ArimaOrder>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub horizon: Option<usize>,
    pub rows: Vec<ReportRow>,
}

impl Report {
    pub fn all_ok(&self) -> bool {
        self.rows.iter().all(ReportRow::is_ok)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimulationReport {
    pub schema_version: u32,
    pub command: &'static str,
    pub spec: arima_core::SimSpec,
    pub series: SeriesDump,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SeriesDump {
    pub name: String,
    pub start_year: i32,
    pub values: Vec<Option<f64>>,
}
