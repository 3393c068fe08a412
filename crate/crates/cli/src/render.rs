//! Plain-text rendering of reports.

use std::fmt::Write;

use arima_core::{CellOutcome, Trend};

use crate::report::{Diagnostics, Report, ReportRow};

fn fmt_coeffs(c: &[f64]) -> String {
    let parts: Vec<String> = c.iter().map(|v| format!("{v:.4}")).collect();
    format!("[{}]", parts.join(", "))
}

fn years(row: &ReportRow) -> String {
    row.source_years.map(|y| format!("{}-{}", y.first, y.last)).unwrap_or_else(|| "none".into())
}

pub fn fit_block(out: &mut String, row: &ReportRow) {
    let _ = writeln!(out, "== {} ==", row.series);
    let _ = writeln!(out, "years used: {}", years(row));
    let Some(fit) = &row.fit else {
        let _ = writeln!(out, "FAILED: {}", row.reason.as_deref().unwrap_or("unknown"));
        let _ = writeln!(out);
        return;
    };
    let p = &fit.params;
    let _ = writeln!(out, "order {}  n_effective {}", fit.order, fit.n_effective);
    let _ = writeln!(
        out,
        "phi {}  theta {}  mu {:.4}  sigma2 {:.6e}",
        fmt_coeffs(&p.phi),
        fmt_coeffs(&p.theta),
        p.mu,
        p.sigma2
    );
    let _ = writeln!(out, "css {:.6e}  loglik {:.4}  aic {:.4}  bic {:.4}", fit.css, fit.loglik, fit.aic, fit.bic);
    match &row.diagnostics {
        Some(Diagnostics::Ok { ljung_box }) => {
            let _ =
                writeln!(out, "Ljung-Box Q {:.4}  lags {}  dof {}", ljung_box.statistic, ljung_box.lags, ljung_box.dof);
        }
        Some(Diagnostics::Failed { reason }) => {
            let _ = writeln!(out, "Ljung-Box unavailable: {reason}");
        }
        None => {}
    }
    if !fit.converged {
        let _ = writeln!(out, "warning: optimizer stopped at the iteration limit ({})", fit.iterations);
    }
    if fit.small_sample_warning {
        let _ = writeln!(out, "warning: small sample (n_effective {} < {})", fit.n_effective, 3 * fit.order.n_params());
    }
    if let Some(cells) = &row.selection {
        let _ = writeln!(out, "{:<10} {:>14} {:>14}  note", "order", "aic", "bic");
        for c in cells {
            match &c.outcome {
                CellOutcome::Fitted { aic, bic } => {
                    let mark = if c.order == fit.order { "selected" } else { "" };
                    let _ = writeln!(out, "{:<10} {:>14.4} {:>14.4}  {mark}", c.order.to_string(), aic, bic);
                }
                CellOutcome::Skipped { reason } => {
                    let _ = writeln!(out, "{:<10} {:>14} {:>14}  skipped: {reason}", c.order.to_string(), "-", "-");
                }
                CellOutcome::Failed { reason } => {
                    let _ = writeln!(out, "{:<10} {:>14} {:>14}  failed: {reason}", c.order.to_string(), "-", "-");
                }
            }
        }
    }
    if let Some(reason) = &row.reason {
        let _ = writeln!(out, "FAILED: {reason}");
    }
}

pub fn forecast_block(out: &mut String, row: &ReportRow) {
    fit_block(out, row);
    if let Some(f) = &row.forecast {
        let _ = writeln!(out, "{:>6} {:>16} {:>16} {:>16}", "year", "point", "lower95", "upper95");
        for r in &f.rows {
            let _ = writeln!(out, "{:>6} {:>16.2} {:>16.2} {:>16.2}", r.year, r.point, r.lower95, r.upper95);
        }
    }
    if let Some(t) = &row.trend {
        let _ = writeln!(out, "trend: {} (R = {:+.4}, S = {})", t.label, t.relative_change, t.sign_changes);
    }
    let _ = writeln!(out);
}

pub fn fit_report(report: &Report) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{} [{}]\n", report.dataset.title, report.dataset.source);
    for row in &report.rows {
        fit_block(&mut out, row);
        let _ = writeln!(out);
    }
    out
}

pub fn forecast_report(report: &Report) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{} [{}]\n", report.dataset.title, report.dataset.source);
    for row in &report.rows {
        forecast_block(&mut out, row);
    }
    out
}

fn prose(label: Trend) -> &'static str {
    match label {
        Trend::Increasing => "increasing pattern",
        Trend::Decreasing => "decreasing pattern",
        Trend::SlightChange => "slight change",
        Trend::Unstable => "unstable pattern",
    }
}

/// Summary table of trend labels followed by the per-series detail.
pub fn table_report(report: &Report) -> String {
    let mut out = String::new();
    let order = report.order.map(|o| o.to_string()).unwrap_or_default();
    let horizon = report.horizon.unwrap_or_default();
    let _ = writeln!(out, "{} [{}]", report.dataset.title, report.dataset.source);
    let _ = writeln!(out, "ARIMA{order}, horizon {horizon}\n");

    let width = report.rows.iter().map(|r| r.series.chars().count()).max().unwrap_or(6).clamp(6, 60);
    let _ = writeln!(out, "{:<width$}  {:<9}  {:>9}  {:>3}  {:<18}  notes", "series", "years", "R", "S", "trend");
    for row in &report.rows {
        let name: String = row.series.chars().take(width).collect();
        match (&row.trend, &row.fit) {
            (Some(t), Some(f)) => {
                let mut notes = Vec::new();
                if f.small_sample_warning {
                    notes.push(format!("small sample (n={})", f.n_effective));
                }
                if !f.converged {
                    notes.push("iteration limit".to_string());
                }
                let _ = writeln!(
                    out,
                    "{:<width$}  {:<9}  {:>+9.4}  {:>3}  {:<18}  {}",
                    name,
                    years(row),
                    t.relative_change,
                    t.sign_changes,
                    prose(t.label),
                    notes.join("; ")
                );
            }
            _ => {
                let _ = writeln!(
                    out,
                    "{:<width$}  {:<9}  {:>9}  {:>3}  {:<18}  {}",
                    name,
                    years(row),
                    "-",
                    "-",
                    "unusable",
                    row.reason.as_deref().unwrap_or("")
                );
            }
        }
    }
    if let Some(t) = report.rows.iter().find_map(|r| r.trend.as_ref()) {
        let _ = writeln!(
            out,
            "\nR = relative change from last observation to final forecast; S = sign changes of forecast steps.\n\
             unstable if S >= {}, else increasing/decreasing if |R| > {}, else slight change.\n",
            t.thresholds.unstable_sign_changes, t.thresholds.relative_change
        );
    }
    for row in &report.rows {
        forecast_block(&mut out, row);
    }
    out
}
