//! The `arima` command-line tool.
//!
//! Exit codes: 0 when every series succeeded, 1 when at least one series
//! failed, 2 for usage, input or selector errors.

pub mod args;
pub mod render;
pub mod report;

use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};

use arima_core::{builtin, read_csv, simulate, to_csv_string, ArimaError, ArimaParams, Dataset, Series, SimSpec};
use thiserror::Error;

use args::{Cli, Command, FitArgs, ForecastArgs, InputArgs, ReportArgs, SimulateArgs};
use report::{run_series, DatasetRef, Report, SeriesDump, SimulationReport, SCHEMA_VERSION};

pub const EXIT_OK: i32 = 0;
pub const EXIT_PARTIAL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// JSON schema for every `--json` document.
pub const REPORT_SCHEMA: &str = include_str!("../schema/report.schema.json");

#[derive(Debug, Error)]
pub enum CliError {
    #[error("unknown series '{name}'; available: {}", .available.join(", "))]
    UnknownSeries { name: String, available: Vec<String> },

    #[error("series '{name}' is ambiguous; matches: {}", .matches.join(", "))]
    AmbiguousSeries { name: String, matches: Vec<String> },

    #[error("cannot read {path}: {msg}")]
    Input { path: String, msg: String },

    #[error("{0}")]
    Core(#[from] ArimaError),

    #[error("cannot write plot data to {path}: {msg}")]
    PlotData { path: String, msg: String },

    #[error("cannot write output: {0}")]
    Output(String),
}

impl CliError {
    fn output(e: impl std::fmt::Display) -> Self {
        Self::Output(e.to_string())
    }
}

/// Runs a parsed command line, writing results to `out` and diagnostics to
/// `err`. Returns the process exit code.
pub fn run(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let result = match cli.command {
        Command::Fit(a) => cmd_fit(&a, out),
        Command::Forecast(a) => cmd_forecast(&a, out),
        Command::Report(a) => cmd_report(&a, out),
        Command::Simulate(a) => cmd_simulate(&a, out),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_USAGE
        }
    }
}

// ---------------------------------------------------------------------------
// input

fn load(input: &InputArgs) -> Result<(Dataset, String), CliError> {
    if let Some(table) = input.builtin {
        return Ok((builtin(table), format!("builtin:{table}")));
    }
    let path = input.input.as_ref().expect("clap requires --builtin or --input");
    let text = read_source(path)?;
    let title = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| "stdin".into());
    let ds = read_csv(text.as_bytes(), &title)
        .map_err(|e| CliError::Input { path: path.display().to_string(), msg: e.to_string() })?;
    Ok((ds, path.display().to_string()))
}

/// `-` reads standard input.
fn read_source(path: &Path) -> Result<String, CliError> {
    let fail = |e: io::Error| CliError::Input { path: path.display().to_string(), msg: e.to_string() };
    if path.as_os_str() == "-" {
        let mut text = String::new();
        io::stdin().read_to_string(&mut text).map_err(fail)?;
        Ok(text)
    } else {
        fs::read_to_string(path).map_err(fail)
    }
}

/// Exact name match first, then a unique case-insensitive match. An empty
/// selector keeps every series in table order.
pub fn select_series<'a>(ds: &'a Dataset, selectors: &[String]) -> Result<Vec<&'a Series>, CliError> {
    if selectors.is_empty() {
        return Ok(ds.series.iter().collect());
    }
    let mut picked: Vec<&Series> = Vec::new();
    for sel in selectors {
        let found = match ds.get(sel) {
            Some(s) => s,
            None => {
                let lower = sel.to_lowercase();
                let matches: Vec<&Series> = ds.series.iter().filter(|s| s.name().to_lowercase() == lower).collect();
                match matches.as_slice() {
                    [one] => *one,
                    [] => {
                        return Err(CliError::UnknownSeries {
                            name: sel.clone(),
                            available: ds.names().iter().map(|n| n.to_string()).collect(),
                        })
                    }
                    many => {
                        return Err(CliError::AmbiguousSeries {
                            name: sel.clone(),
                            matches: many.iter().map(|s| s.name().to_string()).collect(),
                        })
                    }
                }
            }
        };
        if !picked.iter().any(|s| s.name() == found.name()) {
            picked.push(found);
        }
    }
    Ok(picked)
}

// ---------------------------------------------------------------------------
// commands

fn emit(report: &Report, json: bool, text: impl Fn(&Report) -> String, out: &mut dyn Write) -> Result<i32, CliError> {
    if json {
        serde_json::to_writer_pretty(&mut *out, report).map_err(CliError::output)?;
        writeln!(out).map_err(CliError::output)?;
    } else {
        out.write_all(text(report).as_bytes()).map_err(CliError::output)?;
    }
    Ok(if report.all_ok() { EXIT_OK } else { EXIT_PARTIAL })
}

pub fn fit_report(a: &FitArgs) -> Result<Report, CliError> {
    let (ds, source) = load(&a.input)?;
    let plan = a.model.plan();
    let rows = select_series(&ds, &a.input.series)?.into_iter().map(|s| run_series(s, &plan, None)).collect();
    Ok(Report {
        schema_version: SCHEMA_VERSION,
        command: "fit",
        dataset: DatasetRef { title: ds.title.clone(), source },
        order: fixed_order(&plan),
        horizon: None,
        rows,
    })
}

fn fixed_order(plan: &args::ModelPlan) -> Option<arima_core::ArimaOrder> {
    match plan {
        args::ModelPlan::Fixed(o) => Some(*o),
        args::ModelPlan::Select { .. } => None,
    }
}

fn cmd_fit(a: &FitArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let report = fit_report(a)?;
    emit(&report, a.json, render::fit_report, out)
}

pub fn forecast_report(a: &ForecastArgs) -> Result<(Report, Dataset), CliError> {
    let (ds, source) = load(&a.input)?;
    let plan = a.model.plan();
    let rows =
        select_series(&ds, &a.input.series)?.into_iter().map(|s| run_series(s, &plan, Some(a.horizon))).collect();
    let report = Report {
        schema_version: SCHEMA_VERSION,
        command: "forecast",
        dataset: DatasetRef { title: ds.title.clone(), source },
        order: fixed_order(&plan),
        horizon: Some(a.horizon),
        rows,
    };
    Ok((report, ds))
}

fn cmd_forecast(a: &ForecastArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let (report, ds) = forecast_report(a)?;
    if let Some(dir) = &a.plot_data {
        write_plot_data(dir, &ds, &report)?;
    }
    emit(&report, a.json, render::forecast_report, out)
}

/// Imposed ARIMA(1,0,1) with a 14-step horizon over a whole built-in table.
pub fn table_report(table: arima_core::TableId) -> Report {
    let ds = builtin(table);
    let order = arima_core::ArimaOrder::new(1, 0, 1);
    let plan = args::ModelPlan::Fixed(order);
    let rows = ds.series.iter().map(|s| run_series(s, &plan, Some(arima_core::DEFAULT_HORIZON))).collect();
    Report {
        schema_version: SCHEMA_VERSION,
        command: "report",
        dataset: DatasetRef { title: ds.title.clone(), source: format!("builtin:{table}") },
        order: Some(order),
        horizon: Some(arima_core::DEFAULT_HORIZON),
        rows,
    }
}

fn cmd_report(a: &ReportArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let report = table_report(a.table);
    if let Some(dir) = &a.plot_data {
        write_plot_data(dir, &builtin(a.table), &report)?;
    }
    emit(&report, a.json, render::table_report, out)
}

pub fn sim_spec(a: &SimulateArgs) -> SimSpec {
    let params = ArimaParams::new(a.phi.clone(), a.theta.clone(), a.mu, a.sigma2);
    SimSpec { burn_in: a.burn_in, ..SimSpec::new(params, a.n, a.seed).with_d(a.d) }
}

fn cmd_simulate(a: &SimulateArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let spec = sim_spec(a);
    let raw = simulate(&spec)?;
    let series = Series::new(a.name.clone(), a.start_year, raw.values().to_vec())?;
    if a.json {
        let doc = SimulationReport {
            schema_version: SCHEMA_VERSION,
            command: "simulate",
            spec,
            series: SeriesDump {
                name: series.name().to_string(),
                start_year: series.start_year(),
                values: series.values().to_vec(),
            },
        };
        serde_json::to_writer_pretty(&mut *out, &doc).map_err(CliError::output)?;
        writeln!(out).map_err(CliError::output)?;
    } else {
        let ds = Dataset::new(a.name.clone(), vec![series])?;
        out.write_all(to_csv_string(&ds).as_bytes()).map_err(CliError::output)?;
    }
    Ok(EXIT_OK)
}

// ---------------------------------------------------------------------------
// plot data

/// Lowercase ASCII alphanumerics with single underscores between words.
pub fn slug(name: &str) -> String {
    let mut s = String::new();
    for c in name.chars() {
        if c.is_ascii_alphanumeric() {
            s.push(c.to_ascii_lowercase());
        } else if !s.is_empty() && !s.ends_with('_') {
            s.push('_');
        }
    }
    while s.ends_with('_') {
        s.pop();
    }
    if s.is_empty() {
        s.push_str("series");
    }
    s
}

/// `year,kind,value,lower95,upper95`: observed rows (bands empty, missing
/// values empty) followed by forecast rows.
pub fn plot_csv(series: &Series, row: &report::ReportRow) -> String {
    let mut text = String::from("year,kind,value,lower95,upper95\n");
    for (i, v) in series.values().iter().enumerate() {
        let year = series.start_year() + i as i32;
        match v {
            Some(v) => text.push_str(&format!("{year},observed,{v},,\n")),
            None => text.push_str(&format!("{year},observed,,,\n")),
        }
    }
    if let Some(f) = &row.forecast {
        for r in &f.rows {
            text.push_str(&format!("{},forecast,{},{},{}\n", r.year, r.point, r.lower95, r.upper95));
        }
    }
    text
}

fn write_plot_data(dir: &Path, ds: &Dataset, report: &Report) -> Result<Vec<PathBuf>, CliError> {
    let fail = |path: &Path, e: io::Error| CliError::PlotData { path: path.display().to_string(), msg: e.to_string() };
    fs::create_dir_all(dir).map_err(|e| fail(dir, e))?;
    let mut used: Vec<String> = Vec::new();
    let mut written = Vec::new();
    for row in &report.rows {
        let Some(series) = ds.get(&row.series) else { continue };
        let base = slug(&row.series);
        let mut stem = base.clone();
        let mut k = 2;
        while used.contains(&stem) {
            stem = format!("{base}_{k}");
            k += 1;
        }
        used.push(stem.clone());
        let path = dir.join(format!("{stem}.csv"));
        fs::write(&path, plot_csv(series, row)).map_err(|e| fail(&path, e))?;
        written.push(path);
    }
    Ok(written)
}
