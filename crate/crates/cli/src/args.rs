use std::path::PathBuf;

use arima_core::{ArimaOrder, TableId};
use clap::{Args, Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(name = "arima", version, about = "ARIMA fitting and forecasting for annual series")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Estimate a model for each selected series.
    Fit(FitArgs),
    /// Fit, then forecast with 95% bands.
    Forecast(ForecastArgs),
    /// Imposed ARIMA(1,0,1), 14-year forecast and trend labels for a built-in table.
    Report(ReportArgs),
    /// Simulate an ARIMA series and print it as CSV.
    Simulate(SimulateArgs),
}

#[derive(Debug, Args)]
pub struct InputArgs {
    /// Built-in table: deaths, morbidity or infant_deaths.
    #[arg(long, value_parser = parse_table, conflicts_with = "input", required_unless_present = "input")]
    pub builtin: Option<TableId>,

    /// Wide CSV file (`name,<year>,<year>,...`).
    #[arg(long, value_hint = clap::ValueHint::FilePath)]
    pub input: Option<PathBuf>,

    /// Series to process; repeatable. Defaults to every series.
    #[arg(long = "series")]
    pub series: Vec<String>,
}

#[derive(Debug, Args)]
pub struct ModelArgs {
    /// Model order as p,d,q. Defaults to 1,0,1 unless a selection grid is given.
    #[arg(long, value_parser = parse_order, conflicts_with_all = ["max_p", "max_q", "d_values"])]
    pub order: Option<ArimaOrder>,

    /// Select by AIC over p in 0..=MAX_P.
    #[arg(long)]
    pub max_p: Option<usize>,

    /// Select by AIC over q in 0..=MAX_Q.
    #[arg(long)]
    pub max_q: Option<usize>,

    /// Differencing orders to try during selection.
    #[arg(long, value_delimiter = ',')]
    pub d_values: Vec<usize>,
}

impl ModelArgs {
    pub fn plan(&self) -> ModelPlan {
        if self.max_p.is_some() || self.max_q.is_some() || !self.d_values.is_empty() {
            let d_values = if self.d_values.is_empty() { vec![0] } else { self.d_values.clone() };
            ModelPlan::Select { max_p: self.max_p.unwrap_or(0), max_q: self.max_q.unwrap_or(0), d_values }
        } else {
            ModelPlan::Fixed(self.order.unwrap_or(ArimaOrder::new(1, 0, 1)))
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ModelPlan {
    Fixed(ArimaOrder),
    Select { max_p: usize, max_q: usize, d_values: Vec<usize> },
}

#[derive(Debug, Args)]
pub struct FitArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub model: ModelArgs,
    /// Emit JSON instead of text.
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct ForecastArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub model: ModelArgs,
    /// Steps ahead.
    #[arg(long, default_value_t = arima_core::DEFAULT_HORIZON, value_parser = parse_horizon)]
    pub horizon: usize,
    /// Write one observed+forecast CSV per series into this directory.
    #[arg(long, value_hint = clap::ValueHint::DirPath)]
    pub plot_data: Option<PathBuf>,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct ReportArgs {
    /// deaths, morbidity or infant_deaths.
    #[arg(value_parser = parse_table)]
    pub table: TableId,
    #[arg(long, value_hint = clap::ValueHint::DirPath)]
    pub plot_data: Option<PathBuf>,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    /// AR coefficients, comma separated.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub phi: Vec<f64>,
    /// MA coefficients (minus convention), comma separated.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub theta: Vec<f64>,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub mu: f64,
    #[arg(long, default_value_t = 1.0)]
    pub sigma2: f64,
    #[arg(long, default_value_t = 0)]
    pub d: usize,
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = arima_core::DEFAULT_BURN_IN)]
    pub burn_in: usize,
    #[arg(long)]
    pub seed: u64,
    #[arg(long, default_value = "simulated")]
    pub name: String,
    #[arg(long, default_value_t = 1, allow_negative_numbers = true)]
    pub start_year: i32,
    #[arg(long)]
    pub json: bool,
}

fn parse_table(s: &str) -> Result<TableId, String> {
    s.parse()
}

fn parse_order(s: &str) -> Result<ArimaOrder, String> {
    s.parse()
}

fn parse_horizon(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(0) => Err("horizon must be at least 1".into()),
        Ok(h) => Ok(h),
        Err(e) => Err(e.to_string()),
    }
}
