//! ARIMA(p,d,q) toolkit for short annual series.
//!
//! The pipeline follows the Box-Jenkins steps: difference the series,
//! inspect its ACF/PACF, estimate candidate orders by conditional sum of
//! squares, check residuals, then forecast with 95% ψ-weight intervals and
//! label the forecast trend.
//!
//! ```
//! use arima_core::{builtin, fit, forecast, classify_trend, ArimaOrder, TableId};
//!
//! let deaths = builtin(TableId::Deaths);
//! let heart = deaths.get("Diseases of the heart").unwrap();
//! let model = fit(heart, ArimaOrder::new(1, 0, 1)).unwrap();
//! let f = forecast(&model, heart, 14).unwrap();
//! assert_eq!(f.start_year, 2017);
//! let trend = classify_trend(74134.0, &f);
//! println!("{}", trend.label);
//! ```

pub mod dataset;
pub mod error;
pub mod estimate;
pub mod forecast;
pub mod model;
pub mod optimizer;
pub mod poly;
pub mod series;
pub mod synth;

pub use dataset::{builtin, read_csv, to_csv_string, write_csv, Dataset, TableId};
pub use error::{ArimaError, Result};
pub use estimate::{
    css_objective, diagnose, fit, ljung_box, select_model, select_orders, ArimaFit, CellOutcome, GridCell, LjungBox,
    Selection,
};
pub use forecast::{
    classify_trend, classify_trend_with, forecast, forecast_from_state, psi_weights, Forecast, Trend, TrendLabel,
    TrendThresholds, DEFAULT_HORIZON, Z95,
};
pub use model::{ArimaOrder, ArimaParams};
pub use series::{
    acf, contiguous_values, difference, pacf, ContiguousRun, Correlogram, CorrelogramKind, Series, YearRange,
};
pub use synth::{simulate, GaussianStream, SimSpec, DEFAULT_BURN_IN};
