//! Error metrics against oracle, selected, re-weighted and imputed labels,
//! and the interpolation/extrapolation split.

mod metrics;
mod report;

pub use metrics::{mse_oracle, mse_pseudo, mse_selected, mse_weighted, split_interp_extrap};
pub use report::{evaluate, EvalConfig, MetricsReport, CSV_HEADER};
