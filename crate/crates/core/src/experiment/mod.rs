//! Replicated experiment pipelines: simulate or bias data, fit every
//! method, score on held-out rows, aggregate and test paired differences.

mod config;
mod output;
mod pipelines;
mod summary;
mod wilcoxon;

pub use config::{ExperimentConfig, ExperimentKind, Preset};
pub use output::{read_manifest, write_outputs, Manifest, RESULTS_HEADER};
pub use pipelines::{fit_models, run_experiment, score_models, Curves, ExperimentOutput, Failure, ResultRow};
pub use summary::{format_table, summarize, MethodSummary, MetricStat, PairTest, Summary, TABLE_METRICS};
pub use wilcoxon::{wilcoxon_signed_rank, WilcoxonResult};
