use std::collections::BTreeMap;
use std::fmt::Write;

use serde::{Deserialize, Serialize};

use super::pipelines::ResultRow;
use super::wilcoxon::{wilcoxon_signed_rank, WilcoxonResult};
use crate::estimators::Method;
use crate::numerics::{mean, sample_sd};

pub const TABLE_METRICS: [(&str, &str); 7] = [
    ("mse", "MSE"),
    ("mse_n", "MSE-n"),
    ("mse_w", "MSE-w"),
    ("mse_w_hat", "MSE-w^"),
    ("mse_tilde", "MSE-y~"),
    ("mse_interp", "MSE-interp"),
    ("mse_extrap", "MSE-extrap"),
];

// (expected smaller, expected larger) on the oracle MSE
const PAIRS: [(Method, Method); 5] = [
    (Method::Rr, Method::Naive),
    (Method::Naive, Method::IwT),
    (Method::Rr, Method::IwT),
    (Method::DrT, Method::IwT),
    (Method::Rr, Method::DrT),
];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricStat {
    pub metric: String,
    pub mean: Option<f64>,
    pub sd: Option<f64>,
    pub count: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MethodSummary {
    pub method: Method,
    pub metrics: Vec<MetricStat>,
}

impl MethodSummary {
    pub fn mean(&self, metric: &str) -> Option<f64> {
        self.metrics.iter().find(|m| m.metric == metric).and_then(|m| m.mean)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairTest {
    pub metric: String,
    pub lower: Method,
    pub higher: Method,
    pub pairs: usize,
    pub test: Option<WilcoxonResult>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub methods: Vec<MethodSummary>,
    pub tests: Vec<PairTest>,
}

impl Summary {
    pub fn method(&self, m: Method) -> Option<&MethodSummary> {
        self.methods.iter().find(|s| s.method == m)
    }

    pub fn test(&self, lower: Method, higher: Method) -> Option<&PairTest> {
        self.tests.iter().find(|t| t.lower == lower && t.higher == higher)
    }
}

pub fn summarize(rows: &[ResultRow], methods: &[Method]) -> Summary {
    let methods_summary = methods
        .iter()
        .map(|&m| {
            let mine: Vec<&ResultRow> = rows.iter().filter(|r| r.report.method == m.name()).collect();
            let metrics = TABLE_METRICS
                .iter()
                .map(|(key, _)| {
                    let vals: Vec<f64> = mine.iter().filter_map(|r| r.report.get(key)).collect();
                    MetricStat {
                        metric: key.to_string(),
                        mean: (!vals.is_empty()).then(|| mean(&vals)),
                        sd: (vals.len() > 1).then(|| sample_sd(&vals)),
                        count: vals.len(),
                    }
                })
                .collect();
            MethodSummary { method: m, metrics }
        })
        .collect();

    let mut by_rep: BTreeMap<usize, BTreeMap<&str, f64>> = BTreeMap::new();
    for r in rows {
        if let Some(v) = r.report.mse {
            by_rep.entry(r.replication).or_default().insert(r.report.method.as_str(), v);
        }
    }
    let tests = PAIRS
        .iter()
        .filter(|(a, b)| methods.contains(a) && methods.contains(b))
        .map(|&(lower, higher)| {
            let (xa, xb): (Vec<f64>, Vec<f64>) = by_rep
                .values()
                .filter_map(|m| Some((*m.get(lower.name())?, *m.get(higher.name())?)))
                .unzip();
            PairTest {
                metric: "mse".into(),
                lower,
                higher,
                pairs: xa.len(),
                test: if xa.is_empty() { None } else { wilcoxon_signed_rank(&xa, &xb).ok() },
            }
        })
        .collect();
    Summary { methods: methods_summary, tests }
}

/// Plain-text table of `mean (sd)` per method and metric, followed by the
/// paired tests.
pub fn format_table(s: &Summary) -> String {
    let mut out = String::new();
    let _ = write!(out, "{:<8}", "method");
    for (_, label) in TABLE_METRICS {
        let _ = write!(out, " {:>17}", label);
    }
    out.push('\n');
    for m in &s.methods {
        let _ = write!(out, "{:<8}", m.method.name());
        for stat in &m.metrics {
            let cell = match (stat.mean, stat.sd) {
                (Some(mu), Some(sd)) => format!("{mu:.2} ({sd:.2})"),
                (Some(mu), None) => format!("{mu:.2}"),
                _ => "-".into(),
            };
            let _ = write!(out, " {:>17}", cell);
        }
        out.push('\n');
    }
    for t in &s.tests {
        if let Some(w) = &t.test {
            let _ = writeln!(
                out,
                "wilcoxon {} vs {} on {}: pairs={} median diff={:.4} p={:.3e}",
                t.lower.name(),
                t.higher.name(),
                t.metric,
                w.n,
                w.median_difference,
                w.p_value
            );
        }
    }
    out
}
