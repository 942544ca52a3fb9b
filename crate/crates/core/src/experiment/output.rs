use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::config::ExperimentConfig;
use super::pipelines::ExperimentOutput;
use super::summary::{format_table, Summary};
use crate::error::Result;
use crate::evaluation::CSV_HEADER;
use crate::graphs::write_graphs;

pub const RESULTS_HEADER: [&str; 2] = ["replication", "group"];

pub const MANIFEST_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub manifest_version: u32,
    pub tool: String,
    pub tool_version: String,
    pub config: ExperimentConfig,
    /// Enumeration indices of the sweep graphs.
    pub graph_ids: Vec<usize>,
    pub files: Vec<String>,
}

#[derive(Serialize)]
struct SummaryDoc<'a> {
    summary: &'a Summary,
    replications_failed: &'a [super::pipelines::Failure],
    rows: usize,
}

pub fn read_manifest(path: impl AsRef<Path>) -> Result<ExperimentConfig> {
    let m: Manifest = serde_json::from_str(&fs::read_to_string(path)?)?;
    Ok(m.config)
}

/// Writes `results.csv`, `results.json`, `summary.json`, `table.txt`,
/// `manifest.json` and, when available, `curves.csv` and `graphs.txt`.
pub fn write_outputs(out: &ExperimentOutput, dir: impl AsRef<Path>) -> Result<Vec<String>> {
    let dir = dir.as_ref();
    fs::create_dir_all(dir)?;
    let mut files = Vec::new();

    let mut w = csv::Writer::from_path(dir.join("results.csv"))?;
    w.write_record(RESULTS_HEADER.iter().chain(CSV_HEADER.iter()))?;
    for r in &out.rows {
        let mut rec = vec![r.replication.to_string(), r.group.clone()];
        rec.extend(r.report.csv_record());
        w.write_record(&rec)?;
    }
    w.flush()?;
    files.push("results.csv".to_string());

    fs::write(dir.join("results.json"), serde_json::to_string_pretty(&out.rows)? + "\n")?;
    files.push("results.json".to_string());

    let doc = SummaryDoc { summary: &out.summary, replications_failed: &out.failures, rows: out.rows.len() };
    fs::write(dir.join("summary.json"), serde_json::to_string_pretty(&doc)? + "\n")?;
    files.push("summary.json".to_string());

    fs::write(dir.join("table.txt"), format_table(&out.summary))?;
    files.push("table.txt".to_string());

    if let Some(c) = &out.curves {
        let mut w = csv::Writer::from_path(dir.join("curves.csv"))?;
        let mut header = vec!["x".to_string()];
        if c.truth.is_some() {
            header.push("truth".into());
        }
        header.extend(c.fits.iter().map(|(m, _)| m.name().to_string()));
        w.write_record(&header)?;
        for i in 0..c.x.len() {
            let mut rec = vec![format!("{:.16e}", c.x[i])];
            if let Some(t) = &c.truth {
                rec.push(format!("{:.16e}", t[i]));
            }
            rec.extend(c.fits.iter().map(|(_, v)| format!("{:.16e}", v[i])));
            w.write_record(&rec)?;
        }
        w.flush()?;
        files.push("curves.csv".to_string());
    }

    if !out.graphs.is_empty() {
        let gs: Vec<_> = out.graphs.iter().map(|(_, g)| g.clone()).collect();
        fs::write(dir.join("graphs.txt"), write_graphs(&gs))?;
        files.push("graphs.txt".to_string());
    }

    let manifest = Manifest {
        manifest_version: MANIFEST_VERSION,
        tool: env!("CARGO_PKG_NAME").to_string(),
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        config: out.config.clone(),
        graph_ids: out.graphs.iter().map(|(i, _)| *i).collect(),
        files: files.clone(),
    };
    fs::write(dir.join("manifest.json"), serde_json::to_string_pretty(&manifest)? + "\n")?;
    files.push("manifest.json".to_string());
    Ok(files)
}
