use rand::seq::SliceRandom;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::config::{ExperimentConfig, ExperimentKind};
use super::summary::{summarize, Summary};
use crate::error::{Error, Result};
use crate::estimators::{fit_method, Method, PmarModel};
use crate::evaluation::{evaluate, MetricsReport};
use crate::gpsim::{bias_dataset, simulate_admg, Dataset, Example1, SimConfig};
use crate::graphs::{enumerate_pmar_admgs, Admg};
use crate::io::load_housing;
use crate::numerics::{Matrix, RngStream};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultRow {
    pub replication: usize,
    pub group: String,
    pub report: MetricsReport,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Failure {
    pub replication: usize,
    pub group: String,
    pub error: String,
}

/// Fitted curves on a grid of `x` values for the first training set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Curves {
    pub x: Vec<f64>,
    pub truth: Option<Vec<f64>>,
    pub fits: Vec<(Method, Vec<f64>)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentOutput {
    pub config: ExperimentConfig,
    pub rows: Vec<ResultRow>,
    pub failures: Vec<Failure>,
    pub summary: Summary,
    pub curves: Option<Curves>,
    /// Graphs used by the sweep, with their enumeration indices.
    pub graphs: Vec<(usize, Admg)>,
}

pub fn fit_models(train: &Dataset, cfg: &ExperimentConfig) -> Result<Vec<PmarModel>> {
    cfg.methods.iter().map(|&m| fit_method(m, train, &cfg.estimator)).collect()
}

/// Scores every model on `test`. Imputed labels for `mse_tilde` come from
/// the repeated-regression model when one is present.
pub fn score_models(models: &[PmarModel], train: &Dataset, test: &Dataset, cfg: &ExperimentConfig) -> Result<Vec<MetricsReport>> {
    let x_sel = train.subset(&train.selected_indices()?).x;
    let xz = test.xz();
    let shared = match models.iter().find(|m| m.method == Method::Rr) {
        Some(rr) => rr.pseudo_labels(&xz)?,
        None => None,
    };
    models
        .iter()
        .map(|m| evaluate(m, test, Some(&x_sel), shared.as_deref(), &cfg.eval))
        .collect()
}

fn split_even(d: &Dataset, stream: RngStream) -> (Dataset, Dataset) {
    let mut idx: Vec<usize> = (0..d.n()).collect();
    idx.shuffle(&mut stream.rng());
    let half = d.n() / 2;
    let (a, b) = idx.split_at(half);
    (d.subset(a), d.subset(b))
}

type RepResult = std::result::Result<Vec<ResultRow>, Failure>;

fn rows_for(replication: usize, group: String, reports: Vec<MetricsReport>) -> Vec<ResultRow> {
    reports.into_iter().map(|report| ResultRow { replication, group: group.clone(), report }).collect()
}

fn example1_rep(cfg: &ExperimentConfig, root: RngStream, r: usize) -> RepResult {
    let stream = root.derive(r as u64);
    let fail = |e: Error| Failure { replication: r * cfg.test_sets, group: format!("train{r}"), error: e.to_string() };
    let train = cfg.example1.simulate(cfg.n, &mut stream.derive(0).rng()).map_err(fail)?;
    let models = fit_models(&train, cfg).map_err(fail)?;
    let mut rows = Vec::new();
    for t in 0..cfg.test_sets {
        let rep = r * cfg.test_sets + t;
        let group = format!("train{r}/test{t}");
        let run = || -> Result<Vec<MetricsReport>> {
            let test = cfg.example1.simulate(cfg.n, &mut stream.derive(1 + t as u64).rng())?;
            score_models(&models, &train, &test, cfg)
        };
        match run() {
            Ok(reports) => rows.extend(rows_for(rep, group, reports)),
            Err(e) => return Err(Failure { replication: rep, group, error: e.to_string() }),
        }
    }
    Ok(rows)
}

fn example1_curves(cfg: &ExperimentConfig, root: RngStream) -> Result<Curves> {
    let train = cfg.example1.simulate(cfg.n, &mut root.derive(0).derive(0).rng())?;
    let models = fit_models(&train, cfg)?;
    let x: Vec<f64> = (0..=120).map(|i| -6.0 + 0.1 * i as f64).collect();
    let q = Matrix::column(&x);
    let fits = models.iter().map(|m| Ok((m.method, m.predict(&q)?))).collect::<Result<_>>()?;
    Ok(Curves { truth: Some(x.iter().map(|&v| Example1::true_regression(v)).collect()), x, fits })
}

fn sweep_graphs(cfg: &ExperimentConfig, root: RngStream) -> Vec<(usize, Admg)> {
    let all = enumerate_pmar_admgs(cfg.domain);
    let k = if cfg.graphs == 0 { all.len() } else { cfg.graphs.min(all.len()) };
    let mut chosen = rand::seq::index::sample(&mut root.derive_named("graphs").rng(), all.len(), k).into_vec();
    chosen.sort_unstable();
    chosen.into_iter().map(|i| (i, all[i].clone())).collect()
}

fn sweep_rep(cfg: &ExperimentConfig, root: RngStream, job: usize, gid: usize, g: &Admg, r: usize) -> RepResult {
    let group = format!("graph{gid}/rep{r}");
    let stream = root.derive(gid as u64).derive(r as u64);
    let run = || -> Result<Vec<MetricsReport>> {
        let d = simulate_admg(&SimConfig::new(cfg.n, g.clone()), &mut stream.derive(0).rng())?;
        let (train, test) = split_even(&d, stream.derive(1));
        let models = fit_models(&train, cfg)?;
        score_models(&models, &train, &test, cfg)
    };
    run().map(|reports| rows_for(job, group.clone(), reports)).map_err(|e| Failure {
        replication: job,
        group,
        error: e.to_string(),
    })
}

fn boston_rep(cfg: &ExperimentConfig, base: &Dataset, root: RngStream, r: usize) -> RepResult {
    let stream = root.derive(r as u64);
    let group = format!("instance{r}");
    let run = || -> Result<Vec<MetricsReport>> {
        let biased = bias_dataset(base, &cfg.bias, &mut stream.derive(0).rng())?;
        let (train, test) = split_even(&biased, stream.derive(1));
        let models = fit_models(&train, cfg)?;
        score_models(&models, &train, &test, cfg)
    };
    run().map(|reports| rows_for(r, group.clone(), reports)).map_err(|e| Failure {
        replication: r,
        group,
        error: e.to_string(),
    })
}

/// Runs the configured experiment. Replications run in parallel; results
/// are ordered by replication index regardless of completion order.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentOutput> {
    cfg.validate()?;
    let kind = match cfg.experiment {
        ExperimentKind::Example1 => "example1",
        ExperimentKind::AdmgSweep => "admg-sweep",
        ExperimentKind::Boston => "boston",
    };
    let root = RngStream::new(cfg.seed, 0).derive_named(kind);
    let mut graphs = Vec::new();
    let mut curves = None;
    let results: Vec<RepResult> = match cfg.experiment {
        ExperimentKind::Example1 => {
            curves = Some(example1_curves(cfg, root)?);
            (0..cfg.replications).into_par_iter().map(|r| example1_rep(cfg, root, r)).collect()
        }
        ExperimentKind::AdmgSweep => {
            graphs = sweep_graphs(cfg, root);
            let jobs: Vec<(usize, usize, usize)> = graphs
                .iter()
                .enumerate()
                .flat_map(|(k, (gid, _))| (0..cfg.replications).map(move |r| (k, *gid, r)))
                .collect();
            jobs.par_iter()
                .enumerate()
                .map(|(job, &(k, gid, r))| sweep_rep(cfg, root, job, gid, &graphs[k].1, r))
                .collect()
        }
        ExperimentKind::Boston => {
            let path = cfg.data_path.as_ref().expect("validated");
            let base = load_housing(path, cfg.standardize)?;
            (0..cfg.replications).into_par_iter().map(|r| boston_rep(cfg, &base, root, r)).collect()
        }
    };

    let mut rows = Vec::new();
    let mut failures = Vec::new();
    for res in results {
        match res {
            Ok(r) => rows.extend(r),
            Err(f) if cfg.keep_going => failures.push(f),
            Err(f) => return Err(Error::ReplicationFailed { replication: f.replication, msg: format!("{}: {}", f.group, f.error) }),
        }
    }
    let summary = summarize(&rows, &cfg.methods);
    Ok(ExperimentOutput { config: cfg.clone(), rows, failures, summary, curves, graphs })
}
