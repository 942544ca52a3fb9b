use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::estimators::{EstimatorConfig, Method};
use crate::evaluation::EvalConfig;
use crate::gpsim::{BiasConfig, Example1};
use crate::graphs::EnumerationDomain;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentKind {
    Example1,
    AdmgSweep,
    Boston,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Preset {
    Desk,
    Full,
}

/// Everything needed to rerun an experiment bit for bit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub experiment: ExperimentKind,
    pub preset: Option<Preset>,
    pub seed: u64,
    /// Rows per simulated set (example1: each training and test set;
    /// admg-sweep: before the even train/test split). Unused for boston.
    pub n: usize,
    /// Training sets (example1), repetitions per graph (admg-sweep) or
    /// biased instantiations (boston).
    pub replications: usize,
    /// Test sets per training set (example1 only).
    pub test_sets: usize,
    /// Graphs drawn from the enumeration (admg-sweep only; 0 = all).
    pub graphs: usize,
    pub methods: Vec<Method>,
    pub estimator: EstimatorConfig,
    pub eval: EvalConfig,
    pub example1: Example1,
    pub domain: EnumerationDomain,
    pub bias: BiasConfig,
    pub data_path: Option<PathBuf>,
    /// Standardize the housing columns before biasing.
    pub standardize: bool,
    /// Record failed replications instead of aborting.
    pub keep_going: bool,
}

impl ExperimentConfig {
    pub fn new(experiment: ExperimentKind, preset: Preset) -> Self {
        let full = preset == Preset::Full;
        let (n, replications, test_sets, graphs) = match experiment {
            ExperimentKind::Example1 => (400, if full { 100 } else { 20 }, 5, 0),
            ExperimentKind::AdmgSweep => {
                if full {
                    (1000, 60, 0, 0)
                } else {
                    (500, 10, 0, 10)
                }
            }
            ExperimentKind::Boston => (0, if full { 500 } else { 50 }, 0, 0),
        };
        Self {
            experiment,
            preset: Some(preset),
            seed: 20240101,
            n,
            replications,
            test_sets,
            graphs,
            methods: Method::ALL.to_vec(),
            estimator: EstimatorConfig::default(),
            eval: EvalConfig::default(),
            example1: Example1::default(),
            domain: EnumerationDomain::default(),
            bias: BiasConfig::default(),
            data_path: None,
            standardize: true,
            keep_going: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.replications == 0 {
            return Err(Error::InvalidValue("replications must be at least 1".into()));
        }
        if self.methods.is_empty() {
            return Err(Error::InvalidValue("method list is empty".into()));
        }
        self.estimator.weights.validate()?;
        self.eval.weights.validate()?;
        match self.experiment {
            ExperimentKind::Example1 if self.n < 2 || self.test_sets == 0 => {
                Err(Error::InvalidValue("example1 needs n >= 2 and at least one test set".into()))
            }
            ExperimentKind::AdmgSweep if self.n < 4 => {
                Err(Error::InvalidValue("admg-sweep needs n >= 4".into()))
            }
            ExperimentKind::Boston if self.data_path.is_none() => {
                Err(Error::InvalidValue("boston needs a data path".into()))
            }
            _ => Ok(()),
        }
    }
}
