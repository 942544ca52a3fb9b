//! Regression under selection bias and missingness with privileged information.
//!
//! The crate implements three bias-correcting estimators for `E[Y | X]` when
//! the response is only observed on a selected subset and an additional
//! variable `Z` (available at training time only) renders the selection
//! ignorable: repeated regression, importance-weighted regression and their
//! doubly robust combination. It also ships the simulation machinery used to
//! benchmark them: ADMG enumeration with m-separation, Gaussian-process
//! structural equation models, and a selection-biasing procedure for real
//! datasets.

pub mod error;
pub mod estimators;
pub mod evaluation;
pub mod experiment;
pub mod gpsim;
pub mod graphs;
pub mod io;
pub mod numerics;
pub mod regression;

pub use error::{Error, Result};
