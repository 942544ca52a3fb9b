//! Regression under privileged missingness: naive, repeated regression,
//! importance weighting and doubly robust fits, plus their population
//! counterparts on discrete joint distributions.

mod fit;
pub mod population;
mod weights;

pub use fit::{
    fit_dr, fit_iw, fit_method, fit_naive, fit_rr, fit_true, EstimatorConfig, Method, OuterStage,
    PmarModel,
};
pub use weights::{clip_probabilities, compute_weights, selection_weights, ClipMode, WeightConfig, WeightSource};
