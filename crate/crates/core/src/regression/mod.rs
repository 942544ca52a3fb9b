//! Base learners: weighted kernel ridge regression, weighted polynomial
//! least squares and logistic propensity models.

mod krr;
mod poly;
mod propensity;

pub use krr::{fit_krr, fit_krr_with_trend, predict, KrrConfig, KrrModel, Trend};
pub use poly::{fit_poly, PolyModel};
pub use propensity::{fit_propensity, predict_propensity, PropensityModel};

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::numerics::Matrix;

/// Any fitted regression of a real target on a point list.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model_type", rename_all = "snake_case")]
pub enum Regressor {
    Krr(KrrModel),
    Poly(PolyModel),
}

impl Regressor {
    pub fn predict(&self, query: &Matrix) -> Result<Vec<f64>> {
        match self {
            Regressor::Krr(m) => predict(m, query),
            Regressor::Poly(m) => m.predict(query),
        }
    }

    pub fn input_dim(&self) -> usize {
        match self {
            Regressor::Krr(m) => m.inputs.cols(),
            Regressor::Poly(m) => m.input_dim,
        }
    }
}

pub(crate) fn check_weights(weights: Option<&[f64]>, n: usize) -> Result<Vec<f64>> {
    use crate::error::Error;
    let Some(w) = weights else {
        return Ok(vec![1.0; n]);
    };
    if w.len() != n {
        return Err(Error::LengthMismatch { expected: n, got: w.len() });
    }
    if let Some(&v) = w.iter().find(|v| !(v.is_finite() && **v >= 0.0)) {
        return Err(Error::InvalidValue(format!("weight {v} is not a finite nonnegative number")));
    }
    if !w.iter().any(|&v| v > 0.0) {
        return Err(Error::AllZeroWeights);
    }
    Ok(w.to_vec())
}
