use serde::{Deserialize, Serialize};

use super::metrics::{mse_oracle, mse_pseudo, mse_selected, mse_weighted, split_interp_extrap};
use crate::error::{Error, Result};
use crate::estimators::{compute_weights, PmarModel, WeightConfig};
use crate::gpsim::Dataset;
use crate::numerics::{mean, Matrix};
use crate::regression::predict_propensity;

pub const CSV_HEADER: [&str; 10] = [
    "method",
    "mse",
    "mse_n",
    "mse_w",
    "mse_w_hat",
    "mse_tilde",
    "mse_interp",
    "mse_extrap",
    "n",
    "n_selected",
];

/// Metrics of one model on one test set. Absent values could not be
/// computed from the available columns.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricsReport {
    pub method: String,
    pub mse: Option<f64>,
    pub mse_n: Option<f64>,
    pub mse_w: Option<f64>,
    pub mse_w_hat: Option<f64>,
    pub mse_tilde: Option<f64>,
    pub mse_interp: Option<f64>,
    pub mse_extrap: Option<f64>,
    pub n: usize,
    pub n_selected: usize,
    pub n_interp: Option<usize>,
    pub n_extrap: Option<usize>,
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map(|x| format!("{x:.16e}")).unwrap_or_default()
}

impl MetricsReport {
    pub fn csv_record(&self) -> Vec<String> {
        vec![
            self.method.clone(),
            fmt_opt(self.mse),
            fmt_opt(self.mse_n),
            fmt_opt(self.mse_w),
            fmt_opt(self.mse_w_hat),
            fmt_opt(self.mse_tilde),
            fmt_opt(self.mse_interp),
            fmt_opt(self.mse_extrap),
            self.n.to_string(),
            self.n_selected.to_string(),
        ]
    }

    pub fn get(&self, metric: &str) -> Option<f64> {
        match metric {
            "mse" => self.mse,
            "mse_n" => self.mse_n,
            "mse_w" => self.mse_w,
            "mse_w_hat" => self.mse_w_hat,
            "mse_tilde" => self.mse_tilde,
            "mse_interp" => self.mse_interp,
            "mse_extrap" => self.mse_extrap,
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EvalConfig {
    pub weights: WeightConfig,
    /// Divide the re-weighted sums by the total weight instead of `|S'|`.
    pub self_normalized: bool,
}

impl Default for EvalConfig {
    fn default() -> Self {
        Self { weights: WeightConfig::default(), self_normalized: false }
    }
}

fn reweighted(pred: &[f64], y: &[f64], s: &[bool], probs: &[f64], cfg: &EvalConfig) -> Result<f64> {
    let marginal = mean(&s.iter().map(|&b| if b { 1.0 } else { 0.0 }).collect::<Vec<_>>());
    let w = compute_weights(probs, marginal, &cfg.weights)?;
    let mut sel: Vec<f64> = w.iter().zip(s).filter(|(_, &b)| b).map(|(w, _)| *w).collect();
    if cfg.self_normalized {
        let m = mean(&sel);
        sel.iter_mut().for_each(|v| *v /= m);
    }
    mse_weighted(pred, y, s, &sel)
}

/// Scores `model` on `test`.
///
/// * `x_selected_train` fixes the interpolation region; by default the
///   model's stored support box is used.
/// * `pseudo` overrides the imputed labels used for `mse_tilde`; by default
///   the model's own inner stage is used when it has one.
pub fn evaluate(
    model: &PmarModel,
    test: &Dataset,
    x_selected_train: Option<&Matrix>,
    pseudo: Option<&[f64]>,
    cfg: &EvalConfig,
) -> Result<MetricsReport> {
    let n = test.n();
    if n == 0 {
        return Err(Error::EmptyInput("empty test set".into()));
    }
    let pred = model.predict(&test.x)?;
    let oracle = if test.has_oracle_y() { Some(test.oracle_y()?) } else { None };
    let s = test.s.as_deref();
    let n_selected = s.map_or(0, |s| s.iter().filter(|&&b| b).count());

    // Outcomes on selected rows, zero-filled elsewhere (never read there).
    let y_sel: Option<Vec<f64>> = match (s, test.y.as_deref()) {
        (Some(s), Some(y)) if n_selected > 0 => Some(
            y.iter()
                .zip(s)
                .enumerate()
                .map(|(i, (v, &b))| match (v, b) {
                    (Some(v), _) => Ok(*v),
                    (None, false) => Ok(0.0),
                    (None, true) => Err(Error::InvalidValue(format!("selected test row {i} has no outcome"))),
                })
                .collect::<Result<_>>()?,
        ),
        _ => None,
    };

    let mse = oracle.as_ref().map(|t| mse_oracle(&pred, t)).transpose()?;
    let mut mse_n = None;
    let mut mse_w = None;
    let mut mse_w_hat = None;
    if let (Some(s), Some(y)) = (s, y_sel.as_ref()) {
        mse_n = Some(mse_selected(&pred, y, s)?);
        if let Some(p) = &test.p {
            mse_w = Some(reweighted(&pred, y, s, p, cfg)?);
        }
        if let Some(prop) = &model.propensity {
            let probs = predict_propensity(prop, &test.xz())?;
            mse_w_hat = Some(reweighted(&pred, y, s, &probs, cfg)?);
        }
    }

    let own_pseudo;
    let pseudo = match pseudo {
        Some(p) => Some(p),
        None => {
            own_pseudo = model.pseudo_labels(&test.xz())?;
            own_pseudo.as_deref()
        }
    };
    let mse_tilde = pseudo.map(|p| mse_pseudo(&pred, p)).transpose()?;

    let (mut mse_interp, mut mse_extrap, mut n_interp, mut n_extrap) = (None, None, None, None);
    let stored = model.support_points();
    if let (Some(t), Some(xs)) = (oracle.as_ref(), x_selected_train.or(stored.as_ref())) {
        let (im, em) = split_interp_extrap(&test.x, xs)?;
        let ni = im.iter().filter(|&&b| b).count();
        n_interp = Some(ni);
        n_extrap = Some(n - ni);
        if ni > 0 {
            mse_interp = Some(mse_selected(&pred, t, &im)?);
        }
        if ni < n {
            mse_extrap = Some(mse_selected(&pred, t, &em)?);
        }
    }

    Ok(MetricsReport {
        method: model.method.name().to_string(),
        mse,
        mse_n,
        mse_w,
        mse_w_hat,
        mse_tilde,
        mse_interp,
        mse_extrap,
        n,
        n_selected,
        n_interp,
        n_extrap,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::estimators::{fit_method, EstimatorConfig, Method};
    use crate::gpsim::simulate_example1;
    use crate::numerics::RngStream;

    #[test]
    fn full_report_and_decomposition() {
        let train = simulate_example1(200, &mut RngStream::new(1, 0).rng()).unwrap();
        let test = simulate_example1(200, &mut RngStream::new(1, 1).rng()).unwrap();
        let m = fit_method(Method::Rr, &train, &EstimatorConfig::default()).unwrap();
        let xs = train.subset(&train.selected_indices().unwrap()).x;
        let r = evaluate(&m, &test, Some(&xs), None, &EvalConfig::default()).unwrap();
        for k in ["mse", "mse_n", "mse_w", "mse_w_hat", "mse_tilde", "mse_interp", "mse_extrap"] {
            assert!(r.get(k).is_some(), "{k} missing");
        }
        let total = r.mse_interp.unwrap() * r.n_interp.unwrap() as f64
            + r.mse_extrap.unwrap() * r.n_extrap.unwrap() as f64;
        assert!((total - r.mse.unwrap() * r.n as f64).abs() < 1e-10 * total.max(1.0));

        let blind = test.without_oracle();
        let r = evaluate(&m, &blind, Some(&xs), None, &EvalConfig::default()).unwrap();
        assert!(r.mse.is_none() && r.mse_interp.is_none());
        assert!(r.mse_n.is_some() && r.mse_w.is_some());
    }
}
