use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::weights::{selection_weights, WeightConfig, WeightSource};
use crate::error::{Error, Result};
use crate::gpsim::Dataset;
use crate::numerics::Matrix;
use crate::regression::{fit_poly, fit_propensity, KrrConfig, PropensityModel, Regressor};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Method {
    #[serde(rename = "naive")]
    Naive,
    #[serde(rename = "rr")]
    Rr,
    #[serde(rename = "iw-t")]
    IwT,
    #[serde(rename = "iw-e")]
    IwE,
    #[serde(rename = "dr-t")]
    DrT,
    #[serde(rename = "dr-e")]
    DrE,
    #[serde(rename = "true")]
    True,
}

impl Method {
    pub const ALL: [Method; 7] =
        [Method::Naive, Method::Rr, Method::IwT, Method::IwE, Method::DrT, Method::DrE, Method::True];

    pub fn name(self) -> &'static str {
        match self {
            Method::Naive => "naive",
            Method::Rr => "rr",
            Method::IwT => "iw-t",
            Method::IwE => "iw-e",
            Method::DrT => "dr-t",
            Method::DrE => "dr-e",
            Method::True => "true",
        }
    }

    pub fn weight_source(self) -> Option<WeightSource> {
        match self {
            Method::IwT | Method::DrT => Some(WeightSource::TrueProb),
            Method::IwE | Method::DrE => Some(WeightSource::Estimated),
            _ => None,
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Method::ALL
            .into_iter()
            .find(|m| m.name() == s.to_ascii_lowercase())
            .ok_or_else(|| Error::InvalidValue(format!("unknown method {s:?}")))
    }
}

/// Learner used for the outer (pseudo-label on `x`) stage of repeated regression.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum OuterStage {
    Krr,
    Poly { degree: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EstimatorConfig {
    pub krr: KrrConfig,
    pub weights: WeightConfig,
    pub propensity_l2: f64,
    pub outer: OuterStage,
}

impl Default for EstimatorConfig {
    fn default() -> Self {
        Self {
            krr: KrrConfig::default(),
            weights: WeightConfig::default(),
            propensity_l2: 1e-3,
            outer: OuterStage::Krr,
        }
    }
}

/// Fitted predictor of `E[Y | X]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PmarModel {
    pub method: Method,
    pub weights: Option<WeightConfig>,
    /// Prediction stage (the outer stage for repeated regression).
    pub model: Regressor,
    /// Regression of `y` on `(x, z)` over selected rows.
    pub inner: Option<Regressor>,
    /// Importance-weighted regression of repeated-regression residuals.
    pub residual: Option<Regressor>,
    /// Selection model on `(x, z)` of the training data.
    pub propensity: Option<PropensityModel>,
    /// Per-coordinate `[min, max]` of `x` over selected training rows.
    #[serde(default)]
    pub support: Option<Vec<[f64; 2]>>,
}

impl PmarModel {
    pub fn predict(&self, x: &Matrix) -> Result<Vec<f64>> {
        let mut out = self.model.predict(x)?;
        if let Some(r) = &self.residual {
            for (o, v) in out.iter_mut().zip(r.predict(x)?) {
                *o += v;
            }
        }
        Ok(out)
    }

    /// Corners of the selected-support box as a two-row point list.
    pub fn support_points(&self) -> Option<Matrix> {
        let b = self.support.as_ref()?;
        let lo: Vec<f64> = b.iter().map(|r| r[0]).collect();
        let hi: Vec<f64> = b.iter().map(|r| r[1]).collect();
        Matrix::from_rows(&[lo, hi]).ok()
    }

    /// Inner-stage imputations `Ê[Y | X, Z, S = 1]` at the rows of `xz`.
    pub fn pseudo_labels(&self, xz: &Matrix) -> Result<Option<Vec<f64>>> {
        self.inner.as_ref().map(|m| m.predict(xz)).transpose()
    }
}

struct Selected {
    x: Matrix,
    xz: Matrix,
    y: Vec<f64>,
}

fn selected(d: &Dataset) -> Result<Selected> {
    let idx = d.selected_indices()?;
    if idx.len() < 2 {
        return Err(Error::TooFewSelected { needed: 2, got: idx.len() });
    }
    let ys = d.outcomes()?;
    let y = idx
        .iter()
        .map(|&i| ys[i].ok_or_else(|| Error::InvalidValue(format!("selected row {i} has no outcome"))))
        .collect::<Result<Vec<_>>>()?;
    let sub = d.subset(&idx);
    Ok(Selected { xz: sub.xz(), x: sub.x, y })
}

fn krr(cfg: &EstimatorConfig, x: &Matrix, y: &[f64], w: Option<&[f64]>) -> Result<Regressor> {
    Ok(Regressor::Krr(cfg.krr.fit(x, y, w)?))
}

fn plain(method: Method, model: Regressor) -> PmarModel {
    PmarModel { method, weights: None, model, inner: None, residual: None, propensity: None, support: None }
}

/// Regression of `y` on `x` over the selected rows.
pub fn fit_naive(d: &Dataset, cfg: &EstimatorConfig) -> Result<PmarModel> {
    let s = selected(d)?;
    Ok(plain(Method::Naive, krr(cfg, &s.x, &s.y, None)?))
}

/// Regression of `y` on `x` over every row; requires all outcomes.
pub fn fit_true(d: &Dataset, cfg: &EstimatorConfig) -> Result<PmarModel> {
    let y = d.oracle_y()?;
    Ok(plain(Method::True, krr(cfg, &d.x, &y, None)?))
}

/// Inner regression of `y` on `(x, z)` over selected rows, imputation on
/// every row, outer regression of the imputations on `x`.
pub fn fit_rr(d: &Dataset, cfg: &EstimatorConfig) -> Result<PmarModel> {
    let s = selected(d)?;
    let inner = krr(cfg, &s.xz, &s.y, None)?;
    let pseudo = inner.predict(&d.xz())?;
    let outer = match cfg.outer {
        OuterStage::Krr => krr(cfg, &d.x, &pseudo, None)?,
        OuterStage::Poly { degree } => Regressor::Poly(fit_poly(&d.x, &pseudo, None, degree)?),
    };
    Ok(PmarModel {
        method: Method::Rr,
        weights: None,
        model: outer,
        inner: Some(inner),
        residual: None,
        propensity: None,
        support: None,
    })
}

/// Weighted regression of `y` on `x` over selected rows; `weights` holds
/// one entry per selected row.
pub fn fit_iw(d: &Dataset, weights: &[f64], cfg: &EstimatorConfig) -> Result<PmarModel> {
    let s = selected(d)?;
    if weights.len() != s.y.len() {
        return Err(Error::LengthMismatch { expected: s.y.len(), got: weights.len() });
    }
    let mut m = plain(Method::IwT, krr(cfg, &s.x, &s.y, Some(weights))?);
    m.weights = Some(cfg.weights);
    Ok(m)
}

/// Repeated regression plus a weighted regression of its residuals on `x`.
pub fn fit_dr(d: &Dataset, weights: &[f64], cfg: &EstimatorConfig) -> Result<PmarModel> {
    let s = selected(d)?;
    if weights.len() != s.y.len() {
        return Err(Error::LengthMismatch { expected: s.y.len(), got: weights.len() });
    }
    let mut rr = fit_rr(d, cfg)?;
    let fitted = rr.model.predict(&s.x)?;
    let resid: Vec<f64> = s.y.iter().zip(&fitted).map(|(y, f)| y - f).collect();
    rr.residual = Some(krr(cfg, &s.x, &resid, Some(weights))?);
    rr.method = Method::DrT;
    rr.weights = Some(cfg.weights);
    Ok(rr)
}

/// Fits `method` on a training set, deriving importance weights as needed.
///
/// A propensity model on `(x, z, s)` is attached whenever both classes are
/// present, for estimated-weight evaluation metrics.
pub fn fit_method(method: Method, d: &Dataset, cfg: &EstimatorConfig) -> Result<PmarModel> {
    let (mut model, prop) = match method.weight_source() {
        Some(source) => {
            let wcfg = cfg.weights.with_source(source);
            let (w, prop) = selection_weights(d, &wcfg, cfg.propensity_l2)?;
            let cfg = EstimatorConfig { weights: wcfg, ..*cfg };
            let m = match method {
                Method::IwT | Method::IwE => fit_iw(d, &w, &cfg)?,
                _ => fit_dr(d, &w, &cfg)?,
            };
            (m, prop)
        }
        None => {
            let m = match method {
                Method::Naive => fit_naive(d, cfg)?,
                Method::Rr => fit_rr(d, cfg)?,
                _ => fit_true(d, cfg)?,
            };
            (m, None)
        }
    };
    model.method = method;
    model.support = support_box(d);
    model.propensity = match prop {
        Some(p) => Some(p),
        None => fit_propensity(&d.xz(), d.selection()?, cfg.propensity_l2).ok(),
    };
    Ok(model)
}

fn support_box(d: &Dataset) -> Option<Vec<[f64; 2]>> {
    let idx = d.selected_indices().ok()?;
    if idx.is_empty() {
        return None;
    }
    Some(
        (0..d.x.cols())
            .map(|j| {
                idx.iter().fold([f64::INFINITY, f64::NEG_INFINITY], |[lo, hi], &i| {
                    [lo.min(d.x[(i, j)]), hi.max(d.x[(i, j)])]
                })
            })
            .collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gpsim::simulate_example1;
    use crate::numerics::RngStream;

    fn line_data() -> Dataset {
        let xs: Vec<f64> = (0..30).map(|i| i as f64 / 5.0 - 3.0).collect();
        let zs: Vec<f64> = xs.iter().map(|x| (7.0 * x).sin()).collect();
        let y: Vec<Option<f64>> = xs.iter().map(|x| Some(1.0 + 2.0 * x)).collect();
        let s: Vec<bool> = xs.iter().map(|&x| x < 1.0).collect();
        Dataset::new(Matrix::column(&xs), Matrix::column(&zs), Some(y), Some(s), None).unwrap()
    }

    #[test]
    fn method_names_round_trip() {
        for m in Method::ALL {
            assert_eq!(m.name().parse::<Method>().unwrap(), m);
            assert_eq!(serde_json::to_string(&m).unwrap(), format!("\"{}\"", m.name()));
        }
        assert!("bogus".parse::<Method>().is_err());
    }

    #[test]
    fn naive_recovers_line_on_support() {
        let d = line_data();
        let m = fit_naive(&d, &EstimatorConfig::default()).unwrap();
        let q = Matrix::column(&[-2.0, 0.0, 0.8]);
        for (p, x) in m.predict(&q).unwrap().iter().zip([-2.0, 0.0, 0.8]) {
            assert!((p - (1.0 + 2.0 * x)).abs() < 1e-4, "{p} at {x}");
        }
    }

    #[test]
    fn iw_with_unit_weights_matches_naive() {
        let d = simulate_example1(200, &mut RngStream::new(3, 0).rng()).unwrap();
        let cfg = EstimatorConfig::default();
        let naive = fit_naive(&d, &cfg).unwrap();
        let k = d.num_selected().unwrap();
        let iw = fit_iw(&d, &vec![1.0; k], &cfg).unwrap();
        let q = Matrix::column(&[-3.0, 0.0, 2.5]);
        assert_eq!(naive.predict(&q).unwrap(), iw.predict(&q).unwrap());
    }

    #[test]
    fn dr_equals_rr_when_exact() {
        let d = line_data();
        let cfg = EstimatorConfig::default();
        let rr = fit_rr(&d, &cfg).unwrap();
        let k = d.num_selected().unwrap();
        let dr = fit_dr(&d, &vec![1.3; k], &cfg).unwrap();
        let q = Matrix::column(&[-2.5, 0.0, 2.0]);
        for (a, b) in rr.predict(&q).unwrap().iter().zip(dr.predict(&q).unwrap()) {
            assert!((a - b).abs() < 1e-6);
        }
    }

    #[test]
    fn too_few_selected() {
        let mut d = line_data();
        d.s = Some((0..30).map(|i| i == 0).collect());
        assert!(matches!(
            fit_naive(&d, &EstimatorConfig::default()),
            Err(Error::TooFewSelected { needed: 2, got: 1 })
        ));
    }

    #[test]
    fn iw_t_needs_probabilities() {
        let d = line_data();
        assert!(matches!(
            fit_method(Method::IwT, &d, &EstimatorConfig::default()),
            Err(Error::Schema(_))
        ));
    }

    #[test]
    fn fit_all_methods_on_example() {
        let d = simulate_example1(150, &mut RngStream::new(9, 0).rng()).unwrap();
        for m in Method::ALL {
            let model = fit_method(m, &d, &EstimatorConfig::default()).unwrap();
            assert_eq!(model.method, m);
            assert!(model.propensity.is_some());
            let p = model.predict(&Matrix::column(&[0.0])).unwrap();
            assert!(p[0].is_finite());
        }
    }
}
