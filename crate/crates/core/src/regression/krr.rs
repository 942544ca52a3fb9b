use serde::{Deserialize, Serialize};

use super::check_weights;
use crate::error::{Error, Result};
use crate::gpsim::{cross_gram, gram, median_distance, KernelSpec};
use crate::numerics::{cholesky, cholesky_solve, weighted_mean, Matrix};

/// Unpenalized part of the regression function.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Trend {
    /// Weighted mean of the targets.
    Constant,
    /// Affine function of the inputs.
    Linear,
}

/// Weighted kernel ridge regression fit:
/// `ŷ(q) = intercept + slope · q + Σᵢ αᵢ k(q, xᵢ)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KrrModel {
    pub kernel: KernelSpec,
    pub ridge: f64,
    pub intercept: f64,
    pub slope: Vec<f64>,
    pub inputs: Matrix,
    pub dual: Vec<f64>,
}

/// Hyperparameters resolved against the training data at fit time.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KrrConfig {
    pub kernel: KernelSpec,
    /// Fixed lengthscale; `None` uses the median pairwise distance.
    pub lengthscale: Option<f64>,
    pub bandwidth_multiplier: f64,
    /// Ridge per training row; the penalty is `ridge · n`.
    pub ridge: f64,
    pub trend: Trend,
}

impl Default for KrrConfig {
    fn default() -> Self {
        Self {
            kernel: KernelSpec::squared_exponential(),
            lengthscale: None,
            bandwidth_multiplier: 1.0,
            ridge: 1e-4,
            trend: Trend::Linear,
        }
    }
}

impl KrrConfig {
    pub fn fit(&self, inputs: &Matrix, targets: &[f64], weights: Option<&[f64]>) -> Result<KrrModel> {
        if !(self.ridge > 0.0) || !(self.bandwidth_multiplier > 0.0) {
            return Err(Error::InvalidValue("ridge and bandwidth multiplier must be positive".into()));
        }
        let l = self.lengthscale.unwrap_or_else(|| median_distance(inputs)) * self.bandwidth_multiplier;
        let k = self.kernel.with_lengthscale(l);
        fit_krr_with_trend(inputs, targets, weights, k, self.ridge * inputs.rows() as f64, self.trend)
    }
}

/// Minimizes `Σ wᵢ (g(xᵢ) − yᵢ)² + ridge · ‖g‖²` with a constant trend.
pub fn fit_krr(
    inputs: &Matrix,
    targets: &[f64],
    weights: Option<&[f64]>,
    k: KernelSpec,
    ridge: f64,
) -> Result<KrrModel> {
    fit_krr_with_trend(inputs, targets, weights, k, ridge, Trend::Constant)
}

pub fn fit_krr_with_trend(
    inputs: &Matrix,
    targets: &[f64],
    weights: Option<&[f64]>,
    k: KernelSpec,
    ridge: f64,
    trend: Trend,
) -> Result<KrrModel> {
    let n = inputs.rows();
    if n == 0 {
        return Err(Error::EmptyInput("no training rows".into()));
    }
    if targets.len() != n {
        return Err(Error::LengthMismatch { expected: n, got: targets.len() });
    }
    if let Some(v) = targets.iter().find(|v| !v.is_finite()) {
        return Err(Error::InvalidValue(format!("non-finite target {v}")));
    }
    if !(ridge > 0.0 && ridge.is_finite()) {
        return Err(Error::InvalidValue(format!("ridge must be positive, got {ridge}")));
    }
    let w = check_weights(weights, n)?;

    // Zero-weight rows receive zero dual coefficients; drop them up front.
    let keep: Vec<usize> = (0..n).filter(|&i| w[i] > 0.0).collect();
    let x = inputs.select_rows(&keep);
    let y: Vec<f64> = keep.iter().map(|&i| targets[i]).collect();
    let w: Vec<f64> = keep.iter().map(|&i| w[i]).collect();
    let sw: Vec<f64> = w.iter().map(|v| v.sqrt()).collect();
    let m = x.rows();

    let mut a = gram(&x, &k);
    for i in 0..m {
        for j in 0..m {
            a[(i, j)] *= sw[i] * sw[j];
        }
    }
    a.add_diagonal(ridge);
    let l = cholesky(&a, 0.0)?;

    if trend == Trend::Linear {
        if let Some((intercept, slope, beta)) = linear_trend_solve(&x, &y, &sw, &l)? {
            let dual = scatter(n, &keep, beta.iter().zip(&sw).map(|(b, s)| b * s));
            return Ok(KrrModel { kernel: k, ridge, intercept, slope, inputs: inputs.clone(), dual });
        }
    }

    let intercept = weighted_mean(&y, &w);
    let rhs: Vec<f64> = y.iter().zip(&sw).map(|(v, s)| s * (v - intercept)).collect();
    let beta = cholesky_solve(&l, &rhs)?;
    let dual = scatter(n, &keep, beta.iter().zip(&sw).map(|(b, s)| b * s));
    Ok(KrrModel { kernel: k, ridge, intercept, slope: Vec::new(), inputs: inputs.clone(), dual })
}

fn scatter(n: usize, keep: &[usize], values: impl Iterator<Item = f64>) -> Vec<f64> {
    let mut out = vec![0.0; n];
    for (&i, v) in keep.iter().zip(values) {
        out[i] = v;
    }
    out
}

/// Trend coefficients `c` from `(QᵀM⁻¹Q) c = QᵀM⁻¹ỹ` with `Q = W^½ [1, X]`,
/// then `β = M⁻¹(ỹ − Qc)`. `None` when the trend is not identifiable.
fn linear_trend_solve(
    x: &Matrix,
    y: &[f64],
    sw: &[f64],
    l: &Matrix,
) -> Result<Option<(f64, Vec<f64>, Vec<f64>)>> {
    let m = x.rows();
    let p = x.cols() + 1;
    if m < p + 1 {
        return Ok(None);
    }
    let q: Vec<Vec<f64>> = (0..p)
        .map(|j| (0..m).map(|i| sw[i] * if j == 0 { 1.0 } else { x[(i, j - 1)] }).collect())
        .collect();
    let yt: Vec<f64> = y.iter().zip(sw).map(|(v, s)| v * s).collect();
    let minv_q: Vec<Vec<f64>> = q.iter().map(|c| cholesky_solve(l, c)).collect::<Result<_>>()?;
    let minv_y = cholesky_solve(l, &yt)?;
    let mut g = Matrix::zeros(p, p);
    let mut rhs = vec![0.0; p];
    for a in 0..p {
        for b in 0..p {
            g[(a, b)] = dot(&q[a], &minv_q[b]);
        }
        rhs[a] = dot(&q[a], &minv_y);
    }
    // Symmetrize against round-off before factoring.
    for a in 0..p {
        for b in 0..a {
            let v = 0.5 * (g[(a, b)] + g[(b, a)]);
            g[(a, b)] = v;
            g[(b, a)] = v;
        }
    }
    let Ok(lg) = cholesky(&g, 0.0) else {
        return Ok(None);
    };
    let gmax = (0..p).map(|a| g[(a, a)]).fold(0.0, f64::max);
    if (0..p).any(|a| lg[(a, a)].powi(2) < 1e-10 * gmax) {
        return Ok(None);
    }
    let c = cholesky_solve(&lg, &rhs)?;
    let beta: Vec<f64> = (0..m)
        .map(|i| minv_y[i] - (0..p).map(|j| c[j] * minv_q[j][i]).sum::<f64>())
        .collect();
    if !c.iter().chain(&beta).all(|v| v.is_finite()) {
        return Ok(None);
    }
    Ok(Some((c[0], c[1..].to_vec(), beta)))
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn predict(m: &KrrModel, query: &Matrix) -> Result<Vec<f64>> {
    if query.cols() != m.inputs.cols() {
        return Err(Error::DimensionMismatch(format!(
            "query dimension {} but model trained on dimension {}",
            query.cols(),
            m.inputs.cols()
        )));
    }
    let active: Vec<usize> = (0..m.dual.len()).filter(|&i| m.dual[i] != 0.0).collect();
    let train = m.inputs.select_rows(&active);
    let alpha: Vec<f64> = active.iter().map(|&i| m.dual[i]).collect();
    let kq = cross_gram(query, &train, &m.kernel)?;
    Ok((0..query.rows())
        .map(|r| {
            let trend = m.intercept
                + m.slope.iter().zip(query.row(r)).map(|(b, v)| b * v).sum::<f64>();
            trend + dot(kq.row(r), &alpha)
        })
        .collect())
}
