use serde::{Deserialize, Serialize};

use super::check_weights;
use crate::error::{Error, Result};
use crate::numerics::{cholesky, cholesky_solve, Matrix};

/// Weighted least-squares polynomial, additive across input coordinates:
/// `c₀ + Σ_j Σ_{k=1..degree} c_{jk} u_j^k` with `u_j = (x_j − center_j) / scale_j`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolyModel {
    pub degree: usize,
    pub input_dim: usize,
    pub center: Vec<f64>,
    pub scale: Vec<f64>,
    pub coefficients: Vec<f64>,
}

fn features(row: &[f64], degree: usize, center: &[f64], scale: &[f64]) -> Vec<f64> {
    let mut f = Vec::with_capacity(1 + degree * row.len());
    f.push(1.0);
    for (j, &v) in row.iter().enumerate() {
        let u = (v - center[j]) / scale[j];
        let mut pow = 1.0;
        for _ in 0..degree {
            pow *= u;
            f.push(pow);
        }
    }
    f
}

pub fn fit_poly(inputs: &Matrix, targets: &[f64], weights: Option<&[f64]>, degree: usize) -> Result<PolyModel> {
    let n = inputs.rows();
    if n == 0 {
        return Err(Error::EmptyInput("no training rows".into()));
    }
    if targets.len() != n {
        return Err(Error::LengthMismatch { expected: n, got: targets.len() });
    }
    let w = check_weights(weights, n)?;
    let d = inputs.cols();
    let mut center = vec![0.0; d];
    let mut scale = vec![1.0; d];
    for j in 0..d {
        let col = inputs.col_values(j);
        let lo = col.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = col.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        center[j] = 0.5 * (lo + hi);
        if hi > lo {
            scale[j] = 0.5 * (hi - lo);
        }
    }
    let p = 1 + degree * d;
    let mut g = Matrix::zeros(p, p);
    let mut rhs = vec![0.0; p];
    for i in 0..n {
        let f = features(inputs.row(i), degree, &center, &scale);
        for a in 0..p {
            rhs[a] += w[i] * f[a] * targets[i];
            for b in 0..p {
                g[(a, b)] += w[i] * f[a] * f[b];
            }
        }
    }
    let base = (0..p).map(|a| g[(a, a)]).sum::<f64>() / p as f64;
    let l = cholesky(&g, 0.0).or_else(|_| cholesky(&g, 1e-10 * base))?;
    let coefficients = cholesky_solve(&l, &rhs)?;
    Ok(PolyModel { degree, input_dim: d, center, scale, coefficients })
}

impl PolyModel {
    pub fn predict(&self, query: &Matrix) -> Result<Vec<f64>> {
        if query.cols() != self.input_dim {
            return Err(Error::DimensionMismatch(format!(
                "query dimension {} but model trained on dimension {}",
                query.cols(),
                self.input_dim
            )));
        }
        Ok((0..query.rows())
            .map(|i| {
                features(query.row(i), self.degree, &self.center, &self.scale)
                    .iter()
                    .zip(&self.coefficients)
                    .map(|(f, c)| f * c)
                    .sum()
            })
            .collect())
    }
}
