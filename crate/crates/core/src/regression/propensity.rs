use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{logistic, solve_spd, Matrix};

const MAX_ITER: usize = 100;
const SCORE_TOL: f64 = 1e-8;
// |η| beyond this saturates the link in double precision.
const SATURATION: f64 = 36.0;

/// Logistic model `P(S = 1 | v) = logistic(b₀ + bᵀv)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PropensityModel {
    /// Intercept first.
    pub coefficients: Vec<f64>,
    pub feature_dim: usize,
    pub l2: f64,
    pub iterations: usize,
}

fn eta(row: &[f64], beta: &[f64]) -> f64 {
    beta[0] + row.iter().zip(&beta[1..]).map(|(a, b)| a * b).sum::<f64>()
}

fn penalized_loglik(x: &Matrix, s: &[bool], beta: &[f64], l2: f64) -> f64 {
    let mut ll = 0.0;
    for (i, &si) in s.iter().enumerate() {
        let e = eta(x.row(i), beta);
        // log σ(e) = −softplus(−e), log(1 − σ(e)) = −softplus(e)
        ll -= if si { softplus(-e) } else { softplus(e) };
    }
    ll - 0.5 * l2 * beta.iter().map(|b| b * b).sum::<f64>()
}

fn softplus(t: f64) -> f64 {
    if t > 0.0 {
        t + (-t).exp().ln_1p()
    } else {
        t.exp().ln_1p()
    }
}

/// Penalized maximum likelihood by Newton/IRLS with step halving.
///
/// The penalty `l2 · ‖b‖² / 2` covers every coefficient including the
/// intercept. Converges when the largest absolute score entry is at most
/// `1e-8`.
pub fn fit_propensity(inputs: &Matrix, s: &[bool], l2: f64) -> Result<PropensityModel> {
    fit_traced(inputs, s, l2, &mut Vec::new())
}

/// As `fit_propensity`, recording the penalized log-likelihood after each
/// accepted step.
fn fit_traced(inputs: &Matrix, s: &[bool], l2: f64, trace: &mut Vec<f64>) -> Result<PropensityModel> {
    let n = inputs.rows();
    if s.len() != n {
        return Err(Error::LengthMismatch { expected: n, got: s.len() });
    }
    if !(l2 >= 0.0 && l2.is_finite()) {
        return Err(Error::InvalidValue(format!("l2 must be nonnegative, got {l2}")));
    }
    let ones = s.iter().filter(|&&v| v).count();
    if ones == 0 || ones == n {
        return Err(Error::SingleClass);
    }
    let d = inputs.cols();
    let p = d + 1;
    let mut beta = vec![0.0; p];
    let mut ll = penalized_loglik(inputs, s, &beta, l2);
    trace.push(ll);

    for iter in 0..MAX_ITER {
        let mut score = vec![0.0; p];
        let mut h = Matrix::zeros(p, p);
        let mut saturated = false;
        for i in 0..n {
            let row = inputs.row(i);
            let e = eta(row, &beta);
            saturated |= e.abs() > SATURATION;
            let mu = logistic(e);
            let r = if s[i] { 1.0 } else { 0.0 } - mu;
            let wgt = mu * (1.0 - mu);
            for a in 0..p {
                let fa = if a == 0 { 1.0 } else { row[a - 1] };
                score[a] += fa * r;
                for b in 0..=a {
                    let fb = if b == 0 { 1.0 } else { row[b - 1] };
                    h[(a, b)] += wgt * fa * fb;
                }
            }
        }
        for a in 0..p {
            score[a] -= l2 * beta[a];
            h[(a, a)] += l2;
            for b in 0..a {
                h[(b, a)] = h[(a, b)];
            }
        }
        if l2 == 0.0 && saturated {
            return Err(Error::Diverged(iter));
        }
        if score.iter().all(|g| g.abs() <= SCORE_TOL) {
            return Ok(PropensityModel { coefficients: beta, feature_dim: d, l2, iterations: iter });
        }
        let step = match solve_spd(&h, &score) {
            Ok(step) => step,
            Err(_) => return Err(Error::Diverged(iter)),
        };
        // Near the optimum the objective change drops below round-off; allow
        // that much slack so Newton can finish driving the score to zero.
        let slack = 1e-12 * (1.0 + ll.abs());
        let mut t = 1.0;
        loop {
            let cand: Vec<f64> = beta.iter().zip(&step).map(|(b, d)| b + t * d).collect();
            let cand_ll = penalized_loglik(inputs, s, &cand, l2);
            if cand_ll >= ll - slack {
                beta = cand;
                trace.push(cand_ll);
                ll = ll.max(cand_ll);
                break;
            }
            if t < 1e-10 {
                return Err(Error::Diverged(iter));
            }
            t *= 0.5;
        }
        if !beta.iter().all(|b| b.is_finite()) {
            return Err(Error::Diverged(iter));
        }
    }
    Err(Error::Diverged(MAX_ITER))
}

pub fn predict_propensity(m: &PropensityModel, query: &Matrix) -> Result<Vec<f64>> {
    if query.cols() != m.feature_dim {
        return Err(Error::DimensionMismatch(format!(
            "query dimension {} but propensity model uses {}",
            query.cols(),
            m.feature_dim
        )));
    }
    Ok((0..query.rows()).map(|i| logistic(eta(query.row(i), &m.coefficients))).collect())
}
