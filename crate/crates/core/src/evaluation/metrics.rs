use crate::error::{Error, Result};
use crate::numerics::Matrix;

fn check_len(a: usize, b: usize) -> Result<()> {
    if a != b {
        return Err(Error::LengthMismatch { expected: a, got: b });
    }
    Ok(())
}

pub fn mse_oracle(pred: &[f64], truth: &[f64]) -> Result<f64> {
    check_len(pred.len(), truth.len())?;
    if pred.is_empty() {
        return Err(Error::EmptyInput("no rows to score".into()));
    }
    Ok(pred.iter().zip(truth).map(|(p, t)| (p - t) * (p - t)).sum::<f64>() / pred.len() as f64)
}

/// Mean squared error over rows with `mask[i]`; `truth` is only read there.
pub fn mse_selected(pred: &[f64], truth: &[f64], mask: &[bool]) -> Result<f64> {
    mse_weighted(pred, truth, mask, &vec![1.0; mask.iter().filter(|&&m| m).count()])
}

/// `|S'|⁻¹ Σ_{i ∈ S'} wᵢ (ŷᵢ − yᵢ)²`, with one weight per selected row.
pub fn mse_weighted(pred: &[f64], truth: &[f64], mask: &[bool], weights: &[f64]) -> Result<f64> {
    check_len(pred.len(), truth.len())?;
    check_len(pred.len(), mask.len())?;
    let k = mask.iter().filter(|&&m| m).count();
    if k == 0 {
        return Err(Error::NoSelectedRows);
    }
    check_len(k, weights.len())?;
    let total: f64 = pred
        .iter()
        .zip(truth)
        .zip(mask)
        .filter(|(_, &m)| m)
        .zip(weights)
        .map(|(((p, t), _), w)| w * (p - t) * (p - t))
        .sum();
    Ok(total / k as f64)
}

pub fn mse_pseudo(pred: &[f64], pseudo: &[f64]) -> Result<f64> {
    mse_oracle(pred, pseudo)
}

/// Rows of `x_test` inside the closed per-coordinate bounding box of
/// `x_selected_train` (interpolation) and the rest (extrapolation).
pub fn split_interp_extrap(x_test: &Matrix, x_selected_train: &Matrix) -> Result<(Vec<bool>, Vec<bool>)> {
    if x_selected_train.rows() == 0 {
        return Err(Error::EmptyInput("no selected training inputs".into()));
    }
    if x_test.cols() != x_selected_train.cols() {
        return Err(Error::DimensionMismatch(format!(
            "test inputs of dimension {} but training inputs of dimension {}",
            x_test.cols(),
            x_selected_train.cols()
        )));
    }
    let d = x_test.cols();
    let mut lo = vec![f64::INFINITY; d];
    let mut hi = vec![f64::NEG_INFINITY; d];
    for i in 0..x_selected_train.rows() {
        for (j, &v) in x_selected_train.row(i).iter().enumerate() {
            lo[j] = lo[j].min(v);
            hi[j] = hi[j].max(v);
        }
    }
    let interp: Vec<bool> = (0..x_test.rows())
        .map(|i| x_test.row(i).iter().enumerate().all(|(j, &v)| lo[j] <= v && v <= hi[j]))
        .collect();
    let extrap = interp.iter().map(|b| !b).collect();
    Ok((interp, extrap))
}
