use crate::error::{Error, Result};

pub fn mean(v: &[f64]) -> f64 {
    v.iter().sum::<f64>() / v.len() as f64
}

pub fn weighted_mean(v: &[f64], w: &[f64]) -> f64 {
    let total: f64 = w.iter().sum();
    v.iter().zip(w).map(|(x, w)| x * w).sum::<f64>() / total
}

/// Sample standard deviation (denominator `n - 1`).
pub fn sample_sd(v: &[f64]) -> f64 {
    let m = mean(v);
    let ss: f64 = v.iter().map(|x| (x - m) * (x - m)).sum();
    (ss / (v.len() as f64 - 1.0)).sqrt()
}

/// Affine rescaling to mean 0 and sample standard deviation 1.
pub fn standardize(v: &[f64]) -> Result<Vec<f64>> {
    if v.len() < 2 {
        return Err(Error::DegenerateVector(format!("length {}", v.len())));
    }
    let m = mean(v);
    let sd = sample_sd(v);
    if !(sd > 0.0) || !sd.is_finite() {
        return Err(Error::DegenerateVector("zero variance".into()));
    }
    Ok(v.iter().map(|x| (x - m) / sd).collect())
}
