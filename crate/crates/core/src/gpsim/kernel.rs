use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::Matrix;

/// Stationary kernel on `R^d`, a function of `r = ‖a − b‖ / lengthscale`.
///
/// * `Matern52`: `(1 + √5 r + 5/3 r²) · exp(−√5 r)`
/// * `SquaredExponential`: `1/4 · exp(−2/9 r²)`
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum KernelSpec {
    Matern52 { lengthscale: f64 },
    SquaredExponential { lengthscale: f64 },
}

impl KernelSpec {
    pub fn matern52() -> Self {
        KernelSpec::Matern52 { lengthscale: 1.0 }
    }

    pub fn squared_exponential() -> Self {
        KernelSpec::SquaredExponential { lengthscale: 1.0 }
    }

    pub fn lengthscale(&self) -> f64 {
        match *self {
            KernelSpec::Matern52 { lengthscale } | KernelSpec::SquaredExponential { lengthscale } => {
                lengthscale
            }
        }
    }

    pub fn with_lengthscale(self, lengthscale: f64) -> Self {
        match self {
            KernelSpec::Matern52 { .. } => KernelSpec::Matern52 { lengthscale },
            KernelSpec::SquaredExponential { .. } => KernelSpec::SquaredExponential { lengthscale },
        }
    }

    /// Kernel value as a function of the squared Euclidean distance.
    pub fn of_sq_dist(&self, d2: f64) -> f64 {
        let l = self.lengthscale();
        match self {
            KernelSpec::Matern52 { .. } => {
                let r = d2.sqrt() / l;
                let s5r = 5f64.sqrt() * r;
                (1.0 + s5r + 5.0 / 3.0 * r * r) * (-s5r).exp()
            }
            KernelSpec::SquaredExponential { .. } => 0.25 * (-(2.0 / 9.0) * d2 / (l * l)).exp(),
        }
    }
}

fn sq_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

pub fn kernel_eval(k: &KernelSpec, a: &[f64], b: &[f64]) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::DimensionMismatch(format!(
            "kernel inputs of dimension {} and {}",
            a.len(),
            b.len()
        )));
    }
    Ok(k.of_sq_dist(sq_dist(a, b)))
}

/// Gram matrix `(k(p_i, p_j))_{ij}` of the rows of `points`.
pub fn gram(points: &Matrix, k: &KernelSpec) -> Matrix {
    let n = points.rows();
    let mut g = Matrix::zeros(n, n);
    for i in 0..n {
        g[(i, i)] = k.of_sq_dist(0.0);
        for j in 0..i {
            let v = k.of_sq_dist(sq_dist(points.row(i), points.row(j)));
            g[(i, j)] = v;
            g[(j, i)] = v;
        }
    }
    g
}

/// Cross-kernel matrix `(k(a_i, b_j))_{ij}`.
pub fn cross_gram(a: &Matrix, b: &Matrix, k: &KernelSpec) -> Result<Matrix> {
    if a.cols() != b.cols() {
        return Err(Error::DimensionMismatch(format!(
            "points of dimension {} and {}",
            a.cols(),
            b.cols()
        )));
    }
    let mut g = Matrix::zeros(a.rows(), b.rows());
    for i in 0..a.rows() {
        for j in 0..b.rows() {
            g[(i, j)] = k.of_sq_dist(sq_dist(a.row(i), b.row(j)));
        }
    }
    Ok(g)
}

/// Median of the pairwise Euclidean distances between distinct rows.
///
/// Returns 1 when every pair coincides (or fewer than two rows).
pub fn median_distance(points: &Matrix) -> f64 {
    let n = points.rows();
    let mut d: Vec<f64> = Vec::with_capacity(n * n.saturating_sub(1) / 2);
    for i in 0..n {
        for j in 0..i {
            d.push(sq_dist(points.row(i), points.row(j)).sqrt());
        }
    }
    if d.is_empty() {
        return 1.0;
    }
    let mid = d.len() / 2;
    let (_, m, _) = d.select_nth_unstable_by(mid, f64::total_cmp);
    let m = *m;
    if m > 0.0 {
        m
    } else {
        1.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn values_at_zero_distance() {
        let p = [0.3, -1.2];
        assert_eq!(kernel_eval(&KernelSpec::matern52(), &p, &p).unwrap(), 1.0);
        assert_eq!(kernel_eval(&KernelSpec::squared_exponential(), &p, &p).unwrap(), 0.25);
    }

    #[test]
    fn matern_at_unit_distance() {
        let s5 = 5f64.sqrt();
        let expected = (1.0 + s5 + 5.0 / 3.0) * (-s5).exp();
        let v = kernel_eval(&KernelSpec::matern52(), &[0.0], &[1.0]).unwrap();
        assert!((v - expected).abs() < 1e-15);
        assert!((v - 0.5240).abs() < 1e-4);
    }

    #[test]
    fn squared_exponential_decays() {
        let v = kernel_eval(&KernelSpec::squared_exponential(), &[0.0, 0.0], &[3.0, 0.0]).unwrap();
        assert!((v - 0.25 * (-2.0f64).exp()).abs() < 1e-15);
    }

    #[test]
    fn dimension_mismatch() {
        assert!(kernel_eval(&KernelSpec::matern52(), &[0.0], &[0.0, 1.0]).is_err());
    }

    #[test]
    fn lengthscale_rescales_distance() {
        let k = KernelSpec::matern52().with_lengthscale(2.0);
        let a = kernel_eval(&k, &[0.0], &[2.0]).unwrap();
        let b = kernel_eval(&KernelSpec::matern52(), &[0.0], &[1.0]).unwrap();
        assert!((a - b).abs() < 1e-15);
    }

    #[test]
    fn median_of_line() {
        let p = Matrix::column(&[0.0, 1.0, 3.0]);
        // distances 1, 3, 2
        assert_eq!(median_distance(&p), 2.0);
        assert_eq!(median_distance(&Matrix::column(&[4.0, 4.0])), 1.0);
    }
}
