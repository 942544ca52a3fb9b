use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use super::dataset::Dataset;
use crate::error::{Error, Result};
use crate::numerics::{sigmoid_ex1, Matrix};

/// Univariate running example:
/// `X = ε_X`, `Z = 3 sin X + ε_Z`, `Y = X/2 + Z + ε_Y`,
/// `P(S = 1 | X, Z) = σ(X) · (0.95 σ(Z) + 0.05)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Example1 {
    /// Standard deviation shared by `ε_X`, `ε_Z`, `ε_Y`.
    pub noise_sd: f64,
}

impl Default for Example1 {
    fn default() -> Self {
        Self { noise_sd: 2.0 }
    }
}

impl Example1 {
    pub fn true_regression(x: f64) -> f64 {
        0.5 * x + 3.0 * x.sin()
    }

    pub fn selection_probability(x: f64, z: f64) -> f64 {
        sigmoid_ex1(x) * (0.95 * sigmoid_ex1(z) + 0.05)
    }

    pub fn simulate<R: Rng + ?Sized>(&self, n: usize, rng: &mut R) -> Result<Dataset> {
        if n < 2 {
            return Err(Error::EmptyInput(format!("example needs n >= 2, got {n}")));
        }
        let sd = self.noise_sd;
        let mut x = Vec::with_capacity(n);
        let mut z = Vec::with_capacity(n);
        let mut y = Vec::with_capacity(n);
        let mut s = Vec::with_capacity(n);
        let mut p = Vec::with_capacity(n);
        for _ in 0..n {
            let xi = sd * rng.sample::<f64, _>(StandardNormal);
            let zi = 3.0 * xi.sin() + sd * rng.sample::<f64, _>(StandardNormal);
            let yi = 0.5 * xi + zi + sd * rng.sample::<f64, _>(StandardNormal);
            let pi = Self::selection_probability(xi, zi);
            let si = rng.random::<f64>() < pi;
            x.push(xi);
            z.push(zi);
            y.push(Some(yi));
            s.push(si);
            p.push(pi);
        }
        Dataset::new(Matrix::column(&x), Matrix::column(&z), Some(y), Some(s), Some(p))
    }
}

pub fn simulate_example1<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<Dataset> {
    Example1::default().simulate(n, rng)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::RngStream;
    use std::f64::consts::FRAC_PI_2;

    #[test]
    fn regression_curve() {
        assert_eq!(Example1::true_regression(0.0), 0.0);
        let v = Example1::true_regression(FRAC_PI_2);
        assert!((v - (std::f64::consts::FRAC_PI_4 + 3.0)).abs() < 1e-12);
    }

    #[test]
    fn selected_count_near_expectation() {
        let mut counts = Vec::new();
        for seed in 0..20 {
            let d = simulate_example1(400, &mut RngStream::new(seed, 0).rng()).unwrap();
            counts.push(d.num_selected().unwrap());
        }
        let avg = counts.iter().sum::<usize>() as f64 / counts.len() as f64;
        assert!((avg - 123.0).abs() <= 35.0, "average selected {avg}");
    }

    #[test]
    fn deterministic() {
        let a = simulate_example1(50, &mut RngStream::new(1, 2).rng()).unwrap();
        let b = simulate_example1(50, &mut RngStream::new(1, 2).rng()).unwrap();
        assert_eq!(a, b);
    }
}
