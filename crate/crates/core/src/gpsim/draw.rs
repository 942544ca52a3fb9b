use rand::Rng;
use rand_distr::StandardNormal;

use super::kernel::{gram, KernelSpec};
use crate::error::{Error, Result};
use crate::numerics::{cholesky, default_jitter, standardize, Matrix};

// Jitter is multiplied by 10 per retry; smooth kernels on dense inputs can
// lose positive definiteness to round-off at the default level.
const JITTER_RETRIES: usize = 6;

/// Factored Gram matrix for repeated GP prior draws on a fixed point set.
#[derive(Debug, Clone)]
pub struct GpSampler {
    factor: Matrix,
}

impl GpSampler {
    pub fn new(points: &Matrix, k: &KernelSpec) -> Result<Self> {
        if points.rows() == 0 {
            return Err(Error::EmptyInput("GP draw needs at least one point".into()));
        }
        let g = gram(points, k);
        let base = default_jitter(&g);
        let mut jitter = base;
        let mut last = None;
        for _ in 0..=JITTER_RETRIES {
            match cholesky(&g, jitter) {
                Ok(factor) => return Ok(Self { factor }),
                Err(e @ Error::NotPositiveDefinite { .. }) => {
                    last = Some(e);
                    jitter *= 10.0;
                }
                Err(e) => return Err(e),
            }
        }
        Err(last.expect("at least one attempt"))
    }

    pub fn len(&self) -> usize {
        self.factor.rows()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// `L ξ` with `ξ` standard normal; consumes exactly `n` normal variates.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<f64> {
        let n = self.len();
        let xi: Vec<f64> = (0..n).map(|_| rng.sample(StandardNormal)).collect();
        (0..n)
            .map(|i| {
                let row = self.factor.row(i);
                row[..=i].iter().zip(&xi).map(|(l, x)| l * x).sum()
            })
            .collect()
    }
}

/// One draw of `f(points)` for `f ~ GP(0, k)`.
pub fn draw_gp<R: Rng + ?Sized>(points: &Matrix, k: &KernelSpec, rng: &mut R) -> Result<Vec<f64>> {
    Ok(GpSampler::new(points, k)?.sample(rng))
}

/// Random-distribution noise: `n` uniforms pushed through a random
/// squared-exponential GP function, then standardized.
pub fn draw_rd<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<Vec<f64>> {
    if n < 2 {
        return Err(Error::DegenerateVector(format!("random-distribution noise of length {n}")));
    }
    let u: Vec<f64> = (0..n).map(|_| rng.random::<f64>()).collect();
    let f = draw_gp(&Matrix::column(&u), &KernelSpec::squared_exponential(), rng)?;
    standardize(&f)
}
