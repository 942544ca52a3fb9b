//! Dense linear algebra, vector statistics, link functions and seeded
//! random streams shared by every other module.

mod linalg;
mod link;
mod rng;
mod stats;

pub use linalg::{cholesky, cholesky_solve, solve_spd, Matrix};
pub use link::{logistic, sigmoid_ex1, sigmoid_steep};
pub use rng::{mix64, RngStream};
pub use stats::{mean, sample_sd, standardize, weighted_mean};

/// Default Cholesky jitter for a Gram matrix: `1e-8 * mean(diag)`.
pub fn default_jitter(a: &Matrix) -> f64 {
    let n = a.rows().min(a.cols());
    if n == 0 {
        return 0.0;
    }
    let trace: f64 = (0..n).map(|i| a[(i, i)]).sum();
    1e-8 * trace / n as f64
}
