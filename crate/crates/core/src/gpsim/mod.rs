//! Gaussian-process kernels and draws, random-distribution noise, the ADMG
//! structural-equation simulator, the running univariate example and the
//! selection-biasing procedure for real data.

mod bias;
mod dataset;
mod draw;
mod example1;
mod kernel;
mod sem;

pub use bias::{bias_dataset, BiasConfig};
pub use dataset::Dataset;
pub use draw::{draw_gp, draw_rd, GpSampler};
pub use example1::{simulate_example1, Example1};
pub use kernel::{cross_gram, gram, kernel_eval, median_distance, KernelSpec};
pub use sem::{simulate_admg, SimConfig};
