use rand::Rng;
use serde::{Deserialize, Serialize};

use super::dataset::Dataset;
use super::draw::GpSampler;
use super::kernel::KernelSpec;
use crate::error::{Error, Result};
use crate::numerics::sigmoid_steep;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BiasConfig {
    pub min_selected: usize,
    pub max_attempts: usize,
    /// Select rows with `p_i < U_i` instead of `U_i < p_i`.
    pub literal_indicator: bool,
}

impl Default for BiasConfig {
    fn default() -> Self {
        Self { min_selected: 120, max_attempts: 1000, literal_indicator: false }
    }
}

/// Imposes a selection mechanism `p = σ(f₁(X)) σ(f₂(Z))` with independent
/// squared-exponential GP draws `f₁`, `f₂`, redrawing until at least
/// `min_selected` rows are selected.
///
/// The stored `p` column is the probability of `S = 1`, which is `1 − p`
/// under the literal indicator.
pub fn bias_dataset<R: Rng + ?Sized>(d: &Dataset, cfg: &BiasConfig, rng: &mut R) -> Result<Dataset> {
    d.outcomes()?;
    let n = d.n();
    if cfg.min_selected >= n {
        return Err(Error::InvalidValue(format!(
            "min-selected {} must be below n = {n}",
            cfg.min_selected
        )));
    }
    let k = KernelSpec::squared_exponential();
    let fx = GpSampler::new(&d.x, &k)?;
    let fz = GpSampler::new(&d.z, &k)?;
    for _ in 0..cfg.max_attempts {
        let f1 = fx.sample(rng);
        let f2 = fz.sample(rng);
        let p: Vec<f64> = f1.iter().zip(&f2).map(|(a, b)| sigmoid_steep(*a) * sigmoid_steep(*b)).collect();
        let u: Vec<f64> = (0..n).map(|_| rng.random::<f64>()).collect();
        let (s, prob): (Vec<bool>, Vec<f64>) = if cfg.literal_indicator {
            (p.iter().zip(&u).map(|(p, u)| p < u).collect(), p.iter().map(|p| 1.0 - p).collect())
        } else {
            (p.iter().zip(&u).map(|(p, u)| u < p).collect(), p)
        };
        if s.iter().filter(|&&b| b).count() >= cfg.min_selected {
            let mut out = d.clone();
            out.s = Some(s);
            out.p = Some(prob);
            return Ok(out);
        }
    }
    Err(Error::ResampleLimitExceeded { min_selected: cfg.min_selected, attempts: cfg.max_attempts })
}
