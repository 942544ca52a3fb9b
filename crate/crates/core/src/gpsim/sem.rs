use rand::Rng;

use super::dataset::Dataset;
use super::draw::{draw_gp, draw_rd};
use super::kernel::KernelSpec;
use crate::error::{Error, Result};
use crate::graphs::{is_pmar_pattern, to_dag_with_latents, topological_order, Admg, PmarVertices};
use crate::numerics::{sample_sd, sigmoid_steep, standardize, Matrix};

#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig {
    pub n: usize,
    pub graph: Admg,
    pub kernel: KernelSpec,
    pub shift_multiplier: f64,
    pub noise_scale: f64,
    pub s_root_prob: f64,
    pub check_pattern: bool,
}

impl SimConfig {
    pub fn new(n: usize, graph: Admg) -> Self {
        Self {
            n,
            graph,
            kernel: KernelSpec::matern52(),
            shift_multiplier: 3.0,
            noise_scale: 0.5,
            s_root_prob: 1.0 / 3.0,
            check_pattern: true,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.n < 2 {
            return Err(Error::InvalidValue(format!("n must be at least 2, got {}", self.n)));
        }
        if !(self.s_root_prob > 0.0 && self.s_root_prob < 1.0) {
            return Err(Error::InvalidProbability(self.s_root_prob));
        }
        Ok(())
    }
}

/// Samples `n` rows from the structural equations attached to `cfg.graph`.
///
/// Bidirected edges become latent roots. In topological order: a root `S`
/// is `Bernoulli(s_root_prob)`; other roots are random-distribution noise;
/// `S` with parents is `Bernoulli(∏ sigmoid_steep(x_v))`; every other vertex
/// is a Matérn GP of its non-`S` parents plus scaled noise, shifted down by
/// `shift_multiplier · sd` where `S = 1` if `S` is a parent, then standardized.
pub fn simulate_admg<R: Rng + ?Sized>(cfg: &SimConfig, rng: &mut R) -> Result<Dataset> {
    cfg.validate()?;
    let v = PmarVertices::resolve(&cfg.graph)?;
    if cfg.check_pattern && !is_pmar_pattern(&cfg.graph)? {
        return Err(Error::GraphNotPmar);
    }
    let n = cfg.n;
    let dag = to_dag_with_latents(&cfg.graph);
    let order = topological_order(&dag)?;
    let mut values: Vec<Vec<f64>> = vec![Vec::new(); dag.n()];
    let mut p_s: Vec<f64> = Vec::new();
    let mut s_mask: Vec<bool> = Vec::new();

    for &u in &order {
        let parents = dag.parents(u);
        if u == v.s {
            p_s = if parents.is_empty() {
                vec![cfg.s_root_prob; n]
            } else {
                (0..n).map(|i| parents.iter().map(|&q| sigmoid_steep(values[q][i])).product()).collect()
            };
            s_mask = p_s.iter().map(|&p| rng.random::<f64>() < p).collect();
            values[u] = s_mask.iter().map(|&s| if s { 1.0 } else { 0.0 }).collect();
        } else if parents.is_empty() {
            values[u] = draw_rd(n, rng)?;
        } else {
            let inputs: Vec<usize> = parents.iter().copied().filter(|&q| q != v.s).collect();
            let mut data = Vec::with_capacity(n * inputs.len());
            for i in 0..n {
                data.extend(inputs.iter().map(|&q| values[q][i]));
            }
            let points = Matrix::new(n, inputs.len(), data)?;
            let f = draw_gp(&points, &cfg.kernel, rng)?;
            let eps = draw_rd(n, rng)?;
            let mut x: Vec<f64> = f.iter().zip(&eps).map(|(a, e)| a + cfg.noise_scale * e).collect();
            if parents.contains(&v.s) {
                let c = sample_sd(&x);
                for (xi, &s) in x.iter_mut().zip(&s_mask) {
                    if s {
                        *xi -= cfg.shift_multiplier * c;
                    }
                }
            }
            values[u] = standardize(&x)?;
        }
    }

    Dataset::new(
        Matrix::column(&values[v.x]),
        Matrix::column(&values[v.z]),
        Some(values[v.y].iter().map(|&y| Some(y)).collect()),
        Some(s_mask),
        Some(p_s),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{mean, RngStream};

    #[test]
    fn root_selection_rate() {
        let g = Admg::from_labels(&[("X", "Y"), ("S", "Z"), ("Z", "Y")], &[]).unwrap();
        assert!(is_pmar_pattern(&g).unwrap());
        let d = simulate_admg(&SimConfig::new(1000, g), &mut RngStream::new(4, 0).rng()).unwrap();
        let rate = d.num_selected().unwrap() as f64 / 1000.0;
        let sd = (1.0 / 3.0 * 2.0 / 3.0 / 1000.0f64).sqrt();
        assert!((rate - 1.0 / 3.0).abs() < 3.0 * sd, "rate {rate}");
        assert!(d.p.unwrap().iter().all(|&p| p == 1.0 / 3.0));
    }

    #[test]
    fn columns_standardized() {
        let g = Admg::from_labels(&[("X", "Y"), ("X", "Z"), ("Z", "Y"), ("Z", "S")], &[("X", "S")]).unwrap();
        let d = simulate_admg(&SimConfig::new(300, g), &mut RngStream::new(2, 0).rng()).unwrap();
        for col in [d.x.col_values(0), d.z.col_values(0), d.oracle_y().unwrap()] {
            assert!(mean(&col).abs() < 1e-12);
            assert!((sample_sd(&col) - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn rejects_non_pmar_graph() {
        let g = Admg::from_labels(&[("X", "Y")], &[]).unwrap();
        let r = simulate_admg(&SimConfig::new(20, g.clone()), &mut RngStream::new(0, 0).rng());
        assert!(matches!(r, Err(Error::GraphNotPmar)));
        let mut cfg = SimConfig::new(20, g);
        cfg.check_pattern = false;
        assert!(simulate_admg(&cfg, &mut RngStream::new(0, 0).rng()).is_ok());
    }
}
