use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gpsim::Dataset;
use crate::numerics::mean;
use crate::regression::{fit_propensity, predict_propensity, PropensityModel};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WeightSource {
    /// Stored selection probabilities.
    TrueProb,
    /// Logistic propensity fitted on `(x, z, s)`.
    Estimated,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ClipMode {
    /// Affine map of `[min p, max p]` onto `[clip_low, clip_high]`.
    Affine,
    /// `p ↦ min(max(p, clip_low), clip_high)`.
    Floor,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WeightConfig {
    pub source: WeightSource,
    pub clip_low: f64,
    pub clip_high: f64,
    pub clip_mode: ClipMode,
    /// Rescale the selected-row weights to mean one.
    pub normalize: bool,
}

impl Default for WeightConfig {
    fn default() -> Self {
        Self {
            source: WeightSource::TrueProb,
            clip_low: 0.05,
            clip_high: 1.0,
            clip_mode: ClipMode::Affine,
            normalize: false,
        }
    }
}

impl WeightConfig {
    pub fn with_source(self, source: WeightSource) -> Self {
        Self { source, ..self }
    }

    pub fn validate(&self) -> Result<()> {
        if !(0.0 < self.clip_low && self.clip_low <= self.clip_high && self.clip_high <= 1.0) {
            return Err(Error::InvalidValue(format!(
                "clip bounds must satisfy 0 < low <= high <= 1, got [{}, {}]",
                self.clip_low, self.clip_high
            )));
        }
        Ok(())
    }
}

pub fn clip_probabilities(probs: &[f64], cfg: &WeightConfig) -> Result<Vec<f64>> {
    cfg.validate()?;
    if probs.is_empty() {
        return Err(Error::EmptyInput("no probabilities".into()));
    }
    if let Some(&p) = probs.iter().find(|p| !(0.0..=1.0).contains(*p)) {
        return Err(Error::InvalidProbability(p));
    }
    let (lo, hi) = (cfg.clip_low, cfg.clip_high);
    Ok(match cfg.clip_mode {
        ClipMode::Floor => probs.iter().map(|p| p.clamp(lo, hi)).collect(),
        ClipMode::Affine => {
            let pmin = probs.iter().copied().fold(f64::INFINITY, f64::min);
            let pmax = probs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            if pmax > pmin {
                probs.iter().map(|p| lo + (hi - lo) * (p - pmin) / (pmax - pmin)).collect()
            } else {
                vec![hi; probs.len()]
            }
        }
    })
}

/// `w_i = marginal / p'_i` where `p'` are the clipped probabilities.
pub fn compute_weights(probs: &[f64], marginal: f64, cfg: &WeightConfig) -> Result<Vec<f64>> {
    if !(marginal > 0.0 && marginal <= 1.0) {
        return Err(Error::InvalidProbability(marginal));
    }
    Ok(clip_probabilities(probs, cfg)?.into_iter().map(|p| marginal / p).collect())
}

/// Weights for the selected rows of `d`, plus the fitted propensity model
/// when the source is [`WeightSource::Estimated`].
pub fn selection_weights(
    d: &Dataset,
    cfg: &WeightConfig,
    l2: f64,
) -> Result<(Vec<f64>, Option<PropensityModel>)> {
    let s = d.selection()?;
    let (probs, model) = match cfg.source {
        WeightSource::TrueProb => {
            let p = d.p.clone().ok_or_else(|| Error::Schema(vec!["p".into()]))?;
            (p, None)
        }
        // Every row selected: the empirical propensity is the constant 1.
        WeightSource::Estimated if s.iter().all(|&b| b) => (vec![1.0; s.len()], None),
        WeightSource::Estimated => {
            let xz = d.xz();
            let m = fit_propensity(&xz, s, l2)?;
            (predict_propensity(&m, &xz)?, Some(m))
        }
    };
    let marginal = mean(&s.iter().map(|&b| if b { 1.0 } else { 0.0 }).collect::<Vec<_>>());
    if marginal == 0.0 {
        return Err(Error::NoSelectedRows);
    }
    let w = compute_weights(&probs, marginal, cfg)?;
    let mut sel: Vec<f64> = w.iter().zip(s).filter(|(_, &b)| b).map(|(w, _)| *w).collect();
    if cfg.normalize {
        let m = mean(&sel);
        sel.iter_mut().for_each(|v| *v /= m);
    }
    Ok((sel, model))
}
