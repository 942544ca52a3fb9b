use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal};

use crate::error::{Error, Result};

const EXACT_MAX: usize = 25;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WilcoxonResult {
    /// Pairs with a non-zero difference.
    pub n: usize,
    /// Sum of ranks of positive differences `a − b`.
    pub w_plus: f64,
    /// Two-sided p-value.
    pub p_value: f64,
    pub exact: bool,
    pub median_difference: f64,
}

/// Two-sided Wilcoxon signed-rank test on paired samples `a`, `b`.
///
/// Zero differences are dropped; ties share average ranks. The null
/// distribution is enumerated exactly for up to 25 pairs and approximated
/// by a tie-corrected normal with continuity correction above that.
pub fn wilcoxon_signed_rank(a: &[f64], b: &[f64]) -> Result<WilcoxonResult> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch { expected: a.len(), got: b.len() });
    }
    let mut diffs: Vec<f64> = a.iter().zip(b).map(|(x, y)| x - y).collect();
    if diffs.iter().any(|d| !d.is_finite()) {
        return Err(Error::InvalidValue("non-finite paired difference".into()));
    }
    let median_difference = median(&mut diffs.clone());
    diffs.retain(|&d| d != 0.0);
    let n = diffs.len();
    if n == 0 {
        return Ok(WilcoxonResult { n, w_plus: 0.0, p_value: 1.0, exact: true, median_difference });
    }
    diffs.sort_by(|x, y| x.abs().total_cmp(&y.abs()));

    // Doubled average ranks keep tied ranks integral.
    let mut ranks2 = vec![0u64; n];
    let mut tie_term = 0.0;
    let mut i = 0;
    while i < n {
        let mut j = i;
        while j + 1 < n && diffs[j + 1].abs() == diffs[i].abs() {
            j += 1;
        }
        let r2 = (i + 1 + j + 1) as u64;
        ranks2[i..=j].iter_mut().for_each(|r| *r = r2);
        let t = (j - i + 1) as f64;
        tie_term += t * t * t - t;
        i = j + 1;
    }
    let w2: u64 = diffs.iter().zip(&ranks2).filter(|(d, _)| **d > 0.0).map(|(_, r)| r).sum();
    let w_plus = w2 as f64 / 2.0;

    if n <= EXACT_MAX {
        let total: u64 = ranks2.iter().sum();
        // counts[k] = number of sign patterns with doubled W+ equal to k
        let mut counts = vec![0f64; total as usize + 1];
        counts[0] = 1.0;
        let mut reach = 0usize;
        for &r in &ranks2 {
            let r = r as usize;
            for k in (0..=reach).rev() {
                if counts[k] != 0.0 {
                    counts[k + r] += counts[k];
                }
            }
            reach += r;
        }
        let all = 2f64.powi(n as i32);
        let lower: f64 = counts[..=w2 as usize].iter().sum::<f64>() / all;
        let upper: f64 = counts[w2 as usize..].iter().sum::<f64>() / all;
        let p_value = (2.0 * lower.min(upper)).min(1.0);
        return Ok(WilcoxonResult { n, w_plus, p_value, exact: true, median_difference });
    }

    let nf = n as f64;
    let mu = nf * (nf + 1.0) / 4.0;
    let var = nf * (nf + 1.0) * (2.0 * nf + 1.0) / 24.0 - tie_term / 48.0;
    let dev = (w_plus - mu).abs();
    let z = if var > 0.0 { ((dev - 0.5).max(0.0)) / var.sqrt() } else { 0.0 };
    let normal = Normal::new(0.0, 1.0).expect("standard normal");
    let p_value = (2.0 * (1.0 - normal.cdf(z))).min(1.0);
    Ok(WilcoxonResult { n, w_plus, p_value, exact: false, median_difference })
}

fn median(v: &mut [f64]) -> f64 {
    if v.is_empty() {
        return f64::NAN;
    }
    v.sort_by(f64::total_cmp);
    let m = v.len() / 2;
    if v.len() % 2 == 1 {
        v[m]
    } else {
        0.5 * (v[m - 1] + v[m])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_positive_small_sample() {
        // Five positive differences: P(W+ = 15) = 1/32, two-sided 1/16.
        let r = wilcoxon_signed_rank(&[1.0, 2.0, 3.0, 4.0, 5.0], &[0.0; 5]).unwrap();
        assert_eq!(r.w_plus, 15.0);
        assert!((r.p_value - 0.0625).abs() < 1e-15);
        assert!(r.exact);
    }

    #[test]
    fn zeros_dropped_and_symmetric() {
        let a = [1.0, -2.0, 3.0, 0.0];
        let r = wilcoxon_signed_rank(&a, &[0.0; 4]).unwrap();
        assert_eq!(r.n, 3);
        assert_eq!(r.w_plus, 4.0);
        // signs over ranks {1,2,3}: W+ ≥ 4 in 3 of 8 patterns; W+ ≤ 4 in 6 of 8.
        assert!((r.p_value - 0.75).abs() < 1e-15);
        let s = wilcoxon_signed_rank(&[0.0; 4], &a).unwrap();
        assert!((s.p_value - r.p_value).abs() < 1e-15);
    }

    #[test]
    fn ties_share_ranks() {
        let r = wilcoxon_signed_rank(&[1.0, -1.0, 2.0], &[0.0; 3]).unwrap();
        assert_eq!(r.w_plus, 1.5 + 3.0);
    }

    #[test]
    fn normal_approximation_for_large_samples() {
        let a: Vec<f64> = (1..=40).map(|i| i as f64).collect();
        let r = wilcoxon_signed_rank(&a, &vec![0.0; 40]).unwrap();
        assert!(!r.exact);
        assert!(r.p_value < 1e-6);
        let b: Vec<f64> = (1..=40).map(|i| if i % 2 == 0 { i as f64 } else { -(i as f64) }).collect();
        assert!(wilcoxon_signed_rank(&b, &vec![0.0; 40]).unwrap().p_value > 0.5);
    }
}
