//! Population versions of the estimators on a finite joint distribution of
//! `(X, Z, Y, S)`, computed from probability tables.

use crate::error::{Error, Result};

/// Joint probability table `P(X = a, Z = b, Y = y_c, S = s)`, indexed
/// `[a][b][c][s]`.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteJoint {
    pub y_values: Vec<f64>,
    pub prob: Vec<Vec<Vec<[f64; 2]>>>,
}

impl DiscreteJoint {
    pub fn new(y_values: Vec<f64>, prob: Vec<Vec<Vec<[f64; 2]>>>) -> Result<Self> {
        let total: f64 = prob.iter().flatten().flatten().flatten().sum();
        if prob.is_empty() || prob.iter().any(|r| r.is_empty()) {
            return Err(Error::EmptyInput("empty joint table".into()));
        }
        let nz = prob[0].len();
        for row in &prob {
            if row.len() != nz || row.iter().any(|c| c.len() != y_values.len()) {
                return Err(Error::DimensionMismatch("ragged joint table".into()));
            }
        }
        if prob.iter().flatten().flatten().flatten().any(|p| !(*p >= 0.0)) || (total - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidValue(format!("table must be a distribution (sum {total})")));
        }
        Ok(Self { y_values, prob })
    }

    pub fn nx(&self) -> usize {
        self.prob.len()
    }

    pub fn nz(&self) -> usize {
        self.prob[0].len()
    }

    pub fn ny(&self) -> usize {
        self.y_values.len()
    }

    fn cell(&self, a: usize, b: usize, c: usize, s: usize) -> f64 {
        self.prob[a][b][c][s]
    }

    pub fn p_s1(&self) -> f64 {
        self.sum(|_, _, _, s| s == 1)
    }

    fn sum(&self, keep: impl Fn(usize, usize, usize, usize) -> bool) -> f64 {
        let mut t = 0.0;
        for a in 0..self.nx() {
            for b in 0..self.nz() {
                for c in 0..self.ny() {
                    for s in 0..2 {
                        if keep(a, b, c, s) {
                            t += self.cell(a, b, c, s);
                        }
                    }
                }
            }
        }
        t
    }

    /// `P(S = 1 | X = a, Z = b)`.
    pub fn propensity(&self, a: usize, b: usize) -> f64 {
        let sel: f64 = (0..self.ny()).map(|c| self.cell(a, b, c, 1)).sum();
        let all: f64 = (0..self.ny()).map(|c| self.cell(a, b, c, 0) + self.cell(a, b, c, 1)).sum();
        sel / all
    }

    /// Importance weight `P(S = 1) / P(S = 1 | X = a, Z = b)`.
    pub fn weight(&self, a: usize, b: usize) -> f64 {
        self.p_s1() / self.propensity(a, b)
    }

    /// `E[Y | X = a, Z = b, S = 1]`.
    pub fn inner(&self, a: usize, b: usize) -> f64 {
        let num: f64 = (0..self.ny()).map(|c| self.y_values[c] * self.cell(a, b, c, 1)).sum();
        let den: f64 = (0..self.ny()).map(|c| self.cell(a, b, c, 1)).sum();
        num / den
    }

    /// `E[Y | X = a, S = 1]`.
    pub fn naive(&self, a: usize) -> f64 {
        let mut num = 0.0;
        let mut den = 0.0;
        for b in 0..self.nz() {
            for c in 0..self.ny() {
                num += self.y_values[c] * self.cell(a, b, c, 1);
                den += self.cell(a, b, c, 1);
            }
        }
        num / den
    }

    /// `E[ E[Y | X, Z, S = 1] | X = a ]`.
    pub fn repeated_regression(&self, a: usize) -> f64 {
        let mut num = 0.0;
        let mut den = 0.0;
        for b in 0..self.nz() {
            let pxz: f64 = (0..self.ny()).map(|c| self.cell(a, b, c, 0) + self.cell(a, b, c, 1)).sum();
            num += pxz * self.inner(a, b);
            den += pxz;
        }
        num / den
    }

    /// `argmin_r E[w (Y − g(X) − r(X))² | S = 1]` evaluated at `X = a`,
    /// added back to `g(a)`.
    pub fn doubly_robust(&self, a: usize, g: impl Fn(usize) -> f64) -> f64 {
        let mut num = 0.0;
        let mut den = 0.0;
        for b in 0..self.nz() {
            let w = self.weight(a, b);
            for c in 0..self.ny() {
                let p = self.cell(a, b, c, 1);
                num += w * p * (self.y_values[c] - g(a));
                den += w * p;
            }
        }
        g(a) + num / den
    }

    /// `E[w(X, Z) f(X, Z, Y) | S = 1]`.
    pub fn weighted_selected_mean(&self, f: impl Fn(usize, usize, usize) -> f64) -> f64 {
        let ps = self.p_s1();
        let mut t = 0.0;
        for a in 0..self.nx() {
            for b in 0..self.nz() {
                let w = self.weight(a, b);
                for c in 0..self.ny() {
                    t += w * f(a, b, c) * self.cell(a, b, c, 1) / ps;
                }
            }
        }
        t
    }
}
