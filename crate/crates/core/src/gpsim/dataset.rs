use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::Matrix;

/// Columns `(X, Z, Y, S)` plus the realized selection probability.
///
/// `y[i]` is `None` where the outcome is unobserved. Simulated datasets keep
/// the outcome of every row.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Dataset {
    pub x: Matrix,
    pub z: Matrix,
    pub y: Option<Vec<Option<f64>>>,
    pub s: Option<Vec<bool>>,
    pub p: Option<Vec<f64>>,
}

impl Dataset {
    pub fn new(
        x: Matrix,
        z: Matrix,
        y: Option<Vec<Option<f64>>>,
        s: Option<Vec<bool>>,
        p: Option<Vec<f64>>,
    ) -> Result<Self> {
        let d = Self { x, z, y, s, p };
        d.validate()?;
        Ok(d)
    }

    pub fn n(&self) -> usize {
        self.x.rows()
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.n();
        let check = |len: usize| {
            if len == n {
                Ok(())
            } else {
                Err(Error::LengthMismatch { expected: n, got: len })
            }
        };
        check(self.z.rows())?;
        if let Some(y) = &self.y {
            check(y.len())?;
            if let Some(v) = y.iter().flatten().find(|v| !v.is_finite()) {
                return Err(Error::InvalidValue(format!("non-finite outcome {v}")));
            }
        }
        if let Some(s) = &self.s {
            check(s.len())?;
        }
        if let Some(p) = &self.p {
            check(p.len())?;
            if let Some(&v) = p.iter().find(|v| !(0.0..=1.0).contains(*v)) {
                return Err(Error::InvalidProbability(v));
            }
        }
        Ok(())
    }

    pub fn selection(&self) -> Result<&[bool]> {
        self.s.as_deref().ok_or_else(|| Error::Schema(vec!["s".into()]))
    }

    pub fn outcomes(&self) -> Result<&[Option<f64>]> {
        self.y.as_deref().ok_or_else(|| Error::Schema(vec!["y".into()]))
    }

    /// Outcomes of every row; fails if any is missing.
    pub fn oracle_y(&self) -> Result<Vec<f64>> {
        self.outcomes()?
            .iter()
            .enumerate()
            .map(|(i, v)| v.ok_or_else(|| Error::InvalidValue(format!("outcome missing at row {i}"))))
            .collect()
    }

    pub fn has_oracle_y(&self) -> bool {
        self.y.as_ref().is_some_and(|y| y.iter().all(Option::is_some))
    }

    pub fn selected_indices(&self) -> Result<Vec<usize>> {
        Ok(self.selection()?.iter().enumerate().filter(|(_, &s)| s).map(|(i, _)| i).collect())
    }

    pub fn num_selected(&self) -> Result<usize> {
        Ok(self.selection()?.iter().filter(|&&s| s).count())
    }

    /// `[x, z]` feature matrix.
    pub fn xz(&self) -> Matrix {
        Matrix::hstack(&self.x, &self.z).expect("validated row counts")
    }

    pub fn subset(&self, idx: &[usize]) -> Dataset {
        let pick = |v: &Vec<_>| idx.iter().map(|&i| v[i]).collect::<Vec<_>>();
        Dataset {
            x: self.x.select_rows(idx),
            z: self.z.select_rows(idx),
            y: self.y.as_ref().map(|v| idx.iter().map(|&i| v[i]).collect()),
            s: self.s.as_ref().map(pick),
            p: self.p.as_ref().map(|v| idx.iter().map(|&i| v[i]).collect()),
        }
    }

    /// Copy with outcomes blanked on unselected rows.
    pub fn without_oracle(&self) -> Dataset {
        let mut d = self.clone();
        if let (Some(y), Some(s)) = (d.y.as_mut(), self.s.as_ref()) {
            for (v, &sel) in y.iter_mut().zip(s) {
                if !sel {
                    *v = None;
                }
            }
        }
        d
    }
}
