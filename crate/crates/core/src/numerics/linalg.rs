use std::ops::{Index, IndexMut};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Dense row-major matrix of finite reals.
///
/// Also used as a point list: each row is one point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn new(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if rows * cols != data.len() {
            return Err(Error::DimensionMismatch(format!(
                "{rows}x{cols} matrix needs {} entries, got {}",
                rows * cols,
                data.len()
            )));
        }
        if let Some(v) = data.iter().find(|v| !v.is_finite()) {
            return Err(Error::InvalidValue(format!("non-finite matrix entry {v}")));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![0.0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        Self::new(rows.len(), cols, rows.concat())
    }

    /// A single-column matrix holding `v`.
    pub fn column(v: &[f64]) -> Self {
        Self { rows: v.len(), cols: 1, data: v.to_vec() }
    }

    /// Side-by-side concatenation `[a | b]`.
    pub fn hstack(a: &Matrix, b: &Matrix) -> Result<Self> {
        if a.rows != b.rows {
            return Err(Error::DimensionMismatch(format!(
                "hstack of {} and {} rows",
                a.rows, b.rows
            )));
        }
        let cols = a.cols + b.cols;
        let mut data = Vec::with_capacity(a.rows * cols);
        for i in 0..a.rows {
            data.extend_from_slice(a.row(i));
            data.extend_from_slice(b.row(i));
        }
        Ok(Self { rows: a.rows, cols, data })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col_values(&self, j: usize) -> Vec<f64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    /// Rows selected by `idx`, in that order.
    pub fn select_rows(&self, idx: &[usize]) -> Self {
        let mut data = Vec::with_capacity(idx.len() * self.cols);
        for &i in idx {
            data.extend_from_slice(self.row(i));
        }
        Self { rows: idx.len(), cols: self.cols, data }
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    pub fn matmul(&self, other: &Matrix) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == 0.0 {
                    continue;
                }
                let orow = other.row(k);
                let dst = &mut out.data[i * other.cols..(i + 1) * other.cols];
                for (d, b) in dst.iter_mut().zip(orow) {
                    *d += a * b;
                }
            }
        }
        Ok(out)
    }

    pub fn matvec(&self, v: &[f64]) -> Result<Vec<f64>> {
        if self.cols != v.len() {
            return Err(Error::LengthMismatch { expected: self.cols, got: v.len() });
        }
        Ok((0..self.rows).map(|i| dot(self.row(i), v)).collect())
    }

    /// Adds `value` to every diagonal entry.
    pub fn add_diagonal(&mut self, value: f64) {
        for i in 0..self.rows.min(self.cols) {
            self[(i, i)] += value;
        }
    }

    pub fn is_symmetric(&self, tol: f64) -> bool {
        if !self.is_square() {
            return false;
        }
        for i in 0..self.rows {
            for j in 0..i {
                let (a, b) = (self[(i, j)], self[(j, i)]);
                if (a - b).abs() > tol * 1f64.max(a.abs()).max(b.abs()) {
                    return false;
                }
            }
        }
        true
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = f64;

    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.cols + j]
    }
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Lower-triangular `L` with `L Lᵀ = a + jitter·I`.
pub fn cholesky(a: &Matrix, jitter: f64) -> Result<Matrix> {
    if !a.is_square() {
        return Err(Error::DimensionMismatch(format!(
            "cholesky of a {}x{} matrix",
            a.rows, a.cols
        )));
    }
    if !a.is_symmetric(1e-9) {
        return Err(Error::DimensionMismatch("cholesky input is not symmetric".into()));
    }
    let n = a.rows;
    let mut l = Matrix::zeros(n, n);
    for j in 0..n {
        let row_j = &l.data[j * n..j * n + j];
        let diag = a[(j, j)] + jitter - dot(row_j, row_j);
        if !(diag > 0.0) || !diag.is_finite() {
            return Err(Error::NotPositiveDefinite { pivot: j, value: diag });
        }
        let diag = diag.sqrt();
        l.data[j * n + j] = diag;
        // Row-major: the leading parts of rows i and j are contiguous.
        for i in j + 1..n {
            let (upper, lower) = l.data.split_at_mut(i * n);
            let lj = &upper[j * n..j * n + j];
            let li = &mut lower[..n];
            li[j] = (a[(i, j)] - dot(&li[..j], lj)) / diag;
        }
    }
    Ok(l)
}

/// Solves `L Lᵀ x = b` given the Cholesky factor `L`.
pub fn cholesky_solve(l: &Matrix, b: &[f64]) -> Result<Vec<f64>> {
    let n = l.rows;
    if b.len() != n {
        return Err(Error::LengthMismatch { expected: n, got: b.len() });
    }
    let mut y = b.to_vec();
    for i in 0..n {
        let row = l.row(i);
        y[i] = (y[i] - dot(&row[..i], &y[..i])) / row[i];
    }
    for i in (0..n).rev() {
        let mut s = y[i];
        for k in i + 1..n {
            s -= l[(k, i)] * y[k];
        }
        y[i] = s / l[(i, i)];
    }
    Ok(y)
}

/// Solves `a x = b` for symmetric positive definite `a`.
pub fn solve_spd(a: &Matrix, b: &[f64]) -> Result<Vec<f64>> {
    if b.len() != a.rows {
        return Err(Error::LengthMismatch { expected: a.rows, got: b.len() });
    }
    let l = cholesky(a, 0.0)?;
    cholesky_solve(&l, b)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: &Matrix, b: &Matrix, tol: f64) -> bool {
        a.as_slice()
            .iter()
            .zip(b.as_slice())
            .all(|(x, y)| (x - y).abs() <= tol * 1f64.max(y.abs()))
    }

    #[test]
    fn cholesky_identity() {
        let l = cholesky(&Matrix::identity(2), 0.0).unwrap();
        assert_eq!(l, Matrix::identity(2));
    }

    #[test]
    fn cholesky_two_by_two() {
        let a = Matrix::from_rows(&[vec![4.0, 2.0], vec![2.0, 3.0]]).unwrap();
        let l = cholesky(&a, 0.0).unwrap();
        let expected =
            Matrix::from_rows(&[vec![2.0, 0.0], vec![1.0, 2f64.sqrt()]]).unwrap();
        assert!(close(&l, &expected, 1e-15));
        let back = l.matmul(&l.transpose()).unwrap();
        assert!(close(&back, &a, 1e-12));
    }

    #[test]
    fn cholesky_indefinite() {
        let a = Matrix::from_rows(&[vec![1.0, 2.0], vec![2.0, 1.0]]).unwrap();
        assert!(matches!(cholesky(&a, 0.0), Err(Error::NotPositiveDefinite { .. })));
    }

    #[test]
    fn cholesky_rejects_rectangular() {
        let a = Matrix::zeros(2, 3);
        assert!(matches!(cholesky(&a, 0.0), Err(Error::DimensionMismatch(_))));
    }

    #[test]
    fn jitter_rescues_singular() {
        let a = Matrix::from_rows(&[vec![1.0, 1.0], vec![1.0, 1.0]]).unwrap();
        assert!(cholesky(&a, 0.0).is_err());
        let l = cholesky(&a, 1e-8).unwrap();
        let back = l.matmul(&l.transpose()).unwrap();
        assert!((back[(0, 0)] - (1.0 + 1e-8)).abs() < 1e-14);
    }

    #[test]
    fn solve_small_systems() {
        let close = |a: &[f64], b: &[f64]| a.iter().zip(b).all(|(x, y)| (x - y).abs() < 1e-14);
        assert!(close(&solve_spd(&Matrix::identity(2), &[3.0, 4.0]).unwrap(), &[3.0, 4.0]));
        let d = Matrix::from_rows(&[vec![2.0, 0.0], vec![0.0, 4.0]]).unwrap();
        assert!(close(&solve_spd(&d, &[2.0, 4.0]).unwrap(), &[1.0, 1.0]));

        // Closed-form 2x2 inverse: [[3,-2],[-2,4]] / 8.
        let a = Matrix::from_rows(&[vec![4.0, 2.0], vec![2.0, 3.0]]).unwrap();
        let b = [10.0, 8.0];
        let det = 4.0 * 3.0 - 2.0 * 2.0;
        let expected = [(3.0 * b[0] - 2.0 * b[1]) / det, (-2.0 * b[0] + 4.0 * b[1]) / det];
        let x = solve_spd(&a, &b).unwrap();
        assert!((x[0] - expected[0]).abs() < 1e-14);
        assert!((x[1] - expected[1]).abs() < 1e-14);
    }

    #[test]
    fn solve_length_mismatch() {
        assert!(matches!(
            solve_spd(&Matrix::identity(3), &[1.0]),
            Err(Error::LengthMismatch { .. })
        ));
    }

    #[test]
    fn matrix_rejects_non_finite() {
        assert!(Matrix::new(1, 1, vec![f64::NAN]).is_err());
        assert!(Matrix::new(2, 2, vec![1.0]).is_err());
    }
}
