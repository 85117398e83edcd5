use std::ops::{Index, IndexMut};

use crate::error::{Error, Result};
use crate::numkernel::Rational;

/// Row-major dense matrix. Used with `f64` for spectra/optimization and
/// with [`Rational`] for exact operator assembly.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseMatrix<T = f64> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

pub type RatMatrix = DenseMatrix<Rational>;

impl<T: Clone> DenseMatrix<T> {
    pub fn filled(rows: usize, cols: usize, v: T) -> Self {
        DenseMatrix { rows, cols, data: vec![v; rows * cols] }
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<T>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Dimension(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(DenseMatrix { rows, cols, data })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        DenseMatrix { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[T] {
        &self.data
    }

    pub fn as_mut_slice(&mut self) -> &mut [T] {
        &mut self.data
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> Self {
        DenseMatrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn map<U>(&self, f: impl FnMut(&T) -> U) -> DenseMatrix<U> {
        DenseMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }
}

impl<T> Index<(usize, usize)> for DenseMatrix<T> {
    type Output = T;
    fn index(&self, (i, j): (usize, usize)) -> &T {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl<T> IndexMut<(usize, usize)> for DenseMatrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl DenseMatrix<f64> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        DenseMatrix::filled(rows, cols, 0.0)
    }

    pub fn identity(n: usize) -> Self {
        DenseMatrix::from_fn(n, n, |i, j| if i == j { 1.0 } else { 0.0 })
    }

    pub fn diag(d: &[f64]) -> Self {
        let n = d.len();
        DenseMatrix::from_fn(n, n, |i, j| if i == j { d[i] } else { 0.0 })
    }

    pub fn from_rows(rows: &[&[f64]]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        DenseMatrix::from_fn(r, c, |i, j| rows[i][j])
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn frobenius(&self) -> f64 {
        self.data.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    /// max |a_ij - a_ji|
    pub fn asymmetry(&self) -> f64 {
        let mut m: f64 = 0.0;
        for i in 0..self.rows {
            for j in (i + 1)..self.cols.min(self.rows) {
                m = m.max((self[(i, j)] - self[(j, i)]).abs());
            }
        }
        m
    }

    /// Rejects non-square input and asymmetry above `rel_tol·max|a|`.
    pub fn check_symmetric(&self, rel_tol: f64) -> Result<()> {
        if !self.is_square() {
            return Err(Error::NotSquare { rows: self.rows, cols: self.cols });
        }
        let asym = self.asymmetry();
        if asym > rel_tol * self.max_abs().max(1e-300) {
            return Err(Error::NotSymmetric { asym });
        }
        Ok(())
    }

    pub fn symmetrized(&self) -> Self {
        DenseMatrix::from_fn(self.rows, self.cols, |i, j| 0.5 * (self[(i, j)] + self[(j, i)]))
    }

    pub fn matmul(&self, b: &DenseMatrix) -> DenseMatrix {
        assert_eq!(self.cols, b.rows, "matmul dimension mismatch");
        let mut c = DenseMatrix::zeros(self.rows, b.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == 0.0 {
                    continue;
                }
                let brow = b.row(k);
                let crow = &mut c.data[i * b.cols..(i + 1) * b.cols];
                for (cj, bj) in crow.iter_mut().zip(brow) {
                    *cj += a * bj;
                }
            }
        }
        c
    }

    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(self.cols, x.len(), "matvec dimension mismatch");
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(x).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// Aᵀx without forming the transpose.
    pub fn tmatvec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(self.rows, x.len(), "tmatvec dimension mismatch");
        let mut y = vec![0.0; self.cols];
        for (i, xi) in x.iter().enumerate() {
            if *xi == 0.0 {
                continue;
            }
            for (yj, a) in y.iter_mut().zip(self.row(i)) {
                *yj += a * xi;
            }
        }
        y
    }

    pub fn add(&self, b: &DenseMatrix) -> DenseMatrix {
        assert_eq!(self.dims(), b.dims());
        let data = self.data.iter().zip(&b.data).map(|(x, y)| x + y).collect();
        DenseMatrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn sub(&self, b: &DenseMatrix) -> DenseMatrix {
        assert_eq!(self.dims(), b.dims());
        let data = self.data.iter().zip(&b.data).map(|(x, y)| x - y).collect();
        DenseMatrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn scale(&self, s: f64) -> DenseMatrix {
        self.map(|v| v * s)
    }
}

impl DenseMatrix<Rational> {
    pub fn rat_zeros(rows: usize, cols: usize) -> Self {
        DenseMatrix::filled(rows, cols, Rational::zero())
    }

    pub fn to_f64(&self) -> DenseMatrix<f64> {
        self.map(|r| r.to_f64())
    }

    pub fn rat_matmul(&self, b: &RatMatrix) -> RatMatrix {
        assert_eq!(self.cols, b.rows, "matmul dimension mismatch");
        let mut c = RatMatrix::rat_zeros(self.rows, b.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..b.cols {
                    let bkj = &b[(k, j)];
                    if !bkj.is_zero() {
                        c[(i, j)] += a * bkj;
                    }
                }
            }
        }
        c
    }

    pub fn max_abs_f64(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.to_f64().abs()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shapes_and_products() {
        let a = DenseMatrix::from_rows(&[&[1.0, 2.0], &[3.0, 4.0], &[5.0, 6.0]]);
        assert_eq!(a.dims(), (3, 2));
        let at = a.transpose();
        let p = at.matmul(&a);
        assert_eq!(p[(0, 0)], 35.0);
        assert_eq!(p[(0, 1)], 44.0);
        assert_eq!(a.matvec(&[1.0, 1.0]), vec![3.0, 7.0, 11.0]);
        assert_eq!(a.tmatvec(&[1.0, 1.0, 1.0]), vec![9.0, 12.0]);
    }

    #[test]
    fn from_vec_checks_length() {
        assert!(DenseMatrix::from_vec(2, 2, vec![1.0; 3]).is_err());
    }

    #[test]
    fn symmetry_check() {
        let a = DenseMatrix::from_rows(&[&[1.0, 2.0], &[2.0 + 1e-6, 1.0]]);
        assert!(a.check_symmetric(1e-12).is_err());
        assert!(a.symmetrized().check_symmetric(1e-12).is_ok());
        let r = DenseMatrix::zeros(2, 3);
        assert!(matches!(r.check_symmetric(1e-12), Err(Error::NotSquare { .. })));
    }

    #[test]
    fn rational_product() {
        let a = RatMatrix::from_fn(2, 2, |i, j| Rational::new((i + j) as i64, 3));
        let p = a.rat_matmul(&a);
        assert_eq!(p[(1, 1)], Rational::new(5, 9));
    }
}
