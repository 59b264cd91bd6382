//! Dense row-major matrices over a [`Scalar`].

use std::ops::Index;

use itertools::Itertools;

use super::scalar::Scalar;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T> Matrix<T> {
    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: T) {
        self.data[i * self.cols + j] = value;
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    /// Builds a matrix from equal-length rows.
    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::DimensionMismatch("rows have different lengths".into()));
        }
        Ok(Matrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn map<U>(&self, f: impl Fn(&T) -> U) -> Matrix<U> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn to_rows(&self) -> Vec<Vec<T>>
    where
        T: Clone,
    {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }
}

impl<T> Index<(usize, usize)> for Matrix<T> {
    type Output = T;

    fn index(&self, (i, j): (usize, usize)) -> &T {
        self.get(i, j)
    }
}

impl<T: Scalar> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix::from_fn(rows, cols, |_, _| T::zero())
    }

    pub fn identity(n: usize) -> Self {
        Matrix::from_fn(n, n, |i, j| if i == j { T::one() } else { T::zero() })
    }

    pub fn transpose(&self) -> Self {
        Matrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn plus(&self, other: &Self) -> Result<Self> {
        self.check_same_shape(other)?;
        Ok(Matrix::from_fn(self.rows, self.cols, |i, j| {
            self.get(i, j).plus(other.get(i, j))
        }))
    }

    pub fn minus(&self, other: &Self) -> Result<Self> {
        self.check_same_shape(other)?;
        Ok(Matrix::from_fn(self.rows, self.cols, |i, j| {
            self.get(i, j).minus(other.get(i, j))
        }))
    }

    pub fn times(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out: Matrix<T> = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        let v = out.get(i, j).plus(&a.times(b));
                        out.set(i, j, v);
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn scale(&self, k: &T) -> Self {
        self.map(|x| x.times(k))
    }

    /// Entries at the given (ordered) rows and columns. Order matters for the
    /// sign of the resulting minors.
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Result<Self> {
        for &r in rows {
            if r >= self.rows {
                return Err(Error::IndexOutOfRange {
                    index: r,
                    len: self.rows,
                });
            }
        }
        for &c in cols {
            if c >= self.cols {
                return Err(Error::IndexOutOfRange {
                    index: c,
                    len: self.cols,
                });
            }
        }
        Ok(Matrix::from_fn(rows.len(), cols.len(), |i, j| {
            self.get(rows[i], cols[j]).clone()
        }))
    }

    pub fn det(&self) -> Result<T> {
        self.check_square()?;
        Ok(T::determinant(self))
    }

    pub fn inverse(&self) -> Result<Self> {
        self.check_square()?;
        self.solve(&Matrix::identity(self.rows))
    }

    /// Solves `self * X = rhs` by Gaussian elimination. Zero entries are
    /// skipped, so banded systems stay cheap.
    pub fn solve(&self, rhs: &Self) -> Result<Self> {
        self.check_square()?;
        if rhs.rows != self.rows {
            return Err(Error::DimensionMismatch(format!(
                "rhs has {} rows, expected {}",
                rhs.rows, self.rows
            )));
        }
        let n = self.rows;
        let m = rhs.cols;
        if n == 0 {
            return Ok(Matrix::zeros(0, m));
        }
        let mut a = self.to_rows();
        let mut b = rhs.to_rows();
        for k in 0..n {
            let mut best: Option<(usize, f64)> = None;
            for i in k..n {
                if let Some(score) = a[i][k].pivot_score() {
                    if best.is_none_or(|(_, s)| score > s) {
                        best = Some((i, score));
                    }
                }
            }
            let (p, _) = best.ok_or_else(T::singular_error)?;
            a.swap(p, k);
            b.swap(p, k);
            let inv = a[k][k].invert().ok_or_else(T::singular_error)?;
            let pivot_cols: Vec<usize> = (k + 1..n).filter(|&j| !a[k][j].is_zero()).collect();
            let rhs_cols: Vec<usize> = (0..m).filter(|&j| !b[k][j].is_zero()).collect();
            for i in k + 1..n {
                if a[i][k].is_zero() {
                    continue;
                }
                let f = a[i][k].times(&inv);
                for &j in &pivot_cols {
                    a[i][j] = a[i][j].minus(&f.times(&a[k][j]));
                }
                for &j in &rhs_cols {
                    b[i][j] = b[i][j].minus(&f.times(&b[k][j]));
                }
                a[i][k] = T::zero();
            }
        }
        let mut x = vec![vec![T::zero(); m]; n];
        for i in (0..n).rev() {
            let inv = a[i][i].invert().ok_or_else(T::singular_error)?;
            let upper: Vec<usize> = (i + 1..n).filter(|&k| !a[i][k].is_zero()).collect();
            for j in 0..m {
                let mut acc = b[i][j].clone();
                for &k in &upper {
                    if !x[k][j].is_zero() {
                        acc = acc.minus(&a[i][k].times(&x[k][j]));
                    }
                }
                x[i][j] = if acc.is_zero() { acc } else { acc.times(&inv) };
            }
        }
        Matrix::from_rows(x)
    }

    /// Schur complement `M / F = C - D F^{-1} E`, where `F` is the principal
    /// block on `block` and `C` the principal block on the remaining indices
    /// (in increasing order).
    pub fn schur_complement(&self, block: &[usize]) -> Result<Self> {
        self.check_square()?;
        for &i in block {
            if i >= self.rows {
                return Err(Error::IndexOutOfRange {
                    index: i,
                    len: self.rows,
                });
            }
        }
        let rest: Vec<usize> = (0..self.rows).filter(|i| !block.contains(i)).collect();
        let c = self.submatrix(&rest, &rest)?;
        if block.is_empty() {
            return Ok(c);
        }
        let d = self.submatrix(&rest, block)?;
        let e = self.submatrix(block, &rest)?;
        let f = self.submatrix(block, block)?;
        let f_inv_e = f.solve(&e)?;
        c.minus(&d.times(&f_inv_e)?)
    }

    fn check_square(&self) -> Result<()> {
        if self.is_square() {
            Ok(())
        } else {
            Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            })
        }
    }

    fn check_same_shape(&self, other: &Self) -> Result<()> {
        if self.rows == other.rows && self.cols == other.cols {
            Ok(())
        } else {
            Err(Error::DimensionMismatch(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )))
        }
    }
}

/// Sign of a permutation given as images of `0..n`.
pub fn permutation_sign(perm: &[usize]) -> i32 {
    let mut seen = vec![false; perm.len()];
    let mut sign = 1;
    for start in 0..perm.len() {
        if seen[start] {
            continue;
        }
        let mut len = 0;
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            i = perm[i];
            len += 1;
        }
        if len % 2 == 0 {
            sign = -sign;
        }
    }
    sign
}

/// Determinant from the permutation expansion; division-free.
pub fn leibniz_det<T: Scalar>(m: &Matrix<T>) -> T {
    let n = m.rows();
    let mut acc = T::zero();
    for perm in (0..n).permutations(n) {
        let mut term = T::one();
        for (i, &j) in perm.iter().enumerate() {
            term = term.times(m.get(i, j));
            if term.is_zero() {
                break;
            }
        }
        if term.is_zero() {
            continue;
        }
        acc = if permutation_sign(&perm) > 0 {
            acc.plus(&term)
        } else {
            acc.minus(&term)
        };
    }
    acc
}
