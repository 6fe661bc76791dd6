//! Dense matrices and Gaussian elimination over a [`Scalar`].

use std::ops::{Add, Index, IndexMut};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Row-major dense matrix.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Clone> Matrix<T> {
    pub fn filled(rows: usize, cols: usize, value: T) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![value; rows * cols],
        }
    }

    /// Builds a matrix from row vectors. All rows must have equal length.
    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        let n = rows.len();
        Ok(Matrix {
            rows: n,
            cols,
            data: rows.into_iter().flatten().collect(),
        })
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

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn map<U, F: FnMut(&T) -> U>(&self, f: F) -> Matrix<U> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn transpose(&self) -> Self {
        let mut data = Vec::with_capacity(self.data.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                data.push(self[(i, j)].clone());
            }
        }
        Matrix {
            rows: self.cols,
            cols: self.rows,
            data,
        }
    }

    /// The matrix with row `k` and column `k` removed.
    pub fn without(&self, k: usize) -> Self {
        let mut data = Vec::with_capacity((self.rows - 1) * (self.cols - 1));
        for i in (0..self.rows).filter(|&i| i != k) {
            for j in (0..self.cols).filter(|&j| j != k) {
                data.push(self[(i, j)].clone());
            }
        }
        Matrix {
            rows: self.rows - 1,
            cols: self.cols - 1,
            data,
        }
    }
}

impl<T: Clone + Zero + One> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self::filled(rows, cols, T::zero())
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = T::one();
        }
        m
    }

    /// Kronecker product `self ⊗ other`; index `(i1·r2 + i2, j1·c2 + j2)`.
    pub fn kron(&self, other: &Self) -> Self {
        let (r2, c2) = (other.rows, other.cols);
        let mut out = Self::zeros(self.rows * r2, self.cols * c2);
        for i1 in 0..self.rows {
            for j1 in 0..self.cols {
                let a = &self[(i1, j1)];
                if a.is_zero() {
                    continue;
                }
                for i2 in 0..r2 {
                    for j2 in 0..c2 {
                        out[(i1 * r2 + i2, j1 * c2 + j2)] = a.clone() * other[(i2, j2)].clone();
                    }
                }
            }
        }
        out
    }

    /// `self ⊗ I + I ⊗ other` for square operands.
    pub fn kron_sum(&self, other: &Self) -> Self {
        let left = self.kron(&Self::identity(other.rows));
        let right = Self::identity(self.rows).kron(other);
        left + right
    }

    pub fn column_sums(&self) -> Vec<T> {
        (0..self.cols)
            .map(|j| (0..self.rows).fold(T::zero(), |acc, i| acc + self[(i, j)].clone()))
            .collect()
    }
}

impl<T> Index<(usize, usize)> for Matrix<T> {
    type Output = T;

    fn index(&self, (i, j): (usize, usize)) -> &T {
        assert!(
            i < self.rows && j < self.cols,
            "index ({i},{j}) out of bounds"
        );
        &self.data[i * self.cols + j]
    }
}

impl<T> IndexMut<(usize, usize)> for Matrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        assert!(
            i < self.rows && j < self.cols,
            "index ({i},{j}) out of bounds"
        );
        &mut self.data[i * self.cols + j]
    }
}

impl<T: Clone + Add<Output = T>> Add for Matrix<T> {
    type Output = Matrix<T>;

    fn add(self, rhs: Self) -> Self {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .into_iter()
                .zip(rhs.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl<T: Scalar> Matrix<T> {
    pub fn scaled(&self, factor: &T) -> Self {
        self.map(|x| x.clone() * factor.clone())
    }

    /// Row vector times matrix.
    pub fn left_mul(&self, v: &[T]) -> Vec<T> {
        assert_eq!(v.len(), self.rows);
        (0..self.cols)
            .map(|j| {
                v.iter().enumerate().fold(T::zero(), |acc, (i, vi)| {
                    acc + vi.clone() * self[(i, j)].clone()
                })
            })
            .collect()
    }
}

/// Solves `a · x = b` by Gaussian elimination with partial pivoting on
/// absolute value. Exact for rational scalars.
pub fn solve<T: Scalar>(a: &Matrix<T>, b: &[T]) -> Result<Vec<T>> {
    let n = a.rows();
    if !a.is_square() || b.len() != n {
        return Err(Error::DimensionMismatch(format!(
            "{}x{} system with right-hand side of length {}",
            a.rows(),
            a.cols(),
            b.len()
        )));
    }
    let mut rows: Vec<Vec<T>> = a.to_rows();
    let mut rhs: Vec<T> = b.to_vec();

    for col in 0..n {
        let pivot = (col..n)
            .filter(|&r| !rows[r][col].is_negligible())
            .max_by(|&r1, &r2| {
                rows[r1][col]
                    .abs()
                    .partial_cmp(&rows[r2][col].abs())
                    .unwrap_or(std::cmp::Ordering::Equal)
            })
            .ok_or(Error::SingularSystem)?;
        rows.swap(col, pivot);
        rhs.swap(col, pivot);

        let (head, tail) = rows.split_at_mut(col + 1);
        let pivot_row = &head[col];
        let pivot_val = pivot_row[col].clone();
        for (offset, row) in tail.iter_mut().enumerate() {
            if row[col].is_zero() {
                continue;
            }
            let factor = row[col].clone() / pivot_val.clone();
            row[col] = T::zero();
            for j in col + 1..n {
                if !pivot_row[j].is_zero() {
                    row[j] = row[j].clone() - factor.clone() * pivot_row[j].clone();
                }
            }
            let r = col + 1 + offset;
            rhs[r] = rhs[r].clone() - factor * rhs[col].clone();
        }
    }

    let mut x = vec![T::zero(); n];
    for i in (0..n).rev() {
        let mut acc = rhs[i].clone();
        for j in i + 1..n {
            if !rows[i][j].is_zero() {
                acc = acc - rows[i][j].clone() * x[j].clone();
            }
        }
        x[i] = acc / rows[i][i].clone();
    }
    Ok(x)
}

/// Exact solve of an integer system by fraction-free (Bareiss) elimination
/// with partial pivoting on absolute value, then rational back-substitution.
pub fn solve_fraction_free(a: &Matrix<i64>, b: &[i64]) -> Result<Vec<BigRational>> {
    let n = a.rows();
    if !a.is_square() || b.len() != n {
        return Err(Error::DimensionMismatch(format!(
            "{}x{} system with right-hand side of length {}",
            a.rows(),
            a.cols(),
            b.len()
        )));
    }
    // augmented rows
    let mut rows: Vec<Vec<BigInt>> = (0..n)
        .map(|i| {
            a.row(i)
                .iter()
                .chain(std::iter::once(&b[i]))
                .map(|&v| BigInt::from(v))
                .collect()
        })
        .collect();
    let mut prev = BigInt::one();
    for col in 0..n {
        let pivot = (col..n)
            .filter(|&r| !rows[r][col].is_zero())
            .max_by(|&r1, &r2| rows[r1][col].magnitude().cmp(rows[r2][col].magnitude()))
            .ok_or(Error::SingularSystem)?;
        rows.swap(col, pivot);
        let (head, tail) = rows.split_at_mut(col + 1);
        let pivot_row = &head[col];
        let p = &pivot_row[col];
        for row in tail.iter_mut() {
            let factor = std::mem::take(&mut row[col]);
            for j in col + 1..=n {
                let mut v = &row[j] * p;
                if !factor.is_zero() && !pivot_row[j].is_zero() {
                    v -= &factor * &pivot_row[j];
                }
                row[j] = v / &prev;
            }
        }
        prev = pivot_row[col].clone();
    }
    let mut x: Vec<BigRational> = vec![BigRational::zero(); n];
    for i in (0..n).rev() {
        let mut acc = BigRational::from_integer(rows[i][n].clone());
        for j in i + 1..n {
            if !rows[i][j].is_zero() {
                acc -= &x[j] * BigRational::from_integer(rows[i][j].clone());
            }
        }
        x[i] = acc / BigRational::from_integer(rows[i][i].clone());
    }
    Ok(x)
}

/// Solves the row-vector system `x · a = b`.
pub fn solve_left<T: Scalar>(a: &Matrix<T>, b: &[T]) -> Result<Vec<T>> {
    solve(&a.transpose(), b)
}
