//! Dense matrices over an exact ring, fraction-free elimination and rational
//! row reduction.

use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::ring::Ring;

#[derive(Clone, PartialEq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Ring> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![T::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = T::one();
        }
        m
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

    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::InvalidInput("ragged matrix rows".into()));
        }
        Ok(Matrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() })
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

    pub fn rows_mut(&mut self) -> std::slice::ChunksMut<'_, T> {
        self.data.chunks_mut(self.cols.max(1))
    }

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn map<U: Ring>(&self, f: impl Fn(&T) -> U) -> Matrix<U> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn try_map<U: Ring>(&self, f: impl Fn(&T) -> Result<U>) -> Result<Matrix<U>> {
        Ok(Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect::<Result<_>>()? })
    }

    pub fn transpose(&self) -> Self {
        Matrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square() && (0..self.rows).all(|i| (0..i).all(|j| self[(i, j)] == self[(j, i)]))
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.rows).all(|i| (0..self.cols).all(|j| i == j || self[(i, j)].is_zero()))
    }

    pub fn diagonal(&self) -> Vec<T> {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)].clone()).collect()
    }

    pub fn mul(&self, other: &Matrix<T>) -> Result<Matrix<T>> {
        if self.cols != other.rows {
            return Err(Error::InvalidInput("matrix dimensions do not agree".into()));
        }
        Ok(Matrix::from_fn(self.rows, other.cols, |i, j| {
            let mut acc = T::zero();
            for k in 0..self.cols {
                let a = &self[(i, k)];
                let b = &other[(k, j)];
                if !a.is_zero() && !b.is_zero() {
                    acc = acc.add(&a.mul(b));
                }
            }
            acc
        }))
    }

    /// Simultaneous row and column permutation: entry `(i, j)` of the result is
    /// `self[(perm[i], perm[j])]`.
    pub fn permute_symmetric(&self, perm: &[usize]) -> Self {
        Matrix::from_fn(perm.len(), perm.len(), |i, j| self[(perm[i], perm[j])].clone())
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Self {
        Matrix::from_fn(rows.len(), cols.len(), |i, j| self[(rows[i], cols[j])].clone())
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.rows {
                self.data.swap(i * self.cols + a, i * self.cols + b);
            }
        }
    }

    /// Determinant by Bareiss fraction-free elimination; every division is exact
    /// in an integral domain.
    pub fn det(&self) -> Result<T> {
        if !self.is_square() {
            return Err(Error::InvalidInput("determinant of a non-square matrix".into()));
        }
        let n = self.rows;
        if n == 0 {
            return Ok(T::one());
        }
        let mut a = self.clone();
        let mut prev = T::one();
        let mut negate = false;
        for k in 0..n - 1 {
            if a[(k, k)].is_zero() {
                match (k + 1..n).find(|&i| !a[(i, k)].is_zero()) {
                    Some(i) => {
                        a.swap_rows(i, k);
                        negate = !negate;
                    }
                    None => return Ok(T::zero()),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = a[(i, j)].mul(&a[(k, k)]).sub(&a[(i, k)].mul(&a[(k, j)]));
                    a[(i, j)] =
                        num.exact_div(&prev).ok_or_else(|| Error::InvalidInput("inexact Bareiss division".into()))?;
                }
                a[(i, k)] = T::zero();
            }
            prev = a[(k, k)].clone();
        }
        let d = a[(n - 1, n - 1)].clone();
        Ok(if negate { d.neg() } else { d })
    }

    /// Rank by fraction-free elimination.
    pub fn rank(&self) -> usize {
        let mut a = self.clone();
        let mut prev = T::one();
        let mut rank = 0;
        for col in 0..a.cols {
            if rank == a.rows {
                break;
            }
            let Some(p) = (rank..a.rows).find(|&i| !a[(i, col)].is_zero()) else {
                continue;
            };
            a.swap_rows(p, rank);
            for i in rank + 1..a.rows {
                for j in col + 1..a.cols {
                    let num = a[(i, j)].mul(&a[(rank, col)]).sub(&a[(i, col)].mul(&a[(rank, j)]));
                    a[(i, j)] = num.exact_div(&prev).expect("Bareiss division is exact");
                }
                a[(i, col)] = T::zero();
            }
            prev = a[(rank, col)].clone();
            rank += 1;
        }
        rank
    }
}

impl<T> std::ops::Index<(usize, usize)> for Matrix<T> {
    type Output = T;
    fn index(&self, (i, j): (usize, usize)) -> &T {
        &self.data[i * self.cols + j]
    }
}

impl<T> std::ops::IndexMut<(usize, usize)> for Matrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        &mut self.data[i * self.cols + j]
    }
}

impl<T: fmt::Display> fmt::Display for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cells: Vec<String> = self.data.iter().map(ToString::to_string).collect();
        let mut widths = vec![0; self.cols];
        for (k, c) in cells.iter().enumerate() {
            widths[k % self.cols.max(1)] = widths[k % self.cols.max(1)].max(c.chars().count());
        }
        for i in 0..self.rows {
            let line: Vec<String> =
                (0..self.cols).map(|j| format!("{:<w$}", cells[i * self.cols + j], w = widths[j])).collect();
            writeln!(f, "{}", line.join("  ").trim_end())?;
        }
        Ok(())
    }
}

impl<T: fmt::Debug> fmt::Debug for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.data.chunks(self.cols.max(1))).finish()
    }
}

/// Reduced row echelon form over the rationals, in place. Returns pivot columns.
pub fn rref(rows: &mut [Vec<BigRational>]) -> Vec<usize> {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(p, r);
        let inv = BigRational::one() / &rows[r][c];
        for x in rows[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_zero() {
                let f = rows[i][c].clone();
                for j in c..ncols {
                    let t = &rows[r][j] * &f;
                    rows[i][j] -= t;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Rank of a rational matrix.
pub fn rational_rank(rows: &[Vec<BigRational>]) -> usize {
    let mut m = rows.to_vec();
    rref(&mut m).len()
}

/// Basis of the null space `{x : rows·x = 0}`.
pub fn null_space(rows: &[Vec<BigRational>], ncols: usize) -> Vec<Vec<BigRational>> {
    let mut m = rows.to_vec();
    let pivots = rref(&mut m);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![BigRational::zero(); ncols];
            v[f] = BigRational::one();
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = -m[r][f].clone();
            }
            v
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn int(rows: &[&[i64]]) -> Matrix<BigInt> {
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()).unwrap()
    }

    fn q(x: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(x))
    }

    #[test]
    fn bareiss_determinant() {
        assert_eq!(int(&[&[1, 3], &[3, 1]]).det().unwrap(), BigInt::from(-8));
        assert_eq!(int(&[&[0, 1], &[1, 0]]).det().unwrap(), BigInt::from(-1));
        assert_eq!(int(&[&[2, 0, 1], &[1, 3, 2], &[1, 1, 2]]).det().unwrap(), BigInt::from(6));
        assert_eq!(int(&[&[1, 2], &[2, 4]]).det().unwrap(), BigInt::from(0));
        assert_eq!(Matrix::<BigInt>::zeros(0, 0).det().unwrap(), BigInt::from(1));
    }

    #[test]
    fn ranks() {
        assert_eq!(int(&[&[1, 1, 1], &[1, 1, 1]]).rank(), 1);
        assert_eq!(int(&[&[0, 0], &[0, 5]]).rank(), 1);
        assert_eq!(int(&[&[1, 2, 3], &[4, 5, 6], &[7, 8, 10]]).rank(), 3);
        let m = vec![vec![q(1), q(2)], vec![q(2), q(4)]];
        assert_eq!(rational_rank(&m), 1);
    }

    #[test]
    fn null_space_is_annihilated() {
        let m = vec![vec![q(1), q(1), q(0)], vec![q(0), q(1), q(-1)]];
        let ns = null_space(&m, 3);
        assert_eq!(ns.len(), 1);
        for row in &m {
            let dot: BigRational = row.iter().zip(&ns[0]).map(|(a, b)| a * b).sum();
            assert!(dot.is_zero());
        }
    }

    #[test]
    fn multiplication_and_permutation() {
        let a = int(&[&[1, 2], &[3, 4]]);
        let i = Matrix::identity(2);
        assert_eq!(a.mul(&i).unwrap(), a);
        let p = a.permute_symmetric(&[1, 0]);
        assert_eq!(p, int(&[&[4, 3], &[2, 1]]));
        assert_eq!(a.transpose(), int(&[&[1, 3], &[2, 4]]));
    }
}
