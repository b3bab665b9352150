//! Small dense matrices (d × d moment blocks, 3 × 3 and 6 × 6 recurrence blocks)
//! and fraction-free determinants.

use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_traits::Zero;

use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq)]
pub struct Mat<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Scalar> Mat<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat { rows, cols, data: vec![T::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = T::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Mat { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Mat { rows, cols, data }
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

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        self.data.chunks(self.cols.max(1)).take(self.rows).map(<[T]>::to_vec).collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn is_upper_triangular(&self) -> bool {
        (0..self.rows).all(|i| (0..self.cols.min(i)).all(|j| self[(i, j)].is_zero()))
    }

    pub fn is_lower_triangular(&self) -> bool {
        (0..self.rows).all(|i| (i + 1..self.cols).all(|j| self[(i, j)].is_zero()))
    }

    pub fn has_nonzero_diagonal(&self) -> bool {
        (0..self.rows.min(self.cols)).all(|i| !self[(i, i)].is_zero())
    }

    pub fn has_unit_diagonal(&self) -> bool {
        (0..self.rows.min(self.cols)).all(|i| self[(i, i)].is_one())
    }

    /// Copy of the `h × w` block whose top-left corner is `(r, c)`.
    pub fn block(&self, r: usize, c: usize, h: usize, w: usize) -> Self {
        Self::from_fn(h, w, |i, j| self[(r + i, c + j)].clone())
    }

    pub fn set_block(&mut self, r: usize, c: usize, b: &Self) {
        for i in 0..b.rows {
            for j in 0..b.cols {
                self[(r + i, c + j)] = b[(i, j)].clone();
            }
        }
    }

    /// Assembles a block matrix from a grid of equally sized blocks.
    pub fn from_blocks(grid: &[Vec<Self>]) -> Self {
        let bh = grid[0][0].rows;
        let bw = grid[0][0].cols;
        let mut m = Self::zeros(bh * grid.len(), bw * grid[0].len());
        for (bi, row) in grid.iter().enumerate() {
            for (bj, b) in row.iter().enumerate() {
                assert_eq!((b.rows, b.cols), (bh, bw), "unequal block sizes");
                m.set_block(bi * bh, bj * bw, b);
            }
        }
        m
    }

    /// Block upper triangular with respect to square blocks of side `bs`.
    pub fn is_block_upper_triangular(&self, bs: usize) -> bool {
        let nb = self.rows / bs;
        (0..nb).all(|bi| (0..bi).all(|bj| self.block(bi * bs, bj * bs, bs, bs).is_zero()))
    }

    /// Determinant by fraction-free elimination with row pivoting.
    pub fn determinant(&self) -> T {
        assert!(self.is_square(), "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return T::one();
        }
        let mut a = self.to_rows();
        let mut sign = T::one();
        let mut prev = T::one();
        for k in 0..n - 1 {
            if a[k][k].is_zero() {
                match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                    Some(r) => {
                        a.swap(k, r);
                        sign = -sign;
                    }
                    None => return T::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = a[k][k].clone() * a[i][j].clone() - a[i][k].clone() * a[k][j].clone();
                    a[i][j] = v / prev.clone();
                }
            }
            prev = a[k][k].clone();
        }
        sign * a[n - 1][n - 1].clone()
    }

    /// All leading principal minors `det(A[..k, ..k])`, `k = 1..=n`.
    ///
    /// Bareiss elimination without pivoting yields them as successive pivots;
    /// after a vanishing pivot the remaining minors are computed directly.
    pub fn leading_principal_minors(&self) -> Vec<T> {
        assert!(self.is_square(), "minors of a non-square matrix");
        let n = self.rows;
        let mut a = self.to_rows();
        let mut minors = Vec::with_capacity(n);
        let mut prev = T::one();
        for k in 0..n {
            let pivot = a[k][k].clone();
            if pivot.is_zero() {
                minors.extend((k + 1..=n).map(|m| self.block(0, 0, m, m).determinant()));
                return minors;
            }
            minors.push(pivot.clone());
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = pivot.clone() * a[i][j].clone() - a[i][k].clone() * a[k][j].clone();
                    a[i][j] = v / prev.clone();
                }
            }
            prev = pivot;
        }
        minors
    }

    pub fn scale(&self, s: &T) -> Self {
        Mat { rows: self.rows, cols: self.cols, data: self.data.iter().map(|v| v.clone() * s.clone()).collect() }
    }

    pub fn map<U>(&self, f: impl Fn(&T) -> U) -> Vec<Vec<U>> {
        (0..self.rows).map(|i| (0..self.cols).map(|j| f(&self[(i, j)])).collect()).collect()
    }
}

impl<T> Index<(usize, usize)> for Mat<T> {
    type Output = T;
    fn index(&self, (i, j): (usize, usize)) -> &T {
        assert!(i < self.rows && j < self.cols, "index ({i}, {j}) out of bounds");
        &self.data[i * self.cols + j]
    }
}

impl<T> IndexMut<(usize, usize)> for Mat<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        assert!(i < self.rows && j < self.cols, "index ({i}, {j}) out of bounds");
        &mut self.data[i * self.cols + j]
    }
}

impl<T: Scalar> Mul for &Mat<T> {
    type Output = Mat<T>;
    fn mul(self, rhs: &Mat<T>) -> Mat<T> {
        assert_eq!(self.cols, rhs.rows, "inner dimensions differ");
        let mut out: Mat<T> = Mat::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = &rhs[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] = out[(i, j)].clone() + a.clone() * b.clone();
                    }
                }
            }
        }
        out
    }
}

impl<T: Scalar> Add for &Mat<T> {
    type Output = Mat<T>;
    fn add(self, rhs: &Mat<T>) -> Mat<T> {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a.clone() + b.clone()).collect(),
        }
    }
}

impl<T: Scalar> Sub for &Mat<T> {
    type Output = Mat<T>;
    fn sub(self, rhs: &Mat<T>) -> Mat<T> {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a.clone() - b.clone()).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, Rational};

    fn m(rows: &[&[i64]]) -> Mat<Rational> {
        Mat::from_rows(rows.iter().map(|r| r.iter().map(|&v| int(v)).collect()).collect())
    }

    #[test]
    fn determinant_with_pivoting() {
        assert_eq!(m(&[&[0, 1], &[1, 0]]).determinant(), int(-1));
        assert_eq!(m(&[&[2, 0, 1], &[1, 3, 2], &[1, 1, 2]]).determinant(), int(6));
        assert_eq!(m(&[&[1, 2], &[2, 4]]).determinant(), int(0));
    }

    #[test]
    fn minors_match_direct_determinants() {
        let a = m(&[&[1, 0, 0, 1], &[0, 1, 0, 0], &[0, 0, 1, 0], &[1, 0, 0, 2]]);
        assert_eq!(a.leading_principal_minors(), vec![int(1), int(1), int(1), int(1)]);
        let b = m(&[&[0, 1, 0], &[1, 0, 0], &[0, 0, 5]]);
        assert_eq!(b.leading_principal_minors(), vec![int(0), int(-1), int(-5)]);
    }

    #[test]
    fn blocks_and_structure() {
        let a = m(&[&[1, 2], &[0, 3]]);
        let z = Mat::zeros(2, 2);
        let big = Mat::from_blocks(&[vec![a.clone(), a.clone()], vec![z, a.clone()]]);
        assert!(big.is_block_upper_triangular(2));
        assert!(big.is_upper_triangular());
        assert_eq!(big.block(2, 2, 2, 2), a);
        assert_eq!(a.transpose(), m(&[&[1, 0], &[2, 3]]));
        assert_eq!(&a * &Mat::identity(2), a);
    }
}
