//! Matrices whose entries are polynomials.

use crate::dense::Mat;
use crate::poly::Poly;
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq)]
pub struct MatrixPoly<T> {
    rows: usize,
    cols: usize,
    entries: Vec<Poly<T>>,
}

impl<T: Scalar> MatrixPoly<T> {
    pub fn zero(rows: usize, cols: usize) -> Self {
        MatrixPoly { rows, cols, entries: vec![Poly::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            m.set(i, i, Poly::one());
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Poly<T>) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        MatrixPoly { rows, cols, entries }
    }

    /// Diagonal matrix polynomial.
    pub fn diag(entries: Vec<Poly<T>>) -> Self {
        let n = entries.len();
        let mut m = Self::zero(n, n);
        for (i, p) in entries.into_iter().enumerate() {
            m.set(i, i, p);
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Poly<T> {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, p: Poly<T>) {
        self.entries[i * self.cols + j] = p;
    }

    /// Largest entry degree; `None` when every entry is zero.
    pub fn degree(&self) -> Option<usize> {
        self.entries.iter().filter_map(Poly::degree).max()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Poly::is_zero)
    }

    /// Multiplication of every entry by the variable.
    pub fn shift(&self) -> Self {
        MatrixPoly { rows: self.rows, cols: self.cols, entries: self.entries.iter().map(|p| p.shift(1)).collect() }
    }

    /// `C · self` for a constant matrix `C`.
    pub fn left_mul(&self, c: &Mat<T>) -> Self {
        assert_eq!(c.cols(), self.rows, "inner dimensions differ");
        Self::from_fn(c.rows(), self.cols, |i, j| {
            (0..self.rows).fold(Poly::zero(), |acc, k| {
                let ck = &c[(i, k)];
                if ck.is_zero() {
                    acc
                } else {
                    &acc + &self.get(k, j).scale(ck)
                }
            })
        })
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Self::from_fn(self.rows, self.cols, |i, j| self.get(i, j) + other.get(i, j))
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Self::from_fn(self.rows, self.cols, |i, j| self.get(i, j) - other.get(i, j))
    }

    /// Matrix coefficient of `t^k`.
    pub fn coefficient(&self, k: usize) -> Mat<T> {
        Mat::from_fn(self.rows, self.cols, |i, j| self.get(i, j).coeff(k))
    }
}
