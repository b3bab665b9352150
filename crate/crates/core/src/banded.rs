//! Truncated semi-infinite banded matrices.
//!
//! A [`BandedMatrix`] of size `N` models the leading `N × N` section of a
//! semi-infinite operator. Products of truncated factors agree with the
//! infinite product only away from the trailing rows and columns; each caller
//! documents how many of them (the guard band) it discards.

use crate::error::{MopError, Result};
use crate::poly::Poly;
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq)]
pub struct BandedMatrix<T> {
    n: usize,
    lower: usize,
    upper: usize,
    // rows[i][j - i + lower] for j in i-lower ..= i+upper
    rows: Vec<Vec<T>>,
}

impl<T: Scalar> BandedMatrix<T> {
    /// Zero matrix of size `n` with the given bandwidths (clamped to `n - 1`).
    pub fn zeros(n: usize, lower: usize, upper: usize) -> Self {
        assert!(n > 0, "banded matrix needs positive size");
        let lower = lower.min(n - 1);
        let upper = upper.min(n - 1);
        BandedMatrix { n, lower, upper, rows: vec![vec![T::zero(); lower + upper + 1]; n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, 0, 0);
        for i in 0..n {
            m.set(i, i, T::one());
        }
        m
    }

    /// Unit lower bidiagonal matrix with `subdiag[k]` at position `(k+1, k)`.
    /// Missing entries are zero; extra entries are ignored.
    pub fn unit_lower_bidiagonal(n: usize, subdiag: &[T]) -> Self {
        let mut m = Self::zeros(n, 1, 0);
        for i in 0..n {
            m.set(i, i, T::one());
        }
        for (k, v) in subdiag.iter().enumerate().take(n.saturating_sub(1)) {
            m.set(k + 1, k, v.clone());
        }
        m
    }

    /// Upper bidiagonal matrix with the given diagonal and unit superdiagonal.
    pub fn unit_upper_bidiagonal(diag: &[T]) -> Self {
        let n = diag.len();
        let mut m = Self::zeros(n, 0, 1);
        for (i, v) in diag.iter().enumerate() {
            m.set(i, i, v.clone());
            if i + 1 < n {
                m.set(i, i + 1, T::one());
            }
        }
        m
    }

    pub fn from_dense(rows: &[Vec<T>], lower: usize, upper: usize) -> Self {
        let n = rows.len();
        let mut m = Self::zeros(n, lower, upper);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), n, "dense input must be square");
            for (j, v) in row.iter().enumerate() {
                if !v.is_zero() {
                    assert!(m.in_band(i, j), "entry ({i}, {j}) outside the band");
                    m.set(i, j, v.clone());
                }
            }
        }
        m
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn lower_bandwidth(&self) -> usize {
        self.lower
    }

    pub fn upper_bandwidth(&self) -> usize {
        self.upper
    }

    pub fn in_band(&self, i: usize, j: usize) -> bool {
        i < self.n && j < self.n && j + self.lower >= i && j <= i + self.upper
    }

    /// Column range `(first, last_exclusive)` of the band in row `i`.
    pub fn row_span(&self, i: usize) -> (usize, usize) {
        (i.saturating_sub(self.lower), (i + self.upper + 1).min(self.n))
    }

    pub fn get(&self, i: usize, j: usize) -> T {
        if self.in_band(i, j) {
            self.rows[i][j + self.lower - i].clone()
        } else {
            T::zero()
        }
    }

    pub fn get_ref(&self, i: usize, j: usize) -> Option<&T> {
        self.in_band(i, j).then(|| &self.rows[i][j + self.lower - i])
    }

    /// Panics when `(i, j)` lies outside the band.
    pub fn set(&mut self, i: usize, j: usize, v: T) {
        assert!(self.in_band(i, j), "entry ({i}, {j}) outside the band");
        let lower = self.lower;
        self.rows[i][j + lower - i] = v;
    }

    /// Entries of the diagonal at `offset` (negative = below the main diagonal).
    pub fn diagonal(&self, offset: isize) -> Vec<T> {
        (0..self.n)
            .filter_map(|i| {
                let j = i as isize + offset;
                (j >= 0 && (j as usize) < self.n).then(|| self.get(i, j as usize))
            })
            .collect()
    }

    pub fn to_dense(&self) -> Vec<Vec<T>> {
        (0..self.n).map(|i| (0..self.n).map(|j| self.get(i, j)).collect()).collect()
    }

    /// Leading `k × k` principal section, keeping the bandwidths.
    pub fn leading(&self, k: usize) -> Self {
        assert!(k > 0 && k <= self.n, "leading section {k} of size {}", self.n);
        let mut m = Self::zeros(k, self.lower, self.upper);
        for i in 0..k {
            let (lo, hi) = m.row_span(i);
            for j in lo..hi {
                m.set(i, j, self.get(i, j));
            }
        }
        m
    }

    /// Exact entrywise comparison of the leading `k × k` sections.
    pub fn leading_eq(&self, other: &Self, k: usize) -> bool {
        k <= self.n && k <= other.n && (0..k).all(|i| (0..k).all(|j| self.get(i, j) == other.get(i, j)))
    }

    /// `y = self · v`; `v.len()` must equal the size.
    pub fn mul_vec(&self, v: &[T]) -> Vec<T> {
        assert_eq!(v.len(), self.n);
        (0..self.n)
            .map(|i| {
                let (lo, hi) = self.row_span(i);
                (lo..hi).fold(T::zero(), |acc, j| acc + self.get(i, j) * v[j].clone())
            })
            .collect()
    }

    /// `Σ_k self[i][k] · polys[k]` for one row; `polys` must cover the band of row `i`.
    pub fn row_times_polys(&self, i: usize, polys: &[Poly<T>]) -> Poly<T> {
        let (lo, hi) = self.row_span(i);
        assert!(polys.len() >= hi, "polys must cover the band of row {i}");
        let mut acc = Poly::zero();
        for (j, p) in polys.iter().enumerate().take(hi).skip(lo) {
            acc.add_scaled(&self.rows[i][j + self.lower - i], p);
        }
        acc
    }

    /// Maximum absolute row sum over all rows: an upper bound for the
    /// operator norm of the represented section.
    pub fn max_abs_row_sum(&self) -> T {
        let mut best = T::zero();
        for i in 0..self.n {
            let (lo, hi) = self.row_span(i);
            let s = (lo..hi).fold(T::zero(), |acc, j| acc + self.get(i, j).abs_val());
            if s.to_f64() > best.to_f64() {
                best = s;
            }
        }
        best
    }

    /// Hessenberg with every superdiagonal entry equal to one and lower
    /// bandwidth at most `d`.
    pub fn is_monic_hessenberg(&self, d: usize) -> bool {
        (0..self.n).all(|i| {
            let (lo, hi) = self.row_span(i);
            (lo..hi).all(|j| {
                let v = self.get(i, j);
                if j == i + 1 {
                    v.is_one()
                } else if j > i + 1 || i > j + d {
                    v.is_zero()
                } else {
                    true
                }
            })
        })
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        banded_mul(self, other)
    }
}

/// Exact product of two banded matrices of equal size.
///
/// Bandwidths add (clamped to `N − 1`). When both inputs are truncations of
/// semi-infinite banded matrices, the leading `N − (sum of all four
/// bandwidths)` principal block equals that of the infinite product.
pub fn banded_mul<T: Scalar>(a: &BandedMatrix<T>, b: &BandedMatrix<T>) -> Result<BandedMatrix<T>> {
    if a.n != b.n {
        return Err(MopError::SizeMismatch { left: a.n, right: b.n });
    }
    let n = a.n;
    let mut out = BandedMatrix::zeros(n, a.lower + b.lower, a.upper + b.upper);
    for i in 0..n {
        let (alo, ahi) = a.row_span(i);
        for k in alo..ahi {
            let aik = &a.rows[i][k + a.lower - i];
            if aik.is_zero() {
                continue;
            }
            let (blo, bhi) = b.row_span(k);
            for j in blo..bhi {
                let bkj = &b.rows[k][j + b.lower - k];
                if bkj.is_zero() {
                    continue;
                }
                let slot: &mut T = &mut out.rows[i][j + out.lower - i];
                *slot = slot.clone() + aik.clone() * bkj.clone();
            }
        }
    }
    Ok(out)
}

/// Forward substitution `Lf · y = rhs` for a unit lower bidiagonal `Lf`:
/// `y_0 = rhs_0`, `y_n = rhs_n − m_n · y_{n−1}` with `m_n = Lf[n][n−1]`.
///
/// Panics if `rhs` is longer than `Lf` or `Lf` has a lower bandwidth above one.
pub fn unit_bidiagonal_solve<T: Scalar>(lf: &BandedMatrix<T>, rhs: &[Poly<T>]) -> Vec<Poly<T>> {
    assert!(rhs.len() <= lf.size(), "rhs longer than the bidiagonal factor");
    assert!(lf.lower_bandwidth() <= 1 && lf.upper_bandwidth() == 0, "not lower bidiagonal");
    debug_assert!((0..lf.size()).all(|i| lf.get(i, i).is_one()), "diagonal must be unit");
    let mut out: Vec<Poly<T>> = Vec::with_capacity(rhs.len());
    for (n, r) in rhs.iter().enumerate() {
        let y = if n == 0 {
            r.clone()
        } else {
            let mut y = r.clone();
            y.add_scaled(&-lf.get(n, n - 1), &out[n - 1]);
            y
        };
        out.push(y);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, Rational};

    fn ints(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| int(x)).collect()
    }

    fn poly(c: &[i64]) -> Poly<Rational> {
        Poly::from_coeffs(ints(c))
    }

    #[test]
    fn identity_is_neutral() {
        let mut b = BandedMatrix::<Rational>::zeros(4, 2, 1);
        for i in 0..4 {
            let (lo, hi) = b.row_span(i);
            for j in lo..hi {
                b.set(i, j, int((i * 4 + j) as i64 + 1));
            }
        }
        let p = banded_mul(&BandedMatrix::identity(4), &b).unwrap();
        assert_eq!(p.to_dense(), b.to_dense());
    }

    #[test]
    fn bidiagonal_product_is_tridiagonal() {
        let l = BandedMatrix::unit_lower_bidiagonal(4, &ints(&[1, 1, 1]));
        let u = BandedMatrix::unit_upper_bidiagonal(&ints(&[1, 1, 1, 1]));
        let p = banded_mul(&l, &u).unwrap();
        // hand product: rows (1,1,0,0), (1,2,1,0), (0,1,2,1), (0,0,1,2)
        let expected = vec![ints(&[1, 1, 0, 0]), ints(&[1, 2, 1, 0]), ints(&[0, 1, 2, 1]), ints(&[0, 0, 1, 2])];
        assert_eq!(p.to_dense(), expected);
        assert_eq!(p.diagonal(0), ints(&[1, 2, 2, 2]));
        assert_eq!((p.lower_bandwidth(), p.upper_bandwidth()), (1, 1));
    }

    #[test]
    fn nilpotent_shifts_compose() {
        let mut s = BandedMatrix::<Rational>::zeros(5, 1, 0);
        for i in 1..5 {
            s.set(i, i - 1, int(1));
        }
        let s2 = banded_mul(&s, &s).unwrap();
        for i in 0..5 {
            for j in 0..5 {
                let want = if i == j + 2 { int(1) } else { int(0) };
                assert_eq!(s2.get(i, j), want);
            }
        }
    }

    #[test]
    fn size_mismatch() {
        let a = BandedMatrix::<Rational>::identity(3);
        let b = BandedMatrix::<Rational>::identity(4);
        assert_eq!(banded_mul(&a, &b), Err(MopError::SizeMismatch { left: 3, right: 4 }));
    }

    #[test]
    fn bidiagonal_solve_examples() {
        let rhs = vec![poly(&[1]), poly(&[-1, 1]), poly(&[1, -4, 1])];
        let id = BandedMatrix::unit_lower_bidiagonal(3, &ints(&[0, 0]));
        assert_eq!(unit_bidiagonal_solve(&id, &rhs), rhs);
        let l = BandedMatrix::unit_lower_bidiagonal(3, &ints(&[1, 1]));
        let y = unit_bidiagonal_solve(&l, &rhs);
        assert_eq!(y, vec![poly(&[1]), poly(&[-2, 1]), poly(&[3, -5, 1])]);
    }

    #[test]
    fn row_sum_bound() {
        let m = BandedMatrix::from_dense(&[ints(&[0, 1, 0]), ints(&[-3, 0, 1]), ints(&[0, 2, 0])], 1, 1);
        assert_eq!(m.max_abs_row_sum(), int(4));
    }
}
