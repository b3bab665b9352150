//! Truncated Weyl and Stieltjes series of a banded Hessenberg operator.
//!
//! Coefficients are exact; [`eval_series`] is the one place where floating
//! point enters.

use num_complex::Complex64;

use crate::banded::BandedMatrix;
use crate::dense::Mat;
use crate::error::{MopError, Result};
use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SeriesFlavor {
    Weyl,
    Stieltjes,
}

/// Block `k` is the coefficient of `z^{−(k+1)}`.
#[derive(Clone, Debug, PartialEq)]
pub struct SeriesCoefficients<T> {
    pub d: usize,
    pub blocks: Vec<Mat<T>>,
    pub flavor: SeriesFlavor,
    /// Whether the source matrix had the shape of a symmetric recurrence
    /// (only the outermost subdiagonal and the unit superdiagonal nonzero).
    pub symmetric_source: bool,
    /// The right factor `V00` of a Stieltjes series.
    pub normalization: Option<Mat<T>>,
}

/// Support status of one residue class.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PatternStatus {
    /// The source matrix is not symmetric-shaped, so no sparsity is predicted.
    NotApplicable,
    Holds,
    /// First offending coefficient index and entry.
    Violated {
        k: usize,
        row: usize,
        col: usize,
    },
}

#[derive(Clone, Debug, PartialEq)]
pub struct ResidueDecomposition<T> {
    pub d: usize,
    /// `partials[c]` keeps the blocks with `k ≡ c (mod d+1)` and zeros elsewhere.
    pub partials: Vec<Vec<Mat<T>>>,
    pub patterns: Vec<PatternStatus>,
}

/// Coarse shape of a square block.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BlockShape {
    Zero,
    Diagonal,
    StrictlyUpper,
    StrictlyLower,
    Mixed,
}

pub fn block_shape<T: Scalar>(b: &Mat<T>) -> BlockShape {
    let (mut diag, mut upper, mut lower) = (false, false, false);
    for i in 0..b.rows() {
        for j in 0..b.cols() {
            if !b[(i, j)].is_zero() {
                match i.cmp(&j) {
                    std::cmp::Ordering::Equal => diag = true,
                    std::cmp::Ordering::Less => upper = true,
                    std::cmp::Ordering::Greater => lower = true,
                }
            }
        }
    }
    match (diag, upper, lower) {
        (false, false, false) => BlockShape::Zero,
        (true, false, false) => BlockShape::Diagonal,
        (false, true, false) => BlockShape::StrictlyUpper,
        (false, false, true) => BlockShape::StrictlyLower,
        _ => BlockShape::Mixed,
    }
}

/// True when every nonzero entry of `J` lies on the unit superdiagonal or on
/// the `d`-th subdiagonal.
pub fn is_symmetric_shaped<T: Scalar>(j: &BandedMatrix<T>, d: usize) -> bool {
    let n = j.size();
    (0..n).all(|i| {
        let (lo, hi) = j.row_span(i);
        (lo..hi).all(|c| c == i + 1 || c + d == i || j.get(i, c).is_zero())
    })
}

/// Leading `d × d` blocks of `J^0..=J^K`, from `K` applications of `J` to the
/// first `d` coordinate vectors. Exact when `N ≥ K + d + 1`.
pub fn leading_power_blocks<T: Scalar>(j: &BandedMatrix<T>, d: usize, k_max: usize) -> Result<Vec<Mat<T>>> {
    let n = j.size();
    if n < k_max + d + 1 {
        return Err(MopError::InsufficientHorizon { needed: k_max + d + 1, usable: n });
    }
    let mut cols: Vec<Vec<T>> = (0..d).map(|l| (0..n).map(|i| if i == l { T::one() } else { T::zero() }).collect()).collect();
    let mut blocks = Vec::with_capacity(k_max + 1);
    for k in 0..=k_max {
        if k > 0 {
            for c in cols.iter_mut() {
                *c = j.mul_vec(c);
            }
        }
        blocks.push(Mat::from_fn(d, d, |r, l| cols[l][r].clone()));
    }
    Ok(blocks)
}

/// Weyl coefficients `[J^k]_{11}` for `k = 0..=K`.
pub fn weyl_coefficients<T: Scalar>(j: &BandedMatrix<T>, d: usize, k_max: usize) -> Result<SeriesCoefficients<T>> {
    Ok(SeriesCoefficients {
        d,
        blocks: leading_power_blocks(j, d, k_max)?,
        flavor: SeriesFlavor::Weyl,
        symmetric_source: is_symmetric_shaped(j, d),
        normalization: None,
    })
}

/// Right-multiplies each Weyl block by `V00`.
pub fn stieltjes_coefficients<T: Scalar>(w: &SeriesCoefficients<T>, v00: &Mat<T>) -> Result<SeriesCoefficients<T>> {
    if w.flavor != SeriesFlavor::Weyl {
        return Err(MopError::InvalidArgument("stieltjes_coefficients expects a Weyl series".into()));
    }
    if v00.rows() != w.d || v00.cols() != w.d {
        return Err(MopError::LengthMismatch { expected: w.d, found: v00.rows() });
    }
    Ok(SeriesCoefficients {
        d: w.d,
        blocks: w.blocks.iter().map(|b| b * v00).collect(),
        flavor: SeriesFlavor::Stieltjes,
        symmetric_source: w.symmetric_source,
        normalization: Some(v00.clone()),
    })
}

fn max_abs_row_sum_f64<T: Scalar>(m: &Mat<T>) -> f64 {
    (0..m.rows())
        .map(|i| (0..m.cols()).map(|j| m[(i, j)].to_f64().unwrap_or(f64::INFINITY).abs()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// `Σ_{k ≤ K} block_k z^{−(k+1)}` in double precision, with the tail bound
/// `(b/|z|)^{K+1} / (|z| − b)` for `b = norm_bound`. For a Stieltjes series
/// the bound is multiplied by the maximum absolute row sum of `V00`.
pub fn eval_series<T: Scalar>(
    coeffs: &SeriesCoefficients<T>,
    z: Complex64,
    norm_bound: &T,
) -> Result<(Vec<Vec<Complex64>>, f64)> {
    let bound = norm_bound.to_f64().unwrap_or(f64::INFINITY);
    let modulus = z.norm();
    if modulus <= bound {
        return Err(MopError::OutsideDomain { modulus, bound });
    }
    let d = coeffs.d;
    let w = z.inv();
    let mut acc = vec![vec![Complex64::new(0.0, 0.0); d]; d];
    // Horner in w = 1/z over the blocks, highest power first
    for b in coeffs.blocks.iter().rev() {
        for (i, row) in acc.iter_mut().enumerate() {
            for (j, v) in row.iter_mut().enumerate() {
                *v = (*v + b[(i, j)].to_f64().unwrap_or(f64::NAN)) * w;
            }
        }
    }
    let k = coeffs.blocks.len() as i32;
    let mut tail = (bound / modulus).powi(k) / (modulus - bound);
    if let Some(v00) = &coeffs.normalization {
        tail *= max_abs_row_sum_f64(v00);
    }
    Ok((acc, tail))
}

/// Entries `(i, j)` of block `k` allowed to be nonzero for a symmetric-shaped
/// source: `[J^k]_{il} ≠ 0` forces `l − i ≡ k (mod d+1)`, and the normalization
/// mixes column `j` with the rows `l` where `V00(l, j) ≠ 0`.
fn allowed<T: Scalar>(d: usize, norm: Option<&Mat<T>>, k: usize, i: usize, j: usize) -> bool {
    let p = d + 1;
    let hit = |l: usize| (l + p - i % p) % p == k % p;
    match norm {
        None => hit(j),
        Some(v) => (0..d).any(|l| !v[(l, j)].is_zero() && hit(l)),
    }
}

/// Splits the coefficients by `k mod (d+1)` and checks the sparsity pattern
/// predicted for symmetric-shaped sources.
pub fn residue_decomposition<T: Scalar>(coeffs: &SeriesCoefficients<T>) -> ResidueDecomposition<T> {
    let d = coeffs.d;
    let p = d + 1;
    let zero = Mat::zeros(d, d);
    let partials = (0..p)
        .map(|c| coeffs.blocks.iter().enumerate().map(|(k, b)| if k % p == c { b.clone() } else { zero.clone() }).collect())
        .collect();
    let patterns = (0..p)
        .map(|c| {
            if !coeffs.symmetric_source {
                return PatternStatus::NotApplicable;
            }
            for (k, b) in coeffs.blocks.iter().enumerate().skip(c).step_by(p) {
                for i in 0..d {
                    for j in 0..d {
                        if !b[(i, j)].is_zero() && !allowed(d, coeffs.normalization.as_ref(), k, i, j) {
                            return PatternStatus::Violated { k, row: i, col: j };
                        }
                    }
                }
            }
            PatternStatus::Holds
        })
        .collect();
    ResidueDecomposition { d, partials, patterns }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::recurrence::{to_jacobi, SymmetricRecurrence};
    use crate::scalar::{int, Rational};

    fn m(rows: &[&[i64]]) -> Mat<Rational> {
        Mat::from_rows(rows.iter().map(|r| r.iter().map(|&v| int(v)).collect()).collect())
    }

    fn ones_jacobi(d: usize, n: usize) -> BandedMatrix<Rational> {
        to_jacobi(&SymmetricRecurrence::new(d, vec![int(1); n + d]).unwrap().to_system(), n).unwrap()
    }

    #[test]
    fn weyl_blocks_d2() {
        let w = weyl_coefficients(&ones_jacobi(2, 12), 2, 3).unwrap();
        assert_eq!(w.blocks[0], Mat::identity(2));
        assert_eq!(w.blocks[1], m(&[&[0, 1], &[0, 0]]));
        assert_eq!(w.blocks[2], m(&[&[0, 0], &[1, 0]]));
        assert_eq!(w.blocks[3], m(&[&[1, 0], &[0, 2]]));
        assert!(w.symmetric_source);
        assert!(matches!(weyl_coefficients(&ones_jacobi(2, 12), 2, 10), Err(MopError::InsufficientHorizon { .. })));
    }

    #[test]
    fn stieltjes_scaling() {
        let w = weyl_coefficients(&ones_jacobi(2, 12), 2, 3).unwrap();
        assert_eq!(stieltjes_coefficients(&w, &Mat::identity(2)).unwrap().blocks, w.blocks);
        let v = m(&[&[1, 1], &[0, 1]]);
        let s = stieltjes_coefficients(&w, &v).unwrap();
        assert_eq!(s.blocks[3], m(&[&[1, 1], &[0, 2]]));
        assert_eq!(s.blocks[0], v);
        assert!(stieltjes_coefficients(&s, &v).is_err());
    }

    #[test]
    fn evaluation_domain_and_zeros() {
        let w = weyl_coefficients(&ones_jacobi(2, 12), 2, 6).unwrap();
        assert!(matches!(eval_series(&w, Complex64::new(0.0, 1.0), &int(2)), Err(MopError::OutsideDomain { .. })));
        let diag = SeriesCoefficients { blocks: vec![Mat::identity(2); 4], ..w.clone() };
        let (val, tail) = eval_series(&diag, Complex64::new(3.0, 0.0), &int(2)).unwrap();
        assert_eq!(val[0][1], Complex64::new(0.0, 0.0));
        assert_eq!(val[1][0], Complex64::new(0.0, 0.0));
        assert!((val[0][0].re - (1.0 / 3.0 + 1.0 / 9.0 + 1.0 / 27.0 + 1.0 / 81.0)).abs() < 1e-15);
        assert!((tail - (2.0f64 / 3.0).powi(4)).abs() < 1e-15);
    }

    #[test]
    fn residue_classes_d2() {
        let w = weyl_coefficients(&ones_jacobi(2, 30), 2, 20).unwrap();
        let r = residue_decomposition(&w);
        assert!(r.patterns.iter().all(|p| *p == PatternStatus::Holds));
        for (c, shape) in [(0, BlockShape::Diagonal), (1, BlockShape::StrictlyUpper), (2, BlockShape::StrictlyLower)] {
            for b in w.blocks.iter().skip(c).step_by(3) {
                assert_eq!(block_shape(b), shape);
            }
        }
        for k in 0..w.blocks.len() {
            let sum = (0..3).fold(Mat::zeros(2, 2), |acc, c| &acc + &r.partials[c][k]);
            assert_eq!(sum, w.blocks[k]);
        }
    }

    #[test]
    fn nonsymmetric_source_not_applicable() {
        let mut j = ones_jacobi(2, 10);
        j.set(3, 3, int(1));
        let w = weyl_coefficients(&j, 2, 5).unwrap();
        assert!(residue_decomposition(&w).patterns.iter().all(|p| *p == PatternStatus::NotApplicable));
    }
}
