//! The `d = 2` matrix picture: a four-term scalar recurrence regrouped into
//! 3-vectors gives a matrix four-term recurrence for `W_n`, and pairing
//! consecutive `W_n` gives a block three-term recurrence with 6×6
//! coefficients, whose moments are reconstructed without inverses.
//!
//! Blocks with a negative subscript are the zero matrix throughout.

use crate::dense::Mat;
use crate::error::{MopError, Result};
use crate::matpoly::MatrixPoly;
use crate::poly::Poly;
use crate::recurrence::{generate_type2, vector_matrix_form, RecurrenceSystem};
use crate::scalar::Scalar;

/// `x P_n = P_{n+1} + b_n P_n + c_n P_{n−1} + d_n P_{n−2}` with `b_n = β_n`,
/// `c_n = γ^1_n` and `d_n = γ^0_{n−1}`.
///
/// `dd[i]` stores `γ^0_i`, so `d_k = dd[k−1]` and `d_0 = 0`. The slots `c[0]`
/// and `dd[0]` never reach the polynomials; they only enter `C_0`.
#[derive(Clone, Debug, PartialEq)]
pub struct FourTermRecurrence<T> {
    pub b: Vec<T>,
    pub c: Vec<T>,
    pub dd: Vec<T>,
}

impl<T: Scalar> FourTermRecurrence<T> {
    pub fn new(b: Vec<T>, c: Vec<T>, dd: Vec<T>) -> Self {
        FourTermRecurrence { b, c, dd }
    }

    pub fn from_system(rs: &RecurrenceSystem<T>) -> Result<Self> {
        if rs.d != 2 {
            return Err(MopError::InvalidArgument(format!("four-term recurrence needs d = 2, got {}", rs.d)));
        }
        Ok(FourTermRecurrence { b: rs.beta.clone(), c: rs.gamma[1].clone(), dd: rs.gamma[0].clone() })
    }

    pub fn to_system(&self) -> RecurrenceSystem<T> {
        RecurrenceSystem { d: 2, beta: self.b.clone(), gamma: vec![self.dd.clone(), self.c.clone()] }
    }

    /// `P_0..=P_m`.
    pub fn polynomials(&self, m: usize) -> Result<Vec<Poly<T>>> {
        generate_type2(&self.to_system(), m)
    }

    fn b_at(&self, k: usize) -> Result<T> {
        fetch(&self.b, k, "b")
    }

    fn c_at(&self, k: usize) -> Result<T> {
        fetch(&self.c, k, "c")
    }

    fn d_at(&self, k: usize) -> Result<T> {
        if k == 0 {
            Ok(T::zero())
        } else {
            fetch(&self.dd, k - 1, "dd")
        }
    }

    /// `B_n` (3×3).
    pub fn b_block(&self, n: usize) -> Result<Mat<T>> {
        let k = 3 * n;
        let (o, z) = (T::one(), T::zero());
        Ok(Mat::from_rows(vec![
            vec![self.b_at(k)?, o.clone(), z.clone()],
            vec![self.c_at(k + 1)?, self.b_at(k + 1)?, o],
            vec![self.d_at(k + 2)?, self.c_at(k + 2)?, self.b_at(k + 2)?],
        ]))
    }

    /// `C_n` (3×3).
    pub fn c_block(&self, n: usize) -> Result<Mat<T>> {
        let k = 3 * n;
        let z = T::zero();
        Ok(Mat::from_rows(vec![
            vec![z.clone(), self.d_at(k)?, self.c_at(k)?],
            vec![z.clone(), z.clone(), self.d_at(k + 1)?],
            vec![z.clone(), z.clone(), z],
        ]))
    }
}

fn fetch<T: Scalar>(v: &[T], k: usize, what: &'static str) -> Result<T> {
    v.get(k).cloned().ok_or(MopError::InsufficientCoefficients { what, needed: k + 1, available: v.len() })
}

/// `A = e_2 e_0ᵀ`.
pub fn a_block<T: Scalar>() -> Mat<T> {
    Mat::from_fn(3, 3, |i, j| if i == 2 && j == 0 { T::one() } else { T::zero() })
}

/// `W_0..=W_M` with `P_{3n+r}(x) = Σ_c W_n[r][c](x^3) x^c`.
pub fn group3_wn<T: Scalar>(polys: &[Poly<T>], m: usize) -> Result<Vec<MatrixPoly<T>>> {
    (0..=m).map(|n| vector_matrix_form(polys, 3, n)).collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct CascadeCoefficients<T> {
    pub n_max: usize,
    pub a: Mat<T>,
    /// `B_n`, `C_n` for `n = 0..=n_max+1`.
    pub b: Vec<Mat<T>>,
    pub c: Vec<Mat<T>>,
    /// First cascade, `n = 0..=n_max`.
    pub a1: Vec<Mat<T>>,
    pub b1: Vec<Mat<T>>,
    pub c1: Vec<Mat<T>>,
    pub d1: Vec<Mat<T>>,
    /// Second cascade: coefficients of `x^3 𝒫_n`, `n = 0..=n_max`.
    pub a2: Vec<Mat<T>>,
    pub b2: Vec<Mat<T>>,
    pub c2: Vec<Mat<T>>,
    pub d2: Vec<Mat<T>>,
}

/// Applies `x` twice more to `x 𝒫_n = A 𝒫_{n+1} + B_n 𝒫_n + C_n 𝒫_{n−1}` and
/// collects the coefficients, checking the structural identities on the way.
pub fn coefficient_cascade<T: Scalar>(ftr: &FourTermRecurrence<T>, n_max: usize) -> Result<CascadeCoefficients<T>> {
    let a = a_block::<T>();
    let zero = Mat::zeros(3, 3);
    let b: Vec<Mat<T>> = (0..=n_max + 1).map(|n| ftr.b_block(n)).collect::<Result<_>>()?;
    let c: Vec<Mat<T>> = (0..=n_max + 1).map(|n| ftr.c_block(n)).collect::<Result<_>>()?;
    // blocks at n − s, zero for negative subscripts
    let back = |v: &[Mat<T>], n: usize, s: usize| if n >= s { v[n - s].clone() } else { zero.clone() };

    if !(&a * &a).is_zero() {
        return Err(MopError::StructureViolation("A·A ≠ 0".into()));
    }
    let mut cc = CascadeCoefficients {
        n_max,
        a: a.clone(),
        b: b.clone(),
        c: c.clone(),
        a1: vec![],
        b1: vec![],
        c1: vec![],
        d1: vec![],
        a2: vec![],
        b2: vec![],
        c2: vec![],
        d2: vec![],
    };
    for n in 0..=n_max {
        let a1 = &(&a * &b[n + 1]) + &(&b[n] * &a);
        let b1 = &(&(&a * &c[n + 1]) + &(&b[n] * &b[n])) + &(&c[n] * &a);
        let c1 = &(&b[n] * &c[n]) + &(&c[n] * &back(&b, n, 1));
        let d1 = &c[n] * &back(&c, n, 1);
        if !(&a1 * &a).is_zero() {
            return Err(MopError::StructureViolation(format!("A<1>_{n}·A ≠ 0")));
        }
        if !(&d1 * &back(&c, n, 2)).is_zero() {
            return Err(MopError::StructureViolation(format!("D<1>_{n}·C_{{n−2}} ≠ 0")));
        }
        let a2 = &(&a1 * &b[n + 1]) + &(&b1 * &a);
        let b2 = &(&(&a1 * &c[n + 1]) + &(&b1 * &b[n])) + &(&c1 * &a);
        let c2 = &(&(&b1 * &c[n]) + &(&c1 * &back(&b, n, 1))) + &(&d1 * &a);
        let d2 = &(&c1 * &back(&c, n, 1)) + &(&d1 * &back(&b, n, 2));
        if !(a2.is_lower_triangular() && a2.has_unit_diagonal()) {
            return Err(MopError::StructureViolation(format!("A<2>_{n} is not unit lower triangular")));
        }
        if !d2.is_upper_triangular() {
            return Err(MopError::StructureViolation(format!("D<2>_{n} is not upper triangular")));
        }
        cc.a1.push(a1);
        cc.b1.push(b1);
        cc.c1.push(c1);
        cc.d1.push(d1);
        cc.a2.push(a2);
        cc.b2.push(b2);
        cc.c2.push(c2);
        cc.d2.push(d2);
    }
    Ok(cc)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RecurrenceStatus {
    pub n: usize,
    pub holds: bool,
    /// `n ∈ {0, 1}`, where the zero-extension convention is in force.
    pub boundary: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct WRecurrenceReport {
    pub statuses: Vec<RecurrenceStatus>,
}

impl WRecurrenceReport {
    /// All non-boundary indices hold.
    pub fn interior_ok(&self) -> bool {
        self.statuses.iter().filter(|s| !s.boundary).all(|s| s.holds)
    }

    pub fn failures(&self) -> Vec<usize> {
        self.statuses.iter().filter(|s| !s.holds).map(|s| s.n).collect()
    }
}

fn mp_at<T: Scalar>(w: &[MatrixPoly<T>], n: usize, s: usize) -> MatrixPoly<T> {
    if n >= s {
        w[n - s].clone()
    } else {
        MatrixPoly::zero(w[0].rows(), w[0].cols())
    }
}

/// `t W_n = A<2>_n W_{n+1} + B<2>_n W_n + C<2>_n W_{n−1} + D<2>_n W_{n−2}` for
/// each `n` in `range`.
pub fn verify_w_recurrence<T: Scalar>(
    w: &[MatrixPoly<T>],
    cc: &CascadeCoefficients<T>,
    range: std::ops::RangeInclusive<usize>,
) -> Result<WRecurrenceReport> {
    let mut report = WRecurrenceReport::default();
    for n in range {
        if n + 1 >= w.len() {
            return Err(MopError::IndexOutOfRange { index: n + 1, len: w.len() });
        }
        if n > cc.n_max {
            return Err(MopError::IndexOutOfRange { index: n, len: cc.n_max + 1 });
        }
        let rhs = w[n + 1]
            .left_mul(&cc.a2[n])
            .add(&w[n].left_mul(&cc.b2[n]))
            .add(&mp_at(w, n, 1).left_mul(&cc.c2[n]))
            .add(&mp_at(w, n, 2).left_mul(&cc.d2[n]));
        report.statuses.push(RecurrenceStatus { n, holds: w[n].shift() == rhs, boundary: n < 2 });
    }
    Ok(report)
}

#[derive(Clone, Debug, PartialEq)]
pub struct FavardBlocks<T> {
    /// 6×6 blocks for `n = 0..=n_max`.
    pub a: Vec<Mat<T>>,
    pub b: Vec<Mat<T>>,
    pub c: Vec<Mat<T>>,
}

impl<T> FavardBlocks<T> {
    pub fn len(&self) -> usize {
        self.a.len()
    }

    pub fn is_empty(&self) -> bool {
        self.a.is_empty()
    }
}

/// Pairs `W_{2n}, W_{2n+1}` into a block three-term recurrence.
pub fn favard_blocks<T: Scalar>(cc: &CascadeCoefficients<T>, n_max: usize) -> Result<FavardBlocks<T>> {
    let needed = 2 * n_max + 2;
    if cc.a2.len() < needed {
        return Err(MopError::InsufficientCoefficients { what: "cascade", needed, available: cc.a2.len() });
    }
    let z = Mat::zeros(3, 3);
    let mut fb = FavardBlocks { a: vec![], b: vec![], c: vec![] };
    for n in 0..=n_max {
        let (e, o) = (2 * n, 2 * n + 1);
        let a3 = Mat::from_blocks(&[vec![z.clone(), z.clone()], vec![cc.a2[o].clone(), z.clone()]]);
        let b3 = Mat::from_blocks(&[vec![cc.b2[e].clone(), cc.a2[e].clone()], vec![cc.c2[o].clone(), cc.b2[o].clone()]]);
        let c3 = Mat::from_blocks(&[vec![cc.d2[e].clone(), cc.c2[e].clone()], vec![z.clone(), cc.d2[o].clone()]]);
        if !c3.is_block_upper_triangular(3) {
            return Err(MopError::StructureViolation(format!("C<3>_{n} is not block upper triangular")));
        }
        fb.a.push(a3);
        fb.b.push(b3);
        fb.c.push(c3);
    }
    Ok(fb)
}

/// `𝔹_n = [W_{2n}; W_{2n+1}]` (6×3).
pub fn pair_wn<T: Scalar>(w: &[MatrixPoly<T>], n: usize) -> MatrixPoly<T> {
    let (top, bottom) = (&w[2 * n], &w[2 * n + 1]);
    MatrixPoly::from_fn(6, 3, |i, j| if i < 3 { top.get(i, j).clone() } else { bottom.get(i - 3, j).clone() })
}

/// `t 𝔹_n = A<3>_n 𝔹_{n+1} + B<3>_n 𝔹_n + C<3>_n 𝔹_{n−1}` for `n` in `range`.
/// Needs `W` through `2 max + 3`.
pub fn verify_block_recurrence<T: Scalar>(
    w: &[MatrixPoly<T>],
    fb: &FavardBlocks<T>,
    range: std::ops::RangeInclusive<usize>,
) -> Result<WRecurrenceReport> {
    let mut report = WRecurrenceReport::default();
    for n in range {
        if 2 * n + 3 >= w.len() || n >= fb.len() {
            return Err(MopError::IndexOutOfRange { index: 2 * n + 3, len: w.len() });
        }
        let prev = if n > 0 { pair_wn(w, n - 1) } else { MatrixPoly::zero(6, 3) };
        let rhs = pair_wn(w, n + 1).left_mul(&fb.a[n]).add(&pair_wn(w, n).left_mul(&fb.b[n])).add(&prev.left_mul(&fb.c[n]));
        report.statuses.push(RecurrenceStatus { n, holds: pair_wn(w, n).shift() == rhs, boundary: n == 0 });
    }
    Ok(report)
}

/// Expansion coefficients of `t^k 𝔹_start` in the basis `𝔹_j`, `k = 0..=K`:
/// `G_{k+1,j} = G_{k,j−1} A_{j−1} + G_{k,j} B_j + G_{k,j+1} C_{j+1}`.
fn expansion<T: Scalar>(fb: &FavardBlocks<T>, start: usize, k_max: usize) -> Result<Vec<Vec<Mat<T>>>> {
    let width = start + k_max + 1;
    let needed = width;
    if fb.len() < needed {
        return Err(MopError::InsufficientBlocks { needed, available: fb.len() });
    }
    let zero = Mat::zeros(6, 6);
    let mut g = vec![zero.clone(); width];
    g[start] = Mat::identity(6);
    let mut out = vec![g.clone()];
    for _ in 0..k_max {
        let next = (0..width)
            .map(|j| {
                let mut acc = &g[j] * &fb.b[j];
                if j > 0 {
                    acc = &acc + &(&g[j - 1] * &fb.a[j - 1]);
                }
                if j + 1 < width {
                    acc = &acc + &(&g[j + 1] * &fb.c[j + 1]);
                }
                acc
            })
            .collect::<Vec<_>>();
        g = next;
        out.push(g.clone());
    }
    Ok(out)
}

/// `M_k = G_{k,0} M_0` with `M_0 = C<3>_0`, `k = 0..=K`.
pub fn favard_moments<T: Scalar>(fb: &FavardBlocks<T>, k_max: usize) -> Result<Vec<Mat<T>>> {
    if fb.is_empty() {
        return Err(MopError::InsufficientBlocks { needed: 1, available: 0 });
    }
    let m0 = fb.c[0].clone();
    let g = expansion(fb, 0, k_max)?;
    let moments: Vec<Mat<T>> = g.iter().map(|row| &row[0] * &m0).collect();
    if k_max >= 1 && moments[1] != &fb.b[0] * &m0 {
        return Err(MopError::ValidationFailure("M_1 ≠ B_0 C_0".into()));
    }
    if k_max >= 2 && fb.len() >= 2 {
        let closed = &(&(&fb.b[0] * &fb.b[0]) + &(&fb.a[0] * &fb.c[1])) * &m0;
        if moments[2] != closed {
            return Err(MopError::ValidationFailure("M_2 differs from (B_0 B_0 + A_0 C_1) C_0".into()));
        }
    }
    Ok(moments)
}

#[derive(Clone, Debug, PartialEq)]
pub struct FavardOrthogonalityReport<T> {
    /// `(n, k)` with `k < n` and `𝔐(t^k 𝔹_n) ≠ 0`.
    pub nonzero_below: Vec<(usize, usize)>,
    /// `Ω_n = 𝔐(t^n 𝔹_n)`.
    pub omegas: Vec<Mat<T>>,
    /// `Ω_n` equals `C_n ⋯ C_0`.
    pub chain_ok: Vec<bool>,
    pub block_upper: Vec<bool>,
}

impl<T> FavardOrthogonalityReport<T> {
    pub fn passed(&self) -> bool {
        self.nonzero_below.is_empty() && self.chain_ok.iter().all(|&b| b) && self.block_upper.iter().all(|&b| b)
    }
}

/// `𝔐(t^k 𝔹_n) = G^{(n)}_{k,0} M_0` for `k ≤ n ≤ K`: zero below the diagonal
/// and `Ω_n = C_n ⋯ C_0` on it.
pub fn favard_orthogonality<T: Scalar>(fb: &FavardBlocks<T>, k_max: usize) -> Result<FavardOrthogonalityReport<T>> {
    if fb.len() < 2 * k_max + 1 {
        return Err(MopError::InsufficientBlocks { needed: 2 * k_max + 1, available: fb.len() });
    }
    let m0 = fb.c[0].clone();
    let mut report = FavardOrthogonalityReport { nonzero_below: vec![], omegas: vec![], chain_ok: vec![], block_upper: vec![] };
    let mut chain = m0.clone();
    for n in 0..=k_max {
        if n > 0 {
            chain = &fb.c[n] * &chain;
        }
        let g = expansion(fb, n, n)?;
        for (k, row) in g.iter().enumerate().take(n) {
            if !(&row[0] * &m0).is_zero() {
                report.nonzero_below.push((n, k));
            }
        }
        let omega = &g[n][0] * &m0;
        report.chain_ok.push(omega == chain);
        report.block_upper.push(omega.is_block_upper_triangular(3));
        report.omegas.push(omega);
    }
    Ok(report)
}
