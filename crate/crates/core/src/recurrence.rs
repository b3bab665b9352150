//! (d+2)-term recurrences, the polynomial families they generate, and their
//! banded Hessenberg (Jacobi) matrices.
//!
//! Coefficients are stored with the subscripts and superscripts of the
//! recurrence
//!
//! ```text
//! x P_m = P_{m+1} + β_m P_m + Σ_{ν=0}^{d-1} γ^{d-1-ν}_{m-ν} P_{m-1-ν}
//! ```
//!
//! where terms with a negative polynomial index are dropped (this also covers
//! the start-up rows `m < d`). `gamma[k][i]` holds `γ^k_i`; slot `i = 0` is
//! never read by the recurrence. [`to_jacobi`] is the only place where these
//! indices are mapped to matrix positions.

use crate::banded::BandedMatrix;
use crate::error::{MopError, Result};
use crate::matpoly::MatrixPoly;
use crate::poly::Poly;
use crate::scalar::Scalar;

/// Coefficients of a (d+2)-term recurrence.
#[derive(Clone, Debug, PartialEq)]
pub struct RecurrenceSystem<T> {
    pub d: usize,
    pub beta: Vec<T>,
    /// `gamma[k][n] = γ^k_n`, `k = 0..d`.
    pub gamma: Vec<Vec<T>>,
}

/// Coefficients `γ_1, γ_2, …` of `x S_{n+d} = S_{n+d+1} + γ_{n+1} S_n`.
#[derive(Clone, Debug, PartialEq)]
pub struct SymmetricRecurrence<T> {
    pub d: usize,
    /// `gamma[i] = γ_{i+1}`.
    pub gamma: Vec<T>,
}

/// Result of the monomial-residue test for d-symmetry.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DSymmetryCertificate {
    pub d: usize,
    pub residue_ok: Vec<bool>,
    /// First `(n, exponent)` with `exponent ≢ n (mod d+1)`.
    pub witness: Option<(usize, usize)>,
}

impl DSymmetryCertificate {
    pub fn is_symmetric(&self) -> bool {
        self.witness.is_none()
    }
}

impl<T: Scalar> RecurrenceSystem<T> {
    /// Shape-checked constructor; regularity is checked separately by
    /// [`RecurrenceSystem::regularity_violation`].
    pub fn new(d: usize, beta: Vec<T>, gamma: Vec<Vec<T>>) -> Result<Self> {
        if d == 0 {
            return Err(MopError::InvalidArgument("d must be positive".into()));
        }
        if gamma.len() != d {
            return Err(MopError::LengthMismatch { expected: d, found: gamma.len() });
        }
        Ok(RecurrenceSystem { d, beta, gamma })
    }

    /// `γ^k_n`, or `None` when not stored.
    pub fn gamma_at(&self, k: usize, n: usize) -> Option<&T> {
        self.gamma.get(k).and_then(|g| g.get(n))
    }

    /// Largest Jacobi size `N` for which every required coefficient is stored.
    pub fn horizon(&self) -> usize {
        let mut n = 0;
        while self.row_available(n) {
            n += 1;
        }
        n
    }

    fn row_available(&self, m: usize) -> bool {
        m < self.beta.len() && (0..self.d.min(m)).all(|nu| self.gamma_at(self.d - 1 - nu, m - nu).is_some())
    }

    /// First index `n ≥ 1` with `γ^0_n = 0` among the stored coefficients used by
    /// the first `n_rows` Jacobi rows.
    pub fn regularity_violation(&self, n_rows: usize) -> Option<usize> {
        (1..n_rows.saturating_sub(self.d - 1)).find(|&n| self.gamma_at(0, n).is_some_and(|g| g.is_zero()))
    }

    /// Coefficients of Jacobi row `m`: `(column, value)` pairs for the lower
    /// part and the diagonal.
    fn row(&self, m: usize) -> Result<Vec<(usize, T)>> {
        let beta =
            self.beta.get(m).ok_or(MopError::InsufficientCoefficients { what: "beta", needed: m, available: self.beta.len() })?;
        let mut row = vec![(m, beta.clone())];
        for nu in 0..self.d.min(m) {
            let k = self.d - 1 - nu;
            let g = self.gamma_at(k, m - nu).ok_or(MopError::InsufficientCoefficients {
                what: "gamma",
                needed: m - nu,
                available: self.gamma[k].len(),
            })?;
            row.push((m - 1 - nu, g.clone()));
        }
        Ok(row)
    }
}

impl<T: Scalar> SymmetricRecurrence<T> {
    pub fn new(d: usize, gamma: Vec<T>) -> Result<Self> {
        if d == 0 {
            return Err(MopError::InvalidArgument("d must be positive".into()));
        }
        Ok(SymmetricRecurrence { d, gamma })
    }

    /// `γ_n` for `n ≥ 1`.
    pub fn gamma(&self, n: usize) -> Option<&T> {
        n.checked_sub(1).and_then(|i| self.gamma.get(i))
    }

    /// First `n` with `γ_n = 0`.
    pub fn zero_gamma(&self) -> Option<usize> {
        self.gamma.iter().position(|g| g.is_zero()).map(|i| i + 1)
    }

    /// The same recurrence as a general system: `β ≡ 0`, `γ^k ≡ 0` for `k ≥ 1`,
    /// `γ^0_n = γ_n`.
    pub fn to_system(&self) -> RecurrenceSystem<T> {
        let len = self.gamma.len() + self.d;
        let mut g0 = vec![T::zero()];
        g0.extend(self.gamma.iter().cloned());
        let mut gamma = vec![g0];
        for k in 1..self.d {
            gamma.push(vec![T::zero(); self.gamma.len() + k + 1]);
        }
        RecurrenceSystem { d: self.d, beta: vec![T::zero(); len], gamma }
    }
}

/// Monic `P_0..=P_M` from a (d+2)-term recurrence.
pub fn generate_type2<T: Scalar>(rs: &RecurrenceSystem<T>, m: usize) -> Result<Vec<Poly<T>>> {
    let mut polys = Vec::with_capacity(m + 1);
    polys.push(Poly::one());
    for row in 0..m {
        // P_{row+1} = x P_row − Σ (row coefficients) · P_col
        let mut next = polys[row].shift(1);
        for (col, c) in rs.row(row)? {
            next.add_scaled(&-c, &polys[col]);
        }
        polys.push(next);
    }
    Ok(polys)
}

/// Monic `S_0..=S_M` with `S_n = x^n` for `n ≤ d` and
/// `S_{n+d+1} = x S_{n+d} − γ_{n+1} S_n`.
pub fn generate_symmetric<T: Scalar>(sr: &SymmetricRecurrence<T>, m: usize) -> Result<Vec<Poly<T>>> {
    let d = sr.d;
    let mut polys: Vec<Poly<T>> = (0..=m.min(d)).map(|n| Poly::monomial(n, T::one())).collect();
    for next in d + 1..=m {
        let n = next - d - 1;
        let g = sr.gamma(n + 1).ok_or(MopError::InsufficientCoefficients {
            what: "gamma",
            needed: n + 1,
            available: sr.gamma.len(),
        })?;
        let mut p = polys[next - 1].shift(1);
        p.add_scaled(&-g.clone(), &polys[n]);
        polys.push(p);
    }
    Ok(polys)
}

/// The `N × N` section of the Hessenberg matrix of `rs`: unit superdiagonal,
/// `β_n` on the diagonal and `γ^{d-1-ν}_{n-ν}` at `(n, n-1-ν)`.
pub fn to_jacobi<T: Scalar>(rs: &RecurrenceSystem<T>, n: usize) -> Result<BandedMatrix<T>> {
    if n == 0 {
        return Err(MopError::InvalidArgument("Jacobi size must be positive".into()));
    }
    let mut j = BandedMatrix::zeros(n, rs.d, 1);
    for m in 0..n {
        for (col, v) in rs.row(m)? {
            j.set(m, col, v);
        }
        if m + 1 < n {
            j.set(m, m + 1, T::one());
        }
    }
    Ok(j)
}

/// Reads the recurrence coefficients back from a monic Hessenberg matrix.
pub fn from_jacobi<T: Scalar>(j: &BandedMatrix<T>, d: usize) -> Result<RecurrenceSystem<T>> {
    if d == 0 {
        return Err(MopError::InvalidArgument("d must be positive".into()));
    }
    let n = j.size();
    for i in 0..n {
        if i + 1 < n && !j.get(i, i + 1).is_one() {
            return Err(MopError::NotMonicHessenberg { row: i });
        }
        let (lo, hi) = j.row_span(i);
        if (lo..hi).any(|c| (c > i + 1 || c + d < i) && !j.get(i, c).is_zero()) {
            return Err(MopError::NotMonicHessenberg { row: i });
        }
    }
    let beta = (0..n).map(|i| j.get(i, i)).collect();
    // γ^k_i sits at (i + d − 1 − k, i − 1)
    let gamma = (0..d)
        .map(|k| {
            let mut g = vec![T::zero()];
            let mut i = 1;
            while i + d - 1 - k < n {
                g.push(j.get(i + d - 1 - k, i - 1));
                i += 1;
            }
            g
        })
        .collect();
    Ok(RecurrenceSystem { d, beta, gamma })
}

/// Monomial-support test: `P_n` may only carry exponents `≡ n (mod d+1)`.
/// Equivalent to `P_n(ξx) = ξ^n P_n(x)` for every `(d+1)`-th root of unity ξ.
pub fn is_d_symmetric<T: Scalar>(polys: &[Poly<T>], d: usize) -> DSymmetryCertificate {
    let period = d + 1;
    let mut witness = None;
    let residue_ok = polys
        .iter()
        .enumerate()
        .map(|(n, p)| {
            let bad = p.support().find(|e| e % period != n % period);
            if let (Some(e), None) = (bad, witness) {
                witness = Some((n, e));
            }
            bad.is_none()
        })
        .collect();
    DSymmetryCertificate { d, residue_ok, witness }
}

/// `W_n` with `P_{gn+r}(x) = Σ_c W_n[r][c](x^g) · x^c`.
pub fn vector_matrix_form<T: Scalar>(polys: &[Poly<T>], g: usize, n: usize) -> Result<MatrixPoly<T>> {
    if g == 0 {
        return Err(MopError::InvalidArgument("group size must be positive".into()));
    }
    let last = g * (n + 1) - 1;
    if last >= polys.len() {
        return Err(MopError::IndexOutOfRange { index: last, len: polys.len() });
    }
    Ok(MatrixPoly::from_fn(g, g, |r, c| {
        let p = &polys[g * n + r];
        let len = p.coeffs().len();
        let coeffs = (0..).map(|j| g * j + c).take_while(|&e| e < len).map(|e| p.coeff(e)).collect();
        Poly::from_coeffs(coeffs)
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, Rational};

    fn p(c: &[i64]) -> Poly<Rational> {
        Poly::from_coeffs(c.iter().map(|&v| int(v)).collect())
    }

    fn ints(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| int(x)).collect()
    }

    fn laguerre(len: usize) -> RecurrenceSystem<Rational> {
        let beta = (0..len as i64).map(|n| int(2 * n + 1)).collect();
        let g0 = (0..len as i64).map(|n| int(n * n)).collect();
        RecurrenceSystem::new(1, beta, vec![g0]).unwrap()
    }

    #[test]
    fn generate_d2_plain() {
        let rs = RecurrenceSystem::new(2, ints(&[0; 6]), vec![ints(&[1; 6]), ints(&[0; 6])]).unwrap();
        let ps = generate_type2(&rs, 5).unwrap();
        let want = vec![p(&[1]), p(&[0, 1]), p(&[0, 0, 1]), p(&[-1, 0, 0, 1]), p(&[0, -2, 0, 0, 1]), p(&[0, 0, -3, 0, 0, 1])];
        assert_eq!(ps, want);
    }

    #[test]
    fn generate_laguerre_and_trivial() {
        let ps = generate_type2(&laguerre(4), 2).unwrap();
        assert_eq!(ps[2], p(&[2, -4, 1]));
        assert_eq!(generate_type2(&laguerre(0), 0).unwrap(), vec![p(&[1])]);
        assert!(matches!(generate_type2(&laguerre(2), 3), Err(MopError::InsufficientCoefficients { .. })));
    }

    #[test]
    fn generate_symmetric_examples() {
        let sr = SymmetricRecurrence::new(2, ints(&[1; 4])).unwrap();
        let s = generate_symmetric(&sr, 6).unwrap();
        assert_eq!(s[3], p(&[-1, 0, 0, 1]));
        assert_eq!(s[5], p(&[0, 0, -3, 0, 0, 1]));
        assert_eq!(s[6], p(&[1, 0, 0, -4, 0, 0, 1]));
        let sr1 = SymmetricRecurrence::new(1, ints(&[1, 1, 2, 2])).unwrap();
        let s1 = generate_symmetric(&sr1, 3).unwrap();
        assert_eq!(s1[2], p(&[-1, 0, 1]));
        assert_eq!(s1[3], p(&[0, -2, 0, 1]));
        let sr3 = SymmetricRecurrence::new(3, vec![]).unwrap();
        assert_eq!(generate_symmetric(&sr3, 3).unwrap(), vec![p(&[1]), p(&[0, 1]), p(&[0, 0, 1]), p(&[0, 0, 0, 1])]);
        assert!(generate_symmetric(&sr3, 4).is_err());
    }

    #[test]
    fn jacobi_examples() {
        let sr = SymmetricRecurrence::new(2, ints(&[1; 4])).unwrap();
        let j = to_jacobi(&sr.to_system(), 4).unwrap();
        let want = vec![ints(&[0, 1, 0, 0]), ints(&[0, 0, 1, 0]), ints(&[1, 0, 0, 1]), ints(&[0, 1, 0, 0])];
        assert_eq!(j.to_dense(), want);

        let rs = RecurrenceSystem::new(1, ints(&[1, 3]), vec![ints(&[0, 1])]).unwrap();
        assert_eq!(to_jacobi(&rs, 2).unwrap().to_dense(), vec![ints(&[1, 1]), ints(&[1, 3])]);
        assert_eq!(to_jacobi(&rs, 1).unwrap().to_dense(), vec![ints(&[1])]);
    }

    #[test]
    fn from_jacobi_round_trip_and_errors() {
        let sr = SymmetricRecurrence::new(2, ints(&[1; 8])).unwrap();
        let j = to_jacobi(&sr.to_system(), 6).unwrap();
        let rs = from_jacobi(&j, 2).unwrap();
        assert!(rs.beta.iter().all(|b| *b == int(0)));
        assert!(rs.gamma[1].iter().all(|g| *g == int(0)));
        assert!(rs.gamma[0][1..].iter().all(|g| *g == int(1)));
        assert_eq!(to_jacobi(&rs, 6).unwrap(), j);

        let mut bad = j.clone();
        bad.set(2, 3, int(2));
        assert_eq!(from_jacobi(&bad, 2), Err(MopError::NotMonicHessenberg { row: 2 }));
    }

    #[test]
    fn symmetry_certificates() {
        let ok = is_d_symmetric(&[p(&[1]), p(&[0, 1]), p(&[0, 0, 1]), p(&[-1, 0, 0, 1])], 2);
        assert!(ok.is_symmetric());
        let bad = is_d_symmetric(&[p(&[1]), p(&[0, 1]), p(&[1, 0, 1])], 2);
        assert_eq!(bad.witness, Some((2, 0)));
        assert_eq!(bad.residue_ok, vec![true, true, false]);
    }

    #[test]
    fn vector_matrix_form_examples() {
        let sr = SymmetricRecurrence::new(2, ints(&[1; 4])).unwrap();
        let s = generate_symmetric(&sr, 5).unwrap();
        assert_eq!(vector_matrix_form(&s, 3, 0).unwrap(), MatrixPoly::identity(3));
        assert_eq!(vector_matrix_form(&s, 3, 1).unwrap(), MatrixPoly::diag(vec![p(&[-1, 1]), p(&[-2, 1]), p(&[-3, 1])]));
        let s1 = generate_symmetric(&SymmetricRecurrence::new(1, ints(&[1, 1])).unwrap(), 3).unwrap();
        assert_eq!(vector_matrix_form(&s1, 2, 1).unwrap(), MatrixPoly::diag(vec![p(&[-1, 1]), p(&[-2, 1])]));
        assert!(matches!(vector_matrix_form(&s1, 2, 2), Err(MopError::IndexOutOfRange { .. })));
    }
}
