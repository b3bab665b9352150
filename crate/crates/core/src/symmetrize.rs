//! Passing between a d-symmetric family and the `d + 1` Darboux-related
//! families obtained from its residue classes.
//!
//! Both directions share one indexing of the symmetric coefficients:
//! `γ_{(d+1)n+1} = u_n` (pivots of `U`) and `γ_{(d+1)n−d+j} = m^{(j)}_n`
//! (subdiagonal of `L_j`), so each residue class of `γ` feeds one factor.

use crate::banded::BandedMatrix;
use crate::darboux::{darboux_families, families_from_factorization, DarbouxFactorization, DarbouxFamilySet};
use crate::error::{MopError, Result};
use crate::poly::Poly;
use crate::recurrence::{generate_symmetric, is_d_symmetric, to_jacobi, RecurrenceSystem, SymmetricRecurrence};
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq)]
pub struct SymmetrizationResult<T> {
    /// `S_0..S_{(d+1)M+d}`.
    pub s: Vec<Poly<T>>,
    /// `γ_1..γ_{(d+1)M+1}` assembled from the factors.
    pub sr: SymmetricRecurrence<T>,
    pub families: DarbouxFamilySet<T>,
    pub free_params: Vec<T>,
    /// First `n` with `γ_n = 0`. The recurrence still holds, but the family is
    /// not regular and moment computations refuse it.
    pub regularity_warning: Option<usize>,
}

/// `S_{(d+1)n+j}(x) = x^j A^{j+1}_n(x^{d+1})`.
pub fn interleave<T: Scalar>(families: &[Vec<Poly<T>>], d: usize) -> Result<Vec<Poly<T>>> {
    if families.len() != d + 1 {
        return Err(MopError::LengthMismatch { expected: d + 1, found: families.len() });
    }
    let len = families[0].len();
    if let Some(f) = families.iter().find(|f| f.len() != len) {
        return Err(MopError::LengthMismatch { expected: len, found: f.len() });
    }
    let mut s = Vec::with_capacity(len * (d + 1));
    for n in 0..len {
        for (j, fam) in families.iter().enumerate() {
            s.push(fam[n].compose_power(d + 1).shift(j));
        }
    }
    Ok(s)
}

/// Inverse of [`interleave`]. `S` must have a length divisible by `d + 1`.
pub fn deinterleave<T: Scalar>(s: &[Poly<T>], d: usize) -> Result<Vec<Vec<Poly<T>>>> {
    let cert = is_d_symmetric(s, d);
    if let Some((n, exponent)) = cert.witness {
        return Err(MopError::NotDSymmetric { d, n, exponent });
    }
    if !s.len().is_multiple_of(d + 1) {
        return Err(MopError::LengthMismatch { expected: s.len().div_ceil(d + 1) * (d + 1), found: s.len() });
    }
    let mut families = vec![Vec::with_capacity(s.len() / (d + 1)); d + 1];
    for (i, p) in s.iter().enumerate() {
        let j = i % (d + 1);
        // residue support was checked above, so decimation cannot fail
        families[j].push(p.decimate(d + 1, j).expect("residue support checked"));
    }
    Ok(families)
}

/// Reads `γ_1..γ_{(d+1)(N−1)+1}` off the factors of size `N`.
pub fn assemble_gamma<T: Scalar>(fact: &DarbouxFactorization<T>) -> Vec<T> {
    let d = fact.d;
    let size = fact.size();
    let pivots = fact.pivots();
    let mut gamma = vec![T::zero(); (d + 1) * (size - 1) + 1];
    for (n, u) in pivots.into_iter().enumerate() {
        gamma[(d + 1) * n] = u;
    }
    for j in 1..=d {
        for (i, m) in fact.multipliers(j).into_iter().enumerate() {
            let n = i + 1;
            gamma[(d + 1) * n - d + j - 1] = m;
        }
    }
    gamma
}

/// Builds the factors of size `size` from `γ`: `U` has diagonal
/// `γ_{(d+1)n+1}`, `L_j` has subdiagonal entries `γ_{(d+1)n−d+j}`.
pub fn factors_from_gamma<T: Scalar>(sr: &SymmetricRecurrence<T>, size: usize) -> Result<DarbouxFactorization<T>> {
    let d = sr.d;
    let needed = (d + 1) * (size - 1) + 1;
    let g = |i: usize| {
        sr.gamma(i).cloned().ok_or(MopError::InsufficientCoefficients { what: "gamma", needed, available: sr.gamma.len() })
    };
    let pivots = (0..size).map(|n| g((d + 1) * n + 1)).collect::<Result<Vec<_>>>()?;
    let mut l_factors = Vec::with_capacity(d);
    for j in 1..=d {
        let sub = (1..size).map(|n| g((d + 1) * n - d + j)).collect::<Result<Vec<_>>>()?;
        l_factors.push(BandedMatrix::unit_lower_bidiagonal(size, &sub));
    }
    Ok(DarbouxFactorization::from_factors(BandedMatrix::unit_upper_bidiagonal(&pivots), l_factors))
}

/// Symmetrizes the family of `rs`: factors its `(M+1)`-section, builds the
/// Darboux families, interleaves them and reads `γ` off the factors.
pub fn symmetrize_direct<T: Scalar>(rs: &RecurrenceSystem<T>, m: usize, free_params: &[T]) -> Result<SymmetrizationResult<T>> {
    let d = rs.d;
    let j1 = to_jacobi(rs, m + 1)?;
    let families = darboux_families(&j1, d, m, free_params)?;
    let s = interleave(&families.families, d)?;
    let sr = SymmetricRecurrence::new(d, assemble_gamma(&families.factorization))?;
    if let Some((n, exponent)) = is_d_symmetric(&s, d).witness {
        return Err(MopError::NotDSymmetric { d, n, exponent });
    }
    if generate_symmetric(&sr, s.len() - 1)? != s {
        return Err(MopError::ValidationFailure("interleaved family violates the symmetric recurrence".into()));
    }
    let regularity_warning = sr.zero_gamma();
    Ok(SymmetrizationResult { s, sr, families, free_params: free_params.to_vec(), regularity_warning })
}

/// Splits the symmetric family of `sr` into `A^1..A^{d+1}` (entries `0..=M`)
/// and recovers their Hessenberg matrices from the factors encoded in `γ`.
///
/// Every stored `γ` is used for the factors, so supplying more than
/// `(d+1)M + 1` coefficients enlarges the returned `J_j`.
pub fn desymmetrize<T: Scalar>(sr: &SymmetricRecurrence<T>, m: usize) -> Result<DarbouxFamilySet<T>> {
    let d = sr.d;
    let needed = (d + 1) * m + 1;
    if sr.gamma.len() < needed {
        return Err(MopError::InsufficientCoefficients { what: "gamma", needed, available: sr.gamma.len() });
    }
    let size = (sr.gamma.len() - 1) / (d + 1) + 1;
    let s = generate_symmetric(sr, (d + 1) * m + d)?;
    let mut split = deinterleave(&s, d)?;
    let fact = factors_from_gamma(sr, size)?;
    let a1 = split.remove(0);
    let set = families_from_factorization(fact, a1)?;
    // the other residue classes must match the families derived through L_j
    for (i, fam) in split.into_iter().enumerate() {
        if set.families[i + 1] != fam {
            return Err(MopError::ValidationFailure(format!("residue class {} disagrees with A^{}", i + 1, i + 2)));
        }
    }
    Ok(set)
}

/// `γ_{(d+1)n+1} = −A^1_{n+1}(0) / A^1_n(0)` for `n = 0..len−2`.
pub fn gamma_at_zero<T: Scalar>(a1: &[Poly<T>]) -> Result<Vec<T>> {
    let values: Vec<T> = a1.iter().map(|p| p.coeff(0)).collect();
    if let Some(n) = values.iter().position(|v| v.is_zero()) {
        return Err(MopError::ZeroConstantTerm(n));
    }
    Ok(values.windows(2).map(|w| -(w[1].clone() / w[0].clone())).collect())
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

    fn ones(d: usize, len: usize) -> SymmetricRecurrence<Rational> {
        SymmetricRecurrence::new(d, vec![int(1); len]).unwrap()
    }

    #[test]
    fn interleave_examples() {
        let fams = vec![vec![p(&[1]), p(&[-1, 1])], vec![p(&[1]), p(&[-2, 1])], vec![p(&[1]), p(&[-3, 1])]];
        let s = interleave(&fams, 2).unwrap();
        assert_eq!(s, vec![p(&[1]), p(&[0, 1]), p(&[0, 0, 1]), p(&[-1, 0, 0, 1]), p(&[0, -2, 0, 0, 1]), p(&[0, 0, -3, 0, 0, 1])]);
        assert_eq!(deinterleave(&s, 2).unwrap(), fams);
        let d1 = interleave(&[vec![p(&[1]), p(&[-1, 1])], vec![p(&[1]), p(&[-2, 1])]], 1).unwrap();
        assert_eq!(d1, vec![p(&[1]), p(&[0, 1]), p(&[-1, 0, 1]), p(&[0, -2, 0, 1])]);
        let trivial = interleave(&vec![vec![p(&[1])]; 4], 3).unwrap();
        assert_eq!(trivial, (0..4).map(|k| Poly::monomial(k, int(1))).collect::<Vec<_>>());
    }

    #[test]
    fn deinterleave_rejects_mixed_residues() {
        let s = vec![p(&[1]), p(&[0, 1]), p(&[1, 0, 1])];
        assert_eq!(deinterleave(&s, 2), Err(MopError::NotDSymmetric { d: 2, n: 2, exponent: 0 }));
        let s = generate_symmetric(&ones(2, 10), 8).unwrap();
        assert_eq!(deinterleave(&s, 2).unwrap()[0][2], p(&[1, -4, 1]));
    }

    #[test]
    fn laguerre_symmetrization() {
        let rs = RecurrenceSystem::new(1, (0..5).map(|k| int(2 * k + 1)).collect(), vec![(0..5).map(|k| int(k * k)).collect()])
            .unwrap();
        let out = symmetrize_direct(&rs, 4, &[]).unwrap();
        assert_eq!(out.sr.gamma, ints(&[1, 1, 2, 2, 3, 3, 4, 4, 5]));
        assert_eq!(out.s[2], p(&[-1, 0, 1]));
        assert_eq!(out.s[3], p(&[0, -2, 0, 1]));
        assert_eq!(out.regularity_warning, None);
        let m0 = symmetrize_direct(&rs, 0, &[]).unwrap();
        assert_eq!(m0.s, vec![p(&[1]), p(&[0, 1])]);
    }

    #[test]
    fn symmetric_shaped_input_has_zero_first_pivot() {
        // β_0 = 0 is the first pivot of the LU factorization
        let rs = ones(2, 12).to_system();
        assert_eq!(symmetrize_direct(&rs, 4, &[int(0)]).map(|_| ()), Err(MopError::ZeroPivot(0)));
    }

    #[test]
    fn default_free_parameter_gives_warning() {
        let n = 12;
        let rs = RecurrenceSystem::new(2, (0..n).map(|k| int(k + 2)).collect(), vec![vec![int(1); n as usize]; 2]).unwrap();
        let out = symmetrize_direct(&rs, 5, &[int(0)]).unwrap();
        assert!(is_d_symmetric(&out.s, 2).is_symmetric());
        assert_eq!(out.regularity_warning, Some(2));
        let again = deinterleave(&out.s, 2).unwrap();
        assert_eq!(again, out.families.families);
    }

    #[test]
    fn desymmetrize_ones() {
        let set = desymmetrize(&ones(2, 40), 2).unwrap();
        assert_eq!(set.families[0], vec![p(&[1]), p(&[-1, 1]), p(&[1, -4, 1])]);
        assert_eq!(set.families[1], vec![p(&[1]), p(&[-2, 1]), p(&[3, -5, 1])]);
        assert_eq!(set.families[2], vec![p(&[1]), p(&[-3, 1]), p(&[6, -6, 1])]);
        for f in &set.factorization.l_factors {
            assert!(f.diagonal(-1).iter().all(|v| *v == int(1)));
        }
        assert!(set.factorization.pivots().iter().all(|v| *v == int(1)));
        assert_eq!(gamma_at_zero(&set.families[0]).unwrap(), ints(&[1, 1]));
        assert!(crate::darboux::intertwining_failures(&set.factorization).unwrap().is_empty());
        assert!(crate::darboux::family_recurrence_mismatches(&set).unwrap().is_empty());

        let d1 = desymmetrize(&SymmetricRecurrence::new(1, ints(&[1, 1, 2, 2, 3])).unwrap(), 1).unwrap();
        assert_eq!(d1.families[0], vec![p(&[1]), p(&[-1, 1])]);
        assert_eq!(d1.families[1], vec![p(&[1]), p(&[-2, 1])]);
        let trivial = desymmetrize(&ones(3, 1), 0).unwrap();
        assert!(trivial.families.iter().all(|f| f == &vec![p(&[1])]));
        assert!(matches!(desymmetrize(&ones(2, 3), 2), Err(MopError::InsufficientCoefficients { .. })));
    }

    #[test]
    fn gamma_at_zero_examples() {
        assert_eq!(gamma_at_zero(&[p(&[1]), p(&[-1, 1]), p(&[1, -4, 1])]).unwrap(), ints(&[1, 1]));
        assert_eq!(gamma_at_zero(&[p(&[1]), p(&[0, 1])]), Err(MopError::ZeroConstantTerm(1)));
        assert_eq!(gamma_at_zero(&[p(&[1]), p(&[-1, 1])]).unwrap(), ints(&[1]));
    }
}
