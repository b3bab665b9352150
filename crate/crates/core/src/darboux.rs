//! LU factorization of banded Hessenberg matrices, splitting of the unit lower
//! factor into bidiagonal factors, and the Darboux transforms obtained by
//! cyclically permuting `L_1 ⋯ L_d U`.

use crate::banded::{banded_mul, unit_bidiagonal_solve, BandedMatrix};
use crate::error::{MopError, Result};
use crate::poly::Poly;
use crate::recurrence::{from_jacobi, generate_type2};
use crate::scalar::Scalar;

/// `J_1 = L_1 ⋯ L_d U` together with the free parameters used to split `L`.
#[derive(Clone, Debug, PartialEq)]
pub struct DarbouxFactorization<T> {
    pub d: usize,
    /// Upper bidiagonal, unit superdiagonal, pivots `u_n` on the diagonal.
    pub u: BandedMatrix<T>,
    /// Unit lower bidiagonal factors `L_1..L_d`.
    pub l_factors: Vec<BandedMatrix<T>>,
    /// Values for the slots returned by [`free_parameter_slots`].
    pub free_params: Vec<T>,
    /// Trailing rows/columns discarded after a cyclic product.
    pub guard: usize,
}

/// The families `A^1..A^{d+1}` and their Hessenberg matrices `J_1..J_{d+1}`.
#[derive(Clone, Debug, PartialEq)]
pub struct DarbouxFamilySet<T> {
    pub families: Vec<Vec<Poly<T>>>,
    /// `jacobi[j-1] = J_j`, trimmed by the guard band; empty when the guard
    /// band swallows every row.
    pub jacobi: Vec<BandedMatrix<T>>,
    pub factorization: DarbouxFactorization<T>,
}

/// Slots `(n, j)` of the subdiagonal entries `m^{(j)}_n = L_j[n][n-1]` that the
/// product `L = L_1 ⋯ L_d` leaves undetermined: `j + n ≤ d`, ordered by `n`
/// then `j`. There are `d(d−1)/2` of them.
pub fn free_parameter_slots(d: usize) -> Vec<(usize, usize)> {
    let mut slots = Vec::new();
    for n in 1..d {
        for j in 1..=d - n {
            slots.push((n, j));
        }
    }
    slots
}

/// `J = L U` with `U` upper bidiagonal (unit superdiagonal) and `L` unit lower
/// triangular of bandwidth `d`.
pub fn lu_hessenberg<T: Scalar>(j: &BandedMatrix<T>, d: usize) -> Result<(BandedMatrix<T>, BandedMatrix<T>)> {
    let n = j.size();
    if !j.is_monic_hessenberg(d) {
        let row = (0..n).find(|&i| !j.leading(i + 1).is_monic_hessenberg(d)).unwrap_or(0);
        return Err(MopError::NotMonicHessenberg { row });
    }
    let mut l = BandedMatrix::zeros(n, d, 0);
    let mut pivots = Vec::with_capacity(n);
    for k in 0..n {
        l.set(k, k, T::one());
        let above = if k > 0 { l.get(k, k - 1) } else { T::zero() };
        let u = j.get(k, k) - above;
        if u.is_zero() && k + 1 < n {
            return Err(MopError::ZeroPivot(k));
        }
        for r in k + 1..(k + d + 1).min(n) {
            let left = if k > 0 { l.get(r, k - 1) } else { T::zero() };
            l.set(r, k, (j.get(r, k) - left) / u.clone());
        }
        pivots.push(u);
    }
    Ok((l, BandedMatrix::unit_upper_bidiagonal(&pivots)))
}

/// Splits a unit lower triangular `L` of bandwidth `d` into `L_1 ⋯ L_d`.
///
/// Row by row, the entries `m^{(j)}_n` are found for `j` ascending: the
/// subdiagonal `k = d − j + 1` equation of row `n` contains `m^{(j)}_n` with
/// coefficient `Π_{i=j+1}^{d} m^{(i)}_{n−i+j}`, and every other term involves
/// only entries already known. Entries in the slots of
/// [`free_parameter_slots`] are taken from `free_params`.
pub fn split_bidiagonals<T: Scalar>(l: &BandedMatrix<T>, d: usize, free_params: &[T]) -> Result<Vec<BandedMatrix<T>>> {
    let slots = free_parameter_slots(d);
    if free_params.len() != slots.len() {
        return Err(MopError::LengthMismatch { expected: slots.len(), found: free_params.len() });
    }
    let size = l.size();
    // m[j][n] = m^{(j)}_n, j = 1..=d (index 0 unused), n ≥ 1
    let mut m = vec![vec![T::zero(); size]; d + 1];
    for ((n, j), v) in slots.iter().zip(free_params) {
        if *n < size {
            m[*j][*n] = v.clone();
        }
    }
    for n in 1..size {
        for j in 1..=d {
            if j + n <= d {
                continue;
            }
            let k = d - j + 1;
            // sum over increasing index chains i_1 < … < i_k with i_1 < j
            let mut dp: Vec<T> = (0..=d).map(|i| if i >= 1 && i < j { m[i][n].clone() } else { T::zero() }).collect();
            for t in 1..k {
                let row = n - t;
                let mut next = vec![T::zero(); d + 1];
                let mut running = T::zero();
                for i in 1..=d {
                    if !running.is_zero() {
                        next[i] = running.clone() * m[i][row].clone();
                    }
                    running += dp[i].clone();
                }
                dp = next;
            }
            let others = dp.into_iter().fold(T::zero(), |a, b| a + b);
            let divisor = (j + 1..=d).fold(T::one(), |acc, i| acc * m[i][n - (i - j)].clone());
            if divisor.is_zero() {
                return Err(MopError::DegenerateSplit { n, j });
            }
            m[j][n] = (l.get(n, n - k) - others) / divisor;
        }
    }
    Ok((1..=d).map(|j| BandedMatrix::unit_lower_bidiagonal(size, &m[j][1..])).collect())
}

/// Reads the free-parameter slot values off a set of bidiagonal factors.
pub fn free_params_of<T: Scalar>(l_factors: &[BandedMatrix<T>]) -> Vec<T> {
    let d = l_factors.len();
    free_parameter_slots(d)
        .into_iter()
        .map(|(n, j)| {
            let f = &l_factors[j - 1];
            if n < f.size() {
                f.get(n, n - 1)
            } else {
                T::zero()
            }
        })
        .collect()
}

impl<T: Scalar> DarbouxFactorization<T> {
    /// Factors `J_1` and splits its lower factor with the given free parameters.
    pub fn new(j1: &BandedMatrix<T>, d: usize, free_params: &[T]) -> Result<Self> {
        let (l, u) = lu_hessenberg(j1, d)?;
        let l_factors = split_bidiagonals(&l, d, free_params)?;
        Ok(DarbouxFactorization { d, u, l_factors, free_params: free_params.to_vec(), guard: d + 1 })
    }

    /// Builds a factorization directly from its factors.
    pub fn from_factors(u: BandedMatrix<T>, l_factors: Vec<BandedMatrix<T>>) -> Self {
        let d = l_factors.len();
        let free_params = free_params_of(&l_factors);
        DarbouxFactorization { d, u, l_factors, free_params, guard: d + 1 }
    }

    pub fn size(&self) -> usize {
        self.u.size()
    }

    /// `L_1 ⋯ L_d`.
    pub fn lower_product(&self) -> Result<BandedMatrix<T>> {
        self.product(&self.l_factors.iter().collect::<Vec<_>>())
    }

    /// Pivots `u_n`.
    pub fn pivots(&self) -> Vec<T> {
        self.u.diagonal(0)
    }

    /// Subdiagonal of `L_j` (entries `m^{(j)}_1, m^{(j)}_2, …`).
    pub fn multipliers(&self, j: usize) -> Vec<T> {
        self.l_factors[j - 1].diagonal(-1)
    }

    /// Number of rows kept after a cyclic product.
    pub fn retained(&self) -> usize {
        self.size().saturating_sub(self.guard)
    }

    fn product(&self, factors: &[&BandedMatrix<T>]) -> Result<BandedMatrix<T>> {
        let mut acc = factors[0].clone();
        for f in &factors[1..] {
            acc = banded_mul(&acc, f)?;
        }
        Ok(acc)
    }

    /// Factors in cyclic order starting at `L_j` (`j = d + 1` starts at `U`).
    fn cyclic_factors(&self, j: usize) -> Vec<&BandedMatrix<T>> {
        let mut all: Vec<&BandedMatrix<T>> = self.l_factors.iter().collect();
        all.push(&self.u);
        all.rotate_left(j - 1);
        all
    }

    /// Untrimmed cyclic product; only its last row is polluted by truncation.
    pub fn cyclic_product(&self, j: usize) -> Result<BandedMatrix<T>> {
        if j == 0 || j > self.d + 1 {
            return Err(MopError::InvalidArgument(format!("cyclic index {j} outside 1..={}", self.d + 1)));
        }
        self.product(&self.cyclic_factors(j))
    }
}

/// `J_j = L_j ⋯ L_d U L_1 ⋯ L_{j−1}`, trimmed by the guard band.
pub fn cyclic_permutation<T: Scalar>(fact: &DarbouxFactorization<T>, j: usize) -> Result<BandedMatrix<T>> {
    let keep = fact.retained();
    if keep == 0 {
        return Err(MopError::InsufficientHorizon { needed: fact.guard + 1, usable: fact.size() });
    }
    Ok(fact.cyclic_product(j)?.leading(keep))
}

/// Checks `L_j J_{j+1} = J_j L_j` (j = 1..d) and `U J_1 = J_{d+1} U` on the
/// retained block. Returns the failing relation indices (`d + 1` stands for
/// the `U` relation).
pub fn intertwining_failures<T: Scalar>(fact: &DarbouxFactorization<T>) -> Result<Vec<usize>> {
    let keep = fact.retained().saturating_sub(1);
    let mut failures = Vec::new();
    let cyc: Vec<BandedMatrix<T>> = (1..=fact.d + 1).map(|j| fact.cyclic_product(j)).collect::<Result<_>>()?;
    for j in 1..=fact.d + 1 {
        let (left, right) = if j <= fact.d {
            let lj = &fact.l_factors[j - 1];
            (banded_mul(lj, &cyc[j])?, banded_mul(&cyc[j - 1], lj)?)
        } else {
            (banded_mul(&fact.u, &cyc[0])?, banded_mul(&cyc[fact.d], &fact.u)?)
        };
        if !left.leading_eq(&right, keep) {
            failures.push(j);
        }
    }
    Ok(failures)
}

/// Rows `n` (below `rows`) where `x · polys[n] ≠ Σ_k J[n][k] polys[k]`.
pub fn recurrence_mismatches<T: Scalar>(j: &BandedMatrix<T>, polys: &[Poly<T>], rows: usize) -> Vec<usize> {
    (0..rows).filter(|&n| polys[n].shift(1) != j.row_times_polys(n, polys)).collect()
}

/// Direct check of every family against its own matrix: `(j, n)` pairs with
/// `x A^j_n ≠ (J_j A^j)_n`, over the rows below the guard band.
pub fn family_recurrence_mismatches<T: Scalar>(set: &DarbouxFamilySet<T>) -> Result<Vec<(usize, usize)>> {
    let fact = &set.factorization;
    let rows = (set.families[0].len() - 1).min(fact.retained());
    let mut out = Vec::new();
    for (j, fam) in set.families.iter().enumerate() {
        let full = fact.cyclic_product(j + 1)?;
        out.extend(recurrence_mismatches(&full, fam, rows).into_iter().map(|n| (j + 1, n)));
    }
    Ok(out)
}

/// The Darboux families of `J_1`: `A^1` from the recurrence of `J_1`, then
/// `A^{j+1} = L_j^{-1} A^j`. Use [`family_recurrence_mismatches`] for a row-by-row
/// check of each family against its own `J_j`.
pub fn darboux_families<T: Scalar>(j1: &BandedMatrix<T>, d: usize, m: usize, free_params: &[T]) -> Result<DarbouxFamilySet<T>> {
    if j1.size() < m + 1 {
        return Err(MopError::InsufficientHorizon { needed: m + 1, usable: j1.size() });
    }
    let rs = from_jacobi(j1, d)?;
    let a1 = generate_type2(&rs, m)?;
    let fact = DarbouxFactorization::new(j1, d, free_params)?;
    // A^1 obeys the recurrence of J_1 by construction, so the factors only
    // have to reproduce J_1.
    if !fact.cyclic_product(1)?.leading_eq(j1, fact.size()) {
        return Err(MopError::ValidationFailure("L_1 ⋯ L_d U does not reproduce J_1".into()));
    }
    families_from_factorization(fact, a1)
}

/// Shared tail of the direct and inverse constructions: derives `A^2..A^{d+1}`
/// from `A^1` and validates everything against the factorization.
pub(crate) fn families_from_factorization<T: Scalar>(
    fact: DarbouxFactorization<T>,
    a1: Vec<Poly<T>>,
) -> Result<DarbouxFamilySet<T>> {
    let d = fact.d;
    let m = a1.len() - 1;
    let mut families = vec![a1];
    for j in 1..=d {
        let next = unit_bidiagonal_solve(&fact.l_factors[j - 1], &families[j - 1]);
        families.push(next);
    }
    let pivots = fact.pivots();
    for n in 0..m {
        let mut rhs = families[0][n + 1].clone();
        rhs.add_scaled(&pivots[n], &families[0][n]);
        if families[d][n].shift(1) != rhs {
            return Err(MopError::ValidationFailure(format!("x A^{}_{n} != A^1_{} + u_{n} A^1_{n}", d + 1, n + 1)));
        }
    }
    for (j, fam) in families.iter().enumerate() {
        if let Some(n) = fam.iter().enumerate().position(|(n, p)| p.degree() != Some(n) || !p.is_monic()) {
            return Err(MopError::ValidationFailure(format!("A^{}_{n} is not monic of degree {n}", j + 1)));
        }
    }
    // an empty list when the factors are too short to keep any row
    let jacobi: Vec<BandedMatrix<T>> = if fact.retained() == 0 {
        Vec::new()
    } else {
        (1..=d + 1).map(|j| cyclic_permutation(&fact, j)).collect::<Result<_>>()?
    };
    // The solves give A^j = L_j A^{j+1} exactly and the loop above checked
    // x A^{d+1} = U A^1, so x A^1 = L_1 ⋯ L_d U A^1 = J_1 A^1 on every row
    // below the horizon. The intertwinings carry this over to each J_j.
    if let Some(&j) = intertwining_failures(&fact)?.first() {
        return Err(MopError::ValidationFailure(format!("intertwining relation {j} fails")));
    }
    Ok(DarbouxFamilySet { families, jacobi, factorization: fact })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::recurrence::{to_jacobi, RecurrenceSystem};
    use crate::scalar::{int, Rational};

    fn ints(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| int(x)).collect()
    }

    fn p(c: &[i64]) -> Poly<Rational> {
        Poly::from_coeffs(ints(c))
    }

    fn laguerre_jacobi(n: usize) -> BandedMatrix<Rational> {
        let beta = (0..n as i64).map(|k| int(2 * k + 1)).collect();
        let g0 = (0..n as i64).map(|k| int(k * k)).collect();
        to_jacobi(&RecurrenceSystem::new(1, beta, vec![g0]).unwrap(), n).unwrap()
    }

    #[test]
    fn laguerre_lu() {
        let (l, u) = lu_hessenberg(&laguerre_jacobi(4), 1).unwrap();
        assert_eq!(u.diagonal(0), ints(&[1, 2, 3, 4]));
        assert_eq!(l.diagonal(-1), ints(&[1, 2, 3]));
        assert_eq!(banded_mul(&l, &u).unwrap(), laguerre_jacobi(4));
    }

    #[test]
    fn upper_bidiagonal_input_has_trivial_l() {
        let u = BandedMatrix::unit_upper_bidiagonal(&ints(&[2, 3, 5]));
        let (l, u2) = lu_hessenberg(&u, 2).unwrap();
        assert_eq!(l.to_dense(), BandedMatrix::<Rational>::identity(3).to_dense());
        assert_eq!(u2.to_dense(), u.to_dense());
    }

    #[test]
    fn zero_corner_pivot() {
        let j = BandedMatrix::from_dense(&[ints(&[0, 1]), ints(&[1, 0])], 1, 1);
        assert_eq!(lu_hessenberg(&j, 1), Err(MopError::ZeroPivot(0)));
    }

    #[test]
    fn split_d1_is_identity_map() {
        let (l, _) = lu_hessenberg(&laguerre_jacobi(5), 1).unwrap();
        let f = split_bidiagonals(&l, 1, &[]).unwrap();
        assert_eq!(f, vec![l]);
        assert!(free_parameter_slots(1).is_empty());
    }

    fn two_band_l(n: usize, a: i64, b: i64) -> BandedMatrix<Rational> {
        let mut l = BandedMatrix::zeros(n, 2, 0);
        for i in 0..n {
            l.set(i, i, int(1));
            if i >= 1 {
                l.set(i, i - 1, int(a));
            }
            if i >= 2 {
                l.set(i, i - 2, int(b));
            }
        }
        l
    }

    #[test]
    fn split_d2_all_ones() {
        // a_n = m1_n + m2_n, b_n = m1_n m2_{n-1}; free slot m1_1 = 1
        let f = split_bidiagonals(&two_band_l(6, 2, 1), 2, &[int(1)]).unwrap();
        assert_eq!(f[0].diagonal(-1), ints(&[1; 5]));
        assert_eq!(f[1].diagonal(-1), ints(&[1; 5]));
        assert_eq!(banded_mul(&f[0], &f[1]).unwrap().to_dense(), two_band_l(6, 2, 1).to_dense());
    }

    #[test]
    fn split_d2_degenerate() {
        // a ≡ 1 with m1_1 = 1 forces m2_1 = 0, which row 2 must divide by
        let r = split_bidiagonals(&two_band_l(4, 1, 1), 2, &[int(1)]);
        assert_eq!(r, Err(MopError::DegenerateSplit { n: 2, j: 1 }));
        assert!(matches!(split_bidiagonals(&two_band_l(4, 1, 1), 2, &[]), Err(MopError::LengthMismatch { .. })));
    }

    #[test]
    fn laguerre_cyclic_and_families() {
        let j1 = laguerre_jacobi(6);
        let fact = DarbouxFactorization::new(&j1, 1, &[]).unwrap();
        assert_eq!(cyclic_permutation(&fact, 1).unwrap(), j1.leading(4));
        // J_2 = U L: diagonal u_n + l_{n+1}, subdiagonal u_n l_n, superdiagonal 1
        let j2 = cyclic_permutation(&fact, 2).unwrap();
        assert_eq!(j2.diagonal(0), ints(&[2, 4, 6, 8]));
        assert_eq!(j2.diagonal(-1), ints(&[2, 6, 12]));
        assert_eq!(j2.diagonal(1), ints(&[1, 1, 1]));
        assert!(intertwining_failures(&fact).unwrap().is_empty());

        let set = darboux_families(&j1, 1, 3, &[]).unwrap();
        assert!(family_recurrence_mismatches(&set).unwrap().is_empty());
        assert_eq!(set.families[0][1], p(&[-1, 1]));
        assert_eq!(set.families[0][2], p(&[2, -4, 1]));
        assert_eq!(set.families[1][1], p(&[-2, 1]));
        let trivial = darboux_families(&j1, 1, 0, &[]).unwrap();
        assert!(trivial.families.iter().all(|f| f == &vec![p(&[1])]));
    }
}
