//! Moments of the vector of functionals attached to a Hessenberg matrix, the
//! block Hankel regularity test, type II orthogonality checks and the
//! relations between moments of a d-symmetric vector of functionals.
//!
//! The functionals `u^1..u^d` are fixed by the normalization
//! `V00(l, c) = u^{c+1}(P_l)` for `l < d`; every `u^j` annihilates `P_l` for
//! `l ≥ d`. With `B_k = [J^k]_{11} V00` this gives
//! `B_k(r, c) = u^{c+1}(x^k P_r)`, from which the scalar moments follow.

use crate::banded::BandedMatrix;
use crate::dense::Mat;
use crate::error::{MopError, Result};
use crate::poly::Poly;
use crate::recurrence::{from_jacobi, generate_type2, SymmetricRecurrence};
use crate::scalar::Scalar;
use crate::weyl::leading_power_blocks;

/// `V00`: upper triangular with nonzero diagonal.
#[derive(Clone, Debug, PartialEq)]
pub struct Normalization<T> {
    d: usize,
    v00: Mat<T>,
}

impl<T: Scalar> Normalization<T> {
    pub fn new(v00: Mat<T>) -> Result<Self> {
        if !v00.is_square() {
            return Err(MopError::ValidationFailure("V00 must be square".into()));
        }
        if !v00.is_upper_triangular() {
            return Err(MopError::ValidationFailure("V00 must be upper triangular".into()));
        }
        if !v00.has_nonzero_diagonal() {
            return Err(MopError::ValidationFailure("V00 must have a nonzero diagonal".into()));
        }
        Ok(Normalization { d: v00.rows(), v00 })
    }

    pub fn identity(d: usize) -> Self {
        Normalization { d, v00: Mat::identity(d) }
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn v00(&self) -> &Mat<T> {
        &self.v00
    }

    /// `v_{k,l} = v^k(S_l) = V00(l, k−1)`.
    pub fn v(&self, k: usize, l: usize) -> T {
        self.v00[(l, k - 1)].clone()
    }
}

/// `G_0 = V00ᵀ`, the lower triangular matrix with `v^j = Σ_i v_{j,i} ℓ_i`.
pub fn g0_from_v00<T: Scalar>(norm: &Normalization<T>) -> Mat<T> {
    let g = norm.v00.transpose();
    debug_assert!(g.is_lower_triangular() && g.has_nonzero_diagonal());
    g
}

/// Scalar moments `u^c(x^p)`, `c = 1..=d`, `p = 0..=max_power`.
#[derive(Clone, Debug, PartialEq)]
pub struct MomentTable<T> {
    pub d: usize,
    /// `moments[c-1][p] = u^c(x^p)`.
    pub moments: Vec<Vec<T>>,
    /// `B_k = [J^k]_{11} V00` for the `k` the table was built from.
    pub blocks: Vec<Mat<T>>,
}

impl<T: Scalar> MomentTable<T> {
    /// A table from raw moment lists (one per functional, equal lengths).
    pub fn from_moments(moments: Vec<Vec<T>>) -> Result<Self> {
        let d = moments.len();
        if d == 0 {
            return Err(MopError::InvalidArgument("moment table needs at least one functional".into()));
        }
        let len = moments[0].len();
        if let Some(m) = moments.iter().find(|m| m.len() != len) {
            return Err(MopError::LengthMismatch { expected: len, found: m.len() });
        }
        Ok(MomentTable { d, moments, blocks: Vec::new() })
    }

    /// Number of stored powers per functional.
    pub fn len(&self) -> usize {
        self.moments[0].len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// `u^c(x^p)`, `c ≥ 1`.
    pub fn get(&self, c: usize, p: usize) -> Option<&T> {
        c.checked_sub(1).and_then(|i| self.moments.get(i)).and_then(|m| m.get(p))
    }

    fn require(&self, highest: usize) -> Result<()> {
        if highest >= self.len() {
            return Err(MopError::InsufficientMoments { needed: highest + 1, available: self.len() });
        }
        Ok(())
    }

    /// `u^c(p)` for a polynomial of degree below the table length.
    pub fn apply(&self, c: usize, p: &Poly<T>) -> T {
        p.coeffs().iter().enumerate().fold(T::zero(), |acc, (e, a)| acc + a.clone() * self.moments[c - 1][e].clone())
    }
}

/// Moments `u^c(x^p)` for `p = 0..=K+d−1`.
///
/// `u(x^{k+r})` is recovered from `B_k(r, ·)` through the triangular change of
/// basis between `P_0..P_{d−1}` and `1..x^{d−1}`. Each power is computed from
/// one split `k + r`; all other splits must agree exactly.
pub fn moments_from_jacobi<T: Scalar>(
    j: &BandedMatrix<T>,
    d: usize,
    norm: &Normalization<T>,
    k_max: usize,
) -> Result<MomentTable<T>> {
    if norm.d != d {
        return Err(MopError::LengthMismatch { expected: d, found: norm.d });
    }
    if let Some(row) = (d..(k_max + d + 1).min(j.size())).find(|&i| j.get(i, i - d).is_zero()) {
        return Err(MopError::ValidationFailure(format!("irregular matrix: zero outermost subdiagonal entry in row {row}")));
    }
    let blocks: Vec<Mat<T>> = leading_power_blocks(j, d, k_max)?.iter().map(|b| b * &norm.v00).collect();
    let basis = generate_type2(&from_jacobi(&j.leading(d.min(j.size())), d)?, d - 1)?;
    let top = k_max + d - 1;
    let mut moments = vec![vec![T::zero(); top + 1]; d];
    for p in 0..=top {
        let k = p.min(k_max);
        let r = p - k;
        for (c, row) in moments.iter_mut().enumerate() {
            let lower = (0..r).fold(T::zero(), |acc, s| acc + basis[r].coeff(s) * row[k + s].clone());
            row[p] = blocks[k][(r, c)].clone() - lower;
        }
    }
    for (k, b) in blocks.iter().enumerate() {
        for r in 0..d {
            for (c, row) in moments.iter().enumerate() {
                let predicted = (0..=r).fold(T::zero(), |acc, s| acc + basis[r].coeff(s) * row[k + s].clone());
                if predicted != b[(r, c)] {
                    return Err(MopError::OverlapInconsistency { functional: c + 1, power: k + r });
                }
            }
        }
    }
    Ok(MomentTable { d, moments, blocks })
}

/// `(x^k U)(P_n)`: entry `(r, c) = u^{c+1}(x^k P_{nd+r})`.
pub fn vector_moment<T: Scalar>(table: &MomentTable<T>, polys: &[Poly<T>], n: usize, k: usize) -> Result<Mat<T>> {
    let d = table.d;
    let last = n * d + d - 1;
    if last >= polys.len() {
        return Err(MopError::IndexOutOfRange { index: last, len: polys.len() });
    }
    let highest = (0..d).filter_map(|r| polys[n * d + r].degree()).max().unwrap_or(0) + k;
    table.require(highest)?;
    Ok(Mat::from_fn(d, d, |r, c| table.apply(c + 1, &polys[n * d + r].shift(k))))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrthogonalityViolation {
    pub n: usize,
    pub k: usize,
    pub row: usize,
    pub col: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct OrthogonalityReport<T> {
    pub n_max: usize,
    /// Nonzero entries of `(x^k U)(P_n)` with `k < n`.
    pub violations: Vec<OrthogonalityViolation>,
    /// `Δ_n = (x^n U)(P_n)`.
    pub deltas: Vec<Mat<T>>,
    /// `Δ_n` upper triangular with nonzero diagonal.
    pub delta_regular: Vec<bool>,
}

impl<T> OrthogonalityReport<T> {
    pub fn passed(&self) -> bool {
        self.violations.is_empty() && self.delta_regular.iter().all(|&b| b)
    }
}

/// Type II orthogonality of `P_0..` against the table: `(x^k U)(P_n) = 0` for
/// `k < n ≤ n_max`, and `Δ_n` regular upper triangular.
pub fn orthogonality_report<T: Scalar>(
    table: &MomentTable<T>,
    polys: &[Poly<T>],
    n_max: usize,
) -> Result<OrthogonalityReport<T>> {
    let d = table.d;
    table.require(n_max * (d + 1) + d - 1)?;
    let mut violations = Vec::new();
    let mut deltas = Vec::with_capacity(n_max + 1);
    for n in 0..=n_max {
        for k in 0..n {
            let m = vector_moment(table, polys, n, k)?;
            for r in 0..d {
                for c in 0..d {
                    if !m[(r, c)].is_zero() {
                        violations.push(OrthogonalityViolation { n, k, row: r, col: c });
                    }
                }
            }
        }
        deltas.push(vector_moment(table, polys, n, n)?);
    }
    let delta_regular = deltas.iter().map(|m| m.is_upper_triangular() && m.has_nonzero_diagonal()).collect();
    Ok(OrthogonalityReport { n_max, violations, deltas, delta_regular })
}

#[derive(Clone, Debug, PartialEq)]
pub struct HankelBlock<T> {
    pub n: usize,
    pub d: usize,
    /// Row `p`, column `kd + c` holds `u^{c+1}(x^{p+k})`.
    pub matrix: Mat<T>,
}

/// Builds `H_n` (size `d(n+1)`) and tests all leading principal minors.
pub fn hankel_regularity<T: Scalar>(table: &MomentTable<T>, n: usize) -> Result<(HankelBlock<T>, bool)> {
    let d = table.d;
    let size = d * (n + 1);
    table.require(size - 1 + n)?;
    let matrix = Mat::from_fn(size, size, |p, col| table.moments[col % d][p + col / d].clone());
    let regular = matrix.leading_principal_minors().iter().all(|m| !m.is_zero());
    Ok((HankelBlock { n, d, matrix }, regular))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MomentRelation {
    /// `v^j(x^{(d+1)n+μ}) = (v_{j,μ}/v_{μ+1,μ}) v^{μ+1}(x^{(d+1)n+μ})`, `μ ≤ j−2`.
    Proportional,
    /// `v^j(x^{(d+1)n+j−1}) ≠ 0`.
    Nonvanishing,
    /// `v^j(x^{(d+1)n+μ}) = 0`, `μ = j..d`.
    Vanishing,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelationViolation {
    pub statement: MomentRelation,
    pub n: usize,
    pub j: usize,
    pub mu: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct SymmetricMomentReport {
    pub checked: usize,
    pub violations: Vec<RelationViolation>,
}

impl SymmetricMomentReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// The moment relations of a d-symmetric vector of functionals, for every
/// `n ≤ n_max` and `j = 1..=d`.
pub fn check_symmetric_moment_relations<T: Scalar>(
    table: &MomentTable<T>,
    norm: &Normalization<T>,
    n_max: usize,
) -> Result<SymmetricMomentReport> {
    let d = table.d;
    table.require((d + 1) * n_max + d)?;
    let mut report = SymmetricMomentReport::default();
    let mom = |c: usize, p: usize| table.moments[c - 1][p].clone();
    for n in 0..=n_max {
        let base = (d + 1) * n;
        for j in 1..=d {
            for mu in 0..=d {
                report.checked += 1;
                let value = mom(j, base + mu);
                let (statement, ok) = if mu >= j {
                    (MomentRelation::Vanishing, value.is_zero())
                } else if mu + 1 == j {
                    (MomentRelation::Nonvanishing, !value.is_zero())
                } else {
                    let ratio = norm.v(j, mu) / norm.v(mu + 1, mu);
                    (MomentRelation::Proportional, value == ratio * mom(mu + 1, base + mu))
                };
                if !ok {
                    report.violations.push(RelationViolation { statement, n, j, mu });
                }
            }
        }
    }
    Ok(report)
}

/// Checks `Δ_n = C_n ⋯ C_1 V00` with `C_n = diag(γ_{(n−1)d+1}, …, γ_{nd})` for
/// the symmetric family `S` of `sr`; returns the failing `n`.
pub fn delta_chain_failures<T: Scalar>(
    table: &MomentTable<T>,
    sr: &SymmetricRecurrence<T>,
    s: &[Poly<T>],
    norm: &Normalization<T>,
    n_max: usize,
) -> Result<Vec<usize>> {
    let d = table.d;
    let mut chain = norm.v00.clone();
    let mut failures = Vec::new();
    for n in 0..=n_max {
        if n > 0 {
            let c = Mat::from_fn(d, d, |r, col| {
                if r == col {
                    sr.gamma((n - 1) * d + r + 1).cloned().unwrap_or_else(T::zero)
                } else {
                    T::zero()
                }
            });
            chain = &c * &chain;
        }
        if vector_moment(table, s, n, n)? != chain {
            failures.push(n);
        }
    }
    Ok(failures)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::recurrence::{generate_symmetric, generate_type2, to_jacobi, RecurrenceSystem};
    use crate::scalar::{int, Rational};

    fn m(rows: &[&[i64]]) -> Mat<Rational> {
        Mat::from_rows(rows.iter().map(|r| r.iter().map(|&v| int(v)).collect()).collect())
    }

    fn ones(d: usize) -> SymmetricRecurrence<Rational> {
        SymmetricRecurrence::new(d, vec![int(1); 80]).unwrap()
    }

    fn ones_table(d: usize, k: usize, norm: &Normalization<Rational>) -> MomentTable<Rational> {
        let j = to_jacobi(&ones(d).to_system(), k + d + 1).unwrap();
        moments_from_jacobi(&j, d, norm, k).unwrap()
    }

    #[test]
    fn d2_ones_moments() {
        let t = ones_table(2, 6, &Normalization::identity(2));
        assert_eq!(t.blocks[0], Mat::identity(2));
        assert_eq!(t.get(1, 3), Some(&int(1)));
        assert_eq!(t.get(2, 4), Some(&int(2)));
        assert_eq!(t.get(1, 1), Some(&int(0)));
        assert_eq!(t.get(2, 2), Some(&int(0)));
        assert_eq!(t.get(2, 1), Some(&int(1)));
    }

    #[test]
    fn laguerre_moments_are_factorials() {
        let n = 12;
        let rs = RecurrenceSystem::new(1, (0..n).map(|k| int(2 * k + 1)).collect(), vec![(0..n).map(|k| int(k * k)).collect()])
            .unwrap();
        let j = to_jacobi(&rs, n as usize).unwrap();
        let t = moments_from_jacobi(&j, 1, &Normalization::identity(1), 10).unwrap();
        let mut f = int(1);
        for p in 0..=10 {
            assert_eq!(t.moments[0][p], f);
            f *= int(p as i64 + 1);
        }
        let (h, regular) = hankel_regularity(&t, 3).unwrap();
        assert!(regular);
        assert_eq!(h.matrix.rows(), 4);
        let polys = generate_type2(&rs, 8).unwrap();
        assert!(orthogonality_report(&t, &polys, 4).unwrap().passed());
    }

    #[test]
    fn nonsymmetric_overlap_is_consistent() {
        let n = 20;
        let rs = RecurrenceSystem::new(
            2,
            (0..n).map(|k| int(k % 3 + 1)).collect(),
            vec![(0..n).map(|k| int(k % 2 + 1)).collect(), (0..n).map(|k| int(-(k % 4) - 1)).collect()],
        )
        .unwrap();
        let j = to_jacobi(&rs, n as usize).unwrap();
        let norm = Normalization::new(m(&[&[2, 1], &[0, 3]])).unwrap();
        let t = moments_from_jacobi(&j, 2, &norm, 15).unwrap();
        let polys = generate_type2(&rs, 14).unwrap();
        let rep = orthogonality_report(&t, &polys, 4).unwrap();
        assert!(rep.violations.is_empty());
        assert_eq!(rep.deltas[0], *norm.v00());
        // a non-symmetric source breaks the vanishing statement
        let relations = check_symmetric_moment_relations(&t, &norm, 3).unwrap();
        assert!(relations.violations.iter().any(|v| v.statement == MomentRelation::Vanishing));
    }

    #[test]
    fn orthogonality_and_negative_control() {
        let norm = Normalization::identity(2);
        let mut t = ones_table(2, 20, &norm);
        let s = generate_symmetric(&ones(2), 20).unwrap();
        let rep = orthogonality_report(&t, &s, 4).unwrap();
        assert!(rep.passed());
        assert_eq!(rep.deltas[0], Mat::identity(2));
        assert_eq!(vector_moment(&t, &s, 1, 0).unwrap(), Mat::zeros(2, 2));
        t.moments[0][2] = int(5);
        let bad = orthogonality_report(&t, &s, 4).unwrap();
        assert_eq!((bad.violations[0].n, bad.violations[0].k), (1, 0));
        assert!(matches!(orthogonality_report(&t, &s, 9), Err(MopError::InsufficientMoments { .. })));
    }

    #[test]
    fn hankel_examples() {
        let t = ones_table(2, 6, &Normalization::identity(2));
        let (h0, r0) = hankel_regularity(&t, 0).unwrap();
        assert_eq!(h0.matrix, Mat::identity(2));
        assert!(r0);
        let (h1, r1) = hankel_regularity(&t, 1).unwrap();
        assert_eq!(h1.matrix.leading_principal_minors(), vec![int(1); 4]);
        assert!(r1);
        let zero_col = MomentTable::from_moments(vec![vec![int(1); 8], vec![int(0); 8]]).unwrap();
        assert!(!hankel_regularity(&zero_col, 1).unwrap().1);
    }

    #[test]
    fn symmetric_relations_hold() {
        let norm = Normalization::identity(2);
        let t = ones_table(2, 30, &norm);
        let rep = check_symmetric_moment_relations(&t, &norm, 4).unwrap();
        assert!(rep.passed(), "{:?}", rep.violations);
        for n in 0..=4 {
            assert_eq!(t.moments[0][3 * n + 1], int(0));
            assert_eq!(t.moments[0][3 * n + 2], int(0));
        }
        let norm = Normalization::new(m(&[&[1, 1], &[0, 1]])).unwrap();
        let t = ones_table(2, 30, &norm);
        assert!(check_symmetric_moment_relations(&t, &norm, 4).unwrap().passed());
        for n in 0..=4 {
            assert_eq!(t.moments[1][3 * n], t.moments[0][3 * n]);
        }
        let s = generate_symmetric(&ones(2), 20).unwrap();
        assert!(delta_chain_failures(&t, &ones(2), &s, &norm, 5).unwrap().is_empty());
    }

    #[test]
    fn g0_is_transpose() {
        assert_eq!(g0_from_v00(&Normalization::<Rational>::identity(3)), Mat::identity(3));
        let n = Normalization::new(m(&[&[1, 2], &[0, 3]])).unwrap();
        assert_eq!(g0_from_v00(&n), m(&[&[1, 0], &[2, 3]]));
        assert!(Normalization::new(m(&[&[1, 0], &[1, 1]])).is_err());
        assert!(Normalization::new(m(&[&[0, 1], &[0, 1]])).is_err());
    }
}
