//! Seeded randomized and fixture checks of the main identities, shared by the
//! integration tests and the command-line `verify` command.
//!
//! Every check is exact except the floating-point series comparison.

use std::time::{Duration, Instant};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::banded::banded_mul;
use crate::darboux::{intertwining_failures, lu_hessenberg, DarbouxFactorization};
use crate::dense::Mat;
use crate::error::{MopError, Result};
use crate::matpoly::MatrixPoly;
use crate::matrix_mop::{
    coefficient_cascade, favard_blocks, favard_moments, favard_orthogonality, group3_wn, verify_w_recurrence, FourTermRecurrence,
};
use crate::moments::{
    check_symmetric_moment_relations, delta_chain_failures, moments_from_jacobi, orthogonality_report, Normalization,
};
use crate::poly::Poly;
use crate::recurrence::{from_jacobi, generate_symmetric, is_d_symmetric, to_jacobi, RecurrenceSystem, SymmetricRecurrence};
use crate::scalar::{int, Rational};
use crate::symmetrize::{desymmetrize, interleave, symmetrize_direct};
use crate::weyl::{block_shape, eval_series, residue_decomposition, weyl_coefficients, BlockShape, PatternStatus};

pub const DEFAULT_SEED: u64 = 0x6d6f_7073;

#[derive(Clone, Debug)]
pub struct CriterionOutcome {
    pub id: u8,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub elapsed: Duration,
}

impl CriterionOutcome {
    /// One status line, e.g. `PASS [3] factorization identities: ...`.
    pub fn line(&self) -> String {
        format!(
            "{} [{}] {}: {} ({:.2}s)",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.detail,
            self.elapsed.as_secs_f64()
        )
    }
}

pub const CRITERIA: [(u8, &str); 10] = [
    (1, "symmetrization round trip"),
    (2, "direct symmetrization validity"),
    (3, "factorization identities"),
    (4, "orthogonality pipeline"),
    (5, "symmetric moment relations"),
    (6, "Weyl block sparsity"),
    (7, "Weyl series numerics"),
    (8, "matrix recurrence and Favard blocks"),
    (9, "hand fixtures"),
    (10, "full suite runtime"),
];

/// Nonzero rational with numerator and denominator of absolute value ≤ 9.
pub fn random_nonzero(rng: &mut impl Rng) -> Rational {
    let num: i64 = rng.gen_range(1..=9) * if rng.gen_bool(0.5) { 1 } else { -1 };
    Rational::new(num.into(), rng.gen_range(1..=9i64).into())
}

/// Positive rational with numerator and denominator in `1..=9`.
pub fn random_positive(rng: &mut impl Rng) -> Rational {
    Rational::new(rng.gen_range(1..=9i64).into(), rng.gen_range(1..=9i64).into())
}

pub fn random_symmetric(rng: &mut impl Rng, d: usize, len: usize, positive: bool) -> SymmetricRecurrence<Rational> {
    let gamma = (0..len).map(|_| if positive { random_positive(rng) } else { random_nonzero(rng) }).collect();
    SymmetricRecurrence { d, gamma }
}

/// Random system with `n` rows; every stored coefficient is nonzero.
pub fn random_system(rng: &mut impl Rng, d: usize, n: usize) -> RecurrenceSystem<Rational> {
    let beta = (0..n).map(|_| random_nonzero(rng)).collect();
    let gamma = (0..d).map(|_| (0..n).map(|_| random_nonzero(rng)).collect()).collect();
    RecurrenceSystem { d, beta, gamma }
}

/// Random upper triangular `d × d` matrix with nonzero diagonal.
pub fn random_v00(rng: &mut impl Rng, d: usize) -> Normalization<Rational> {
    let m = Mat::from_fn(d, d, |i, j| match i.cmp(&j) {
        std::cmp::Ordering::Greater => int(0),
        std::cmp::Ordering::Equal => random_nonzero(rng),
        std::cmp::Ordering::Less => Rational::new(rng.gen_range(-9..=9i64).into(), rng.gen_range(1..=9i64).into()),
    });
    Normalization::new(m).expect("diagonal is nonzero")
}

fn rng_for(seed: u64, id: u8) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed ^ (u64::from(id) << 56))
}

/// Random systems whose Jacobi section admits the default-parameter
/// factorization; degenerate draws are skipped.
fn admissible_systems(rng: &mut impl Rng, d: usize, count: usize, n: usize) -> (Vec<RecurrenceSystem<Rational>>, usize) {
    let mut out = Vec::with_capacity(count);
    let mut retries = 0;
    while out.len() < count {
        let rs = random_system(rng, d, n);
        let j = to_jacobi(&rs, n).expect("coefficients cover the section");
        match DarbouxFactorization::new(&j, d, &vec![int(0); d * (d - 1) / 2]) {
            Ok(_) => out.push(rs),
            Err(e) if e.is_degeneracy() => retries += 1,
            Err(e) => panic!("unexpected error while drawing systems: {e}"),
        }
    }
    (out, retries)
}

fn outcome(id: u8, start: Instant, result: Result<(bool, String)>) -> CriterionOutcome {
    let name = CRITERIA[usize::from(id) - 1].1;
    let (passed, detail) = match result {
        Ok(v) => v,
        Err(e) => (false, format!("error: {e}")),
    };
    CriterionOutcome { id, name, passed, detail, elapsed: start.elapsed() }
}

pub fn symmetrization_round_trip(seed: u64) -> CriterionOutcome {
    let start = Instant::now();
    let run = || -> Result<(bool, String)> {
        let mut rng = rng_for(seed, 1);
        let m = 40;
        let mut bad = Vec::new();
        for d in 1..=3 {
            for i in 0..25 {
                let sr = random_symmetric(&mut rng, d, (d + 1) * (m + d + 1) + 1, false);
                let set = desymmetrize(&sr, m)?;
                let s = interleave(&set.families, d)?;
                let rs = from_jacobi(&set.jacobi[0], d)?;
                let free = set.factorization.free_params.clone();
                let back = symmetrize_direct(&rs, m, &free)?;
                let gamma_ok = back.sr.gamma[..] == sr.gamma[..(d + 1) * m + 1];
                // desymmetrize already matched every family to the residue classes of S
                if back.s != s || !gamma_ok {
                    bad.push(format!("d={d}#{i}"));
                }
            }
        }
        Ok((bad.is_empty(), format!("75 instances, M=40, mismatches: {bad:?}")))
    };
    let mut o = outcome(1, start, run());
    if o.elapsed > Duration::from_secs(10) {
        o.passed = false;
        o.detail.push_str(" (over the 10 s budget)");
    }
    o
}

/// S must start with `1, x, …, x^d` and satisfy the symmetric recurrence.
fn symmetric_family_ok(s: &[Poly<Rational>], sr: &SymmetricRecurrence<Rational>) -> Result<bool> {
    let d = sr.d;
    let start = (0..=d).all(|n| s[n] == Poly::monomial(n, int(1)));
    Ok(start && is_d_symmetric(s, d).is_symmetric() && generate_symmetric(sr, s.len() - 1)? == s)
}

pub fn direct_symmetrization(seed: u64) -> CriterionOutcome {
    let start = Instant::now();
    let run = || -> Result<(bool, String)> {
        let mut rng = rng_for(seed, 2);
        let n = 40;
        let mut bad = Vec::new();
        let mut retries = 0;
        let mut warnings = 0;
        for d in 1..=3 {
            let (systems, r) = admissible_systems(&mut rng, d, 25, n);
            retries += r;
            for (i, rs) in systems.iter().enumerate() {
                let out = symmetrize_direct(rs, n - 1, &vec![int(0); d * (d - 1) / 2])?;
                warnings += usize::from(out.regularity_warning.is_some());
                if !symmetric_family_ok(&out.s, &out.sr)? {
                    bad.push(format!("d={d}#{i}"));
                }
            }
        }
        Ok((
            bad.is_empty(),
            format!("75 instances, N=40, degenerate redraws: {retries}, zero-γ warnings: {warnings}, failures: {bad:?}"),
        ))
    };
    outcome(2, start, run())
}

pub fn factorization_identities(seed: u64) -> CriterionOutcome {
    let start = Instant::now();
    let run = || -> Result<(bool, String)> {
        // same draws as the direct symmetrization check
        let mut rng = rng_for(seed, 2);
        let n = 40;
        let mut bad = Vec::new();
        for d in 1..=3 {
            let (systems, _) = admissible_systems(&mut rng, d, 25, n);
            for (i, rs) in systems.iter().enumerate() {
                let j1 = to_jacobi(rs, n)?;
                let (l, u) = lu_hessenberg(&j1, d)?;
                let fact = DarbouxFactorization::new(&j1, d, &vec![int(0); d * (d - 1) / 2])?;
                let lu_ok = banded_mul(&l, &u)?.to_dense() == j1.to_dense();
                let split_ok = fact.lower_product()?.to_dense() == l.to_dense();
                let inter = intertwining_failures(&fact)?;
                if !(lu_ok && split_ok && inter.is_empty()) {
                    bad.push(format!("d={d}#{i}: LU {lu_ok}, split {split_ok}, intertwining {inter:?}"));
                }
            }
        }
        Ok((bad.is_empty(), format!("75 instances, failures: {bad:?}")))
    };
    outcome(3, start, run())
}

pub fn orthogonality_pipeline(seed: u64) -> CriterionOutcome {
    let start = Instant::now();
    let run = || -> Result<(bool, String)> {
        let mut rng = rng_for(seed, 4);
        let n_max = 8;
        let mut bad = Vec::new();
        for d in 2..=3 {
            for i in 0..10 {
                let k = n_max * (d + 1);
                let size = k + d + 1;
                let rs = random_system(&mut rng, d, size);
                let j = to_jacobi(&rs, size)?;
                let table = moments_from_jacobi(&j, d, &Normalization::identity(d), k)?;
                let polys = crate::recurrence::generate_type2(&rs, n_max * d + d - 1)?;
                let rep = orthogonality_report(&table, &polys, n_max)?;
                if !rep.passed() {
                    bad.push(format!("d={d}#{i}: {} violations", rep.violations.len()));
                }
            }
        }
        Ok((bad.is_empty(), format!("20 general instances, n ≤ 8, failures: {bad:?}")))
    };
    outcome(4, start, run())
}

pub fn symmetric_moment_relations(seed: u64) -> CriterionOutcome {
    let start = Instant::now();
    let run = || -> Result<(bool, String)> {
        let mut rng = rng_for(seed, 5);
        let n_max = 8;
        let mut bad = Vec::new();
        let mut checked = 0;
        for d in 2..=3 {
            for i in 0..5 {
                let k = (d + 1) * n_max + 1;
                let size = k + d + 1;
                let sr = random_symmetric(&mut rng, d, size + d, true);
                let j = to_jacobi(&sr.to_system(), size)?;
                let s = generate_symmetric(&sr, n_max * d + d - 1)?;
                for v in 0..5 {
                    let norm = random_v00(&mut rng, d);
                    let table = moments_from_jacobi(&j, d, &norm, k)?;
                    let rep = check_symmetric_moment_relations(&table, &norm, n_max)?;
                    checked += rep.checked;
                    let chain = delta_chain_failures(&table, &sr, &s, &norm, n_max)?;
                    if !rep.passed() || !chain.is_empty() {
                        bad.push(format!("d={d}#{i}/V{v}: {:?} chain {chain:?}", rep.violations.first()));
                    }
                }
            }
        }
        Ok((bad.is_empty(), format!("50 (instance, V00) pairs, {checked} relations, failures: {bad:?}")))
    };
    outcome(5, start, run())
}

pub fn weyl_sparsity(seed: u64) -> CriterionOutcome {
    let start = Instant::now();
    let run = || -> Result<(bool, String)> {
        let mut rng = rng_for(seed, 6);
        let k = 30;
        let mut bad = Vec::new();
        for d in 2..=4 {
            for i in 0..5 {
                let size = k + d + 1;
                let sr = random_symmetric(&mut rng, d, size + d, false);
                let w = weyl_coefficients(&to_jacobi(&sr.to_system(), size)?, d, k)?;
                let dec = residue_decomposition(&w);
                if dec.patterns.iter().any(|p| *p != PatternStatus::Holds) {
                    bad.push(format!("d={d}#{i}: {:?}", dec.patterns));
                }
                if d == 2 {
                    let expected = [BlockShape::Diagonal, BlockShape::StrictlyUpper, BlockShape::StrictlyLower];
                    for (m, b) in w.blocks.iter().enumerate() {
                        let shape = block_shape(b);
                        if shape != expected[m % 3] && shape != BlockShape::Zero {
                            bad.push(format!("d=2#{i}: block {m} is {shape:?}"));
                        }
                    }
                }
            }
        }
        Ok((bad.is_empty(), format!("15 instances, blocks m ≤ 30, failures: {bad:?}")))
    };
    outcome(6, start, run())
}

/// Entrywise `|a − b|` maximum.
fn max_diff(a: &[Vec<Complex64>], b: &[Vec<Complex64>]) -> f64 {
    a.iter().zip(b).flat_map(|(r, s)| r.iter().zip(s).map(|(x, y)| (x - y).norm())).fold(0.0, f64::max)
}

pub fn weyl_numerics(_seed: u64) -> CriterionOutcome {
    let start = Instant::now();
    let run = || -> Result<(bool, String)> {
        let d = 2;
        let sr = SymmetricRecurrence::new(d, vec![int(1); 200])?;
        let j = to_jacobi(&sr.to_system(), 170)?;
        let bound = j.leading(160).max_abs_row_sum();
        let z = Complex64::new(3.0, 0.0);
        let w160 = weyl_coefficients(&j, d, 160)?;
        let eval = |k: usize| {
            let mut w = w160.clone();
            w.blocks.truncate(k + 1);
            eval_series(&w, z, &bound)
        };
        let (v40, t40) = eval(40)?;
        let (v80, t80) = eval(80)?;
        let (v160, _) = eval(160)?;
        let d40 = max_diff(&v40, &v80);
        let d80 = max_diff(&v80, &v160);
        let passed = d40 < 1e-12 && d40 <= t40 && d80 <= t80;
        Ok((
            passed,
            format!(
                "norm bound {bound}, |eval40 − eval80| = {d40:.3e} (target < 1e-12, tail bound {t40:.3e}), |eval80 − eval160| = {d80:.3e} (tail bound {t80:.3e})"
            ),
        ))
    };
    outcome(7, start, run())
}

fn ftr_checks(f: &FourTermRecurrence<Rational>) -> Result<Vec<String>> {
    let mut bad = Vec::new();
    let n_fav = 6;
    let cascade_max = 2 * (2 * n_fav) + 1;
    let cc = coefficient_cascade(f, cascade_max)?;
    let polys = f.polynomials(3 * 12 + 2)?;
    let w = group3_wn(&polys, 12)?;
    let rep = verify_w_recurrence(&w, &cc, 2..=10)?;
    if !rep.failures().is_empty() {
        bad.push(format!("W recurrence fails at {:?}", rep.failures()));
    }
    if !cc.a2.iter().all(|a| a.is_lower_triangular() && a.has_unit_diagonal()) || !cc.d2.iter().all(Mat::is_upper_triangular) {
        bad.push("cascade structure".into());
    }
    let fb = favard_blocks(&cc, 2 * n_fav)?;
    let mk = favard_moments(&fb, 2)?;
    let m0 = &fb.c[0];
    if mk[1] != &fb.b[0] * m0 || mk[2] != &(&(&fb.b[0] * &fb.b[0]) + &(&fb.a[0] * &fb.c[1])) * m0 {
        bad.push("moment closed forms".into());
    }
    let orth = favard_orthogonality(&fb, n_fav)?;
    if !orth.passed() {
        bad.push(format!("Favard orthogonality: below-diagonal {:?}", orth.nonzero_below));
    }
    Ok(bad)
}

pub fn matrix_recurrence(seed: u64) -> CriterionOutcome {
    let start = Instant::now();
    let run = || -> Result<(bool, String)> {
        let mut rng = rng_for(seed, 8);
        let len = 3 * 26 + 6;
        let mut bad = Vec::new();
        let ones = FourTermRecurrence::new(vec![int(0); len], vec![int(0); len], vec![int(1); len]);
        for e in ftr_checks(&ones)? {
            bad.push(format!("γ≡1: {e}"));
        }
        for i in 0..10 {
            let mut v = || (0..len).map(|_| random_nonzero(&mut rng)).collect::<Vec<_>>();
            let f = FourTermRecurrence::new(v(), v(), v());
            for e in ftr_checks(&f)? {
                bad.push(format!("#{i}: {e}"));
            }
        }
        Ok((bad.is_empty(), format!("10 random + γ≡1, W recurrence n = 2..10, Favard n, k ≤ 6, failures: {bad:?}")))
    };
    outcome(8, start, run())
}

fn poly(c: &[i64]) -> Poly<Rational> {
    Poly::from_coeffs(c.iter().map(|&v| int(v)).collect())
}

pub fn hand_fixtures(_seed: u64) -> CriterionOutcome {
    let start = Instant::now();
    let run = || -> Result<(bool, String)> {
        let mut bad = Vec::new();
        let sr = SymmetricRecurrence::new(2, vec![int(1); 40])?;
        let s = generate_symmetric(&sr, 11)?;
        if s[3] != poly(&[-1, 0, 0, 1]) || s[6] != poly(&[1, 0, 0, -4, 0, 0, 1]) {
            bad.push("S_3 / S_6".to_string());
        }
        let set = desymmetrize(&sr, 2)?;
        if set.families[0] != vec![poly(&[1]), poly(&[-1, 1]), poly(&[1, -4, 1])] {
            bad.push("A^1".into());
        }
        let w = group3_wn(&s, 1)?;
        if w[1] != MatrixPoly::diag(vec![poly(&[-1, 1]), poly(&[-2, 1]), poly(&[-3, 1])]) {
            bad.push("W_1".into());
        }
        let n = 5;
        let rs = RecurrenceSystem::new(1, (0..n).map(|k| int(2 * k + 1)).collect(), vec![(0..n).map(|k| int(k * k)).collect()])?;
        let (l, u) = lu_hessenberg(&to_jacobi(&rs, 4)?, 1)?;
        if u.diagonal(0) != [1, 2, 3, 4].map(int) || l.diagonal(-1) != [1, 2, 3].map(int) {
            bad.push("Laguerre LU".into());
        }
        let out = symmetrize_direct(&rs, 3, &[])?;
        if out.s[2] != poly(&[-1, 0, 1]) || out.s[3] != poly(&[0, -2, 0, 1]) {
            bad.push("Laguerre S_2 / S_3".into());
        }
        Ok((bad.is_empty(), format!("d=2 γ≡1 and d=1 Laguerre fixtures, mismatches: {bad:?}")))
    };
    outcome(9, start, run())
}

/// Runs criteria 1–9 and appends the runtime criterion.
pub fn run_all(seed: u64) -> Vec<CriterionOutcome> {
    let start = Instant::now();
    let mut out: Vec<CriterionOutcome> = (1..=9).map(|id| run_criterion(id, seed).expect("ids 1..=9 exist")).collect();
    let total = start.elapsed();
    out.push(CriterionOutcome {
        id: 10,
        name: CRITERIA[9].1,
        passed: total < Duration::from_secs(120),
        detail: format!("criteria 1–9 took {:.2}s (budget 120 s)", total.as_secs_f64()),
        elapsed: total,
    });
    out
}

/// Runs one criterion; `10` runs the whole suite and reports its runtime.
pub fn run_criterion(id: u8, seed: u64) -> Result<CriterionOutcome> {
    Ok(match id {
        1 => symmetrization_round_trip(seed),
        2 => direct_symmetrization(seed),
        3 => factorization_identities(seed),
        4 => orthogonality_pipeline(seed),
        5 => symmetric_moment_relations(seed),
        6 => weyl_sparsity(seed),
        7 => weyl_numerics(seed),
        8 => matrix_recurrence(seed),
        9 => hand_fixtures(seed),
        10 => run_all(seed).pop().expect("runtime entry"),
        _ => return Err(MopError::InvalidArgument(format!("no criterion {id}"))),
    })
}
