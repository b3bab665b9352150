//! Conversions between JSON documents and the exact core types.

use mopsym_core::{
    format_rational, parse_rational, BandedMatrix, FourTermRecurrence, Mat, MatrixPoly, Poly, Rational, RecurrenceSystem,
    SymmetricRecurrence,
};

use crate::artifact::{BandedDoc, FourTermDoc, MatDoc, PolyDoc, RecurrenceDoc, Source, SymmetricDoc, Q};
use crate::error::CliError;

pub fn q(r: &Rational) -> Q {
    format_rational(r)
}

pub fn qs(v: &[Rational]) -> Vec<Q> {
    v.iter().map(q).collect()
}

pub fn parse_q(s: &str, path: &str) -> Result<Rational, CliError> {
    parse_rational(s).ok_or_else(|| CliError::malformed(path, s))
}

pub fn parse_qs(v: &[Q], path: &str) -> Result<Vec<Rational>, CliError> {
    v.iter().enumerate().map(|(i, s)| parse_q(s, &format!("{path}[{i}]"))).collect()
}

pub fn poly_doc(p: &Poly<Rational>) -> PolyDoc {
    qs(p.coeffs())
}

pub fn polys_doc(ps: &[Poly<Rational>]) -> Vec<PolyDoc> {
    ps.iter().map(poly_doc).collect()
}

pub fn parse_polys(v: &[PolyDoc], path: &str) -> Result<Vec<Poly<Rational>>, CliError> {
    v.iter().enumerate().map(|(i, p)| Ok(Poly::from_coeffs(parse_qs(p, &format!("{path}[{i}]"))?))).collect()
}

pub fn mat_doc(m: &Mat<Rational>) -> MatDoc {
    m.to_rows().iter().map(|r| qs(r)).collect()
}

pub fn parse_mat(rows: &MatDoc, path: &str) -> Result<Mat<Rational>, CliError> {
    let parsed: Vec<Vec<Rational>> =
        rows.iter().enumerate().map(|(i, r)| parse_qs(r, &format!("{path}[{i}]"))).collect::<Result<_, _>>()?;
    let width = parsed.first().map_or(0, Vec::len);
    if parsed.is_empty() || width == 0 || parsed.iter().any(|r| r.len() != width) {
        return Err(CliError::length(path, "a matrix needs equally long, nonempty rows"));
    }
    Ok(Mat::from_rows(parsed))
}

pub fn matpoly_doc(m: &MatrixPoly<Rational>) -> Vec<Vec<PolyDoc>> {
    (0..m.rows()).map(|i| (0..m.cols()).map(|j| poly_doc(m.get(i, j))).collect()).collect()
}

pub fn banded_doc(b: &BandedMatrix<Rational>) -> BandedDoc {
    let (lo, hi) = (b.lower_bandwidth(), b.upper_bandwidth());
    let n = b.size();
    let bands = (0..n)
        .map(|i| {
            (0..=lo + hi)
                .map(|k| {
                    let j = (i + k).checked_sub(lo).filter(|&j| j < n);
                    j.map_or_else(|| "0".to_string(), |j| q(&b.get(i, j)))
                })
                .collect()
        })
        .collect();
    BandedDoc { size: n, lower: lo, upper: hi, bands }
}

pub fn parse_banded(doc: &BandedDoc, path: &str) -> Result<BandedMatrix<Rational>, CliError> {
    let (n, lo, hi) = (doc.size, doc.lower, doc.upper);
    if n == 0 || lo > n - 1 || hi > n - 1 {
        return Err(CliError::length(path, "size must be positive and bandwidths below the size"));
    }
    if doc.bands.len() != n || doc.bands.iter().any(|r| r.len() != lo + hi + 1) {
        return Err(CliError::length(&format!("{path}.bands"), "band rows must match size and lower + upper + 1"));
    }
    let mut m = BandedMatrix::zeros(n, lo, hi);
    for (i, row) in doc.bands.iter().enumerate() {
        for (k, s) in row.iter().enumerate() {
            let v = parse_q(s, &format!("{path}.bands[{i}][{k}]"))?;
            match (i + k).checked_sub(lo).filter(|&j| j < n) {
                Some(j) => m.set(i, j, v),
                None if v == Rational::from_integer(0.into()) => {}
                None => {
                    return Err(CliError::length(
                        &format!("{path}.bands[{i}][{k}]"),
                        "entry lies outside the matrix and must be \"0\"",
                    ))
                }
            }
        }
    }
    Ok(m)
}

pub fn recurrence_doc(rs: &RecurrenceSystem<Rational>) -> RecurrenceDoc {
    RecurrenceDoc { d: rs.d, beta: qs(&rs.beta), gamma: rs.gamma.iter().map(|g| qs(g)).collect() }
}

pub fn parse_recurrence(doc: &RecurrenceDoc, path: &str) -> Result<RecurrenceSystem<Rational>, CliError> {
    let beta = parse_qs(&doc.beta, &format!("{path}.beta"))?;
    let gamma =
        doc.gamma.iter().enumerate().map(|(k, g)| parse_qs(g, &format!("{path}.gamma[{k}]"))).collect::<Result<Vec<_>, _>>()?;
    RecurrenceSystem::new(doc.d, beta, gamma).map_err(|e| CliError::math("parse", e))
}

pub fn symmetric_doc(sr: &SymmetricRecurrence<Rational>) -> SymmetricDoc {
    SymmetricDoc { d: sr.d, gamma: qs(&sr.gamma) }
}

pub fn parse_symmetric(doc: &SymmetricDoc, path: &str) -> Result<SymmetricRecurrence<Rational>, CliError> {
    let gamma = parse_qs(&doc.gamma, &format!("{path}.gamma"))?;
    SymmetricRecurrence::new(doc.d, gamma).map_err(|e| CliError::math("parse", e))
}

pub fn four_term_doc(f: &FourTermRecurrence<Rational>) -> FourTermDoc {
    FourTermDoc { b: qs(&f.b), c: qs(&f.c), dd: qs(&f.dd) }
}

pub fn parse_four_term(doc: &FourTermDoc, path: &str) -> Result<FourTermRecurrence<Rational>, CliError> {
    Ok(FourTermRecurrence::new(
        parse_qs(&doc.b, &format!("{path}.b"))?,
        parse_qs(&doc.c, &format!("{path}.c"))?,
        parse_qs(&doc.dd, &format!("{path}.dd"))?,
    ))
}

/// Any source as a general recurrence system.
pub fn source_system(src: &Source, path: &str) -> Result<RecurrenceSystem<Rational>, CliError> {
    match src {
        Source::Recurrence(r) => parse_recurrence(r, path),
        Source::SymmetricRecurrence(s) => Ok(parse_symmetric(s, path)?.to_system()),
        Source::FourTermRecurrence(f) => Ok(parse_four_term(f, path)?.to_system()),
    }
}

/// A `d = 2` source as a four-term recurrence.
pub fn source_four_term(src: &Source, path: &str) -> Result<FourTermRecurrence<Rational>, CliError> {
    match src {
        Source::FourTermRecurrence(f) => parse_four_term(f, path),
        other => {
            let rs = source_system(other, path)?;
            FourTermRecurrence::from_system(&rs).map_err(|e| CliError::math("parse", e))
        }
    }
}
