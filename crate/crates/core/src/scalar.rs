//! Scalar field abstraction.
//!
//! Every algebraic routine in this crate is generic over [`Scalar`]. The
//! identity checks run over [`Rational`] (arbitrary precision, exact), while
//! `f64` works for quick numerical experiments.

use std::fmt::Debug;
use std::ops::Neg;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, NumAssignRef, NumRef, ToPrimitive};

/// A field element usable by the polynomial and matrix kernels.
pub trait Scalar:
    Clone + Debug + PartialEq + NumRef + NumAssignRef + Neg<Output = Self> + FromPrimitive + ToPrimitive + Send + Sync + 'static
{
    /// Embeds a small integer.
    fn from_int(v: i64) -> Self {
        Self::from_i64(v).expect("integer embedding")
    }

    /// Absolute value, used for norm bounds.
    fn abs_val(&self) -> Self {
        if self.to_f64().is_some_and(|v| v < 0.0) {
            -self.clone()
        } else {
            self.clone()
        }
    }
}

impl<T> Scalar for T where
    T: Clone + Debug + PartialEq + NumRef + NumAssignRef + Neg<Output = T> + FromPrimitive + ToPrimitive + Send + Sync + 'static
{
}

/// Exact arbitrary-precision rational; the canonical scalar of the crate.
pub type Rational = BigRational;

/// Builds `num/den` as a reduced rational. Panics on a zero denominator.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Integer rational.
pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

/// Parses `"p"` or `"p/q"` (optional sign, decimal digits) into a reduced rational.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let valid = |t: &str, signed: bool| {
        let digits = if signed { t.strip_prefix('-').or_else(|| t.strip_prefix('+')).unwrap_or(t) } else { t };
        !digits.is_empty() && digits.bytes().all(|b| b.is_ascii_digit())
    };
    if !valid(num, true) || !valid(den, false) {
        return None;
    }
    let n: BigInt = num.trim_start_matches('+').parse().ok()?;
    let d: BigInt = den.parse().ok()?;
    if d == BigInt::from(0) {
        return None;
    }
    Some(Rational::new(n, d))
}

/// Canonical `"p/q"` form, or `"p"` when the denominator is one.
pub fn format_rational(r: &Rational) -> String {
    if r.denom() == &BigInt::from(1) {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format() {
        assert_eq!(parse_rational("6/4"), Some(rat(3, 2)));
        assert_eq!(parse_rational("-7"), Some(int(-7)));
        assert_eq!(parse_rational(" 0/5 "), Some(int(0)));
        assert_eq!(parse_rational("1/0"), None);
        assert_eq!(parse_rational("1/-2"), None);
        assert_eq!(parse_rational("abc"), None);
        assert_eq!(parse_rational(""), None);
        assert_eq!(format_rational(&rat(-6, 4)), "-3/2");
        assert_eq!(format_rational(&rat(4, 2)), "2");
    }

    #[test]
    fn canonical_zero() {
        let z = rat(0, 7);
        assert_eq!(z.denom(), &BigInt::from(1));
        assert_eq!(format_rational(&z), "0");
    }

    #[test]
    fn abs_val_works_for_both_fields() {
        assert_eq!(rat(-2, 3).abs_val(), rat(2, 3));
        assert_eq!((-1.5f64).abs_val(), 1.5);
    }
}
