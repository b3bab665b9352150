//! Dense univariate polynomials over a [`Scalar`] field.

use std::fmt::{self, Display};
use std::ops::{Add, Mul, Neg, Sub};

use crate::scalar::Scalar;

/// Dense polynomial; `coeffs[i]` multiplies `x^i`. Trailing zeros are never stored,
/// so the zero polynomial has an empty coefficient vector and no degree.
#[derive(Clone, Debug, PartialEq)]
pub struct Poly<T> {
    coeffs: Vec<T>,
}

impl<T: Scalar> Poly<T> {
    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(T::one())
    }

    pub fn constant(c: T) -> Self {
        Self::from_coeffs(vec![c])
    }

    /// `c · x^k`.
    pub fn monomial(k: usize, c: T) -> Self {
        let mut coeffs = vec![T::zero(); k + 1];
        coeffs[k] = c;
        Self::from_coeffs(coeffs)
    }

    /// The identity polynomial `x`.
    pub fn x() -> Self {
        Self::monomial(1, T::one())
    }

    pub fn from_coeffs(coeffs: Vec<T>) -> Self {
        let mut p = Poly { coeffs };
        p.trim();
        p
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<T> {
        self.coeffs
    }

    /// Coefficient of `x^i` (zero beyond the degree).
    pub fn coeff(&self, i: usize) -> T {
        self.coeffs.get(i).cloned().unwrap_or_else(T::zero)
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn leading(&self) -> Option<&T> {
        self.coeffs.last()
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_some_and(|c| c.is_one())
    }

    /// Exponents carrying a nonzero coefficient, ascending.
    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(i, _)| i)
    }

    pub fn scale(&self, s: &T) -> Self {
        if s.is_zero() {
            return Self::zero();
        }
        Poly { coeffs: self.coeffs.iter().map(|c| c.clone() * s.clone()).collect() }
    }

    /// Multiplication by `x^k`.
    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![T::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        Poly { coeffs }
    }

    /// `p(x^k)`; requires `k ≥ 1`.
    pub fn compose_power(&self, k: usize) -> Self {
        assert!(k >= 1, "compose_power needs k >= 1");
        if self.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![T::zero(); k * (self.coeffs.len() - 1) + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs[i * k] = c.clone();
        }
        Poly { coeffs }
    }

    /// Inverse of `x^offset · q(x^k)`: returns `q` when every exponent of `self`
    /// is `≡ offset (mod k)` and `≥ offset`, otherwise `None`.
    pub fn decimate(&self, k: usize, offset: usize) -> Option<Self> {
        let mut out = Vec::new();
        for (e, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if e < offset || !(e - offset).is_multiple_of(k) {
                return None;
            }
            let idx = (e - offset) / k;
            if out.len() <= idx {
                out.resize(idx + 1, T::zero());
            }
            out[idx] = c.clone();
        }
        Some(Self::from_coeffs(out))
    }

    /// `self += c · p` in place. Zero coefficients of `p` are skipped, which
    /// matters for the sparse families met here.
    pub fn add_scaled(&mut self, c: &T, p: &Poly<T>) {
        if c.is_zero() || p.is_zero() {
            return;
        }
        if self.coeffs.len() < p.coeffs.len() {
            self.coeffs.resize(p.coeffs.len(), T::zero());
        }
        let unit = c.is_one();
        let minus_unit = (-c.clone()).is_one();
        for (slot, a) in self.coeffs.iter_mut().zip(&p.coeffs) {
            if a.is_zero() {
                continue;
            }
            if unit {
                *slot += a;
            } else if minus_unit {
                *slot -= a;
            } else {
                let mut term = a.clone();
                term *= c;
                *slot += term;
            }
        }
        self.trim();
    }

    /// Horner evaluation.
    pub fn eval(&self, x: &T) -> T {
        self.coeffs.iter().rev().fold(T::zero(), |acc, c| acc * x.clone() + c.clone())
    }
}

impl<T: Scalar> Add for &Poly<T> {
    type Output = Poly<T>;
    fn add(self, rhs: &Poly<T>) -> Poly<T> {
        let mut out = self.clone();
        out.add_scaled(&T::one(), rhs);
        out
    }
}

impl<T: Scalar> Sub for &Poly<T> {
    type Output = Poly<T>;
    fn sub(self, rhs: &Poly<T>) -> Poly<T> {
        let mut out = self.clone();
        out.add_scaled(&-T::one(), rhs);
        out
    }
}

impl<T: Scalar> Mul for &Poly<T> {
    type Output = Poly<T>;
    fn mul(self, rhs: &Poly<T>) -> Poly<T> {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![T::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        Poly::from_coeffs(out)
    }
}

impl<T: Scalar> Neg for &Poly<T> {
    type Output = Poly<T>;
    fn neg(self) -> Poly<T> {
        Poly { coeffs: self.coeffs.iter().map(|c| -c.clone()).collect() }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl<T: Scalar> $tr for Poly<T> {
            type Output = Poly<T>;
            fn $m(self, rhs: Poly<T>) -> Poly<T> {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

/// Free-function form of [`Poly::compose_power`].
pub fn compose_power<T: Scalar>(p: &Poly<T>, k: usize) -> Poly<T> {
    p.compose_power(k)
}

impl<T: Scalar + Display> Poly<T> {
    /// Human-readable form in the given variable, e.g. `x^3 - 2x + 1/2`.
    pub fn to_pretty(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (e, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let negative = c.to_f64().is_some_and(|v| v < 0.0);
            let mag = if negative { -c.clone() } else { c.clone() };
            if out.is_empty() {
                if negative {
                    out.push('-');
                }
            } else {
                out.push_str(if negative { " - " } else { " + " });
            }
            let unit = mag.is_one();
            match e {
                0 => out.push_str(&mag.to_string()),
                _ => {
                    if !unit {
                        out.push_str(&mag.to_string());
                    }
                    out.push_str(var);
                    if e > 1 {
                        out.push_str(&format!("^{e}"));
                    }
                }
            }
        }
        out
    }
}

impl<T: Scalar + Display> Display for Poly<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_pretty("x"))
    }
}
