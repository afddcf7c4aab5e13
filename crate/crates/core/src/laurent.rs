//! Exact univariate Laurent polynomials in the Lefschetz class `L`.
//!
//! Coefficients are arbitrary-precision integers and the representation is
//! sparse: a map from exponent to nonzero coefficient. Every value returned
//! by this module is in canonical form, so structural equality is
//! polynomial equality.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::de::{self, Deserializer, MapAccess, Visitor};
use serde::ser::{SerializeMap, Serializer};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LaurentError {
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("{dividend} is not divisible by {divisor} in Z[L, L^-1]")]
    NonzeroRemainder { dividend: String, divisor: String },
    #[error("cannot evaluate {0} at 0: it has negative exponents")]
    ZeroBase(String),
}

/// A Laurent polynomial `sum c_e L^e` with integer coefficients.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct LaurentPolynomial {
    terms: BTreeMap<i64, BigInt>,
}

impl LaurentPolynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(1, 0)
    }

    /// The Lefschetz class `L` itself.
    pub fn lefschetz() -> Self {
        Self::monomial(1, 1)
    }

    /// `coeff * L^exp`; the zero polynomial when `coeff` is zero.
    pub fn monomial(coeff: impl Into<BigInt>, exp: i64) -> Self {
        let coeff = coeff.into();
        let mut terms = BTreeMap::new();
        if !coeff.is_zero() {
            terms.insert(exp, coeff);
        }
        Self { terms }
    }

    /// `L^exp - 1`, the factor shape that runs through every class formula.
    pub fn power_minus_one(exp: i64) -> Self {
        Self::monomial(1, exp) - Self::one()
    }

    /// Builds a polynomial from `(exponent, coefficient)` pairs; repeated
    /// exponents are summed.
    pub fn from_terms<I, C>(terms: I) -> Self
    where
        I: IntoIterator<Item = (i64, C)>,
        C: Into<BigInt>,
    {
        let mut out = Self::zero();
        for (exp, coeff) in terms {
            out.add_term(exp, coeff.into());
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.coeff(0).is_one()
    }

    /// Coefficient of `L^exp` (zero when absent).
    pub fn coeff(&self, exp: i64) -> BigInt {
        self.terms.get(&exp).cloned().unwrap_or_else(BigInt::zero)
    }

    /// Nonzero terms in increasing exponent order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (i64, &BigInt)> + '_ {
        self.terms.iter().map(|(&e, c)| (e, c))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// `(min_exp, max_exp)` over nonzero terms, or `None` for zero.
    pub fn degree_range(&self) -> Option<(i64, i64)> {
        let lo = *self.terms.keys().next()?;
        let hi = *self.terms.keys().next_back()?;
        Some((lo, hi))
    }

    /// True when no exponent is negative, i.e. the value lies in `Z[L]`.
    pub fn is_polynomial(&self) -> bool {
        self.degree_range().is_none_or(|(lo, _)| lo >= 0)
    }

    fn add_term(&mut self, exp: i64, coeff: BigInt) {
        if coeff.is_zero() {
            return;
        }
        let slot = self.terms.entry(exp).or_insert_with(BigInt::zero);
        *slot += coeff;
        if slot.is_zero() {
            self.terms.remove(&exp);
        }
    }

    /// Multiplies by `L^shift`.
    pub fn shift(&self, shift: i64) -> Self {
        Self {
            terms: self.terms.iter().map(|(&e, c)| (e + shift, c.clone())).collect(),
        }
    }

    pub fn pow(&self, exp: u32) -> Self {
        let mut acc = Self::one();
        let mut base = self.clone();
        let mut e = exp;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Exact quotient in `Z[L, L^-1]`.
    ///
    /// Both operands are shifted to ordinary polynomials with nonzero
    /// constant term and divided from the top exponent down. Any remainder,
    /// or a leading coefficient that does not divide evenly, is an error.
    pub fn div_exact(&self, divisor: &Self) -> Result<Self, LaurentError> {
        let (d_lo, d_hi) = divisor.degree_range().ok_or(LaurentError::DivisionByZero)?;
        let Some((n_lo, _)) = self.degree_range() else {
            return Ok(Self::zero());
        };
        let remainder_err = || LaurentError::NonzeroRemainder {
            dividend: self.to_string(),
            divisor: divisor.to_string(),
        };

        let den = divisor.shift(-d_lo);
        let den_deg = d_hi - d_lo;
        let den_lead = den.coeff(den_deg);

        let mut rem = self.shift(-n_lo);
        let mut quot = Self::zero();
        while let Some((_, top)) = rem.degree_range() {
            if top < den_deg {
                return Err(remainder_err());
            }
            let (q, r) = rem.coeff(top).div_rem(&den_lead);
            if !r.is_zero() {
                return Err(remainder_err());
            }
            let step = Self::monomial(q, top - den_deg);
            rem = &rem - &(&step * &den);
            quot = quot + step;
        }
        Ok(quot.shift(n_lo - d_lo))
    }

    /// Exact rational value at `L = x`.
    pub fn eval_int(&self, x: &BigInt) -> Result<BigRational, LaurentError> {
        if x.is_zero() {
            if !self.is_polynomial() {
                return Err(LaurentError::ZeroBase(self.to_string()));
            }
            return Ok(BigRational::from_integer(self.coeff(0)));
        }
        let base = BigRational::from_integer(x.clone());
        let mut acc = BigRational::zero();
        for (&e, c) in &self.terms {
            let p = num_traits::pow::Pow::pow(&base, e as i32);
            acc += p * BigRational::from_integer(c.clone());
        }
        Ok(acc)
    }

    /// Integer value at `L = x` for polynomials without negative exponents.
    ///
    /// Horner evaluation over the dense exponent range, so it stays in the
    /// integers throughout.
    pub fn eval_poly(&self, x: &BigInt) -> Option<BigInt> {
        if !self.is_polynomial() {
            return None;
        }
        let Some((_, hi)) = self.degree_range() else {
            return Some(BigInt::zero());
        };
        let mut acc = BigInt::zero();
        for e in (0..=hi).rev() {
            acc *= x;
            if let Some(c) = self.terms.get(&e) {
                acc += c;
            }
        }
        Some(acc)
    }

    /// LaTeX rendering in descending powers, e.g. `\mathbb{L}^{3} - \mathbb{L}^{2}`.
    pub fn to_latex(&self) -> String {
        self.render(|e| match e {
            0 => String::new(),
            1 => r"\mathbb{L}".to_string(),
            _ => format!(r"\mathbb{{L}}^{{{e}}}"),
        }, "")
    }

    fn render(&self, power: impl Fn(i64) -> String, sep: &str) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, (&e, c)) in self.terms.iter().rev().enumerate() {
            let negative = c.is_negative();
            match (i, negative) {
                (0, true) => out.push('-'),
                (0, false) => {}
                (_, true) => out.push_str(" - "),
                (_, false) => out.push_str(" + "),
            }
            let abs = c.abs();
            let var = power(e);
            if var.is_empty() {
                out.push_str(&abs.to_string());
            } else if abs.is_one() {
                out.push_str(&var);
            } else {
                out.push_str(&abs.to_string());
                out.push_str(sep);
                out.push_str(&var);
            }
        }
        out
    }
}

/// Canonical text form: terms in decreasing exponent order, `3*L^2 - L + 1`.
impl fmt::Display for LaurentPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = self.render(
            |e| match e {
                0 => String::new(),
                1 => "L".to_string(),
                _ => format!("L^{e}"),
            },
            "*",
        );
        f.write_str(&s)
    }
}

impl fmt::Debug for LaurentPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LaurentPolynomial({self})")
    }
}

impl From<i64> for LaurentPolynomial {
    fn from(c: i64) -> Self {
        Self::monomial(c, 0)
    }
}

impl<'a> Add<&'a LaurentPolynomial> for &'a LaurentPolynomial {
    type Output = LaurentPolynomial;
    fn add(self, rhs: &LaurentPolynomial) -> LaurentPolynomial {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Add for LaurentPolynomial {
    type Output = LaurentPolynomial;
    fn add(mut self, rhs: LaurentPolynomial) -> LaurentPolynomial {
        self += &rhs;
        self
    }
}

impl AddAssign<&LaurentPolynomial> for LaurentPolynomial {
    fn add_assign(&mut self, rhs: &LaurentPolynomial) {
        for (&e, c) in &rhs.terms {
            self.add_term(e, c.clone());
        }
    }
}

impl Neg for LaurentPolynomial {
    type Output = LaurentPolynomial;
    fn neg(mut self) -> LaurentPolynomial {
        for c in self.terms.values_mut() {
            *c = -std::mem::take(c);
        }
        self
    }
}

impl<'a> Sub<&'a LaurentPolynomial> for &'a LaurentPolynomial {
    type Output = LaurentPolynomial;
    fn sub(self, rhs: &LaurentPolynomial) -> LaurentPolynomial {
        let mut out = self.clone();
        for (&e, c) in &rhs.terms {
            out.add_term(e, -c);
        }
        out
    }
}

impl Sub for LaurentPolynomial {
    type Output = LaurentPolynomial;
    fn sub(self, rhs: LaurentPolynomial) -> LaurentPolynomial {
        &self - &rhs
    }
}

impl<'a> Mul<&'a LaurentPolynomial> for &'a LaurentPolynomial {
    type Output = LaurentPolynomial;
    fn mul(self, rhs: &LaurentPolynomial) -> LaurentPolynomial {
        let mut out = LaurentPolynomial::zero();
        for (&ea, ca) in &self.terms {
            for (&eb, cb) in &rhs.terms {
                out.add_term(ea + eb, ca * cb);
            }
        }
        out
    }
}

impl Mul for LaurentPolynomial {
    type Output = LaurentPolynomial;
    fn mul(self, rhs: LaurentPolynomial) -> LaurentPolynomial {
        &self * &rhs
    }
}

impl std::iter::Sum for LaurentPolynomial {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::zero(), |acc, p| acc + p)
    }
}

impl std::iter::Product for LaurentPolynomial {
    fn product<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::one(), |acc, p| acc * p)
    }
}

/// JSON form: an object mapping decimal exponent strings to decimal
/// coefficient strings, e.g. `{"3": "1", "2": "-1"}`.
impl Serialize for LaurentPolynomial {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(self.terms.len()))?;
        for (e, c) in self.terms.iter().rev() {
            map.serialize_entry(&e.to_string(), &c.to_string())?;
        }
        map.end()
    }
}

impl<'de> Deserialize<'de> for LaurentPolynomial {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        struct TermsVisitor;

        impl<'de> Visitor<'de> for TermsVisitor {
            type Value = LaurentPolynomial;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a map from exponent strings to coefficient strings")
            }

            fn visit_map<A: MapAccess<'de>>(self, mut access: A) -> Result<Self::Value, A::Error> {
                let mut out = LaurentPolynomial::zero();
                while let Some((e, c)) = access.next_entry::<String, String>()? {
                    let exp: i64 = e.parse().map_err(de::Error::custom)?;
                    let coeff: BigInt = c.parse().map_err(de::Error::custom)?;
                    out.add_term(exp, coeff);
                }
                Ok(out)
            }
        }

        deserializer.deserialize_map(TermsVisitor)
    }
}
