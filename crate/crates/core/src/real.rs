//! Configurable-precision real numbers.
//!
//! A [`Real`] is an MPFR float whose precision is fixed when it is created.
//! Binary operations round to the smaller of the two operand precisions, so a
//! single low-precision input cannot be silently promoted.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};

use rug::float::Constant;
use rug::ops::Pow;
use rug::{Float, Rational};

use crate::error::{Error, Result};

const LOG2_10: f64 = std::f64::consts::LOG2_10;

/// Working precision expressed in decimal digits.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Precision(u32);

impl Precision {
    /// Roughly the resolution of an IEEE double.
    pub const MACHINE: Precision = Precision(16);

    pub fn new(digits: u32) -> Result<Self> {
        if digits == 0 || digits > 100_000 {
            return Err(Error::InvalidArgument(format!(
                "precision must be between 1 and 100000 digits, got {digits}"
            )));
        }
        Ok(Precision(digits))
    }

    pub fn digits(self) -> u32 {
        self.0
    }

    /// Mantissa bits used to carry `digits` decimal digits.
    pub fn bits(self) -> u32 {
        (f64::from(self.0) * LOG2_10).ceil() as u32
    }

    fn from_bits(bits: u32) -> Self {
        Precision(((f64::from(bits) / LOG2_10).floor() as u32).max(1))
    }

    /// `10^(slack - digits)`, the relative tolerance used throughout for
    /// "a few units in the last decimal place".
    pub fn tolerance(self, slack: i32) -> Real {
        let exponent = slack - self.0 as i32;
        Real::from_i64(10, self).powi(exponent)
    }
}

impl Default for Precision {
    fn default() -> Self {
        Precision::MACHINE
    }
}

impl fmt::Display for Precision {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} digits", self.0)
    }
}

#[derive(Clone, Debug, PartialEq, PartialOrd)]
pub struct Real(Float);

impl Real {
    pub fn zero(precision: Precision) -> Self {
        Real(Float::with_val(precision.bits(), 0))
    }

    pub fn one(precision: Precision) -> Self {
        Real::from_i64(1, precision)
    }

    pub fn from_i64(value: i64, precision: Precision) -> Self {
        Real(Float::with_val(precision.bits(), value))
    }

    pub fn from_f64(value: f64, precision: Precision) -> Self {
        Real(Float::with_val(precision.bits(), value))
    }

    pub fn from_rational(value: &Rational, precision: Precision) -> Self {
        Real(Float::with_val(precision.bits(), value))
    }

    /// Parses decimal text (`"8406.2431208462"`, `"1e5"`, `"-0.25"`) directly at
    /// the requested precision, without passing through a machine double.
    pub fn parse(text: &str, precision: Precision) -> Result<Self> {
        let parsed = Float::parse(text.trim())
            .map_err(|e| Error::InvalidArgument(format!("cannot parse `{text}` as a number: {e}")))?;
        Ok(Real(Float::with_val(precision.bits(), parsed)))
    }

    pub fn pi(precision: Precision) -> Self {
        Real(Float::with_val(precision.bits(), Constant::Pi))
    }

    pub fn from_float(value: Float) -> Self {
        Real(value)
    }

    pub fn as_float(&self) -> &Float {
        &self.0
    }

    pub fn into_float(self) -> Float {
        self.0
    }

    pub fn precision(&self) -> Precision {
        Precision::from_bits(self.0.prec())
    }

    pub fn bits(&self) -> u32 {
        self.0.prec()
    }

    /// Rounds (or widens) to another precision.
    pub fn with_precision(&self, precision: Precision) -> Self {
        Real(Float::with_val(precision.bits(), &self.0))
    }

    pub fn abs(&self) -> Self {
        Real(self.0.clone().abs())
    }

    pub fn sqrt(&self) -> Self {
        Real(self.0.clone().sqrt())
    }

    pub fn exp(&self) -> Self {
        Real(self.0.clone().exp())
    }

    pub fn ln(&self) -> Self {
        Real(self.0.clone().ln())
    }

    pub fn sin(&self) -> Self {
        Real(self.0.clone().sin())
    }

    pub fn cos(&self) -> Self {
        Real(self.0.clone().cos())
    }

    pub fn sin_cos(&self) -> (Self, Self) {
        let (s, c) = self.0.clone().sin_cos(Float::new(self.0.prec()));
        (Real(s), Real(c))
    }

    pub fn tan(&self) -> Self {
        Real(self.0.clone().tan())
    }

    pub fn erf(&self) -> Self {
        Real(self.0.clone().erf())
    }

    pub fn powi(&self, exponent: i32) -> Self {
        Real(self.0.clone().pow(exponent))
    }

    pub fn recip(&self) -> Self {
        Real(self.0.clone().recip())
    }

    pub fn max(self, other: Self) -> Self {
        if other > self {
            other
        } else {
            self
        }
    }

    pub fn min(self, other: Self) -> Self {
        if other < self {
            other
        } else {
            self
        }
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_finite(&self) -> bool {
        self.0.is_finite()
    }

    pub fn is_negative(&self) -> bool {
        self.0.cmp0() == Some(Ordering::Less)
    }

    pub fn is_positive(&self) -> bool {
        self.0.cmp0() == Some(Ordering::Greater)
    }

    pub fn signum(&self) -> i32 {
        match self.0.cmp0() {
            Some(Ordering::Less) => -1,
            Some(Ordering::Greater) => 1,
            _ => 0,
        }
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64()
    }

    /// Nearest integer, if it fits in an `i64`.
    pub fn round_to_i64(&self) -> Option<i64> {
        self.0.to_integer().and_then(|i| i.to_i64())
    }

    /// One unit in the last binary place at this value's precision.
    pub fn ulp(&self) -> Self {
        let prec = self.0.prec();
        let exp = self.0.get_exp().unwrap_or(0);
        Real(Float::with_val(prec, 1) << (exp - prec as i32))
    }

    /// Sign, decimal digit string and exponent such that the value equals
    /// `±0.d1d2... × 10^exp`. `None` for zero and non-finite values.
    pub fn decimal_parts(&self, digits: usize) -> Option<(bool, String, i32)> {
        if self.0.is_zero() || !self.0.is_finite() {
            return None;
        }
        let (negative, mantissa, exp) = self.0.to_sign_string_exp(10, Some(digits.max(1)));
        exp.map(|e| (negative, mantissa, e))
    }

    /// Decimal rendering with `digits` significant digits. Positional notation
    /// is used for moderate magnitudes, scientific otherwise.
    pub fn to_decimal(&self, digits: usize) -> String {
        if self.0.is_nan() {
            return "NaN".to_string();
        }
        if self.0.is_infinite() {
            return if self.is_negative() { "-inf" } else { "inf" }.to_string();
        }
        let Some((negative, mantissa, exp)) = self.decimal_parts(digits) else {
            return "0".to_string();
        };
        let sign = if negative { "-" } else { "" };
        if (-4..=21).contains(&exp) {
            let body = if exp <= 0 {
                format!("0.{}{}", "0".repeat((-exp) as usize), mantissa)
            } else if exp as usize >= mantissa.len() {
                format!("{}{}", mantissa, "0".repeat(exp as usize - mantissa.len()))
            } else {
                let (int, frac) = mantissa.split_at(exp as usize);
                format!("{int}.{frac}")
            };
            format!("{sign}{body}")
        } else {
            let (lead, rest) = mantissa.split_at(1);
            let rest = if rest.is_empty() {
                String::new()
            } else {
                format!(".{rest}")
            };
            format!("{sign}{lead}{rest}e{}", exp - 1)
        }
    }
}

impl fmt::Display for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = f.precision().unwrap_or(self.precision().digits() as usize);
        f.write_str(&self.to_decimal(digits))
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident, $op:tt) => {
        impl $trait<&Real> for &Real {
            type Output = Real;
            fn $method(self, rhs: &Real) -> Real {
                let prec = self.0.prec().min(rhs.0.prec());
                Real(Float::with_val(prec, &self.0 $op &rhs.0))
            }
        }
        impl $trait<Real> for Real {
            type Output = Real;
            fn $method(self, rhs: Real) -> Real {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&Real> for Real {
            type Output = Real;
            fn $method(self, rhs: &Real) -> Real {
                (&self).$method(rhs)
            }
        }
        impl $trait<Real> for &Real {
            type Output = Real;
            fn $method(self, rhs: Real) -> Real {
                self.$method(&rhs)
            }
        }
    };
}

binop!(Add, add, +);
binop!(Sub, sub, -);
binop!(Mul, mul, *);
binop!(Div, div, /);

impl AddAssign<&Real> for Real {
    fn add_assign(&mut self, rhs: &Real) {
        *self = &*self + rhs;
    }
}

impl SubAssign<&Real> for Real {
    fn sub_assign(&mut self, rhs: &Real) {
        *self = &*self - rhs;
    }
}

impl Neg for Real {
    type Output = Real;
    fn neg(self) -> Real {
        Real(-self.0)
    }
}

impl Neg for &Real {
    type Output = Real;
    fn neg(self) -> Real {
        Real(Float::with_val(self.0.prec(), -&self.0))
    }
}

/// Neumaier-compensated running sum.
#[derive(Clone, Debug)]
pub struct CompensatedSum {
    sum: Real,
    compensation: Real,
}

impl CompensatedSum {
    pub fn new(precision: Precision) -> Self {
        CompensatedSum {
            sum: Real::zero(precision),
            compensation: Real::zero(precision),
        }
    }

    pub fn add(&mut self, value: &Real) {
        let t = &self.sum + value;
        if self.sum.abs() >= value.abs() {
            self.compensation += &(&(&self.sum - &t) + value);
        } else {
            self.compensation += &(&(value - &t) + &self.sum);
        }
        self.sum = t;
    }

    pub fn total(&self) -> Real {
        &self.sum + &self.compensation
    }
}
