//! Coefficient fields.
//!
//! Two backends are provided: exact rationals ([`Rational`]) and
//! tolerance-carrying doubles (`f64`). A computation is always run wholly in
//! one backend; the generic code never converts between them. The complex
//! extension `Complex<S>` is used only where a complexified exterior algebra is
//! required (character-twisted complexes).

use std::fmt;
use std::ops::Neg;
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::Complex;
use num_traits::{Num, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Rational = num_rational::BigRational;

/// Default relative tolerance of the approximate backend.
pub const DEFAULT_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Backend {
    Rational,
    Float,
}

impl fmt::Display for Backend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Backend::Rational => f.write_str("rational"),
            Backend::Float => f.write_str("float"),
        }
    }
}

impl FromStr for Backend {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "rational" => Ok(Backend::Rational),
            "float" => Ok(Backend::Float),
            other => Err(Error::Parse(format!("unknown scalar backend '{other}'"))),
        }
    }
}

/// A field element usable as a coefficient.
pub trait Scalar: Clone + fmt::Debug + PartialEq + Num + Neg<Output = Self> + Send + Sync + 'static {
    /// True for exact arithmetic; tolerances are ignored.
    const EXACT: bool;

    fn from_i64(v: i64) -> Self;

    fn from_ratio(num: i64, den: i64) -> Self {
        Self::from_i64(num) / Self::from_i64(den)
    }

    /// Absolute size, used for pivot selection and thresholds.
    fn magnitude(&self) -> f64;

    /// Zero test against an absolute threshold (exact zero for exact backends).
    fn is_negligible(&self, threshold: f64) -> bool {
        if Self::EXACT {
            self.is_zero()
        } else {
            self.magnitude() <= threshold
        }
    }

    /// `|a-b| <= tol * max(1, |a|, |b|)`; plain equality for exact backends.
    fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        if Self::EXACT {
            self == other
        } else {
            let scale = 1f64.max(self.magnitude()).max(other.magnitude());
            (self.clone() - other.clone()).magnitude() <= tol * scale
        }
    }
}

/// Ordered real backends, which can be read from and written to files.
pub trait RealScalar: Scalar + PartialOrd {
    fn backend() -> Backend;

    /// Conversion from a double (exact binary expansion for rationals).
    fn from_f64(v: f64) -> Self;

    fn to_f64(&self) -> f64;

    /// Parses "n", "n/d" or a decimal literal.
    fn parse_str(s: &str) -> Result<Self>;

    fn to_json(&self) -> serde_json::Value;

    fn is_positive(&self, threshold: f64) -> bool {
        !self.is_negligible(threshold) && *self > Self::zero()
    }
}

impl Scalar for Rational {
    const EXACT: bool = true;

    fn from_i64(v: i64) -> Self {
        Rational::from_integer(BigInt::from(v))
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        Rational::new(BigInt::from(num), BigInt::from(den))
    }

    fn magnitude(&self) -> f64 {
        ToPrimitive::to_f64(&self.abs()).unwrap_or(f64::INFINITY)
    }
}

impl RealScalar for Rational {
    fn backend() -> Backend {
        Backend::Rational
    }

    fn from_f64(v: f64) -> Self {
        Rational::from_float(v).unwrap_or_else(Rational::zero)
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn parse_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if let Ok(r) = Rational::from_str(s) {
            return Ok(r);
        }
        parse_decimal(s).ok_or_else(|| Error::Parse(format!("not a number: '{s}'")))
    }

    fn to_json(&self) -> serde_json::Value {
        serde_json::Value::String(self.to_string())
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn from_i64(v: i64) -> Self {
        v as f64
    }

    fn magnitude(&self) -> f64 {
        self.abs()
    }
}

impl RealScalar for f64 {
    fn backend() -> Backend {
        Backend::Float
    }

    fn from_f64(v: f64) -> Self {
        v
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn parse_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if let Some((n, d)) = s.split_once('/') {
            let n: f64 = n
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("not a number: '{s}'")))?;
            let d: f64 = d
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("not a number: '{s}'")))?;
            if d == 0.0 {
                return Err(Error::Parse(format!("zero denominator in '{s}'")));
            }
            return Ok(n / d);
        }
        s.parse()
            .map_err(|_| Error::Parse(format!("not a number: '{s}'")))
    }

    fn to_json(&self) -> serde_json::Value {
        serde_json::Value::from(round_significant(*self))
    }
}

impl<S: RealScalar> Scalar for Complex<S> {
    const EXACT: bool = S::EXACT;

    fn from_i64(v: i64) -> Self {
        Complex::new(S::from_i64(v), S::zero())
    }

    fn magnitude(&self) -> f64 {
        self.re.magnitude().hypot(self.im.magnitude())
    }
}

/// Exact value of a decimal literal such as `-1.25e-3`.
fn parse_decimal(s: &str) -> Option<Rational> {
    let (mantissa, exp) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().ok()?),
        None => (s, 0),
    };
    let (neg, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int, frac) = digits.split_once('.').unwrap_or((digits, ""));
    if int.is_empty() && frac.is_empty() {
        return None;
    }
    if !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let all: BigInt = format!("0{int}{frac}").parse().ok()?;
    let scale = exp - frac.len() as i32;
    let ten = BigInt::from(10);
    let mut r = Rational::from_integer(all);
    if scale >= 0 {
        r *= Rational::from_integer(num_traits::pow(ten, scale as usize));
    } else {
        r /= Rational::from_integer(num_traits::pow(ten, (-scale) as usize));
    }
    Some(if neg { -r } else { r })
}

/// Rounds to 12 significant digits, the fixed precision of every report.
pub fn round_significant(v: f64) -> f64 {
    if !v.is_finite() || v == 0.0 {
        return if v == 0.0 { 0.0 } else { v };
    }
    format!("{v:.11e}").parse().unwrap_or(v)
}

/// Largest magnitude in a slice, floored at 1 (used as a relative scale).
pub(crate) fn scale_of<'a, S: Scalar>(values: impl IntoIterator<Item = &'a S>) -> f64 {
    values.into_iter().map(Scalar::magnitude).fold(1.0, f64::max)
}
