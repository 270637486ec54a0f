//! Exact terminating decimals: an integer mantissa at a power-of-ten scale.
//!
//! Every truncation `x_k` of an infinite decimal lives here. Expansions use
//! the floor convention throughout: the integer part `a_0` is the unique
//! integer with `a_0 <= x < a_0 + 1`, so `-3.087` is written `(-4).913` and
//! its fractional digits are always in `0..=9`.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

/// `10^n` as a big integer.
pub fn pow10(n: u32) -> BigInt {
    num_traits::pow(BigInt::from(10u32), n as usize)
}

/// Floor of `a / 10^n`.
pub(crate) fn floor_shift(a: &BigInt, n: u32) -> BigInt {
    if n == 0 {
        a.clone()
    } else {
        a.div_floor(&pow10(n))
    }
}

/// `floor(num * 10^k / den)` for `den > 0`.
pub(crate) fn floor_scaled(value: &BigRational, k: u32) -> BigInt {
    (value.numer() * pow10(k)).div_floor(value.denom())
}

/// A digit of an expansion `a_0.a_1a_2...`.
///
/// Position 0 carries the whole (possibly negative) integer part; every other
/// position holds a single decimal digit.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Digit {
    IntegerPart(BigInt),
    Decimal(u8),
}

impl Digit {
    pub fn value(&self) -> BigInt {
        match self {
            Digit::IntegerPart(a) => a.clone(),
            Digit::Decimal(d) => BigInt::from(*d),
        }
    }

    /// The decimal digit, or `None` for the integer part.
    pub fn decimal(&self) -> Option<u8> {
        match self {
            Digit::Decimal(d) => Some(*d),
            Digit::IntegerPart(_) => None,
        }
    }
}

impl fmt::Display for Digit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Digit::IntegerPart(a) => write!(f, "{a}"),
            Digit::Decimal(d) => write!(f, "{d}"),
        }
    }
}

/// Exact terminating decimal `mantissa * 10^(-scale)`.
///
/// Equality and ordering are by value: `(m, k)` equals `(10m, k + 1)`.
/// Trailing zeros are never stripped.
#[derive(Clone, Debug)]
pub struct ScaledDecimal {
    mantissa: BigInt,
    scale: u32,
}

impl ScaledDecimal {
    pub fn new(mantissa: impl Into<BigInt>, scale: u32) -> Self {
        ScaledDecimal {
            mantissa: mantissa.into(),
            scale,
        }
    }

    pub fn zero() -> Self {
        Self::new(0, 0)
    }

    pub fn one() -> Self {
        Self::new(1, 0)
    }

    pub fn from_integer(n: impl Into<BigInt>) -> Self {
        Self::new(n, 0)
    }

    /// `10^(-k)`.
    pub fn ulp(k: u32) -> Self {
        Self::new(1, k)
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.mantissa
    }

    pub fn scale(&self) -> u32 {
        self.scale
    }

    pub fn is_zero(&self) -> bool {
        self.mantissa.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.mantissa.is_negative()
    }

    /// Mantissa of the same value at a finer scale.
    pub fn mantissa_at(&self, scale: u32) -> BigInt {
        debug_assert!(scale >= self.scale);
        &self.mantissa * pow10(scale - self.scale)
    }

    pub fn rescale(&self, scale: u32) -> Self {
        Self::new(self.mantissa_at(scale), scale)
    }

    pub fn to_rational(&self) -> BigRational {
        BigRational::new(self.mantissa.clone(), pow10(self.scale))
    }

    /// The value as a terminating decimal, if its reduced denominator only
    /// has the prime factors 2 and 5.
    pub fn from_rational(value: &BigRational) -> Option<Self> {
        let mut den = value.denom().clone();
        let (two, five) = (BigInt::from(2u32), BigInt::from(5u32));
        let mut twos = 0u32;
        let mut fives = 0u32;
        while den.is_even() {
            den /= &two;
            twos += 1;
        }
        while (&den % &five).is_zero() {
            den /= &five;
            fives += 1;
        }
        if !den.is_one() {
            return None;
        }
        let scale = twos.max(fives);
        Some(Self::new(floor_scaled(value, scale), scale))
    }

    pub fn add_exact(&self, other: &Self) -> Self {
        let scale = self.scale.max(other.scale);
        Self::new(self.mantissa_at(scale) + other.mantissa_at(scale), scale)
    }

    pub fn sub_exact(&self, other: &Self) -> Self {
        let scale = self.scale.max(other.scale);
        Self::new(self.mantissa_at(scale) - other.mantissa_at(scale), scale)
    }

    pub fn mul_exact(&self, other: &Self) -> Self {
        Self::new(&self.mantissa * &other.mantissa, self.scale + other.scale)
    }

    pub fn neg(&self) -> Self {
        Self::new(-&self.mantissa, self.scale)
    }

    /// Largest scale-`k` grid value that is `<= self`.
    pub fn truncate(&self, k: u32) -> Self {
        if k >= self.scale {
            self.rescale(k)
        } else {
            Self::new(floor_shift(&self.mantissa, self.scale - k), k)
        }
    }

    /// `theta_k`: the integer part for `k = 0`, otherwise the k-th decimal
    /// digit of the floor-normalized expansion.
    pub fn digit_at(&self, k: u32) -> Digit {
        let t = self.truncate(k);
        if k == 0 {
            Digit::IntegerPart(t.mantissa)
        } else {
            Digit::Decimal(last_digit(&t.mantissa))
        }
    }

    /// Integer part `a_0` (floor).
    pub fn integer_part(&self) -> BigInt {
        self.truncate(0).mantissa
    }

    pub fn cmp_exact(&self, other: &Self) -> Ordering {
        let scale = self.scale.max(other.scale);
        self.mantissa_at(scale).cmp(&other.mantissa_at(scale))
    }

    /// Render with exactly `self.scale()` fractional digits in floor form.
    pub fn to_floor_string(&self) -> String {
        render_floor(&self.mantissa, self.scale)
    }
}

/// Last decimal digit of a (possibly negative) mantissa, floor convention.
pub(crate) fn last_digit(m: &BigInt) -> u8 {
    let d = m.mod_floor(&BigInt::from(10u32));
    u8::try_from(&d).unwrap_or(0)
}

/// Floor-form rendering of `mantissa * 10^(-scale)`: `(-2).443` when the
/// integer part is negative, `5.678` otherwise.
pub fn render_floor(mantissa: &BigInt, scale: u32) -> String {
    if scale == 0 {
        return mantissa.to_string();
    }
    let unit = pow10(scale);
    let (int_part, frac) = mantissa.div_mod_floor(&unit);
    let frac = format!("{:0>width$}", frac.to_string(), width = scale as usize);
    if int_part.is_negative() {
        format!("({int_part}).{frac}")
    } else {
        format!("{int_part}.{frac}")
    }
}

impl PartialEq for ScaledDecimal {
    fn eq(&self, other: &Self) -> bool {
        self.cmp_exact(other) == Ordering::Equal
    }
}

impl Eq for ScaledDecimal {}

impl PartialOrd for ScaledDecimal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ScaledDecimal {
    fn cmp(&self, other: &Self) -> Ordering {
        self.cmp_exact(other)
    }
}

impl fmt::Display for ScaledDecimal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_floor_string())
    }
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
#[error("invalid decimal literal {input:?} at offset {offset}")]
pub struct ParseDecimalError {
    pub input: String,
    pub offset: usize,
}

impl FromStr for ScaledDecimal {
    type Err = ParseDecimalError;

    /// Accepts `5.678`, `-3.087`, `.5`, `7`, and floor form `(-8).765`
    /// (integer part in parentheses, then the fractional digits).
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = |offset| ParseDecimalError {
            input: s.to_string(),
            offset,
        };
        let t = s.trim();
        let lead = s.len() - s.trim_start().len();
        if let Some(rest) = t.strip_prefix('(') {
            let close = rest.find(')').ok_or_else(|| err(lead + t.len()))?;
            let inner = rest[..close].trim();
            let (neg, digits) = match inner.strip_prefix('-') {
                Some(d) => (true, d.trim_start()),
                None => (false, inner),
            };
            if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
                return Err(err(lead + 1));
            }
            let mut int_part: BigInt = digits.parse().map_err(|_| err(lead + 1))?;
            if neg {
                int_part = -int_part;
            }
            let tail = &rest[close + 1..];
            let at = lead + close + 2;
            let frac = match tail.strip_prefix('.') {
                Some(f) => f,
                None if tail.is_empty() => "",
                None => return Err(err(at)),
            };
            if !frac.bytes().all(|b| b.is_ascii_digit()) {
                return Err(err(at + 1));
            }
            let scale = frac.len() as u32;
            let frac_val: BigInt = if frac.is_empty() {
                BigInt::zero()
            } else {
                frac.parse().map_err(|_| err(at + 1))?
            };
            return Ok(Self::new(int_part * pow10(scale) + frac_val, scale));
        }

        let (neg, body) = match t.strip_prefix('-') {
            Some(b) => (true, b),
            None => (false, t.strip_prefix('+').unwrap_or(t)),
        };
        let sign_len = t.len() - body.len();
        let (int_digits, frac_digits) = match body.split_once('.') {
            Some((i, f)) => (i, f),
            None => (body, ""),
        };
        if int_digits.is_empty() && frac_digits.is_empty() {
            return Err(err(lead + sign_len));
        }
        if let Some(p) = int_digits.bytes().position(|b| !b.is_ascii_digit()) {
            return Err(err(lead + sign_len + p));
        }
        if let Some(p) = frac_digits.bytes().position(|b| !b.is_ascii_digit()) {
            return Err(err(lead + sign_len + int_digits.len() + 1 + p));
        }
        let scale = frac_digits.len() as u32;
        let all = format!("{int_digits}{frac_digits}");
        let mut mantissa: BigInt = if all.is_empty() {
            BigInt::zero()
        } else {
            all.parse().map_err(|_| err(lead))?
        };
        if neg {
            mantissa = -mantissa;
        }
        Ok(Self::new(mantissa, scale))
    }
}
