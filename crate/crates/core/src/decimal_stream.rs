//! Elements of the decimal reals: `a_0.a_1a_2...` with digits produced on
//! demand and memoized.
//!
//! A value is backed by an exact terminating decimal, an exact fraction, or an
//! opaque digit producer. Producers answer truncation queries
//! `x_k = floor(x * 10^k) / 10^k`; every digit is read off a truncation.

use std::cmp::Ordering;
use std::fmt;
use std::io::{self, Write};
use std::sync::{Arc, Mutex};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::arithmetic::Fuel;
use crate::exact_scaled::{floor_scaled, floor_shift, last_digit, render_floor, Digit, ScaledDecimal};

/// Producers compute truncations in blocks of this many digits.
const BLOCK: u32 = 8;

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum DigitError {
    /// A fuel-bounded scan reached its horizon without certifying the digit.
    #[error("undetermined at horizon {horizon}")]
    Undetermined { horizon: u32 },
    #[error("domain error: {0}")]
    Domain(String),
    #[error("Cauchy modulus violated: term left the scale-{scale} enclosure")]
    ModulusViolation { scale: u32 },
    #[error("inconsistent cut: {0}")]
    InconsistentCut(String),
    #[error("precision 10^-{precision} unreachable (best enclosure [{lo}, {hi}])")]
    PrecisionUnreachable { precision: u32, lo: String, hi: String },
    #[error("malformed pairing box stream at digit {position}: {reason}")]
    MalformedPairing { position: u32, reason: String },
}

/// Result of a fuel-bounded digit request.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DigitOutcome {
    Determined(Digit),
    Exhausted { horizon: u32 },
}

/// A producer of truncations for an algorithmically given real.
///
/// Implementations promise that `truncation(k)` returns `floor(x * 10^k)` for
/// a fixed element `x` whose expansion does not end in repeating 9s. The
/// promise cannot be checked; it is the trust boundary of `Algorithmic`
/// values.
pub trait DigitSource: Send + Sync {
    /// Mantissa of `x_k`, i.e. `floor(x * 10^k)`.
    fn truncation(&self, k: u32) -> Result<BigInt, DigitError>;

    /// Deepest Case-2 scan this producer (or anything it reads) performed,
    /// measured in positions past the requested digit.
    fn scan_depth(&self) -> u32 {
        0
    }
}

/// How a value is represented.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BackingKind {
    Terminating,
    Rational,
    Algorithmic,
}

enum Backing {
    Terminating(ScaledDecimal),
    Rational(BigRational),
    Algorithmic(Algorithmic),
}

struct Algorithmic {
    source: Box<dyn DigitSource>,
    /// Longest truncation computed so far: `(k, floor(x * 10^k))`.
    memo: Mutex<Option<(u32, BigInt)>>,
}

impl Algorithmic {
    fn truncation(&self, k: u32) -> Result<BigInt, DigitError> {
        let mut memo = self.memo.lock().unwrap_or_else(|e| e.into_inner());
        if let Some((known, mantissa)) = memo.as_ref() {
            if *known >= k {
                return Ok(floor_shift(mantissa, known - k));
            }
        }
        let target = k.div_ceil(BLOCK).max(1) * BLOCK;
        let (at, mantissa) = match self.source.truncation(target) {
            Ok(m) => (target, m),
            // a deeper block may fail where the requested digit does not
            Err(_) if target > k => (k, self.source.truncation(k)?),
            Err(e) => return Err(e),
        };
        let out = floor_shift(&mantissa, at - k);
        *memo = Some((at, mantissa));
        Ok(out)
    }
}

/// An element `a_0.a_1a_2...` with `a_k < 9` for infinitely many `k`.
///
/// Cheap to clone; clones share the digit memo.
#[derive(Clone)]
pub struct DecimalReal {
    inner: Arc<Backing>,
}

impl DecimalReal {
    pub fn from_scaled(a: ScaledDecimal) -> Self {
        Self::wrap(Backing::Terminating(a))
    }

    pub fn from_integer(n: impl Into<BigInt>) -> Self {
        Self::from_scaled(ScaledDecimal::from_integer(n))
    }

    pub fn zero() -> Self {
        Self::from_integer(0)
    }

    pub fn one() -> Self {
        Self::from_integer(1)
    }

    /// `p / q` expanded by long division with floor semantics.
    pub fn from_rational(p: impl Into<BigInt>, q: impl Into<BigInt>) -> Result<Self, DigitError> {
        let q = q.into();
        if q.is_zero() {
            return Err(DigitError::Domain("zero denominator".into()));
        }
        Ok(Self::from_big_rational(BigRational::new(p.into(), q)))
    }

    pub fn from_big_rational(r: BigRational) -> Self {
        Self::wrap(Backing::Rational(r))
    }

    /// An `Algorithmic` value. The caller vouches for the producer.
    pub fn from_source(source: impl DigitSource + 'static) -> Self {
        Self::wrap(Backing::Algorithmic(Algorithmic {
            source: Box::new(source),
            memo: Mutex::new(None),
        }))
    }

    /// `Algorithmic` value from an integer part and a digit function for
    /// positions `k >= 1`.
    pub fn from_digit_fn(
        integer_part: impl Into<BigInt>,
        digit: impl Fn(u32) -> u8 + Send + Sync + 'static,
    ) -> Self {
        Self::from_source(DigitFn {
            integer_part: integer_part.into(),
            digit: Box::new(digit),
        })
    }

    /// The same value hidden behind an opaque producer, so arithmetic on it
    /// takes the digit-scan path instead of exact shortcuts.
    pub fn algorithmic_copy(&self) -> Self {
        Self::from_source(Opaque(self.clone()))
    }

    fn wrap(b: Backing) -> Self {
        DecimalReal { inner: Arc::new(b) }
    }

    pub fn kind(&self) -> BackingKind {
        match &*self.inner {
            Backing::Terminating(_) => BackingKind::Terminating,
            Backing::Rational(_) => BackingKind::Rational,
            Backing::Algorithmic(_) => BackingKind::Algorithmic,
        }
    }

    pub fn is_exact(&self) -> bool {
        self.kind() != BackingKind::Algorithmic
    }

    pub fn exact_value(&self) -> Option<BigRational> {
        match &*self.inner {
            Backing::Terminating(a) => Some(a.to_rational()),
            Backing::Rational(r) => Some(r.clone()),
            Backing::Algorithmic(_) => None,
        }
    }

    pub fn as_terminating(&self) -> Option<&ScaledDecimal> {
        match &*self.inner {
            Backing::Terminating(a) => Some(a),
            _ => None,
        }
    }

    /// True when the value is exact and its expansion terminates.
    pub fn is_terminating(&self) -> bool {
        match &*self.inner {
            Backing::Terminating(_) => true,
            Backing::Rational(r) => ScaledDecimal::from_rational(r).is_some(),
            Backing::Algorithmic(_) => false,
        }
    }

    /// `floor(x * 10^k)`.
    pub fn truncation_mantissa(&self, k: u32) -> Result<BigInt, DigitError> {
        match &*self.inner {
            Backing::Terminating(a) => Ok(a.truncate(k).mantissa().clone()),
            Backing::Rational(r) => Ok(floor_scaled(r, k)),
            Backing::Algorithmic(alg) => alg.truncation(k),
        }
    }

    /// `x_k = a_0.a_1...a_k`.
    pub fn truncation(&self, k: u32) -> Result<ScaledDecimal, DigitError> {
        Ok(ScaledDecimal::new(self.truncation_mantissa(k)?, k))
    }

    /// `theta_k(x)`.
    pub fn digit(&self, k: u32) -> Result<Digit, DigitError> {
        let m = self.truncation_mantissa(k)?;
        Ok(if k == 0 {
            Digit::IntegerPart(m)
        } else {
            Digit::Decimal(last_digit(&m))
        })
    }

    /// Like [`digit`](Self::digit), with fuel exhaustion as a value.
    pub fn outcome(&self, k: u32) -> Result<DigitOutcome, DigitError> {
        match self.digit(k) {
            Ok(d) => Ok(DigitOutcome::Determined(d)),
            Err(DigitError::Undetermined { horizon }) => Ok(DigitOutcome::Exhausted { horizon }),
            Err(e) => Err(e),
        }
    }

    pub fn integer_part(&self) -> Result<BigInt, DigitError> {
        self.truncation_mantissa(0)
    }

    /// Fractional digits `a_1..=a_k`.
    pub fn digits(&self, k: u32) -> Result<Vec<u8>, DigitError> {
        let m = self.truncation_mantissa(k)?;
        let frac = m.mod_floor(&crate::exact_scaled::pow10(k));
        let s = frac.to_string();
        let mut out = vec![0u8; k as usize - s.len().min(k as usize)];
        out.extend(s.bytes().map(|b| b - b'0'));
        Ok(out)
    }

    /// Floor-form rendering of `x_k`.
    pub fn to_decimal_string(&self, k: u32) -> Result<String, DigitError> {
        Ok(render_floor(&self.truncation_mantissa(k)?, k))
    }

    /// Deepest Case-2 scan recorded while producing this value's digits.
    pub fn scan_depth(&self) -> u32 {
        match &*self.inner {
            Backing::Algorithmic(alg) => alg.source.scan_depth(),
            _ => 0,
        }
    }

    /// True when both handles share one representation (and memo).
    pub fn ptr_eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner)
    }
}

impl fmt::Debug for DecimalReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &*self.inner {
            Backing::Terminating(a) => write!(f, "Terminating({a})"),
            Backing::Rational(r) => write!(f, "Rational({r})"),
            Backing::Algorithmic(alg) => {
                let memo = alg.memo.lock().unwrap_or_else(|e| e.into_inner());
                match memo.as_ref() {
                    Some((k, m)) => write!(f, "Algorithmic({}..)", render_floor(m, *k)),
                    None => write!(f, "Algorithmic(..)"),
                }
            }
        }
    }
}

impl From<ScaledDecimal> for DecimalReal {
    fn from(a: ScaledDecimal) -> Self {
        Self::from_scaled(a)
    }
}

struct DigitFn {
    integer_part: BigInt,
    digit: Box<dyn Fn(u32) -> u8 + Send + Sync>,
}

impl DigitSource for DigitFn {
    fn truncation(&self, k: u32) -> Result<BigInt, DigitError> {
        let mut m = self.integer_part.clone();
        for i in 1..=k {
            let d = (self.digit)(i);
            debug_assert!(d <= 9);
            m = m * 10u32 + u32::from(d);
        }
        Ok(m)
    }
}

struct Opaque(DecimalReal);

impl DigitSource for Opaque {
    fn truncation(&self, k: u32) -> Result<BigInt, DigitError> {
        self.0.truncation_mantissa(k)
    }

    fn scan_depth(&self) -> u32 {
        self.0.scan_depth()
    }
}

/// Verdict of a fuel-bounded dictionary comparison.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Comparison {
    Less,
    Greater,
    /// Truncations agree through position `l`.
    Indistinguishable(u32),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SignOutcome {
    Positive,
    Negative,
    IndistinguishableFromZero(u32),
}

/// Compare truncations `x_k`, `y_k` for `k = 0..=fuel`. A separation at any
/// position is final: `x_k < y_k` implies `x < y`.
pub fn cmp_with_fuel(x: &DecimalReal, y: &DecimalReal, fuel: Fuel) -> Result<Comparison, DigitError> {
    if let (Some(a), Some(b)) = (x.exact_value(), y.exact_value()) {
        // equal exact values never separate
        if a == b {
            return Ok(Comparison::Indistinguishable(fuel.get()));
        }
    }
    for k in 0..=fuel.get() {
        match x.truncation_mantissa(k)?.cmp(&y.truncation_mantissa(k)?) {
            Ordering::Less => return Ok(Comparison::Less),
            Ordering::Greater => return Ok(Comparison::Greater),
            Ordering::Equal => {}
        }
    }
    Ok(Comparison::Indistinguishable(fuel.get()))
}

/// Sign relative to zero. `a_0 < 0` decides `Negative` at once and
/// `a_0 >= 1` decides `Positive`; otherwise digits are scanned up to `fuel`.
pub fn sign_with_fuel(x: &DecimalReal, fuel: Fuel) -> Result<SignOutcome, DigitError> {
    Ok(match positive_position(x, fuel)? {
        PositionSign::Negative => SignOutcome::Negative,
        PositionSign::Positive(_) => SignOutcome::Positive,
        PositionSign::Unknown => SignOutcome::IndistinguishableFromZero(fuel.get()),
    })
}

pub(crate) enum PositionSign {
    Negative,
    /// `x >= 10^(-l)` with `l` the first position where `x_l > 0`.
    Positive(u32),
    Unknown,
}

pub(crate) fn positive_position(x: &DecimalReal, fuel: Fuel) -> Result<PositionSign, DigitError> {
    let a0 = x.integer_part()?;
    if a0.is_negative() {
        return Ok(PositionSign::Negative);
    }
    if a0 >= BigInt::from(1) {
        return Ok(PositionSign::Positive(0));
    }
    if let Some(r) = x.exact_value() {
        if r.is_zero() {
            return Ok(PositionSign::Unknown);
        }
    }
    for k in 1..=fuel.get() {
        if x.truncation_mantissa(k)?.is_positive() {
            return Ok(PositionSign::Positive(k));
        }
    }
    Ok(PositionSign::Unknown)
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum DumpError {
    #[error("missing or malformed `D10 v1 a0=<int>` header")]
    Header,
    #[error("non-digit byte on line {line}")]
    Digit { line: usize },
}

/// Write `x` to `k` digits in the digit-dump format: a `D10 v1 a0=<int>`
/// header, then the fractional digits in lines of 50.
pub fn write_dump(x: &DecimalReal, k: u32, mut out: impl Write) -> io::Result<()> {
    let a0 = x.integer_part().map_err(io::Error::other)?;
    let digits = x.digits(k).map_err(io::Error::other)?;
    write_dump_digits(&a0, &digits, &mut out)
}

pub fn write_dump_digits(a0: &BigInt, digits: &[u8], mut out: impl Write) -> io::Result<()> {
    writeln!(out, "D10 v1 a0={a0}")?;
    for line in digits.chunks(50) {
        let s: String = line.iter().map(|d| char::from(b'0' + d)).collect();
        writeln!(out, "{s}")?;
    }
    Ok(())
}

/// Parse a digit dump back into `(a_0, digits)`.
pub fn parse_dump(text: &str) -> Result<(BigInt, Vec<u8>), DumpError> {
    let mut lines = text.lines();
    let header = lines.next().ok_or(DumpError::Header)?;
    let a0 = header
        .strip_prefix("D10 v1 a0=")
        .and_then(|s| s.trim().parse::<BigInt>().ok())
        .ok_or(DumpError::Header)?;
    let mut digits = Vec::new();
    for (i, line) in lines.enumerate() {
        for b in line.trim_end().bytes() {
            if !b.is_ascii_digit() {
                return Err(DumpError::Digit { line: i + 2 });
            }
            digits.push(b - b'0');
        }
    }
    Ok((a0, digits))
}
