//! Left-to-right arithmetic on [`DecimalReal`].
//!
//! Addition, subtraction and multiplication emit `(x op y)_k` by scanning
//! positions `n = k+1, k+2, ...` for a witness digit in the truncated
//! result (a non-9 digit for `+` and `*`, a disagreeing digit pair for `-`).
//! When both operands are exact the result is computed by fraction
//! arithmetic instead; that is precisely the fragment where the
//! terminating-result case can be recognized.
//!
//! Scans are bounded by [`Fuel`]. Running out of fuel is reported as
//! [`DigitError::Undetermined`], never as a guessed digit.

use std::sync::atomic::{AtomicU32, Ordering};
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::decimal_stream::{positive_position, DecimalReal, DigitError, DigitSource, PositionSign};
use crate::digit_search::DigitSearch;
use crate::exact_scaled::{floor_shift, last_digit, pow10, ScaledDecimal};

/// Bound on the scan depth per emitted digit: producing digit `k` may inspect
/// positions up to `k + fuel`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Fuel(u32);

impl Fuel {
    pub const DEFAULT: Fuel = Fuel(1000);

    pub fn new(horizon: u32) -> Self {
        Fuel(horizon.max(1))
    }

    pub fn get(self) -> u32 {
        self.0
    }

    /// Last position a scan for digit `k` may inspect.
    pub fn horizon(self, k: u32) -> u32 {
        k.saturating_add(self.0)
    }
}

impl Default for Fuel {
    fn default() -> Self {
        Fuel::DEFAULT
    }
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum ArithError {
    #[error("domain error: {0}")]
    Domain(String),
    #[error(transparent)]
    Digit(#[from] DigitError),
}

/// Smallest `s` with `a0x + a0y + 2 <= 10^s`, so that `x + y <= 10^s` for
/// non-negative operands.
pub fn scale_param(a0x: &BigInt, a0y: &BigInt) -> u32 {
    let need = a0x + a0y + 2u32;
    let mut s = 0;
    while pow10(s) < need {
        s += 1;
    }
    s
}

/// Constant `M` with `|(xy)_k - x_k y_k| <= M * 10^(-k)` for non-negative
/// `x`, `y` multiplied at scale `s`.
pub fn product_bound(s: u32) -> BigInt {
    pow10(s) * 2u32 + 2u32
}

/// Which Case-2 scan to run.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ScanOp {
    Add,
    Sub,
    /// Product of non-negative operands at the scale given by [`scale_param`].
    Mul,
}

struct Step {
    /// Mantissa of the truncated combination at scale `n`.
    mantissa: BigInt,
    /// `theta_n` of that combination.
    digit: u8,
    witness: bool,
}

fn scan_step(op: ScanOp, x: &DecimalReal, y: &DecimalReal, n: u32, s: u32) -> Result<Step, DigitError> {
    Ok(match op {
        ScanOp::Add => {
            let m = x.truncation_mantissa(n)? + y.truncation_mantissa(n)?;
            let digit = last_digit(&m);
            Step { mantissa: m, digit, witness: digit != 9 }
        }
        ScanOp::Sub => {
            // theta_n(x) != theta_n(y) exactly when the difference's digit is nonzero
            let m = x.truncation_mantissa(n)? - y.truncation_mantissa(n)?;
            let digit = last_digit(&m);
            Step { mantissa: m, digit, witness: digit != 0 }
        }
        ScanOp::Mul => {
            let p = x.truncation_mantissa(n + s)? * y.truncation_mantissa(n + s)?;
            let m = floor_shift(&p, n + 2 * s);
            let digit = last_digit(&m);
            Step { mantissa: m, digit, witness: digit != 9 }
        }
    })
}

fn mul_scale(x: &DecimalReal, y: &DecimalReal) -> Result<u32, DigitError> {
    Ok(scale_param(&x.integer_part()?, &y.integer_part()?))
}

struct ScanSource {
    op: ScanOp,
    x: DecimalReal,
    y: DecimalReal,
    fuel: Fuel,
    scale: OnceLock<u32>,
    depth: AtomicU32,
}

impl ScanSource {
    fn new(op: ScanOp, x: &DecimalReal, y: &DecimalReal, fuel: Fuel) -> Self {
        ScanSource {
            op,
            x: x.clone(),
            y: y.clone(),
            fuel,
            scale: OnceLock::new(),
            depth: AtomicU32::new(0),
        }
    }

    fn scale(&self) -> Result<u32, DigitError> {
        if self.op != ScanOp::Mul {
            return Ok(0);
        }
        if let Some(s) = self.scale.get() {
            return Ok(*s);
        }
        let s = mul_scale(&self.x, &self.y)?;
        Ok(*self.scale.get_or_init(|| s))
    }
}

impl DigitSource for ScanSource {
    fn truncation(&self, k: u32) -> Result<BigInt, DigitError> {
        let s = self.scale()?;
        let horizon = self.fuel.horizon(k);
        for n in k + 1..=horizon {
            let step = scan_step(self.op, &self.x, &self.y, n, s)?;
            if step.witness {
                self.depth.fetch_max(n - k, Ordering::Relaxed);
                return Ok(floor_shift(&step.mantissa, n - k));
            }
        }
        self.depth.fetch_max(self.fuel.get(), Ordering::Relaxed);
        Err(DigitError::Undetermined { horizon })
    }

    fn scan_depth(&self) -> u32 {
        self.depth
            .load(Ordering::Relaxed)
            .max(self.x.scan_depth())
            .max(self.y.scan_depth())
    }
}

/// Record of one Case-2 scan, for diagnostics and demos.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScanTrace {
    pub position: u32,
    /// `(n, theta_n)` for every inspected position, in order.
    pub scanned: Vec<(u32, u8)>,
    /// `(x op y)_position` when a witness was found.
    pub result: Option<ScaledDecimal>,
    /// When no witness appeared: the value the terminating-result rule
    /// assigns if the non-witness digits continue forever
    /// (`(x_m + y_m)_m + 10^-m`, `x_m - y_m`, `(x_{m+s} y_{m+s})_m + 10^-m`
    /// with `m = position`).
    pub terminating_candidate: Option<ScaledDecimal>,
}

impl ScanTrace {
    /// How far past `position` the scan went.
    pub fn depth(&self) -> u32 {
        self.scanned.last().map_or(0, |(n, _)| n - self.position)
    }
}

/// Run the scan for `(x op y)_k` explicitly, without shortcuts or memo.
/// `Mul` expects non-negative operands.
pub fn case_scan(op: ScanOp, x: &DecimalReal, y: &DecimalReal, k: u32, fuel: Fuel) -> Result<ScanTrace, DigitError> {
    let s = if op == ScanOp::Mul { mul_scale(x, y)? } else { 0 };
    let mut scanned = Vec::new();
    for n in k + 1..=fuel.horizon(k) {
        let step = scan_step(op, x, y, n, s)?;
        scanned.push((n, step.digit));
        if step.witness {
            let result = ScaledDecimal::new(floor_shift(&step.mantissa, n - k), k);
            return Ok(ScanTrace { position: k, scanned, result: Some(result), terminating_candidate: None });
        }
    }
    let base = scan_step(op, x, y, k, s)?;
    let candidate = match op {
        ScanOp::Sub => ScaledDecimal::new(base.mantissa, k),
        ScanOp::Add | ScanOp::Mul => ScaledDecimal::new(base.mantissa + 1u32, k),
    };
    Ok(ScanTrace { position: k, scanned, result: None, terminating_candidate: Some(candidate) })
}

fn both_exact(x: &DecimalReal, y: &DecimalReal) -> Option<(BigRational, BigRational)> {
    Some((x.exact_value()?, y.exact_value()?))
}

fn exact_combine(
    x: &DecimalReal,
    y: &DecimalReal,
    scaled: impl Fn(&ScaledDecimal, &ScaledDecimal) -> ScaledDecimal,
    ratio: impl Fn(BigRational, BigRational) -> BigRational,
) -> Option<DecimalReal> {
    if let (Some(a), Some(b)) = (x.as_terminating(), y.as_terminating()) {
        return Some(DecimalReal::from_scaled(scaled(a, b)));
    }
    let (a, b) = both_exact(x, y)?;
    Some(DecimalReal::from_big_rational(ratio(a, b)))
}

/// `x + y`.
pub fn add(x: &DecimalReal, y: &DecimalReal, fuel: Fuel) -> DecimalReal {
    exact_combine(x, y, ScaledDecimal::add_exact, |a, b| a + b)
        .unwrap_or_else(|| DecimalReal::from_source(ScanSource::new(ScanOp::Add, x, y, fuel)))
}

/// `x - y`.
pub fn sub(x: &DecimalReal, y: &DecimalReal, fuel: Fuel) -> DecimalReal {
    exact_combine(x, y, ScaledDecimal::sub_exact, |a, b| a - b)
        .unwrap_or_else(|| DecimalReal::from_source(ScanSource::new(ScanOp::Sub, x, y, fuel)))
}

/// `-x`, defined as `0 - x`.
pub fn negate(x: &DecimalReal, fuel: Fuel) -> DecimalReal {
    sub(&DecimalReal::zero(), x, fuel)
}

/// `x * y`. Signs are resolved from the integer parts on first use:
/// `xy = (-x)(-y)` when both are negative, `xy = -(x(-y))` when one is.
pub fn mul(x: &DecimalReal, y: &DecimalReal, fuel: Fuel) -> DecimalReal {
    exact_combine(x, y, ScaledDecimal::mul_exact, |a, b| a * b).unwrap_or_else(|| {
        DecimalReal::from_source(SignedMul {
            x: x.clone(),
            y: y.clone(),
            fuel,
            resolved: OnceLock::new(),
        })
    })
}

/// Product of two operands the caller knows to be non-negative.
fn mul_nonneg(x: &DecimalReal, y: &DecimalReal, fuel: Fuel) -> DecimalReal {
    exact_combine(x, y, ScaledDecimal::mul_exact, |a, b| a * b)
        .unwrap_or_else(|| DecimalReal::from_source(ScanSource::new(ScanOp::Mul, x, y, fuel)))
}

/// A value assembled lazily from its operands on the first digit request.
trait Resolve: Send + Sync {
    fn slot(&self) -> &OnceLock<DecimalReal>;
    fn build(&self) -> Result<DecimalReal, DigitError>;

    fn resolved(&self) -> Result<&DecimalReal, DigitError> {
        if let Some(r) = self.slot().get() {
            return Ok(r);
        }
        let built = self.build()?;
        Ok(self.slot().get_or_init(|| built))
    }
}

struct SignedMul {
    x: DecimalReal,
    y: DecimalReal,
    fuel: Fuel,
    resolved: OnceLock<DecimalReal>,
}

impl Resolve for SignedMul {
    fn slot(&self) -> &OnceLock<DecimalReal> {
        &self.resolved
    }

    fn build(&self) -> Result<DecimalReal, DigitError> {
        let x_neg = self.x.integer_part()?.is_negative();
        let y_neg = self.y.integer_part()?.is_negative();
        let f = self.fuel;
        Ok(match (x_neg, y_neg) {
            (false, false) => mul_nonneg(&self.x, &self.y, f),
            (true, true) => mul_nonneg(&negate(&self.x, f), &negate(&self.y, f), f),
            (false, true) => negate(&mul_nonneg(&self.x, &negate(&self.y, f), f), f),
            (true, false) => negate(&mul_nonneg(&self.y, &negate(&self.x, f), f), f),
        })
    }
}

impl DigitSource for SignedMul {
    fn truncation(&self, k: u32) -> Result<BigInt, DigitError> {
        self.resolved()?.truncation_mantissa(k)
    }

    fn scan_depth(&self) -> u32 {
        self.resolved.get().map_or(0, DecimalReal::scan_depth)
    }
}

/// `x * 10^e`, an exact digit shift.
pub fn shift(x: &DecimalReal, e: i32) -> DecimalReal {
    if e == 0 {
        return x.clone();
    }
    if let Some(a) = x.as_terminating() {
        let out = if e > 0 {
            ScaledDecimal::new(a.mantissa() * pow10(e as u32), a.scale())
        } else {
            ScaledDecimal::new(a.mantissa().clone(), a.scale() + e.unsigned_abs())
        };
        return DecimalReal::from_scaled(out);
    }
    if let Some(r) = x.exact_value() {
        let factor = BigRational::from_integer(pow10(e.unsigned_abs()));
        return DecimalReal::from_big_rational(if e > 0 { r * factor } else { r / factor });
    }
    DecimalReal::from_source(Shift { x: x.clone(), e })
}

struct Shift {
    x: DecimalReal,
    e: i32,
}

impl DigitSource for Shift {
    fn truncation(&self, k: u32) -> Result<BigInt, DigitError> {
        let at = i64::from(k) + i64::from(self.e);
        if at >= 0 {
            self.x.truncation_mantissa(at as u32)
        } else {
            Ok(floor_shift(&self.x.truncation_mantissa(0)?, (-at) as u32))
        }
    }

    fn scan_depth(&self) -> u32 {
        self.x.scan_depth()
    }
}

/// Certified lower bound `|x| >= 10^(-l)` and the sign of `x`.
fn nonzero_certificate(x: &DecimalReal, fuel: Fuel) -> Result<(bool, DecimalReal, u32), ArithError> {
    let zero_err = || ArithError::Domain("operand is indistinguishable from zero".into());
    match positive_position(x, fuel)? {
        PositionSign::Positive(l) => Ok((false, x.clone(), l)),
        PositionSign::Unknown => Err(zero_err()),
        PositionSign::Negative => {
            let abs = negate(x, fuel);
            match positive_position(&abs, fuel)? {
                PositionSign::Positive(l) => Ok((true, abs, l)),
                _ => Err(zero_err()),
            }
        }
    }
}

/// Decide `x <= r` for rational `r = num / den` (`den > 0`) by comparing
/// truncations `x_n`, `n = start..=start + fuel`.
fn le_rational(x: &DecimalReal, num: &BigInt, den: &BigInt, start: u32, fuel: Fuel) -> Result<bool, DigitError> {
    let horizon = fuel.horizon(start);
    for n in start..=horizon {
        let xn = x.truncation_mantissa(n)?;
        let scaled_num = num * pow10(n);
        // x in [xn, xn + 1) * 10^-n
        if (&xn + 1u32) * den <= scaled_num {
            return Ok(true);
        }
        if &xn * den > scaled_num {
            return Ok(false);
        }
    }
    Err(DigitError::Undetermined { horizon })
}

/// `1 / x` by maximal digit search: each digit is the largest keeping
/// `x * t <= 1`.
pub fn reciprocal(x: &DecimalReal, fuel: Fuel) -> Result<DecimalReal, ArithError> {
    if let Some(r) = x.exact_value() {
        if r.is_zero() {
            return Err(ArithError::Domain("reciprocal of zero".into()));
        }
        return Ok(DecimalReal::from_big_rational(r.recip()));
    }
    let (negative, abs, l) = nonzero_certificate(x, fuel)?;
    let inv = reciprocal_positive(&abs, l, fuel);
    Ok(if negative { negate(&inv, fuel) } else { inv })
}

/// Reciprocal of `x >= 10^(-l)`.
fn reciprocal_positive(x: &DecimalReal, l: u32, fuel: Fuel) -> DecimalReal {
    let xp = x.clone();
    let search = DigitSearch::new(
        move |m, k| {
            if !m.is_positive() {
                return Ok(true);
            }
            // x * m * 10^-k <= 1  <=>  x <= 10^k / m
            le_rational(&xp, &pow10(k), m, k, fuel)
        },
        move || Ok((BigInt::zero(), pow10(l) + 1u32)),
    );
    DecimalReal::from_source(search)
}

/// `x / y`.
pub fn div(x: &DecimalReal, y: &DecimalReal, fuel: Fuel) -> Result<DecimalReal, ArithError> {
    if let Some((a, b)) = both_exact(x, y) {
        if b.is_zero() {
            return Err(ArithError::Domain("division by zero".into()));
        }
        return Ok(DecimalReal::from_big_rational(a / b));
    }
    let (y_negative, y_abs, l) = nonzero_certificate(y, fuel)?;
    if x.exact_value().is_some_and(|r| r.is_zero()) {
        return Ok(DecimalReal::zero());
    }
    Ok(DecimalReal::from_source(SignedDiv {
        x: x.clone(),
        y_abs,
        y_negative,
        l,
        fuel,
        resolved: OnceLock::new(),
    }))
}

struct SignedDiv {
    x: DecimalReal,
    y_abs: DecimalReal,
    y_negative: bool,
    /// `y_abs >= 10^(-l)`.
    l: u32,
    fuel: Fuel,
    resolved: OnceLock<DecimalReal>,
}

impl Resolve for SignedDiv {
    fn slot(&self) -> &OnceLock<DecimalReal> {
        &self.resolved
    }

    /// Rescale to `0 <= x' < 1 <= y'` and undo the scaling afterwards.
    fn build(&self) -> Result<DecimalReal, DigitError> {
        let f = self.fuel;
        let x_negative = self.x.integer_part()?.is_negative();
        let x_abs = if x_negative { negate(&self.x, f) } else { self.x.clone() };
        let a0 = x_abs.integer_part()?;
        let mut a = 0u32;
        while pow10(a) < &a0 + 1u32 {
            a += 1;
        }
        let xs = shift(&x_abs, -(a as i32));
        let ys = shift(&self.y_abs, self.l as i32);
        let core = DecimalReal::from_source(DivCore {
            x: xs,
            y: ys,
            fuel: f,
            fallback: OnceLock::new(),
            depth: AtomicU32::new(0),
        });
        let q = shift(&core, (a + self.l) as i32);
        Ok(if x_negative != self.y_negative { negate(&q, f) } else { q })
    }
}

impl DigitSource for SignedDiv {
    fn truncation(&self, k: u32) -> Result<BigInt, DigitError> {
        self.resolved()?.truncation_mantissa(k)
    }

    fn scan_depth(&self) -> u32 {
        self.resolved.get().map_or(0, DecimalReal::scan_depth)
    }
}

/// Quotient for `0 <= x < 1 <= y`: if `theta_k(x_{2k} / y_k) > 0` then
/// `(x/y)_{k-1} = (x_{2k} / y_k)_{k-1}`.
struct DivCore {
    x: DecimalReal,
    y: DecimalReal,
    fuel: Fuel,
    /// `x * (1/y)`, used once the quotient scan runs out of fuel.
    fallback: OnceLock<DecimalReal>,
    depth: AtomicU32,
}

impl DivCore {
    fn fallback(&self) -> Result<&DecimalReal, DigitError> {
        if let Some(v) = self.fallback.get() {
            return Ok(v);
        }
        let inv = reciprocal(&self.y, self.fuel).map_err(|e| match e {
            ArithError::Digit(d) => d,
            ArithError::Domain(m) => DigitError::Domain(m),
        })?;
        let v = mul(&self.x, &inv, self.fuel);
        Ok(self.fallback.get_or_init(|| v))
    }
}

impl DigitSource for DivCore {
    fn truncation(&self, j: u32) -> Result<BigInt, DigitError> {
        let horizon = self.fuel.horizon(j);
        for k in j + 1..=horizon {
            let x2k = self.x.truncation_mantissa(2 * k)?;
            let yk = self.y.truncation_mantissa(k)?;
            // mantissa of (x_{2k} / y_k)_k
            let q = x2k.div_floor(&yk);
            if last_digit(&q) > 0 {
                self.depth.fetch_max(k - j, Ordering::Relaxed);
                return Ok(floor_shift(&q, k - j));
            }
        }
        self.depth.fetch_max(self.fuel.get(), Ordering::Relaxed);
        self.fallback()?.truncation_mantissa(j)
    }

    fn scan_depth(&self) -> u32 {
        let own = self.depth.load(Ordering::Relaxed).max(self.x.scan_depth()).max(self.y.scan_depth());
        self.fallback.get().map_or(own, |f| own.max(f.scan_depth()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decimal_stream::BackingKind;

    fn dec(s: &str) -> DecimalReal {
        DecimalReal::from_scaled(s.parse().unwrap())
    }

    fn rat(p: i64, q: i64) -> DecimalReal {
        DecimalReal::from_rational(p, q).unwrap()
    }

    fn f() -> Fuel {
        Fuel::new(200)
    }

    fn algo(x: &DecimalReal) -> DecimalReal {
        x.algorithmic_copy()
    }

    #[test]
    fn worked_sum() {
        let s = add(&dec("(-8).765"), &dec("5.678"), f());
        assert_eq!(s.kind(), BackingKind::Terminating);
        assert_eq!(s.as_terminating().unwrap().to_string(), "(-2).443");
        let scanned = add(&algo(&dec("(-8).765")), &algo(&dec("5.678")), f());
        assert_eq!(scanned.to_decimal_string(3).unwrap(), "(-2).443");
    }

    #[test]
    fn thirds_sum_to_one() {
        let s = add(&rat(1, 3), &rat(2, 3), f());
        assert_eq!(s.exact_value().unwrap(), BigRational::from_integer(1.into()));
        assert_eq!(s.to_decimal_string(5).unwrap(), "1.00000");
        // the scan never sees a non-9 digit
        let t = case_scan(ScanOp::Add, &algo(&rat(1, 3)), &algo(&rat(2, 3)), 0, Fuel::new(50)).unwrap();
        assert!(t.result.is_none());
        assert!(t.scanned.iter().all(|&(_, d)| d == 9));
        assert_eq!(t.terminating_candidate.unwrap(), "1".parse().unwrap());
    }

    #[test]
    fn subtraction_floor_form() {
        let d = sub(&dec("5.678"), &dec("8.765"), f());
        assert_eq!(d.to_decimal_string(3).unwrap(), "(-4).913");
        let scanned = sub(&algo(&rat(5678, 1000)), &algo(&rat(8765, 1000)), f());
        assert_eq!(scanned.to_decimal_string(2).unwrap(), "(-4).91");
        let x = rat(1, 7);
        assert_eq!(sub(&x, &x, f()).to_decimal_string(4).unwrap(), "0.0000");
        let ax = algo(&x);
        assert_eq!(sub(&ax, &ax, f()).digit(0), Err(DigitError::Undetermined { horizon: 200 }));
        assert_eq!(sub(&ax, &DecimalReal::zero(), f()).to_decimal_string(12).unwrap(), "0.142857142857");
    }

    #[test]
    fn product_case_one() {
        let p = mul(&rat(1, 3), &dec("0.3"), f());
        assert_eq!(p.to_decimal_string(6).unwrap(), "0.100000");
        let t = case_scan(ScanOp::Mul, &algo(&rat(1, 3)), &algo(&dec("0.3")), 1, Fuel::new(60)).unwrap();
        assert!(t.result.is_none());
        assert!(t.scanned.iter().all(|&(n, d)| n >= 2 && d == 9));
        assert_eq!(t.terminating_candidate.unwrap(), "0.1".parse().unwrap());
    }

    #[test]
    fn product_identity_and_signs() {
        let x = algo(&rat(22, 7));
        let one = DecimalReal::one();
        assert_eq!(mul(&x, &one, f()).to_decimal_string(12).unwrap(), x.to_decimal_string(12).unwrap());
        let nx = algo(&rat(-22, 7));
        let ny = algo(&rat(-3, 11));
        let expect = |p: i64, q: i64, k| rat(p, q).to_decimal_string(k).unwrap();
        assert_eq!(mul(&nx, &ny, f()).to_decimal_string(10).unwrap(), expect(66, 77, 10));
        assert_eq!(mul(&x, &ny, f()).to_decimal_string(10).unwrap(), expect(-66, 77, 10));
        assert_eq!(mul(&nx, &algo(&rat(3, 11)), f()).to_decimal_string(10).unwrap(), expect(-66, 77, 10));
    }

    #[test]
    fn scale_param_is_minimal() {
        assert_eq!(scale_param(&0.into(), &0.into()), 1);
        assert_eq!(scale_param(&4.into(), &4.into()), 1);
        assert_eq!(scale_param(&4.into(), &5.into()), 2);
        assert_eq!(scale_param(&49.into(), &49.into()), 2);
        assert_eq!(product_bound(1), BigInt::from(22));
    }

    #[test]
    fn reciprocals() {
        assert_eq!(reciprocal(&dec("3"), f()).unwrap().to_decimal_string(5).unwrap(), "0.33333");
        assert_eq!(reciprocal(&dec("2"), f()).unwrap().to_decimal_string(5).unwrap(), "0.50000");
        assert_eq!(reciprocal(&dec("1"), f()).unwrap().to_decimal_string(3).unwrap(), "1.000");
        let r = reciprocal(&algo(&dec("3")), f()).unwrap();
        assert_eq!(r.to_decimal_string(8).unwrap(), "0.33333333");
        let r = reciprocal(&algo(&rat(-7, 3)), f()).unwrap();
        assert_eq!(r.to_decimal_string(6).unwrap(), rat(-3, 7).to_decimal_string(6).unwrap());
        let tiny = algo(&rat(3, 40_000));
        assert_eq!(reciprocal(&tiny, f()).unwrap().to_decimal_string(2).unwrap(), "13333.33");
        assert!(matches!(reciprocal(&DecimalReal::zero(), f()), Err(ArithError::Domain(_))));
        assert!(matches!(reciprocal(&algo(&DecimalReal::zero()), f()), Err(ArithError::Domain(_))));
    }

    #[test]
    fn division() {
        assert_eq!(div(&dec("1"), &dec("3"), f()).unwrap().to_decimal_string(6).unwrap(), "0.333333");
        let q = div(&algo(&dec("1")), &algo(&dec("3")), f()).unwrap();
        assert_eq!(q.to_decimal_string(6).unwrap(), "0.333333");
        let x = algo(&rat(355, 113));
        assert_eq!(
            div(&x, &DecimalReal::one(), f()).unwrap().to_decimal_string(15).unwrap(),
            x.to_decimal_string(15).unwrap()
        );
        let q = div(&algo(&rat(-1234, 7)), &algo(&rat(3, 1000)), f()).unwrap();
        assert_eq!(q.to_decimal_string(9).unwrap(), rat(-1_234_000, 21).to_decimal_string(9).unwrap());
        let q = div(&algo(&rat(5, 13)), &algo(&rat(-7, 9)), f()).unwrap();
        assert_eq!(q.to_decimal_string(9).unwrap(), rat(-45, 91).to_decimal_string(9).unwrap());
        assert!(matches!(div(&dec("1"), &dec("0"), f()), Err(ArithError::Domain(_))));
        assert!(matches!(div(&dec("1"), &algo(&dec("0")), f()), Err(ArithError::Domain(_))));
    }

    #[test]
    fn division_with_terminating_quotient_uses_fallback_path() {
        // 1/4 = 0.25 terminates: the quotient scan sees only zeros after
        // position 2, and the reciprocal fallback cannot separate 4 * 0.25
        // from 1 either.
        let q = div(&algo(&dec("1")), &algo(&dec("4")), Fuel::new(30)).unwrap();
        assert_eq!(q.to_decimal_string(1).unwrap(), "0.2");
        assert!(matches!(q.digit(3), Err(DigitError::Undetermined { .. })));
    }

    #[test]
    fn shifts() {
        let x = algo(&rat(22, 7));
        assert_eq!(shift(&x, 2).to_decimal_string(3).unwrap(), "314.285");
        assert_eq!(shift(&x, -2).to_decimal_string(5).unwrap(), "0.03142");
        assert_eq!(shift(&dec("1.5"), -1).to_decimal_string(2).unwrap(), "0.15");
    }

    #[test]
    fn scan_depth_is_recorded() {
        // 0.45 + 0.5449...  has a carry resolved three positions later
        let x = algo(&dec("0.45"));
        let y = algo(&dec("0.5449"));
        let s = add(&x, &y, f());
        assert_eq!(s.to_decimal_string(1).unwrap(), "0.9");
        assert!(s.scan_depth() >= 1);
    }
}
