//! Reference evaluation by rational interval arithmetic, kept separate from
//! the digit-streaming code, plus an exhaustive check of the arithmetic on
//! small terminating decimals.

use std::sync::Mutex;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::arclength::RationalInterval;
use crate::arithmetic::{self, Fuel};
use crate::decimal_stream::{DecimalReal, DigitError};
use crate::exact_scaled::ScaledDecimal;
use crate::expr::{BinaryOp, Const, Expr, Func, UnaryOp};

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum OracleError {
    #[error("division by an interval containing 0")]
    DivisionByZero,
    #[error("square root of a negative interval")]
    NegativeSqrt,
    #[error("the oracle does not evaluate {0}")]
    Unsupported(&'static str),
    #[error("enclosure did not reach width 10^-{0}")]
    NoConvergence(u32),
}

fn pow10(n: u32) -> BigInt {
    BigInt::from(10u32).pow(n)
}

fn int(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

fn ulp(p: u32) -> BigRational {
    BigRational::new(BigInt::one(), pow10(p))
}

fn round_down(x: &BigRational, p: u32) -> BigRational {
    BigRational::new((x * BigRational::from_integer(pow10(p))).floor().to_integer(), pow10(p))
}

fn round_up(x: &BigRational, p: u32) -> BigRational {
    BigRational::new((x * BigRational::from_integer(pow10(p))).ceil().to_integer(), pow10(p))
}

fn outward(i: RationalInterval, p: u32) -> RationalInterval {
    if i.lo() == i.hi() {
        return i;
    }
    RationalInterval::new(round_down(i.lo(), p), round_up(i.hi(), p))
}

/// `arctan(1/x)` for integer `x >= 2`, from the alternating series; the
/// partial sums bracket the value.
fn arctan_inverse(x: i64, p: u32) -> RationalInterval {
    let x2 = int(x * x);
    let mut power = int(x).recip();
    let mut sum = BigRational::zero();
    let target = ulp(p + 2);
    let mut n = 0i64;
    loop {
        let term = &power / int(2 * n + 1);
        if term < target {
            // the next term bounds the tail
            return if n % 2 == 0 {
                RationalInterval::new(sum.clone(), &sum + term)
            } else {
                RationalInterval::new(&sum - term, sum.clone())
            };
        }
        if n % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
        power /= &x2;
        n += 1;
    }
}

/// `pi = 16 arctan(1/5) - 4 arctan(1/239)`.
fn machin_pi(p: u32) -> RationalInterval {
    let a = arctan_inverse(5, p + 2);
    let b = arctan_inverse(239, p + 2);
    let sixteen = RationalInterval::point(int(16));
    let four = RationalInterval::point(int(4));
    outward(sixteen.mul(&a).sub(&four.mul(&b)), p)
}

/// `sum 1/i!` for `i <= n`, plus a tail below `1/(n! n)`.
fn euler(p: u32) -> RationalInterval {
    let target = ulp(p + 1);
    let mut sum = BigRational::zero();
    let mut term = BigRational::one();
    let mut n = 0i64;
    loop {
        sum += &term;
        n += 1;
        term /= int(n);
        // tail after adding 1/(n-1)! is below 1/((n-1)! (n-1)) = term * n / (n-1)
        if n > 1 {
            let tail = &term * int(n) / int(n - 1);
            if tail < target {
                return outward(RationalInterval::new(sum.clone(), sum + tail), p);
            }
        }
    }
}

/// Integer square root by Newton iteration, `floor(sqrt(n))`.
fn isqrt(n: &BigInt) -> BigInt {
    if n.is_zero() {
        return BigInt::zero();
    }
    let mut x = BigInt::one() << (n.bits() / 2 + 1);
    loop {
        let y = (&x + n / &x) >> 1u32;
        if y >= x {
            return x;
        }
        x = y;
    }
}

fn sqrt_interval(i: &RationalInterval, p: u32) -> Result<RationalInterval, OracleError> {
    if i.hi().is_negative() {
        return Err(OracleError::NegativeSqrt);
    }
    let scale = BigRational::from_integer(pow10(2 * p));
    let lo_n = (i.lo().max(&BigRational::zero()) * &scale).floor().to_integer();
    let hi_n = (i.hi() * &scale).ceil().to_integer();
    let lo = isqrt(&lo_n);
    let mut hi = isqrt(&hi_n);
    if &hi * &hi < hi_n {
        hi += 1u32;
    }
    Ok(RationalInterval::new(BigRational::new(lo, pow10(p)), BigRational::new(hi, pow10(p))))
}

/// Enclosure of `e` with every rounding done at scale `p`.
fn eval_at(e: &Expr, p: u32) -> Result<RationalInterval, OracleError> {
    Ok(match e {
        Expr::Number(n) => RationalInterval::point(n.to_rational()),
        Expr::Const(Const::Pi) => machin_pi(p),
        Expr::Const(Const::E) => euler(p),
        Expr::Const(Const::Sqrt2) => sqrt_interval(&RationalInterval::point(int(2)), p)?,
        Expr::Paren(inner) => eval_at(inner, p)?,
        Expr::Unary(op, inner) => {
            let x = eval_at(inner, p)?;
            match op {
                UnaryOp::Neg => x.neg(),
                UnaryOp::Recip => outward(x.recip().ok_or(OracleError::DivisionByZero)?, p),
                UnaryOp::Sqrt => sqrt_interval(&x, p)?,
            }
        }
        Expr::Binary(op, a, b) => {
            let (x, y) = (eval_at(a, p)?, eval_at(b, p)?);
            match op {
                BinaryOp::Add => x.add(&y),
                BinaryOp::Sub => x.sub(&y),
                BinaryOp::Mul => outward(x.mul(&y), p),
                BinaryOp::Div => outward(x.mul(&y.recip().ok_or(OracleError::DivisionByZero)?), p),
            }
        }
        Expr::Call(Func::Glb, args) => {
            let mut acc = eval_at(&args[0], p)?;
            for a in &args[1..] {
                acc = acc.min(&eval_at(a, p)?);
            }
            acc
        }
        Expr::Call(Func::Pair, _) => return Err(OracleError::Unsupported("pair")),
    })
}

const MAX_GUARD_DOUBLINGS: u32 = 8;

/// Enclosure of the exact value of `e` with width at most `10^(-scale)`.
/// Working precision grows until the width target is met; an interval
/// divisor straddling 0 at every precision is an error.
pub fn interval_eval(e: &Expr, scale: u32) -> Result<RationalInterval, OracleError> {
    let target = ulp(scale);
    let mut guard = 4;
    let mut last_err = OracleError::NoConvergence(scale);
    for _ in 0..MAX_GUARD_DOUBLINGS {
        match eval_at(e, scale + guard) {
            Ok(i) if i.width() <= target => return Ok(i),
            Ok(_) => {}
            Err(OracleError::DivisionByZero) => last_err = OracleError::DivisionByZero,
            Err(other) => return Err(other),
        }
        guard *= 2;
    }
    Err(last_err)
}

/// Nested enclosures of one expression: `refine(s + 1)` lies inside
/// `refine(s)` and has width at most `10^(-s)`.
pub struct IntervalReal {
    expr: Expr,
    levels: Mutex<Vec<RationalInterval>>,
}

impl IntervalReal {
    pub fn new(expr: Expr) -> Self {
        IntervalReal { expr, levels: Mutex::new(Vec::new()) }
    }

    pub fn refine(&self, scale: u32) -> Result<RationalInterval, OracleError> {
        let mut levels = self.levels.lock().unwrap_or_else(|e| e.into_inner());
        while levels.len() <= scale as usize {
            let s = levels.len() as u32;
            let fresh = interval_eval(&self.expr, s)?;
            let next = match levels.last() {
                // both contain the exact value, so they intersect
                Some(prev) => RationalInterval::new(
                    fresh.lo().max(prev.lo()).clone(),
                    fresh.hi().min(prev.hi()).clone(),
                ),
                None => fresh,
            };
            levels.push(next);
        }
        Ok(levels[scale as usize].clone())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Certification {
    /// The oracle enclosure lies in the cell `[x_k, x_k + 10^-k)`.
    Certified,
    /// The oracle enclosure misses the cell of `x_j`; `j` is the first such
    /// position.
    Mismatch(u32),
    /// The enclosure straddles a cell boundary; a larger guard may decide.
    Inconclusive,
}

/// Check the first `k` digits of `x` against the oracle value of `e`,
/// evaluated `guard` digits past `k`.
pub fn certify_digits(x: &DecimalReal, e: &Expr, k: u32, guard: u32) -> Result<Certification, CertifyError> {
    let enclosure = interval_eval(e, k + guard)?;
    certify_against(x, &enclosure, k)
}

/// As [`certify_digits`], against a given enclosure.
pub fn certify_against(x: &DecimalReal, enclosure: &RationalInterval, k: u32) -> Result<Certification, CertifyError> {
    let mantissa = x.truncation_mantissa(k)?;
    for j in 0..=k {
        let m = if j == k { mantissa.clone() } else { mantissa.div_floor(&pow10(k - j)) };
        let cell_lo = BigRational::new(m.clone(), pow10(j));
        let cell_hi = BigRational::new(m + 1u32, pow10(j));
        if enclosure.hi() < &cell_lo || enclosure.lo() >= &cell_hi {
            return Ok(Certification::Mismatch(j));
        }
        if j == k {
            let inside = enclosure.lo() >= &cell_lo && enclosure.hi() < &cell_hi;
            return Ok(if inside { Certification::Certified } else { Certification::Inconclusive });
        }
    }
    unreachable!("loop returns at j == k")
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum CertifyError {
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error(transparent)]
    Digit(#[from] DigitError),
}

/// Counts from [`exhaustive_small_check`].
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SmallCheckReport {
    pub values: usize,
    pub pairs: u64,
    pub triples: u64,
    pub checks: u64,
    pub counterexamples: u64,
    pub first_counterexample: Option<String>,
}

impl SmallCheckReport {
    fn record(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.counterexamples += 1;
            if self.first_counterexample.is_none() {
                self.first_counterexample = Some(what());
            }
        }
    }

    fn merge(&mut self, other: SmallCheckReport) {
        self.pairs += other.pairs;
        self.triples += other.triples;
        self.checks += other.checks;
        self.counterexamples += other.counterexamples;
        if self.first_counterexample.is_none() {
            self.first_counterexample = other.first_counterexample;
        }
    }
}

/// A test value: mantissa at the common scale, with its rendering.
struct Sample {
    m: i64,
    real: DecimalReal,
    text: String,
}

/// `floor(num / den * 10^k)` by integer division, independent of the
/// library's digit code.
fn oracle_truncation(num: &BigInt, den: &BigInt, k: u32) -> BigInt {
    (num * pow10(k)).div_floor(den)
}

fn truncation_matches(x: &DecimalReal, num: &BigInt, den: &BigInt, k: u32) -> bool {
    (0..=k).all(|j| x.truncation_mantissa(j).ok().as_ref() == Some(&oracle_truncation(num, den, j)))
}

/// Whether the exact value of `x` is `m * 10^(-scale)`.
fn equals_scaled(x: &DecimalReal, m: i64, scale: u32) -> bool {
    match x.as_terminating() {
        Some(t) if t.scale() <= scale => t.mantissa_at(scale) == BigInt::from(m),
        Some(t) => *t.mantissa() == BigInt::from(m) * pow10(t.scale() - scale),
        None => x.exact_value() == Some(BigRational::new(m.into(), pow10(scale))),
    }
}

/// Enumerate every terminating decimal with at most `max_scale` fractional
/// digits and integer part in `[-max_int, max_int]`, and check
///
/// - `+ - * /` on all pairs against exact fraction arithmetic, both through
///   the exact path and (for `+`, `*`) through the digit-scan path;
/// - commutativity, identities and inverses on all values and pairs;
/// - associativity of `+` and `*` and distributivity on all triples.
pub fn exhaustive_small_check(max_scale: u32, max_int: u32) -> SmallCheckReport {
    let fuel = Fuel::new(64);
    let unit = 10i64.pow(max_scale);
    let lo = -(max_int as i64) * unit;
    let hi = (max_int as i64 + 1) * unit;
    let samples: Vec<Sample> = (lo..hi)
        .map(|m| {
            let d = ScaledDecimal::new(m, max_scale);
            Sample { m, text: d.to_string(), real: DecimalReal::from_scaled(d) }
        })
        .collect();
    let n = samples.len();
    let den = BigInt::from(unit);
    let digits = 2 * max_scale + 2;
    let mut report = SmallCheckReport { values: n, ..Default::default() };

    report.merge(fixed_cases(fuel));

    let zero = DecimalReal::zero();
    let one = DecimalReal::one();
    for x in &samples {
        report.record(equals_scaled(&arithmetic::add(&x.real, &zero, fuel), x.m, max_scale), || {
            format!("{} + 0", x.text)
        });
        report.record(equals_scaled(&arithmetic::mul(&x.real, &one, fuel), x.m, max_scale), || {
            format!("{} * 1", x.text)
        });
        let sum = arithmetic::add(&x.real, &arithmetic::negate(&x.real, fuel), fuel);
        report.record(equals_scaled(&sum, 0, 0), || format!("{} + (-{})", x.text, x.text));
        if x.m != 0 {
            let inv = arithmetic::reciprocal(&x.real, fuel);
            let ok = inv.is_ok_and(|r| equals_scaled(&arithmetic::mul(&x.real, &r, fuel), 1, 0));
            report.record(ok, || format!("{} * {}^-1", x.text, x.text));
        }
    }

    // pair results at scale 2 * max_scale
    let mut sums = Vec::with_capacity(n * n);
    let mut products = Vec::with_capacity(n * n);
    for x in &samples {
        for y in &samples {
            report.pairs += 1;
            let (xm, ym) = (BigInt::from(x.m), BigInt::from(y.m));
            let s = arithmetic::add(&x.real, &y.real, fuel);
            let d = arithmetic::sub(&x.real, &y.real, fuel);
            let p = arithmetic::mul(&x.real, &y.real, fuel);
            let what = |op: &str| format!("{} {op} {}", x.text, y.text);
            report.record(truncation_matches(&s, &(&xm + &ym), &den, digits), || what("+"));
            report.record(truncation_matches(&d, &(&xm - &ym), &den, digits), || what("-"));
            report.record(truncation_matches(&p, &(&xm * &ym), &(&den * &den), digits), || what("*"));
            if y.m != 0 {
                let ok = arithmetic::div(&x.real, &y.real, fuel)
                    .is_ok_and(|q| truncation_matches(&q, &xm, &ym, digits));
                report.record(ok, || what("/"));
            } else {
                report.record(arithmetic::div(&x.real, &y.real, fuel).is_err(), || what("/"));
            }
            let (ax, ay) = (x.real.algorithmic_copy(), y.real.algorithmic_copy());
            report.record(truncation_matches(&arithmetic::add(&ax, &ay, fuel), &(&xm + &ym), &den, digits), || {
                what("+ (scanned)")
            });
            // negating a terminating value by digit scan never finishes, so
            // the scanned product is checked where no sign flip is needed
            if x.m >= 0 && y.m >= 0 {
                report.record(
                    truncation_matches(&arithmetic::mul(&ax, &ay, fuel), &(&xm * &ym), &(&den * &den), digits),
                    || what("* (scanned)"),
                );
            }
            report.record(equals_scaled(&arithmetic::add(&y.real, &x.real, fuel), x.m + y.m, max_scale), || {
                format!("{} + {} = {} + {}", x.text, y.text, y.text, x.text)
            });
            report.record(equals_scaled(&arithmetic::mul(&y.real, &x.real, fuel), x.m * y.m, 2 * max_scale), || {
                format!("{} * {} = {} * {}", x.text, y.text, y.text, x.text)
            });
            sums.push(s);
            products.push(p);
        }
    }

    let triples = |i: usize| {
        let mut r = SmallCheckReport::default();
        let x = &samples[i];
        for (j, y) in samples.iter().enumerate() {
            for (k, z) in samples.iter().enumerate() {
                r.triples += 1;
                let (xy, yz, xz) = (i * n + j, j * n + k, i * n + k);
                let text = || format!("x = {}, y = {}, z = {}", x.text, y.text, z.text);
                let total = x.m + y.m + z.m;
                r.record(equals_scaled(&arithmetic::add(&sums[xy], &z.real, fuel), total, max_scale), || {
                    format!("(x + y) + z, {}", text())
                });
                r.record(equals_scaled(&arithmetic::add(&x.real, &sums[yz], fuel), total, max_scale), || {
                    format!("x + (y + z), {}", text())
                });
                let product = x.m * y.m * z.m;
                r.record(equals_scaled(&arithmetic::mul(&products[xy], &z.real, fuel), product, 3 * max_scale), || {
                    format!("(x y) z, {}", text())
                });
                r.record(equals_scaled(&arithmetic::mul(&x.real, &products[yz], fuel), product, 3 * max_scale), || {
                    format!("x (y z), {}", text())
                });
                let distributed = x.m * (y.m + z.m);
                r.record(equals_scaled(&arithmetic::mul(&x.real, &sums[yz], fuel), distributed, 2 * max_scale), || {
                    format!("x (y + z), {}", text())
                });
                r.record(
                    equals_scaled(&arithmetic::add(&products[xy], &products[xz], fuel), distributed, 2 * max_scale),
                    || format!("x y + x z, {}", text()),
                );
            }
        }
        r
    };
    #[cfg(feature = "parallel")]
    let parts: Vec<SmallCheckReport> = {
        use rayon::prelude::*;
        (0..n).into_par_iter().map(triples).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let parts: Vec<SmallCheckReport> = (0..n).map(triples).collect();
    for part in parts {
        report.merge(part);
    }
    report
}

/// Hand-picked cases outside the enumerated range.
fn fixed_cases(fuel: Fuel) -> SmallCheckReport {
    let mut r = SmallCheckReport::default();
    let dec = |s: &str| DecimalReal::from_scaled(s.parse().expect("literal"));
    let sum = arithmetic::add(&dec("(-8).765"), &dec("5.678"), fuel);
    r.record(equals_scaled(&sum, -1557, 3), || "(-8).765 + 5.678".into());
    r.record(
        sum.as_terminating().map(ToString::to_string).as_deref() == Some("(-2).443"),
        || "(-8).765 + 5.678 renders as (-2).443".into(),
    );
    let third = DecimalReal::from_rational(1, 3).expect("nonzero denominator");
    let p = arithmetic::mul(&third, &dec("0.3"), fuel);
    r.record(equals_scaled(&p, 1, 1), || "(1/3) * 0.3".into());
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::ToPrimitive;
    use crate::arclength::pi_real;
    use crate::expr::parse_expr;

    fn q(p: i64, d: i64) -> BigRational {
        BigRational::new(p.into(), d.into())
    }

    #[test]
    fn rational_enclosures() {
        let i = interval_eval(&parse_expr("1/3").unwrap(), 4).unwrap();
        assert!(i.contains(&q(1, 3)));
        assert!(i.width() <= q(1, 10_000));
        let i = interval_eval(&parse_expr("1/3 + 2/3").unwrap(), 4).unwrap();
        assert_eq!(i, RationalInterval::point(q(1, 1)));
    }

    #[test]
    fn constant_enclosures() {
        let i = interval_eval(&parse_expr("pi + sqrt(2)").unwrap(), 10).unwrap();
        // 4.55580621596...
        assert!(i.lo() > &q(45_558_062_159, 10_000_000_000) && i.hi() < &q(45_558_062_160, 10_000_000_000));
        let e = interval_eval(&parse_expr("e").unwrap(), 12).unwrap();
        assert!(e.lo() > &q(2_718_281_828_459, 1_000_000_000_000));
        let x = interval_eval(&parse_expr("pi - pi").unwrap(), 7).unwrap();
        assert!(x.contains_zero() && x.width() <= q(2, 10_000_000));
    }

    #[test]
    fn isqrt_is_floor() {
        for n in 0..2000u32 {
            let r = isqrt(&BigInt::from(n)).to_u32().unwrap();
            assert!(r * r <= n && (r + 1) * (r + 1) > n, "{n}");
        }
    }

    #[test]
    fn division_by_zero_interval() {
        assert_eq!(interval_eval(&parse_expr("1 / (pi - pi)").unwrap(), 3), Err(OracleError::DivisionByZero));
        assert!(matches!(interval_eval(&parse_expr("pair(1, 2)").unwrap(), 3), Err(OracleError::Unsupported(_))));
    }

    #[test]
    fn nested_refinements() {
        let r = IntervalReal::new(parse_expr("pi / sqrt2").unwrap());
        let coarse = r.refine(5).unwrap();
        let fine = r.refine(9).unwrap();
        assert!(fine.is_subset_of(&coarse));
        assert!(fine.width() <= q(1, 1_000_000_000));
    }

    #[test]
    fn certification() {
        let pi = parse_expr("pi").unwrap();
        assert_eq!(certify_digits(&pi_real(), &pi, 10, 5), Ok(Certification::Certified));
        let third = arithmetic::reciprocal(&DecimalReal::from_integer(3), Fuel::DEFAULT).unwrap();
        assert_eq!(certify_digits(&third, &parse_expr("1/3").unwrap(), 20, 5), Ok(Certification::Certified));
        // 3.1415926545...: position 9 is wrong
        let corrupted = DecimalReal::from_digit_fn(3, |k| {
            let digits = [1, 4, 1, 5, 9, 2, 6, 5, 4, 5, 0];
            digits.get(k as usize - 1).copied().unwrap_or(0)
        });
        assert_eq!(certify_digits(&corrupted, &pi, 10, 5), Ok(Certification::Mismatch(9)));
    }

    #[test]
    fn small_exhaustive() {
        let r = exhaustive_small_check(1, 1);
        assert_eq!(r.values, 30);
        assert_eq!(r.triples, 27_000);
        assert_eq!(r.counterexamples, 0, "{:?}", r.first_counterexample);
    }
}
