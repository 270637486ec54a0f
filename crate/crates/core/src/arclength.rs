//! Lengths of monotone plane curves, with certified two-sided enclosures for
//! arcs of the unit circle and π as the length of the upper semicircle.

use std::fmt;
use std::sync::{Arc, OnceLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::decimal_stream::{DecimalReal, DigitError, DigitSource};
use crate::exact_scaled::{floor_scaled, pow10, render_floor};

/// Closed interval with rational endpoints.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalInterval {
    lo: BigRational,
    hi: BigRational,
}

fn ratio(n: impl Into<BigInt>) -> BigRational {
    BigRational::from_integer(n.into())
}

fn ceil_scaled(x: &BigRational, k: u32) -> BigInt {
    -floor_scaled(&-x, k)
}

/// `floor(sqrt(x) * 10^p) / 10^p` for `x >= 0`.
pub(crate) fn sqrt_down(x: &BigRational, p: u32) -> BigRational {
    let n = floor_scaled(x, 2 * p).max(BigInt::zero());
    BigRational::new(n.sqrt(), pow10(p))
}

/// `ceil(sqrt(x) * 10^p) / 10^p` for `x >= 0`.
pub(crate) fn sqrt_up(x: &BigRational, p: u32) -> BigRational {
    let n = ceil_scaled(x, 2 * p).max(BigInt::zero());
    let mut r = n.sqrt();
    if &r * &r < n {
        r += 1u32;
    }
    BigRational::new(r, pow10(p))
}

impl RationalInterval {
    pub fn new(lo: BigRational, hi: BigRational) -> Self {
        assert!(lo <= hi, "interval endpoints out of order");
        RationalInterval { lo, hi }
    }

    pub fn point(x: BigRational) -> Self {
        RationalInterval { lo: x.clone(), hi: x }
    }

    pub fn zero() -> Self {
        Self::point(BigRational::zero())
    }

    pub fn lo(&self) -> &BigRational {
        &self.lo
    }

    pub fn hi(&self) -> &BigRational {
        &self.hi
    }

    pub fn width(&self) -> BigRational {
        &self.hi - &self.lo
    }

    pub fn midpoint(&self) -> BigRational {
        (&self.lo + &self.hi) / ratio(2)
    }

    pub fn contains(&self, x: &BigRational) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn contains_zero(&self) -> bool {
        self.contains(&BigRational::zero())
    }

    pub fn overlaps(&self, other: &Self) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }

    pub fn is_subset_of(&self, other: &Self) -> bool {
        other.lo <= self.lo && self.hi <= other.hi
    }

    pub fn add(&self, other: &Self) -> Self {
        RationalInterval { lo: &self.lo + &other.lo, hi: &self.hi + &other.hi }
    }

    pub fn sub(&self, other: &Self) -> Self {
        RationalInterval { lo: &self.lo - &other.hi, hi: &self.hi - &other.lo }
    }

    pub fn neg(&self) -> Self {
        RationalInterval { lo: -&self.hi, hi: -&self.lo }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let products = [
            &self.lo * &other.lo,
            &self.lo * &other.hi,
            &self.hi * &other.lo,
            &self.hi * &other.hi,
        ];
        let lo = products.iter().min().expect("four products").clone();
        let hi = products.iter().max().expect("four products").clone();
        RationalInterval { lo, hi }
    }

    /// `1 / self`, or `None` when the interval contains zero.
    pub fn recip(&self) -> Option<Self> {
        if self.contains_zero() {
            return None;
        }
        Some(RationalInterval { lo: self.hi.recip(), hi: self.lo.recip() })
    }

    pub fn square(&self) -> Self {
        let a = &self.lo * &self.lo;
        let b = &self.hi * &self.hi;
        let hi = a.clone().max(b.clone());
        let lo = if self.contains_zero() { BigRational::zero() } else { a.min(b) };
        RationalInterval { lo, hi }
    }

    pub fn abs(&self) -> Self {
        if self.lo.is_negative() && self.hi.is_positive() {
            RationalInterval { lo: BigRational::zero(), hi: self.lo.abs().max(self.hi.clone()) }
        } else if self.hi <= BigRational::zero() {
            self.neg()
        } else {
            self.clone()
        }
    }

    pub fn min(&self, other: &Self) -> Self {
        RationalInterval {
            lo: self.lo.clone().min(other.lo.clone()),
            hi: self.hi.clone().min(other.hi.clone()),
        }
    }

    /// Widen the endpoints outward to the scale-`p` grid.
    pub fn round_out(&self, p: u32) -> Self {
        RationalInterval {
            lo: BigRational::new(floor_scaled(&self.lo, p), pow10(p)),
            hi: BigRational::new(ceil_scaled(&self.hi, p), pow10(p)),
        }
    }

    /// Enclosure of `sqrt` over the non-negative part, endpoints on the
    /// scale-`p` grid.
    pub fn sqrt(&self, p: u32) -> Self {
        RationalInterval { lo: sqrt_down(&self.lo, p), hi: sqrt_up(&self.hi, p) }
    }
}

impl RationalInterval {
    /// Endpoints as decimals with `digits` places, the lower rounded down and
    /// the upper rounded up.
    pub fn render_outward(&self, digits: u32) -> (String, String) {
        (render_bound(&self.lo, digits, false), render_bound(&self.hi, digits, true))
    }
}

impl fmt::Display for RationalInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

fn render_bound(x: &BigRational, p: u32, up: bool) -> String {
    let m = if up { ceil_scaled(x, p) } else { floor_scaled(x, p) };
    render_floor(&m, p)
}

/// Interval extension of a coordinate function: maps a parameter interval
/// and a working precision to an enclosure of the image.
pub type IntervalMap = dyn Fn(&RationalInterval, u32) -> RationalInterval + Send + Sync;

/// A parameterized plane curve `t -> (f1(t), f2(t))` on `[a, b]`.
#[derive(Clone)]
pub struct Curve {
    a: BigRational,
    b: BigRational,
    f1: Arc<IntervalMap>,
    f2: Arc<IntervalMap>,
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum CurveError {
    #[error("empty parameter domain")]
    EmptyDomain,
    #[error("coordinate {coordinate} is not {expected:?} near t = {at}")]
    NotMonotone { coordinate: u8, expected: Monotonicity, at: String },
    #[error("partition must increase from a to b")]
    BadPartition,
}

impl Curve {
    pub fn new(
        a: BigRational,
        b: BigRational,
        f1: impl Fn(&RationalInterval, u32) -> RationalInterval + Send + Sync + 'static,
        f2: impl Fn(&RationalInterval, u32) -> RationalInterval + Send + Sync + 'static,
    ) -> Result<Self, CurveError> {
        if a > b {
            return Err(CurveError::EmptyDomain);
        }
        Ok(Curve { a, b, f1: Arc::new(f1), f2: Arc::new(f2) })
    }

    pub fn domain(&self) -> (&BigRational, &BigRational) {
        (&self.a, &self.b)
    }

    /// Enclosure of `F(t)`.
    pub fn point(&self, t: &BigRational, p: u32) -> (RationalInterval, RationalInterval) {
        let at = RationalInterval::point(t.clone());
        ((self.f1)(&at, p), (self.f2)(&at, p))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Monotonicity {
    Increasing,
    Decreasing,
}

/// A curve whose coordinates are each monotone on the whole domain.
#[derive(Clone)]
pub struct MonotoneCurve {
    curve: Curve,
    m1: Monotonicity,
    m2: Monotonicity,
}

const MONOTONE_SAMPLES: u32 = 16;
const SAMPLE_PRECISION: u32 = 20;

impl MonotoneCurve {
    /// Attach monotonicity tags, checking them on an evenly spaced sample of
    /// the domain. The check can refute a tag but cannot prove it.
    pub fn new(curve: Curve, m1: Monotonicity, m2: Monotonicity) -> Result<Self, CurveError> {
        let step = (&curve.b - &curve.a) / ratio(MONOTONE_SAMPLES);
        let mut prev: Option<(BigRational, RationalInterval, RationalInterval)> = None;
        for i in 0..=MONOTONE_SAMPLES {
            let t = &curve.a + &step * ratio(i);
            let (y1, y2) = curve.point(&t, SAMPLE_PRECISION);
            if let Some((_, p1, p2)) = &prev {
                for (coordinate, m, before, after) in [(1u8, m1, p1, &y1), (2, m2, p2, &y2)] {
                    let refuted = match m {
                        Monotonicity::Increasing => after.hi < before.lo,
                        Monotonicity::Decreasing => after.lo > before.hi,
                    };
                    if refuted {
                        return Err(CurveError::NotMonotone { coordinate, expected: m, at: t.to_string() });
                    }
                }
            }
            prev = Some((t, y1, y2));
        }
        Ok(MonotoneCurve { curve, m1, m2 })
    }

    pub fn curve(&self) -> &Curve {
        &self.curve
    }

    pub fn monotonicity(&self) -> (Monotonicity, Monotonicity) {
        (self.m1, self.m2)
    }
}

/// Enclosure of the length of the inscribed polygon through
/// `F(c_0), ..., F(c_n)`; its lower end is a certified lower bound for the
/// curve length.
pub fn polygonal_lower(curve: &Curve, partition: &[BigRational], precision: u32) -> Result<RationalInterval, CurveError> {
    let increasing = partition.windows(2).all(|w| w[0] < w[1]);
    let inside = partition.first().is_some_and(|c| *c >= curve.a) && partition.last().is_some_and(|c| *c <= curve.b);
    if !increasing || !inside {
        return Err(CurveError::BadPartition);
    }
    let p = precision + 4;
    let points: Vec<_> = partition.iter().map(|t| curve.point(t, p)).collect();
    let mut total = RationalInterval::zero();
    for w in points.windows(2) {
        let dx = w[1].0.sub(&w[0].0);
        let dy = w[1].1.sub(&w[0].1);
        total = total.add(&dx.square().add(&dy.square()).sqrt(p));
    }
    Ok(total)
}

/// `|f1(a) - f1(b)| + |f2(a) - f2(b)|`, an upper bound for the length of a
/// monotone curve.
pub fn variation_upper_bound(curve: &MonotoneCurve, precision: u32) -> RationalInterval {
    let c = &curve.curve;
    let p = precision + 4;
    let (a1, a2) = c.point(&c.a, p);
    let (b1, b2) = c.point(&c.b, p);
    b1.sub(&a1).abs().add(&b2.sub(&a2).abs())
}

/// Enclosure of `sqrt(1 - t^2)` for `t` in `[lo, hi]`, rounded at scale `p`.
fn circle_height(t: &RationalInterval, p: u32) -> RationalInterval {
    let one = RationalInterval::point(ratio(1));
    let s = one.sub(&t.square());
    let s = RationalInterval::new(s.lo.max(BigRational::zero()), s.hi.max(BigRational::zero()));
    s.sqrt(p)
}

fn check_parameter(t: &BigRational) -> Result<(), DigitError> {
    if t.abs() > ratio(1) {
        return Err(DigitError::Domain(format!("parameter {t} outside [-1, 1]")));
    }
    Ok(())
}

/// The upper unit semicircle `t -> (t, sqrt(1 - t^2))`, `-1 <= t <= 1`.
pub fn unit_semicircle() -> Curve {
    Curve::new(ratio(-1), ratio(1), |t, _| t.clone(), circle_height).expect("non-empty domain")
}

/// The piece of the upper unit semicircle over `[t0, t1]`, which must not
/// straddle 0 so that both coordinates are monotone.
pub fn circle_piece(t0: BigRational, t1: BigRational) -> Result<MonotoneCurve, CurveError> {
    let height = if t0.is_negative() && t1.is_positive() {
        return Err(CurveError::NotMonotone { coordinate: 2, expected: Monotonicity::Increasing, at: "0".into() });
    } else if t1 <= BigRational::zero() {
        Monotonicity::Increasing
    } else {
        Monotonicity::Decreasing
    };
    let curve = Curve::new(t0, t1, |t, _| t.clone(), circle_height)?;
    MonotoneCurve::new(curve, Monotonicity::Increasing, height)
}

/// Straight segment from `p` to `q`, parameterized on `[0, 1]`.
pub fn segment(p: (BigRational, BigRational), q: (BigRational, BigRational)) -> Curve {
    let along = |a: BigRational, b: BigRational| {
        move |t: &RationalInterval, _p: u32| {
            let d = RationalInterval::point(&b - &a);
            RationalInterval::point(a.clone()).add(&t.mul(&d))
        }
    };
    Curve::new(ratio(0), ratio(1), along(p.0, q.0), along(p.1, q.1)).expect("non-empty domain")
}

/// Inscribed and circumscribed lengths of the arc of the upper unit
/// semicircle over `[t0, t1]`, for `2, 4, 8, ...` equal pieces, rounded
/// outward at scale `p`.
///
/// The arc is halved repeatedly by angle. With `c` the chord of one of the
/// `2^m` equal pieces, `2^m c` is the inscribed length and
/// `2^m c / sqrt(1 - c^2/4)` the circumscribed tangent length. The half-arc
/// chord is `c / sqrt(2 + sqrt(4 - c^2))`, increasing in `c`, so both ends
/// of the chord interval are pushed through with directed rounding.
fn halvings(t0: &BigRational, t1: &BigRational, p: u32) -> impl Iterator<Item = RationalInterval> {
    let x = RationalInterval::point(t1 - t0);
    let y0 = circle_height(&RationalInterval::point(t0.clone()), p);
    let y1 = circle_height(&RationalInterval::point(t1.clone()), p);
    let chord = x.square().add(&y1.sub(&y0).square()).sqrt(p);
    let mut lo = chord.lo;
    let mut hi = chord.hi.min(ratio(2));
    let four = ratio(4);
    let mut pieces = BigInt::one();
    std::iter::from_fn(move || {
        // halve: c' = c / sqrt(2 + sqrt(4 - c^2))
        let d_up = sqrt_up(&(ratio(2) + sqrt_up(&(&four - &lo * &lo), p)), p);
        let d_down = sqrt_down(&(ratio(2) + sqrt_down(&(&four - &hi * &hi), p)), p);
        lo = BigRational::new(floor_scaled(&(&lo / d_up), p), pow10(p));
        hi = BigRational::new(ceil_scaled(&(&hi / d_down), p), pow10(p));
        pieces *= 2u32;
        let n = BigRational::from_integer(pieces.clone());
        let cos_half = sqrt_down(&(ratio(1) - &hi * &hi / &four), p);
        let circumscribed = BigRational::new(ceil_scaled(&(&n * &hi / cos_half), p), pow10(p));
        Some(RationalInterval::new(&n * &lo, circumscribed))
    })
}

fn check_arc(t0: &BigRational, t1: &BigRational) -> Result<(), DigitError> {
    check_parameter(t0)?;
    check_parameter(t1)?;
    if t0 > t1 {
        return Err(DigitError::Domain(format!("arc endpoints out of order: {t0} > {t1}")));
    }
    Ok(())
}

/// Enclosure of the length of the arc of the upper unit semicircle over
/// `[t0, t1]`, of width below `10^(-precision)`.
pub fn circle_arc_length(t0: &BigRational, t1: &BigRational, precision: u32) -> Result<RationalInterval, DigitError> {
    check_arc(t0, t1)?;
    if t0 == t1 {
        return Ok(RationalInterval::zero());
    }
    let target = BigRational::new(BigInt::one(), pow10(precision));
    let cap = 4 * precision + 60;
    let mut best = RationalInterval::new(BigRational::zero(), ratio(4));
    for bounds in halvings(t0, t1, 2 * (precision + 4)).take(cap as usize) {
        best = bounds;
        if best.width() < target {
            return Ok(best);
        }
    }
    Err(DigitError::PrecisionUnreachable {
        precision,
        lo: render_bound(&best.lo, precision + 4, false),
        hi: render_bound(&best.hi, precision + 4, true),
    })
}

/// Inscribed and circumscribed lengths of the arc over `[t0, t1]` split into
/// `2^m` equal pieces, `m >= 1`, rounded outward at scale `p`.
pub fn arc_polygon_bounds(t0: &BigRational, t1: &BigRational, m: u32, p: u32) -> Result<RationalInterval, DigitError> {
    check_arc(t0, t1)?;
    if m == 0 {
        return Err(DigitError::Domain("at least two pieces are needed for a tangent bound".into()));
    }
    if t0 == t1 {
        return Ok(RationalInterval::zero());
    }
    Ok(halvings(t0, t1, p).nth(m as usize - 1).expect("the halving sequence is infinite"))
}

/// Extra digits of enclosure precision tried, in order, before a digit is
/// settled by identification.
const GUARDS: [u32; 5] = [2, 4, 8, 16, 24];

struct ArcSource {
    t0: BigRational,
    t1: BigRational,
    identified: OnceLock<BigRational>,
}

impl DigitSource for ArcSource {
    fn truncation(&self, k: u32) -> Result<BigInt, DigitError> {
        if let Some(g) = self.identified.get() {
            return Ok(floor_scaled(g, k));
        }
        let mut last = None;
        for guard in GUARDS {
            let e = circle_arc_length(&self.t0, &self.t1, k + guard)?;
            let lo = floor_scaled(&e.lo, k);
            let hi = floor_scaled(&e.hi, k);
            if lo == hi {
                return Ok(lo);
            }
            last = Some(hi);
        }
        // the enclosures keep straddling the grid point hi / 10^k
        let g = BigRational::new(last.expect("guards are non-empty"), pow10(k));
        Ok(floor_scaled(self.identified.get_or_init(|| g), k))
    }
}

/// Length of the arc of the upper unit semicircle over `[t0, t1]`, i.e. the
/// angle it subtends.
pub fn arc_angle(t0: BigRational, t1: BigRational) -> Result<DecimalReal, DigitError> {
    check_arc(&t0, &t1)?;
    if t0 == t1 {
        return Ok(DecimalReal::zero());
    }
    Ok(DecimalReal::from_source(ArcSource { t0, t1, identified: OnceLock::new() }))
}

/// π, the length of the upper unit semicircle. All calls share one digit
/// memo.
pub fn pi_real() -> DecimalReal {
    static PI: OnceLock<DecimalReal> = OnceLock::new();
    PI.get_or_init(|| arc_angle(ratio(-1), ratio(1)).expect("valid parameters")).clone()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(p: i64, d: i64) -> BigRational {
        BigRational::new(p.into(), d.into())
    }

    fn dec(s: &str) -> BigRational {
        s.parse::<crate::ScaledDecimal>().unwrap().to_rational()
    }

    #[test]
    fn segment_length() {
        let s = segment((q(0, 1), q(0, 1)), (q(3, 1), q(4, 1)));
        let l = polygonal_lower(&s, &[q(0, 1), q(1, 1)], 10).unwrap();
        assert_eq!(l, RationalInterval::point(q(5, 1)));
    }

    #[test]
    fn semicircle_three_points() {
        let l = polygonal_lower(&unit_semicircle(), &[q(-1, 1), q(0, 1), q(1, 1)], 10).unwrap();
        assert!(l.lo() <= &dec("2.8284271248") && l.hi() >= &dec("2.8284271247"));
        assert!(l.lo() < &dec("3.1415"));
    }

    #[test]
    fn refinement_raises_lower_bound() {
        let s = unit_semicircle();
        let coarse = polygonal_lower(&s, &[q(-1, 1), q(0, 1), q(1, 1)], 20).unwrap();
        let fine = polygonal_lower(&s, &[q(-1, 1), q(-1, 2), q(0, 1), q(1, 2), q(1, 1)], 20).unwrap();
        assert!(fine.lo() >= coarse.lo());
    }

    #[test]
    fn variation_bounds() {
        let quarter = circle_piece(q(0, 1), q(1, 1)).unwrap();
        assert_eq!(variation_upper_bound(&quarter, 10), RationalInterval::point(q(2, 1)));
        let left = circle_piece(q(-1, 1), q(0, 1)).unwrap();
        let total = variation_upper_bound(&left, 10).add(&variation_upper_bound(&quarter, 10));
        assert_eq!(total.hi(), &q(4, 1));
        let dot = MonotoneCurve::new(
            segment((q(1, 1), q(1, 1)), (q(1, 1), q(1, 1))),
            Monotonicity::Increasing,
            Monotonicity::Increasing,
        )
        .unwrap();
        assert_eq!(variation_upper_bound(&dot, 5), RationalInterval::zero());
    }

    #[test]
    fn monotonicity_tags_are_checked() {
        assert!(circle_piece(q(-1, 2), q(1, 2)).is_err());
        let wrong = MonotoneCurve::new(unit_semicircle(), Monotonicity::Increasing, Monotonicity::Increasing);
        assert!(matches!(wrong, Err(CurveError::NotMonotone { coordinate: 2, .. })));
    }

    #[test]
    fn pi_enclosure() {
        let e = circle_arc_length(&q(-1, 1), &q(1, 1), 2).unwrap();
        assert!(e.lo() > &dec("3.14") && e.hi() < &dec("3.15"));
        assert!(e.width() < dec("0.01"));
        let e = circle_arc_length(&q(-1, 1), &q(1, 1), 30).unwrap();
        assert!(e.contains(&dec("3.141592653589793238462643383279502")));
    }

    #[test]
    fn pi_digits() {
        assert_eq!(pi_real().to_decimal_string(10).unwrap(), "3.1415926535");
        assert_eq!(arc_angle(q(0, 1), q(1, 1)).unwrap().to_decimal_string(5).unwrap(), "1.57079");
        assert!(arc_angle(q(1, 3), q(1, 3)).unwrap().is_exact());
    }

    #[test]
    fn short_arcs_approach_the_chord() {
        let t0 = q(1, 5);
        let t1 = q(1, 5) + q(1, 1_000_000);
        let e = circle_arc_length(&t0, &t1, 20).unwrap();
        let chord = polygonal_lower(&unit_semicircle(), &[t0, t1], 24).unwrap();
        assert!(e.lo() >= &(chord.lo() - q(1, 1_000_000_000)));
        assert!(e.width() < dec("0.00000000000000000001"));
    }

    #[test]
    fn bad_parameters() {
        assert!(matches!(arc_angle(q(1, 2), q(0, 1)), Err(DigitError::Domain(_))));
        assert!(matches!(circle_arc_length(&q(0, 1), &q(2, 1), 3), Err(DigitError::Domain(_))));
    }

    #[test]
    fn polygon_bounds_squeeze_pi() {
        // a square and its circumscribed square: 2 sqrt 2 <= pi <= 4
        let b = arc_polygon_bounds(&q(-1, 1), &q(1, 1), 1, 20).unwrap();
        assert!(b.contains(&dec("2.82842712475")) && b.contains(&dec("3.99999999")));
        let mut prev = b;
        for m in 2..12 {
            let b = arc_polygon_bounds(&q(-1, 1), &q(1, 1), m, 30).unwrap();
            assert!(b.lo() >= prev.lo() && b.hi() <= prev.hi(), "m={m}");
            assert!(b.contains(&dec("3.14159265358979")));
            prev = b;
        }
        assert!(arc_polygon_bounds(&q(-1, 1), &q(1, 1), 0, 10).is_err());
    }
}
