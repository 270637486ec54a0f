//! Reals from Dedekind cuts, Cauchy sequences with a modulus, finite greatest
//! lower bounds, and the interleaving pairing of two reals into one.

use std::sync::{Arc, OnceLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arithmetic::Fuel;
use crate::decimal_stream::{DecimalReal, DigitError, DigitSource};
use crate::digit_search::DigitSearch;
use crate::exact_scaled::{floor_scaled, pow10};

/// Side of a cut a rational falls on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    A,
    B,
}

type Classifier = dyn Fn(&BigRational) -> Side + Send + Sync;

/// A Dedekind cut `(A | B)` given by a decision procedure and one rational on
/// each side. `B` is expected to have no smallest element.
#[derive(Clone)]
pub struct CutOracle {
    classify: Arc<Classifier>,
    witness_lo: BigRational,
    witness_hi: BigRational,
}

impl CutOracle {
    pub fn new(
        classify: impl Fn(&BigRational) -> Side + Send + Sync + 'static,
        witness_lo: BigRational,
        witness_hi: BigRational,
    ) -> Self {
        CutOracle { classify: Arc::new(classify), witness_lo, witness_hi }
    }

    pub fn classify(&self, q: &BigRational) -> Side {
        (self.classify)(q)
    }
}

/// The real `x` with `A = {q : q < x}` (or `q <= x`).
///
/// Digits come from a maximal search over `A`. A run of `fuel` nines after a
/// requested digit is reported as undetermined: it is what a cut whose `B`
/// has a smallest element looks like, and such a cut has no valid expansion.
pub fn from_dedekind(cut: CutOracle, fuel: Fuel) -> Result<DecimalReal, DigitError> {
    if cut.witness_lo >= cut.witness_hi {
        return Err(DigitError::InconsistentCut("witnesses are not increasing".into()));
    }
    if cut.classify(&cut.witness_lo) != Side::A {
        return Err(DigitError::InconsistentCut("lower witness is not in A".into()));
    }
    if cut.classify(&cut.witness_hi) != Side::B {
        return Err(DigitError::InconsistentCut("upper witness is not in B".into()));
    }
    let lo = cut.witness_lo.floor().to_integer();
    let hi = cut.witness_hi.ceil().to_integer();
    let pred_cut = cut.clone();
    let search = DigitSearch::new(
        move |m, k| Ok(pred_cut.classify(&grid(m, k)) == Side::A),
        move || Ok((lo.clone(), hi.clone())),
    );
    Ok(DecimalReal::from_source(Dedekind { search, cut, fuel }))
}

fn grid(m: &BigInt, k: u32) -> BigRational {
    BigRational::new(m.clone(), pow10(k))
}

struct Dedekind {
    search: DigitSearch,
    cut: CutOracle,
    fuel: Fuel,
}

impl DigitSource for Dedekind {
    fn truncation(&self, k: u32) -> Result<BigInt, DigitError> {
        let m = self.search.truncation(k)?;
        // digits k+1 ..= k+fuel are all 9 iff (m+1)/10^k - 10^-(k+fuel) lies in A
        let f = self.fuel.get();
        let probe = (&m + 1u32) * pow10(f) - 1u32;
        if self.cut.classify(&grid(&probe, k + f)) == Side::A {
            return Err(DigitError::Undetermined { horizon: self.fuel.horizon(k) });
        }
        Ok(m)
    }
}

type Term = dyn Fn(u64) -> BigRational + Send + Sync;
type Modulus = dyn Fn(u32) -> u64 + Send + Sync;

/// A rational sequence with an effective modulus: `|q_m - q_n| < 10^(-s)`
/// whenever `m, n > modulus(s)`.
#[derive(Clone)]
pub struct CauchyInput {
    term: Arc<Term>,
    modulus: Arc<Modulus>,
}

impl CauchyInput {
    pub fn new(
        term: impl Fn(u64) -> BigRational + Send + Sync + 'static,
        modulus: impl Fn(u32) -> u64 + Send + Sync + 'static,
    ) -> Self {
        CauchyInput { term: Arc::new(term), modulus: Arc::new(modulus) }
    }

    pub fn term(&self, n: u64) -> BigRational {
        (self.term)(n)
    }

    pub fn modulus(&self, s: u32) -> u64 {
        (self.modulus)(s)
    }

    /// `q_{N(s)+1}`, within `10^(-s)` of the limit.
    pub fn approximant(&self, s: u32) -> BigRational {
        self.term(self.modulus(s) + 1)
    }
}

/// The limit of a Cauchy sequence.
///
/// Digit `k` is emitted once the enclosure `q_{N(s)+1} +- 10^(-s)` fits in a
/// single scale-`k` cell. If instead the enclosures keep straddling the same
/// grid point `g` out to scale `k + fuel`, the limit is identified with `g`
/// and all later digits are read from `g`.
pub fn from_cauchy(c: CauchyInput, fuel: Fuel) -> DecimalReal {
    DecimalReal::from_source(Cauchy { c, fuel, identified: OnceLock::new() })
}

struct Cauchy {
    c: CauchyInput,
    fuel: Fuel,
    identified: OnceLock<BigRational>,
}

impl DigitSource for Cauchy {
    fn truncation(&self, k: u32) -> Result<BigInt, DigitError> {
        if let Some(g) = self.identified.get() {
            return Ok(floor_scaled(g, k));
        }
        let horizon = self.fuel.horizon(k);
        let mut previous: Option<(u32, BigRational)> = None;
        let mut step = 1u32;
        let mut s = k + 1;
        loop {
            let q = self.c.approximant(s);
            let r = BigRational::new(BigInt::one(), pow10(s));
            if let Some((ps, pq)) = &previous {
                if (&q - pq).abs() >= BigRational::new(BigInt::one(), pow10(*ps)) {
                    return Err(DigitError::ModulusViolation { scale: *ps });
                }
            }
            let lo = floor_scaled(&(&q - &r), k);
            let hi = floor_scaled(&(&q + &r), k);
            if lo == hi {
                return Ok(lo);
            }
            if s >= horizon {
                // the enclosure straddles the grid point hi / 10^k
                let g = BigRational::new(hi, pow10(k));
                return Ok(floor_scaled(self.identified.get_or_init(|| g), k));
            }
            previous = Some((s, q));
            s = (s + step).min(horizon);
            step = step.saturating_mul(2);
        }
    }
}

/// Greatest lower bound of finitely many reals: at every scale the smallest
/// truncation among the elements.
pub fn glb_finite(xs: &[DecimalReal]) -> Result<DecimalReal, DigitError> {
    if xs.is_empty() {
        return Err(DigitError::Domain("greatest lower bound of an empty list".into()));
    }
    if xs.len() == 1 {
        return Ok(xs[0].clone());
    }
    let exact: Option<Vec<BigRational>> = xs.iter().map(DecimalReal::exact_value).collect();
    if let Some(values) = exact {
        let (i, _) = values.iter().enumerate().min_by(|a, b| a.1.cmp(b.1)).expect("non-empty");
        return Ok(xs[i].clone());
    }
    Ok(DecimalReal::from_source(Glb(xs.to_vec())))
}

/// Greatest lower bound of the first `horizon` elements of a sequence. This
/// is an upper bound for the glb of the whole sequence, nothing more.
pub fn glb_prefix(xs: impl IntoIterator<Item = DecimalReal>, horizon: usize) -> Result<DecimalReal, DigitError> {
    let head: Vec<DecimalReal> = xs.into_iter().take(horizon).collect();
    glb_finite(&head)
}

struct Glb(Vec<DecimalReal>);

impl DigitSource for Glb {
    fn truncation(&self, k: u32) -> Result<BigInt, DigitError> {
        let mut best: Option<BigInt> = None;
        for x in &self.0 {
            let t = x.truncation_mantissa(k)?;
            if best.as_ref().is_none_or(|b| t < *b) {
                best = Some(t);
            }
        }
        Ok(best.expect("non-empty"))
    }

    fn scan_depth(&self) -> u32 {
        self.0.iter().map(DecimalReal::scan_depth).max().unwrap_or(0)
    }
}

/// Unary code of an integer: sign digit, `|n|` ones, closing zero.
fn encode_integer(n: &BigInt) -> Vec<u8> {
    let count = n.abs().to_usize().expect("integer part too large to encode");
    let mut out = Vec::with_capacity(count + 2);
    out.push(u8::from(n.is_negative()));
    out.extend(std::iter::repeat_n(1, count));
    out.push(0);
    out
}

/// `0.a1 b1 c1 a2 b2 c2 ...`: digits of `x` and `y` interleaved with a third
/// stream that spells both integer parts in unary and then stays at 0.
pub fn cantor_pair(x: &DecimalReal, y: &DecimalReal) -> DecimalReal {
    DecimalReal::from_source(Pair { x: x.clone(), y: y.clone(), boxes: OnceLock::new() })
}

struct Pair {
    x: DecimalReal,
    y: DecimalReal,
    boxes: OnceLock<Vec<u8>>,
}

impl Pair {
    fn boxes(&self) -> Result<&[u8], DigitError> {
        if let Some(b) = self.boxes.get() {
            return Ok(b);
        }
        let mut b = encode_integer(&self.x.integer_part()?);
        b.extend(encode_integer(&self.y.integer_part()?));
        Ok(self.boxes.get_or_init(|| b))
    }
}

fn fractional_digits(x: &DecimalReal, n: u32) -> Result<Vec<u8>, DigitError> {
    let mut digits = x.digits(n)?;
    digits.resize(n as usize, 0);
    Ok(digits)
}

impl DigitSource for Pair {
    fn truncation(&self, k: u32) -> Result<BigInt, DigitError> {
        let groups = k.div_ceil(3);
        let a = fractional_digits(&self.x, groups)?;
        let b = fractional_digits(&self.y, groups)?;
        let boxes = self.boxes()?;
        let mut m = BigInt::zero();
        for p in 0..k as usize {
            let i = p / 3;
            let d = match p % 3 {
                0 => a[i],
                1 => b[i],
                _ => boxes.get(i).copied().unwrap_or(0),
            };
            m = m * 10u32 + d;
        }
        Ok(m)
    }
}

/// Inverse of [`cantor_pair`]. The integer-part header is decoded eagerly,
/// reading at most `fuel` box digits; a nonzero box after the header is
/// reported when the digits around it are requested.
pub fn cantor_unpair(z: &DecimalReal, fuel: Fuel) -> Result<(DecimalReal, DecimalReal), DigitError> {
    let a0 = z.integer_part()?;
    if !a0.is_zero() {
        return Err(DigitError::MalformedPairing { position: 0, reason: format!("integer part {a0} is not 0") });
    }
    let mut reader = BoxReader { z, next: 1, limit: fuel.get() };
    let x0 = reader.integer()?;
    let y0 = reader.integer()?;
    let header = reader.next - 1;
    let unpack = |offset: u32, integer_part: BigInt| {
        DecimalReal::from_source(Unpacked { z: z.clone(), offset, integer_part, header })
    };
    Ok((unpack(0, x0), unpack(1, y0)))
}

struct BoxReader<'a> {
    z: &'a DecimalReal,
    /// 1-based index of the next box.
    next: u32,
    limit: u32,
}

impl BoxReader<'_> {
    fn read(&mut self) -> Result<(u32, u8), DigitError> {
        if self.next > self.limit {
            return Err(DigitError::Undetermined { horizon: 3 * self.limit });
        }
        let position = 3 * self.next;
        let d = self.z.digit(position)?.decimal().expect("fractional digit");
        self.next += 1;
        Ok((position, d))
    }

    fn integer(&mut self) -> Result<BigInt, DigitError> {
        let (position, sign) = self.read()?;
        if sign > 1 {
            return Err(malformed(position, format!("sign digit {sign}")));
        }
        let mut count = BigInt::zero();
        loop {
            match self.read()? {
                (_, 1) => count += 1,
                (p, 0) => {
                    if sign == 1 && count.is_zero() {
                        return Err(malformed(p, "negative zero".into()));
                    }
                    return Ok(if sign == 1 { -count } else { count });
                }
                (p, d) => return Err(malformed(p, format!("digit {d} in unary count"))),
            }
        }
    }
}

fn malformed(position: u32, reason: String) -> DigitError {
    DigitError::MalformedPairing { position, reason }
}

struct Unpacked {
    z: DecimalReal,
    /// 0 for the first component, 1 for the second.
    offset: u32,
    integer_part: BigInt,
    /// Number of boxes taken by the integer-part code.
    header: u32,
}

impl DigitSource for Unpacked {
    fn truncation(&self, k: u32) -> Result<BigInt, DigitError> {
        let digits = self.z.digits(3 * k)?;
        let mut m = self.integer_part.clone();
        for i in 0..k {
            let base = 3 * i as usize;
            let box_digit = digits[base + 2];
            if i >= self.header && box_digit != 0 {
                return Err(malformed(3 * i + 3, format!("box digit {box_digit} after the header")));
            }
            m = m * 10u32 + digits[base + self.offset as usize];
        }
        Ok(m)
    }
}
