#![allow(dead_code)]

use decireal::DecimalReal;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn q(p: i64, d: i64) -> BigRational {
    BigRational::new(p.into(), d.into())
}

pub fn pow10(n: u32) -> BigInt {
    num_traits::pow(BigInt::from(10), n as usize)
}

pub fn floor_at(r: &BigRational, k: u32) -> BigInt {
    (r.numer() * pow10(k)).div_floor(r.denom())
}

/// `floor(v * 10^k)` for every `v` in `[lo, hi]`, when that is one number.
pub fn determined(lo: &BigRational, hi: &BigRational, k: u32) -> Option<BigInt> {
    let a = floor_at(lo, k);
    (floor_at(hi, k) == a).then_some(a)
}

/// An algorithmic real: integer part, a fixed digit prefix, then digits from
/// a seeded generator. Its truncations can be read back without the
/// library.
#[derive(Clone, Debug)]
pub struct RandomReal {
    pub a0: i64,
    pub prefix: Vec<u8>,
    pub seed: u64,
}

impl RandomReal {
    pub fn digit(&self, k: u32) -> u8 {
        match self.prefix.get(k as usize - 1) {
            Some(d) => *d,
            None => {
                let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
                rng.set_stream(u64::from(k));
                rng.gen_range(0..10)
            }
        }
    }

    pub fn mantissa(&self, k: u32) -> BigInt {
        (1..=k).fold(BigInt::from(self.a0), |m, j| m * 10 + self.digit(j))
    }

    pub fn real(&self) -> DecimalReal {
        let me = self.clone();
        DecimalReal::from_digit_fn(self.a0, move |k| me.digit(k))
    }

    /// `[x_n, x_n + 10^-n]`, which contains `x`.
    pub fn enclosure(&self, n: u32) -> (BigRational, BigRational) {
        let m = self.mantissa(n);
        (BigRational::new(m.clone(), pow10(n)), BigRational::new(m + 1, pow10(n)))
    }
}

/// Random reals whose first digits are nine-heavy, so carries travel.
pub fn arb_real(a0: std::ops::RangeInclusive<i64>) -> impl Strategy<Value = RandomReal> {
    let digit = prop_oneof![Just(9u8), Just(0u8), 0u8..10];
    (a0, prop::collection::vec(digit, 0..24), any::<u64>())
        .prop_map(|(a0, prefix, seed)| RandomReal { a0, prefix, seed })
}

/// Interval product of two closed intervals.
pub fn interval_mul(a: &(BigRational, BigRational), b: &(BigRational, BigRational)) -> (BigRational, BigRational) {
    let c = [&a.0 * &b.0, &a.0 * &b.1, &a.1 * &b.0, &a.1 * &b.1];
    let lo = c.iter().min().unwrap().clone();
    let hi = c.iter().max().unwrap().clone();
    (lo, hi)
}
