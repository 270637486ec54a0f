//! Computable constants and the carry-statistics experiment.

use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::arithmetic::{add, case_scan, mul, Fuel, ScanOp, ScanTrace};
use crate::arclength::pi_real;
use crate::constructions::{from_cauchy, CauchyInput};
use crate::decimal_stream::{DecimalReal, DigitError};
use crate::digit_search::DigitSearch;
use crate::exact_scaled::{floor_shift, pow10};

/// Square root of a non-negative rational by maximal digit search on
/// `t^2 <= r`. Perfect squares come back exact.
pub fn sqrt_rational(r: &BigRational) -> Result<DecimalReal, DigitError> {
    if r.is_negative() {
        return Err(DigitError::Domain(format!("square root of negative {r}")));
    }
    let (num, den) = (r.numer().clone(), r.denom().clone());
    let (sn, sd) = (num.sqrt(), den.sqrt());
    if &sn * &sn == num && &sd * &sd == den {
        return Ok(DecimalReal::from_big_rational(BigRational::new(sn, sd)));
    }
    let upper = r.ceil().to_integer().sqrt() + 1u32;
    let search = DigitSearch::new(
        move |m, k| Ok(m.is_negative() || m * m * &den <= &num * pow10(2 * k)),
        move || Ok((BigInt::zero(), upper.clone())),
    );
    Ok(DecimalReal::from_source(search))
}

/// `sum_{i <= n} 1/i!` as `(sum_i n!/i!) / n!`, by Horner's rule.
fn factorial_series(n: u64) -> BigRational {
    let mut num = BigInt::one();
    let mut fact = BigInt::one();
    for i in 1..=n {
        num = num * i + 1u32;
        fact *= i;
    }
    BigRational::new_raw(num, fact)
}

/// Smallest `n` with `2 / (n+1)! < 10^(-s)`.
fn factorial_modulus(s: u32) -> u64 {
    let bound = pow10(s) * 2u32;
    let mut fact = BigInt::one();
    let mut n = 0u64;
    loop {
        fact *= n + 1;
        if fact > bound {
            return n;
        }
        n += 1;
    }
}

/// Euler's number as the limit of `sum_{i <= n} 1/i!`.
pub fn e_real() -> DecimalReal {
    static E: OnceLock<DecimalReal> = OnceLock::new();
    E.get_or_init(|| from_cauchy(CauchyInput::new(factorial_series, factorial_modulus), Fuel::DEFAULT))
        .clone()
}

pub fn sqrt2_real() -> DecimalReal {
    static SQRT2: OnceLock<DecimalReal> = OnceLock::new();
    SQRT2
        .get_or_init(|| sqrt_rational(&BigRational::from_integer(2.into())).expect("2 is non-negative"))
        .clone()
}

/// A named constant with a digit algorithm.
pub struct ConstantSpec {
    pub name: &'static str,
    pub build: fn() -> DecimalReal,
    pub note: &'static str,
}

pub const CONSTANTS: [ConstantSpec; 3] = [
    ConstantSpec { name: "pi", build: pi_real, note: "length of the upper unit semicircle" },
    ConstantSpec { name: "e", build: e_real, note: "limit of the partial sums of 1/n!" },
    ConstantSpec { name: "sqrt2", build: sqrt2_real, note: "largest t with t^2 <= 2, digit by digit" },
];

pub fn constant(name: &str) -> Option<DecimalReal> {
    CONSTANTS.iter().find(|c| c.name == name).map(|c| (c.build)())
}

/// Scan record for each digit `0..=k` of `pi + e` computed from the digit
/// streams, showing how far past each position the scan had to look.
pub fn pi_plus_e_scan(k: u32, fuel: Fuel) -> Result<Vec<ScanTrace>, DigitError> {
    let (pi, e) = (pi_real(), e_real());
    (0..=k).map(|j| case_scan(ScanOp::Add, &pi, &e, j, fuel)).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CarryOp {
    Add,
    Mul,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CarryStatsReport {
    pub operation: CarryOp,
    pub k: u32,
    pub trials: u64,
    pub seed: u64,
    /// Trials where the result truncation equals the lower of its two
    /// possible values.
    pub first_choice: u64,
    /// Rejected draws (multiplication only: `x + y >= 1`).
    pub rejected: u64,
}

impl CarryStatsReport {
    pub fn frequency(&self) -> f64 {
        self.first_choice as f64 / self.trials as f64
    }

    pub fn frequency_ratio(&self) -> BigRational {
        BigRational::new(self.first_choice.into(), self.trials.into())
    }
}

/// `0.d1 d2 d3 ...` with i.i.d. uniform digits drawn lazily from a seeded
/// generator, in position order, so the value does not depend on the order
/// digits are requested in.
fn random_unit(seed: u64) -> DecimalReal {
    let state = Mutex::new((ChaCha8Rng::seed_from_u64(seed), Vec::<u8>::new()));
    DecimalReal::from_digit_fn(0, move |k| {
        let mut guard = state.lock().unwrap_or_else(|e| e.into_inner());
        let (rng, digits) = &mut *guard;
        while digits.len() < k as usize {
            digits.push(rng.gen_range(0..10));
        }
        digits[k as usize - 1]
    })
}

/// Whether the trial's result took the lower choice, and how many draws were
/// rejected before it.
fn trial(op: CarryOp, k: u32, seed: u64, index: u64, fuel: Fuel) -> Result<(bool, u64), DigitError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    let mut rejected = 0;
    loop {
        let x = random_unit(rng.next_u64());
        let y = random_unit(rng.next_u64());
        let xk1 = x.truncation_mantissa(k + 1)?;
        let yk1 = y.truncation_mantissa(k + 1)?;
        let (result, lower) = match op {
            CarryOp::Add => (add(&x, &y, fuel), floor_shift(&(xk1 + yk1), 1)),
            CarryOp::Mul => {
                if !add(&x, &y, fuel).integer_part()?.is_zero() {
                    rejected += 1;
                    continue;
                }
                (mul(&x, &y, fuel), floor_shift(&(xk1 * yk1), k + 2))
            }
        };
        return Ok((result.truncation_mantissa(k)? == lower, rejected));
    }
}

/// Frequency with which `(x op y)_k` takes the lower of its two possible
/// values, for `x, y` uniform on `[0,1)` (addition) or on
/// `{x, y >= 0, x + y < 1}` (multiplication, by rejection). Trial `i` uses
/// stream `i` of a ChaCha8 generator seeded with `seed`, so the result does
/// not depend on scheduling.
pub fn carry_stats(op: CarryOp, k: u32, trials: u64, seed: u64) -> Result<CarryStatsReport, DigitError> {
    if trials == 0 {
        return Err(DigitError::Domain("at least one trial is required".into()));
    }
    let fuel = Fuel::DEFAULT;
    let run = |i| trial(op, k, seed, i, fuel);
    #[cfg(feature = "parallel")]
    let outcomes: Result<Vec<_>, _> = {
        use rayon::prelude::*;
        (0..trials).into_par_iter().map(run).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let outcomes: Result<Vec<_>, _> = (0..trials).map(run).collect();
    let outcomes = outcomes?;
    Ok(CarryStatsReport {
        operation: op,
        k,
        trials,
        seed,
        first_choice: outcomes.iter().filter(|(lower, _)| *lower).count() as u64,
        rejected: outcomes.iter().map(|(_, r)| r).sum(),
    })
}
