//! Every pair of terminating decimals with scale <= 3 and |a0| <= 2, under
//! `+ - * /`, against floor division on machine integers.

use decireal::{add, div, mul, sub, DecimalReal, Fuel, ScaledDecimal};
use num_bigint::BigInt;

const SCALE: u32 = 3;
const UNIT: i128 = 1000;
const DIGITS: u32 = 8;

fn floor_div(a: i128, b: i128) -> i128 {
    let q = a / b;
    if (a % b != 0) && ((a < 0) != (b < 0)) {
        q - 1
    } else {
        q
    }
}

/// `floor(num / den * 10^DIGITS)`.
fn expected(num: i128, den: i128) -> BigInt {
    BigInt::from(floor_div(num * 10i128.pow(DIGITS), den))
}

#[test]
fn all_small_pairs_match_integer_arithmetic() {
    let fuel = Fuel::new(64);
    let values: Vec<(i128, DecimalReal)> = (-2 * UNIT..3 * UNIT)
        .map(|m| (m, DecimalReal::from_scaled(ScaledDecimal::new(m as i64, SCALE))))
        .collect();
    let mut failures = Vec::new();
    for (xm, x) in &values {
        for (ym, y) in &values {
            let mut check = |op: &str, got: Option<BigInt>, want: BigInt| {
                if got.as_ref() != Some(&want) && failures.len() < 10 {
                    failures.push(format!("{x:?} {op} {y:?}: {got:?} != {want}", x = xm, y = ym));
                }
            };
            let t = |v: DecimalReal| v.truncation_mantissa(DIGITS).ok();
            check("+", t(add(x, y, fuel)), expected(xm + ym, UNIT));
            check("-", t(sub(x, y, fuel)), expected(xm - ym, UNIT));
            check("*", t(mul(x, y, fuel)), expected(xm * ym, UNIT * UNIT));
            if *ym != 0 {
                check("/", div(x, y, fuel).ok().and_then(t), expected(*xm, *ym));
            }
        }
    }
    assert!(failures.is_empty(), "{failures:#?}");
}
