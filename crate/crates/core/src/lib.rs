//! Real numbers as infinite decimals `a0.a1a2a3...` with left-to-right
//! arithmetic, certified constants and an interval oracle to check them.
//!
//! Negative numbers use the floor convention: `-3.087` is stored and
//! printed as `(-4).913`, so every fractional digit lies in `0..=9` and the
//! truncation `x_k` is always `floor(x * 10^k) / 10^k`.

pub mod arclength;
pub mod arithmetic;
pub mod computable;
pub mod constructions;
pub mod decimal_stream;
mod digit_search;
pub mod exact_scaled;
pub mod expr;
pub mod oracle;

pub use arithmetic::{add, div, mul, negate, reciprocal, sub, ArithError, Fuel};
pub use decimal_stream::{BackingKind, Comparison, DecimalReal, DigitError, DigitOutcome, DigitSource, SignOutcome};
pub use exact_scaled::{Digit, ScaledDecimal};
