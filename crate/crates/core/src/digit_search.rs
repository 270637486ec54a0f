//! Maximal digit-by-digit search: given a predicate on grid points that holds
//! below some threshold and fails above it, pick each digit as large as the
//! predicate allows. Reciprocals, square roots and Dedekind cuts all reduce
//! to this.

use std::sync::Mutex;

use num_bigint::BigInt;
use num_traits::One;

use crate::decimal_stream::{DigitError, DigitSource};

/// `pred(m, k)` decides whether the grid point `m * 10^(-k)` lies on the
/// "true" side. It must be monotone: true up to the threshold, false after.
pub(crate) type GridPredicate = dyn Fn(&BigInt, u32) -> Result<bool, DigitError> + Send + Sync;

/// `(lo, hi)` integers with `pred(lo, 0)` true and `pred(hi, 0)` false.
pub(crate) type IntegerBracket = dyn Fn() -> Result<(BigInt, BigInt), DigitError> + Send + Sync;

pub(crate) struct DigitSearch {
    predicate: Box<GridPredicate>,
    bracket: Box<IntegerBracket>,
    prefix: Mutex<Option<(u32, BigInt)>>,
}

impl DigitSearch {
    pub(crate) fn new(
        predicate: impl Fn(&BigInt, u32) -> Result<bool, DigitError> + Send + Sync + 'static,
        bracket: impl Fn() -> Result<(BigInt, BigInt), DigitError> + Send + Sync + 'static,
    ) -> Self {
        DigitSearch {
            predicate: Box::new(predicate),
            bracket: Box::new(bracket),
            prefix: Mutex::new(None),
        }
    }

    fn integer_part(&self) -> Result<BigInt, DigitError> {
        let (mut lo, mut hi) = (self.bracket)()?;
        debug_assert!(lo < hi);
        while &hi - &lo > BigInt::one() {
            let mid: BigInt = (&lo + &hi) >> 1u32;
            if (self.predicate)(&mid, 0)? {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Ok(lo)
    }

    /// Largest `d` in `0..=9` with `pred(10m + d, k)`.
    fn next_digit(&self, m: &BigInt, k: u32) -> Result<BigInt, DigitError> {
        let base = m * 10u32;
        let (mut lo, mut hi) = (0u32, 10u32);
        while hi - lo > 1 {
            let mid = (lo + hi) / 2;
            if (self.predicate)(&(&base + mid), k)? {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Ok(base + lo)
    }
}

impl DigitSource for DigitSearch {
    fn truncation(&self, k: u32) -> Result<BigInt, DigitError> {
        let mut prefix = self.prefix.lock().unwrap_or_else(|e| e.into_inner());
        let (mut at, mut m) = match prefix.take() {
            Some(p) => p,
            None => (0, self.integer_part()?),
        };
        let mut result = Ok(());
        if at > k {
            let out = crate::exact_scaled::floor_shift(&m, at - k);
            *prefix = Some((at, m));
            return Ok(out);
        }
        while at < k {
            match self.next_digit(&m, at + 1) {
                Ok(next) => {
                    m = next;
                    at += 1;
                }
                Err(e) => {
                    result = Err(e);
                    break;
                }
            }
        }
        let out = m.clone();
        *prefix = Some((at, m));
        result.map(|()| out)
    }
}
