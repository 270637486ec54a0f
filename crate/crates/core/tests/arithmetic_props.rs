mod common;

use common::{arb_real, determined, interval_mul, pow10, q, RandomReal};
use decireal::arithmetic::{product_bound, scale_param, shift};
use decireal::{add, div, mul, reciprocal, sub, ArithError, DecimalReal, DigitError, Fuel};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use proptest::prelude::*;

const K: u32 = 12;
const GUARD: u32 = 30;

fn t(x: &DecimalReal, k: u32) -> BigInt {
    x.truncation_mantissa(k).expect("digit is determined")
}

/// Non-negative operands with `x + y <= 1`.
fn arb_unit_pair() -> impl Strategy<Value = (RandomReal, RandomReal)> {
    (arb_real(0..=0), arb_real(0..=0)).prop_map(|(mut x, mut y)| {
        for r in [&mut x, &mut y] {
            match r.prefix.first_mut() {
                Some(d) => *d = (*d).min(4),
                None => r.prefix.push(4),
            }
        }
        (x, y)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn sum_truncation_gap(x in arb_real(-5..=5), y in arb_real(-5..=5)) {
        let s = add(&x.real(), &y.real(), Fuel::DEFAULT);
        for k in 0..=K {
            let gap = t(&s, k) - x.mantissa(k) - y.mantissa(k);
            prop_assert!(gap.abs() <= BigInt::from(4), "k={k} gap={gap}");
        }
    }

    #[test]
    fn product_truncation_gap(x in arb_real(-5..=5), y in arb_real(-5..=5)) {
        let p = mul(&x.real(), &y.real(), Fuel::DEFAULT);
        let m = product_bound(scale_param(&BigInt::from(x.a0.abs()), &BigInt::from(y.a0.abs())));
        for k in 0..=K {
            let gap = t(&p, k) * pow10(k) - x.mantissa(k) * y.mantissa(k);
            prop_assert!(gap.abs() <= &m * pow10(k), "k={k} gap={gap} M={m}");
        }
    }

    #[test]
    fn small_product_bound((x, y) in arb_unit_pair()) {
        let p = mul(&x.real(), &y.real(), Fuel::DEFAULT);
        for k in 0..=6 {
            let xkyk = BigRational::new(x.mantissa(k) * y.mantissa(k), pow10(2 * k));
            for j in [2 * k, 2 * k + 3] {
                let d = BigRational::new(t(&p, j), pow10(j)) - &xkyk;
                prop_assert!(!d.is_negative() && d < q(2, 1) / BigRational::from(pow10(k)), "k={k} j={j} d={d}");
            }
        }
    }

    #[test]
    fn optimal_carry(x in arb_real(-5..=5), y in arb_real(-5..=5)) {
        let s = add(&x.real(), &y.real(), Fuel::DEFAULT);
        for k in 0..=K {
            let lower = num_integer::Integer::div_floor(&(x.mantissa(k + 1) + y.mantissa(k + 1)), &BigInt::from(10));
            let got = t(&s, k);
            prop_assert!(got == lower || got == &lower + 1, "k={k} got={got} lower={lower}");
        }
    }

    #[test]
    fn operations_match_enclosures(x in arb_real(-4..=4), y in arb_real(-4..=4)) {
        let (xr, yr) = (x.real(), y.real());
        let (ex, ey) = (x.enclosure(K + GUARD), y.enclosure(K + GUARD));
        let sum = add(&xr, &yr, Fuel::DEFAULT);
        let diff = sub(&xr, &yr, Fuel::DEFAULT);
        let prod = mul(&xr, &yr, Fuel::DEFAULT);
        let quot = div(&xr, &yr, Fuel::DEFAULT).unwrap();
        let quot_range = (!(ey.0.is_negative() && ey.1.is_positive()) && !ey.0.is_zero() && !ey.1.is_zero())
            .then(|| interval_mul(&ex, &(ey.1.recip(), ey.0.recip())));
        for k in 0..=K {
            if let Some(want) = determined(&(&ex.0 + &ey.0), &(&ex.1 + &ey.1), k) {
                prop_assert_eq!(t(&sum, k), want, "+ at {}", k);
            }
            if let Some(want) = determined(&(&ex.0 - &ey.1), &(&ex.1 - &ey.0), k) {
                prop_assert_eq!(t(&diff, k), want, "- at {}", k);
            }
            let pr = interval_mul(&ex, &ey);
            if let Some(want) = determined(&pr.0, &pr.1, k) {
                prop_assert_eq!(t(&prod, k), want, "* at {}", k);
            }
            if let Some(qr) = &quot_range {
                if let Some(want) = determined(&qr.0, &qr.1, k) {
                    prop_assert_eq!(t(&quot, k), want, "/ at {}", k);
                }
            }
        }
    }

    #[test]
    fn addition_associates_digitwise(x in arb_real(-3..=3), y in arb_real(-3..=3), z in arb_real(-3..=3)) {
        let (xr, yr, zr) = (x.real(), y.real(), z.real());
        let xy = add(&xr, &yr, Fuel::DEFAULT);
        let yz = add(&yr, &zr, Fuel::DEFAULT);
        let left = add(&xy, &zr, Fuel::DEFAULT);
        let right = add(&xr, &yz, Fuel::DEFAULT);
        for k in 0..=K {
            prop_assert_eq!(t(&left, k), t(&right, k), "digits differ at {}", k);
            let gap = (t(&xy, k) + z.mantissa(k)) - (x.mantissa(k) + t(&yz, k));
            prop_assert!(gap.abs() <= BigInt::from(16), "k={k} gap={gap}");
        }
    }

    #[test]
    fn operations_commute(x in arb_real(-5..=5), y in arb_real(-5..=5)) {
        let (xr, yr) = (x.real(), y.real());
        let (s1, s2) = (add(&xr, &yr, Fuel::DEFAULT), add(&yr, &xr, Fuel::DEFAULT));
        let (p1, p2) = (mul(&xr, &yr, Fuel::DEFAULT), mul(&yr, &xr, Fuel::DEFAULT));
        for k in 0..=K {
            prop_assert_eq!(t(&s1, k), t(&s2, k));
            prop_assert_eq!(t(&p1, k), t(&p2, k));
        }
    }

    #[test]
    fn scale_param_is_minimal(a in 0u32..5000, b in 0u32..5000) {
        let s = scale_param(&BigInt::from(a), &BigInt::from(b));
        let need = BigInt::from(a + b + 2);
        prop_assert!(pow10(s) >= need);
        prop_assert!(s == 0 || pow10(s - 1) < need);
    }

    #[test]
    fn exhaustion_reports_a_horizon_past_the_request(k in 0u32..20, fuel in 1u32..60, m in 0i64..1000) {
        // x - x for a terminating x hidden behind a digit stream: all
        // differences are 0 and no nonzero witness ever appears
        let x = DecimalReal::from_rational(m, 1000).unwrap().algorithmic_copy();
        match sub(&x, &x, Fuel::new(fuel)).truncation_mantissa(k) {
            Err(DigitError::Undetermined { horizon }) => prop_assert!(horizon > k),
            Ok(v) => prop_assert!(v.is_zero(), "x - x emitted {v} at {k}"),
            Err(e) => prop_assert!(false, "unexpected {e}"),
        }
    }

    #[test]
    fn shift_moves_the_point(x in arb_real(-5..=5), e in -6i32..6) {
        let s = shift(&x.real(), e);
        for k in 7..=K {
            let j = (k as i32 + e) as u32;
            prop_assert_eq!(t(&s, k), x.mantissa(j));
        }
    }
}

#[test]
fn reciprocal_of_zero_is_a_domain_error() {
    assert!(matches!(reciprocal(&DecimalReal::zero(), Fuel::DEFAULT), Err(ArithError::Domain(_))));
    let zero = DecimalReal::zero();
    assert!(matches!(div(&DecimalReal::one(), &zero, Fuel::DEFAULT), Err(ArithError::Domain(_))));
}

#[test]
fn exact_operands_stay_exact() {
    let third = DecimalReal::from_rational(1, 3).unwrap();
    let seventh = DecimalReal::from_rational(-1, 7).unwrap();
    assert_eq!(add(&third, &seventh, Fuel::DEFAULT).exact_value(), Some(q(4, 21)));
    assert_eq!(mul(&third, &seventh, Fuel::DEFAULT).exact_value(), Some(q(-1, 21)));
    assert_eq!(div(&third, &seventh, Fuel::DEFAULT).unwrap().exact_value(), Some(q(-7, 3)));
    assert_eq!(reciprocal(&seventh, Fuel::DEFAULT).unwrap().exact_value(), Some(q(-7, 1)));
}
