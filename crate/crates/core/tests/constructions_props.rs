mod common;

use common::{arb_real, pow10, q};
use decireal::constructions::{
    cantor_pair, cantor_unpair, from_cauchy, from_dedekind, glb_finite, glb_prefix, CauchyInput, CutOracle, Side,
};
use decireal::decimal_stream::cmp_with_fuel;
use decireal::{Comparison, DecimalReal, Fuel};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use proptest::prelude::*;

/// The cut of `sqrt(r)` for a rational `r > 0` that is not a square.
fn sqrt_cut(r: BigRational) -> CutOracle {
    let hi = r.ceil() + BigRational::from_integer(1.into());
    CutOracle::new(move |t| if t.is_negative() || t * t < r { Side::A } else { Side::B }, q(0, 1), hi)
}

fn is_square(n: i64) -> bool {
    let s = (n as f64).sqrt().round() as i64;
    s * s == n
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn dedekind_truncations_straddle_the_cut(p in 1i64..500, d in 1i64..50) {
        prop_assume!(!(is_square(p * d)));
        let r = q(p, d);
        let cut = sqrt_cut(r.clone());
        let x = from_dedekind(cut.clone(), Fuel::DEFAULT).unwrap();
        for k in [0, 1, 5, 12, 20] {
            let lo = BigRational::new(x.truncation_mantissa(k).unwrap(), pow10(k));
            let hi = &lo + BigRational::new(1.into(), pow10(k));
            prop_assert_eq!(cut.classify(&lo), Side::A);
            prop_assert_eq!(cut.classify(&hi), Side::B);
        }
    }

    #[test]
    fn cauchy_limit_is_near_its_approximants(base in -3000i64..3000, c in 1i64..10, odd in any::<bool>()) {
        // a + c (-1)^n / 10^n with modulus N(s) = s + 1
        let a = q(base, 1000);
        let term = {
            let a = a.clone();
            move |n: u64| {
                let t = BigRational::new(c.into(), pow10(n as u32));
                if n.is_multiple_of(2) != odd { &a + t } else { &a - t }
            }
        };
        let input = CauchyInput::new(term.clone(), |s| u64::from(s) + 1);
        let x = from_cauchy(input, Fuel::DEFAULT);
        for k in 0..10u32 {
            let dk = BigRational::new(x.truncation_mantissa(k).unwrap(), pow10(k));
            let qn = term(u64::from(k + 2) + 1);
            let bound = BigRational::new(2.into(), pow10(k + 2)) + BigRational::new(1.into(), pow10(k));
            prop_assert!((dk - qn).abs() <= bound, "k={k}");
        }
        // the limit is a itself
        prop_assert_eq!(x.truncation_mantissa(3).unwrap(), BigInt::from(base));
    }

    #[test]
    fn glb_is_below_every_element_and_is_one_of_them(xs in prop::collection::vec(arb_real(-3..=3), 1..6)) {
        let reals: Vec<DecimalReal> = xs.iter().map(|x| x.real()).collect();
        let g = glb_finite(&reals).unwrap();
        for r in &reals {
            prop_assert_ne!(cmp_with_fuel(&g, r, Fuel::new(40)).unwrap(), Comparison::Greater);
        }
        let gd = g.to_decimal_string(40).unwrap();
        prop_assert!(reals.iter().any(|r| r.to_decimal_string(40).unwrap() == gd));
        let prefix = glb_prefix(reals.clone(), reals.len()).unwrap();
        prop_assert_eq!(prefix.to_decimal_string(40).unwrap(), gd);
    }

    #[test]
    fn pairing_round_trips(x in arb_real(-3..=3), y in arb_real(-3..=3)) {
        let z = cantor_pair(&x.real(), &y.real());
        prop_assert!(z.integer_part().unwrap().is_zero());
        let (x2, y2) = cantor_unpair(&z, Fuel::DEFAULT).unwrap();
        prop_assert_eq!(x2.to_decimal_string(50).unwrap(), x.real().to_decimal_string(50).unwrap());
        prop_assert_eq!(y2.to_decimal_string(50).unwrap(), y.real().to_decimal_string(50).unwrap());
        let digits = z.digits(150).unwrap();
        prop_assert!(digits.chunks(3).all(|g| g.len() < 3 || g[2] <= 1), "box digits are 0 or 1");
    }

    #[test]
    fn pairing_is_injective(x in arb_real(-3..=3), y in arb_real(-3..=3), u in arb_real(-3..=3), v in arb_real(-3..=3)) {
        let same = |a: &common::RandomReal, b: &common::RandomReal| {
            a.real().to_decimal_string(40).unwrap() == b.real().to_decimal_string(40).unwrap()
        };
        prop_assume!(!(same(&x, &u) && same(&y, &v)));
        let z1 = cantor_pair(&x.real(), &y.real()).to_decimal_string(160).unwrap();
        let z2 = cantor_pair(&u.real(), &v.real()).to_decimal_string(160).unwrap();
        prop_assert_ne!(z1, z2);
    }
}

#[test]
fn ill_formed_cut_is_reported_not_misprinted() {
    // B has a smallest element
    let cut = CutOracle::new(|t| if *t < q(3, 2) { Side::A } else { Side::B }, q(0, 1), q(2, 1));
    let x = from_dedekind(cut, Fuel::new(30)).unwrap();
    // 1.49 would be a wrong digit for 1.5; the nine-run probe refuses it
    assert_eq!(x.truncation_mantissa(0), Ok(BigInt::from(1)));
    for k in [1, 2, 6] {
        assert!(matches!(x.truncation_mantissa(k), Err(decireal::DigitError::Undetermined { .. })), "k={k}");
    }
}

#[test]
fn glb_of_nothing_is_an_error() {
    assert!(glb_finite(&[]).is_err());
}
