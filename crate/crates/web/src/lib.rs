//! WebAssembly bindings for the browser demo. Every export returns a JSON
//! string; failures come back as `{"error": ...}`.

use decireal::arclength::arc_polygon_bounds;
use decireal::computable::{self, CarryOp};
use decireal::expr::{evaluate, parse_expr};
use decireal::oracle::{certify_digits, Certification};
use decireal::{DecimalReal, DigitError, Fuel};
use num_rational::BigRational;
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

const MAX_DIGITS: u32 = 200;
const MAX_HALVINGS: u32 = 60;
const MAX_TRIALS: u32 = 1_000_000;

fn error(msg: impl ToString) -> String {
    json!({ "error": msg.to_string() }).to_string()
}

/// Digits `0..=k`, stopping at the first undetermined one.
fn certified_prefix(x: &DecimalReal, k: u32) -> Result<(Option<String>, Option<u32>), DigitError> {
    let mut text = None;
    for j in 0..=k {
        match x.to_decimal_string(j) {
            Ok(s) => text = Some(s),
            Err(DigitError::Undetermined { horizon }) => return Ok((text, Some(horizon))),
            Err(e) => return Err(e),
        }
    }
    Ok((text, None))
}

/// Evaluate an expression to `digits` places and certify the result
/// against the interval oracle when it supports the expression.
#[wasm_bindgen]
pub fn eval_expr(input: &str, digits: u32) -> String {
    let digits = digits.min(MAX_DIGITS);
    let expr = match parse_expr(input) {
        Ok(e) => e,
        Err(e) => return json!({ "error": e.to_string(), "offset": e.offset }).to_string(),
    };
    let fuel = Fuel::new((10 * digits).max(1000));
    let x = match evaluate(&expr, fuel) {
        Ok(x) => x,
        Err(e) => return error(e),
    };
    let (value, horizon) = match certified_prefix(&x, digits) {
        Ok(r) => r,
        Err(e) => return error(e),
    };
    let shown = value.as_ref().map_or(0, |v| v.split('.').nth(1).map_or(0, str::len) as u32);
    let check = match &value {
        Some(_) => {
            let mut verdict = Ok(Certification::Inconclusive);
            for guard in [5, 10, 20, 40] {
                verdict = certify_digits(&x, &expr, shown, guard);
                if !matches!(verdict, Ok(Certification::Inconclusive)) {
                    break;
                }
            }
            match verdict {
                Ok(Certification::Certified) => "certified".to_string(),
                Ok(Certification::Mismatch(j)) => format!("mismatch at digit {j}"),
                Ok(Certification::Inconclusive) => "inconclusive".to_string(),
                Err(e) => format!("unavailable: {e}"),
            }
        }
        None => "nothing to check".to_string(),
    };
    let mut out = json!({
        "input": input,
        "value": value,
        "digits": shown,
        "exact": x.is_exact(),
        "scan_depth": x.scan_depth(),
        "check": check,
    });
    if let Some(h) = horizon {
        out["horizon"] = json!(h);
    }
    out.to_string()
}

/// Inscribed and circumscribed lengths of the upper unit semicircle cut into
/// `2^halvings` equal arcs, with the digits of pi they already settle.
#[wasm_bindgen]
pub fn pi_polygon(halvings: u32) -> String {
    let m = halvings.clamp(1, MAX_HALVINGS);
    let (t0, t1) = (BigRational::from_integer((-1).into()), BigRational::from_integer(1.into()));
    let bounds = match arc_polygon_bounds(&t0, &t1, m, 2 * MAX_HALVINGS) {
        Ok(b) => b,
        Err(e) => return error(e),
    };
    let (lo, hi) = bounds.render_outward(40);
    let settled: String = lo.chars().zip(hi.chars()).take_while(|(a, b)| a == b).map(|(a, _)| a).collect();
    let settled = settled.trim_end_matches('.').to_string();
    json!({
        "halvings": m,
        "pieces": 2f64.powi(m as i32),
        "inscribed": lo,
        "circumscribed": hi,
        "settled": settled,
    })
    .to_string()
}

/// Monte Carlo frequency of the lower carry choice; see
/// [`decireal::computable::carry_stats`].
#[wasm_bindgen]
pub fn carry_stats(op: &str, k: u32, trials: u32, seed: u32) -> String {
    let op = match op {
        "add" => CarryOp::Add,
        "mul" => CarryOp::Mul,
        other => return error(format!("unknown operation {other:?}")),
    };
    match computable::carry_stats(op, k, u64::from(trials.min(MAX_TRIALS)), u64::from(seed)) {
        Ok(r) => {
            let mut v = json!({
                "operation": r.operation,
                "k": r.k,
                "trials": r.trials,
                "seed": r.seed,
                "first_choice": r.first_choice,
                "rejected": r.rejected,
            });
            v["frequency"] = Value::from(r.frequency());
            v.to_string()
        }
        Err(e) => error(e),
    }
}
