//! WebAssembly bindings for the demo page in `www/`. Every function takes
//! strings and returns a JSON string, with `{"error": ...}` on bad input.

use serde_json::{json, Value as Json};
use wasm_bindgen::prelude::*;

use contmodel::classes::{
    approx_restricted_with_params, classify_cont, classify_horn, eval_template,
};
use contmodel::harness::{evaluate_instance, example_family, EXAMPLE_SENTENCE};
use contmodel::logic::{parse_cont_inferring, parse_fo_inferring};
use contmodel::products::{reduced_product, Filter};
use contmodel::{ContFormula, MonotoneConnective, Value};

const SAMPLES: i64 = 64;

fn error(msg: impl std::fmt::Display) -> String {
    json!({ "error": msg.to_string() }).to_string()
}

fn parse_value(s: &str) -> Result<Value, String> {
    s.trim()
        .parse::<Value>()
        .map_err(|e| format!("`{}`: {e}", s.trim()))
}

/// `(0,0),(1/2,0),(1,1)` as a connective, with or without the `C[...]`.
fn parse_connective(points: &str) -> Result<MonotoneConnective, String> {
    let inner = points.trim().trim_start_matches("C[").trim_end_matches(']');
    match parse_cont_inferring(&format!("C[{inner}](u)"))
        .map_err(|e| e.to_string())?
        .0
    {
        ContFormula::Apply(c, _) => Ok(c),
        _ => Err("expected breakpoints like (0,0),(1,1)".into()),
    }
}

fn curve(points: &str, eps: &str) -> Result<Json, String> {
    let c = parse_connective(points)?;
    let eps = parse_value(eps)?;
    if eps.is_zero() {
        return Err("eps must be positive".into());
    }
    let (template, params) = approx_restricted_with_params(&c, eps);
    let samples: Vec<Json> = (0..=SAMPLES)
        .map(|j| {
            let x = Value::new(j, SAMPLES).expect("in range");
            json!([
                x.to_f64(),
                c.eval(x).to_f64(),
                eval_template(&template, x).to_f64()
            ])
        })
        .collect();
    Ok(json!({
        "connective": c.to_string(),
        "lipschitz": c.lipschitz().to_string(),
        "eps": eps.to_string(),
        "template_size": template.size(),
        "step_bits": params.map(|p| p.step_bits),
        "value_bits": params.map(|p| p.value_bits),
        "samples": samples,
    }))
}

/// A connective and its restricted approximation within `eps`, sampled at
/// 65 points as `[x, c(x), approx(x)]`.
#[wasm_bindgen]
pub fn connective_curve(points: &str, eps: &str) -> String {
    curve(points, eps).map_or_else(error, |j| j.to_string())
}

fn example(r: &str) -> Result<Json, String> {
    let r = parse_value(r)?;
    if r.is_zero() || r > Value::HALF {
        return Err("r must satisfy 0 < r <= 1/2".into());
    }
    let (fam, phi) = example_family(r);
    let full = Filter::full(2).map_err(|e| e.to_string())?;
    let e = evaluate_instance(&fam, &full, &phi, 16).map_err(|e| e.to_string())?;
    let (prod, _) = reduced_product(&fam, &full, 16).map_err(|e| e.to_string())?;
    let atom = |name: &str| prod.pred_by_name(name, &[]).map(|v| v.to_string());
    Ok(json!({
        "sentence": EXAMPLE_SENTENCE,
        "factor_values": e.factor_values.iter().map(|v| v.to_string()).collect::<Vec<_>>(),
        "product_value": e.product_value.to_string(),
        "product_atoms": { "P": atom("P"), "Q": atom("Q") },
        "verdict_at_zero": e.verdict(Value::ZERO),
    }))
}

/// The two one-point factors `P = r, Q = 0` and `P = 0, Q = r`, their
/// values for the example sentence, and the value in their product.
#[wasm_bindgen]
pub fn example_product(r: &str) -> String {
    example(r).map_or_else(error, |j| j.to_string())
}

fn classify(text: &str, logic: &str) -> Result<Json, String> {
    let report = match logic {
        "cont" => classify_cont(&parse_cont_inferring(text).map_err(|e| e.to_string())?.0),
        "fo" => classify_horn(&parse_fo_inferring(text).map_err(|e| e.to_string())?.0),
        other => return Err(format!("unknown logic `{other}`")),
    };
    Ok(json!({ "holding": report.holding(), "report": report }))
}

/// The classification report of a continuous (`cont`) or first-order
/// (`fo`) formula.
#[wasm_bindgen]
pub fn classify_formula(text: &str, logic: &str) -> String {
    classify(text, logic).map_or_else(error, |j| j.to_string())
}
