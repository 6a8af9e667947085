use contmodel_web::{classify_formula, connective_curve, example_product};
use serde_json::Value;

fn parse(s: String) -> Value {
    serde_json::from_str(&s).unwrap()
}

#[test]
fn example_values() {
    let v = parse(example_product("1/2"));
    assert_eq!(v["factor_values"], serde_json::json!(["0", "0"]));
    assert_eq!(v["product_value"], "1/2");
    assert_eq!(v["verdict_at_zero"], "violated");
    assert_eq!(parse(example_product("1/4"))["product_value"], "1/4");
    assert!(parse(example_product("3/4"))["error"].is_string());
}

#[test]
fn curve_stays_within_eps_below() {
    let v = parse(connective_curve("(0,0),(1/2,0),(3/4,1/2),(1,1)", "1/8"));
    let samples = v["samples"].as_array().unwrap();
    assert_eq!(samples.len(), 65);
    for s in samples {
        let (c, a) = (s[1].as_f64().unwrap(), s[2].as_f64().unwrap());
        assert!(a <= c + 1e-12 && c - a <= 0.125 + 1e-12, "{s}");
    }
    assert!(parse(connective_curve("(0,1),(1,0)", "1/8"))["error"].is_string());
}

#[test]
fn classification() {
    let v = parse(classify_formula("forall x . (~P(x) | Q)", "fo"));
    assert_eq!(v["holding"], serde_json::json!(["horn"]));
    let v = parse(classify_formula("P +. Q", "cont"));
    assert!(!v["holding"]
        .as_array()
        .unwrap()
        .contains(&Value::from("conditional")));
    assert!(parse(classify_formula("P(", "cont"))["error"].is_string());
}
