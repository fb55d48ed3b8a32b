//! Serializes a catalog bundle, reads it back, and shows error locations.

use dqp::catalog;
use dqp::json::{bundle_from_str, bundle_to_value};
use serde_json::json;

fn main() {
    let b = catalog::build("q1", &json!({"case": "3", "delta": -1, "lambda": "2"})).unwrap();
    let text = serde_json::to_string_pretty(&bundle_to_value(&b)).unwrap();
    println!("{text}");
    assert_eq!(bundle_from_str(&text).unwrap(), b);

    let bad = text.replacen("\"t\"", "\"u\"", 1);
    println!("renamed a generator: {}", bundle_from_str(&bad).unwrap_err());
    println!("truncated: {}", bundle_from_str(&text[..40]).unwrap_err());
}
