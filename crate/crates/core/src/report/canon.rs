//! Canonical JSON: sorted keys, two-space indentation, floats rounded to 12
//! significant digits and printed in shortest round-trip form.

use serde::Serialize;
use serde_json::{Number, Value};

pub const SIGNIFICANT_DIGITS: usize = 12;

pub fn round_significant(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        // also folds -0.0
        return if x == 0.0 { 0.0 } else { x };
    }
    format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x)
        .parse()
        .expect("formatted float parses")
}

fn canonicalize(v: &mut Value) {
    match v {
        Value::Number(n) if n.is_f64() => {
            let x = round_significant(n.as_f64().expect("f64 number"));
            if let Some(r) = Number::from_f64(x) {
                *n = r;
            }
        }
        Value::Array(items) => items.iter_mut().for_each(canonicalize),
        Value::Object(map) => map.values_mut().for_each(canonicalize),
        _ => {}
    }
}

pub fn to_canonical_value<T: Serialize>(value: &T) -> Value {
    let mut v = serde_json::to_value(value).expect("analysis types serialize to JSON");
    canonicalize(&mut v);
    v
}

/// Canonical document text, newline-terminated.
pub fn to_canonical_string<T: Serialize>(value: &T) -> String {
    let v = to_canonical_value(value);
    let mut s = serde_json::to_string_pretty(&v).expect("JSON values always print");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rounding() {
        assert_eq!(round_significant(1.0 / 6.0), 0.166666666667);
        assert_eq!(round_significant(5.0 / 6.0), 0.833333333333);
        assert_eq!(round_significant(-0.0).to_bits(), 0.0f64.to_bits());
        assert_eq!(round_significant(0.1 + 0.2), 0.3);
        assert_eq!(round_significant(123_456_789.123_456_7), 123456789.123);
    }

    #[test]
    fn keys_sorted_and_floats_fixed() {
        let v = serde_json::json!({"b": 1.0 / 3.0, "a": [2.0, 7], "c": {"z": 1, "y": 0.1 + 0.2}});
        assert_eq!(
            to_canonical_string(&v),
            "{\n  \"a\": [\n    2.0,\n    7\n  ],\n  \"b\": 0.333333333333,\n  \"c\": {\n    \"y\": 0.3,\n    \"z\": 1\n  }\n}\n"
        );
    }
}
