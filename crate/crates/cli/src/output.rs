use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// One line of output.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutputRecord {
    pub cmd: String,
    pub args: Value,
    pub result: Value,
    pub flags: Value,
    pub timing_ms: f64,
    pub version: String,
}

impl OutputRecord {
    pub fn to_line(&self) -> String {
        serde_json::to_string(self).expect("records serialize")
    }
}

/// `x` rounded to 15 significant digits.
pub fn sig15(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{x:.14e}").parse().unwrap_or(x)
}

/// Round every float inside `v` to 15 significant digits.
pub fn round_floats(v: Value) -> Value {
    match v {
        Value::Number(n) if n.is_f64() => n
            .as_f64()
            .and_then(|x| serde_json::Number::from_f64(sig15(x)))
            .map_or(Value::Null, Value::Number),
        Value::Array(items) => Value::Array(items.into_iter().map(round_floats).collect()),
        Value::Object(map) => {
            Value::Object(map.into_iter().map(|(k, v)| (k, round_floats(v))).collect())
        }
        other => other,
    }
}

/// Build a JSON object from key/value pairs.
pub fn object<const N: usize>(pairs: [(&str, Value); N]) -> Value {
    Value::Object(
        pairs
            .into_iter()
            .map(|(k, v)| (k.to_string(), v))
            .collect::<Map<_, _>>(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn fifteen_digits() {
        assert_eq!(sig15(609.256_720_874_123_4), 609.256720874123);
        assert_eq!(sig15(1.0 / 3.0).to_string(), "0.333333333333333");
        assert!(sig15(f64::NAN).is_nan());
    }

    #[test]
    fn rounding_keeps_integers_and_strings() {
        let v = round_floats(
            json!({"a": 1, "b": "123456789012345678901234567890", "c": [0.123_456_789_012_345_68]}),
        );
        assert_eq!(
            v,
            json!({"a": 1, "b": "123456789012345678901234567890", "c": [0.123456789012346]})
        );
    }

    #[test]
    fn record_round_trips() {
        let r = OutputRecord {
            cmd: "count".into(),
            args: json!({"t": 5, "n": 10}),
            result: json!({"value": "12"}),
            flags: json!({}),
            timing_ms: 0.5,
            version: VERSION.into(),
        };
        let back: OutputRecord = serde_json::from_str(&r.to_line()).unwrap();
        assert_eq!(back, r);
    }
}
