//! Deterministic number formatting shared by every output.

use serde_json::Value;

/// Significant digits kept in printed numbers.
pub const SIGNIFICANT_DIGITS: usize = 12;

/// `x` rounded to [`SIGNIFICANT_DIGITS`].
pub fn round_sig(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x).parse().expect("float formatting parses back")
}

/// Shortest decimal text of the rounded value; `∞` for `+inf`.
pub fn fmt_num(x: f64) -> String {
    if x == f64::INFINITY {
        "∞".to_string()
    } else if x == f64::NEG_INFINITY {
        "-∞".to_string()
    } else if x.is_nan() {
        "NaN".to_string()
    } else {
        let r = round_sig(x);
        // avoid "-0"
        if r == 0.0 { "0".to_string() } else { format!("{r}") }
    }
}

/// JSON number with [`SIGNIFICANT_DIGITS`]; non-finite values become strings.
pub fn json_num(x: f64) -> Value {
    match serde_json::Number::from_f64(round_sig(x)) {
        Some(n) if x != 0.0 => Value::Number(n),
        Some(_) => Value::from(0.0),
        None => Value::String(fmt_num(x)),
    }
}
