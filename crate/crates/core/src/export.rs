//! Text serialization shared by every module: 17 significant digits, LF endings.

use serde::Serialize;
use serde_json::value::RawValue;

use crate::coin::CoinMatrix;

/// Shortest fixed-width scientific form carrying 17 significant digits.
pub fn fmt_f64(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else {
        v.to_string()
    }
}

/// A JSON number with 17 significant digits; non-finite values become `null`.
pub fn raw_f64(v: f64) -> Box<RawValue> {
    let text = if v.is_finite() { fmt_f64(v) } else { "null".to_string() };
    RawValue::from_string(text).expect("formatted float is valid JSON")
}

#[derive(Serialize)]
struct CoinJson {
    class: String,
    theta: Option<Box<RawValue>>,
    x: Box<RawValue>,
    y: Box<RawValue>,
    entries: Vec<Vec<Box<RawValue>>>,
}

pub fn coin_json(c: &CoinMatrix) -> String {
    let doc = CoinJson {
        class: c.class().to_string(),
        theta: c.theta().map(raw_f64),
        x: raw_f64(c.x()),
        y: raw_f64(c.y()),
        entries: c.entries().iter().map(|row| row.iter().map(|&v| raw_f64(v)).collect()).collect(),
    };
    serde_json::to_string(&doc).expect("serializable")
}
