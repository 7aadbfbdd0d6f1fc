//! Shared output formatting: CSV with a fixed header and
//! round-trip-exact floats, plus JSON mirrors of the same rows.

use std::io::{self, Write};

/// 17 significant digits, enough to round-trip any f64 exactly.
pub fn fmt_float(v: f64) -> String {
    if v.is_nan() {
        "nan".to_string()
    } else {
        format!("{v:.16e}")
    }
}

/// Non-finite values have no JSON number representation.
pub fn json_number(v: f64) -> serde_json::Value {
    if v.is_finite() {
        serde_json::json!(v)
    } else {
        serde_json::Value::Null
    }
}

/// One comma-separated line, LF terminated. Fields must be comma-free;
/// free-text fields go through [`sanitize_field`] first.
pub fn write_csv_row<W: Write>(w: &mut W, fields: &[String]) -> io::Result<()> {
    w.write_all(fields.join(",").as_bytes())?;
    w.write_all(b"\n")
}

/// Strip CSV-breaking characters out of a free-text status message.
pub fn sanitize_field(text: &str) -> String {
    text.replace(',', ";").replace(['\n', '\r'], " ")
}
