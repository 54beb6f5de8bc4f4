//! Number formatting shared by the JSON and CSV writers.
//!
//! Every float is written in scientific notation with 17 significant digits,
//! which round-trips any `f64` exactly and keeps output byte-stable.

use std::io::{self, Write};

use serde::Serialize;
use serde_json::ser::{Formatter, Serializer};

/// `x` with 17 significant digits, e.g. `3.0000000000000000e0`.
pub fn float(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else if x.is_nan() {
        "NaN".into()
    } else if x > 0.0 {
        "inf".into()
    } else {
        "-inf".into()
    }
}

struct RoundTrip;

impl Formatter for RoundTrip {
    fn write_f64<W: ?Sized + Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        if value.is_finite() {
            writer.write_all(float(value).as_bytes())
        } else {
            writer.write_all(b"null")
        }
    }

    fn write_f32<W: ?Sized + Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(writer, f64::from(value))
    }
}

/// Serializes `value` as compact JSON followed by a newline.
pub fn json<T: Serialize + ?Sized>(value: &T) -> Vec<u8> {
    let mut out = Vec::new();
    let mut ser = Serializer::with_formatter(&mut out, RoundTrip);
    value
        .serialize(&mut ser)
        .expect("serializing to memory cannot fail");
    out.push(b'\n');
    out
}

/// Comma-separated rows with LF endings. Cells must not contain commas.
pub struct Csv {
    buf: Vec<u8>,
}

impl Csv {
    pub fn new(header: &[&str]) -> Self {
        let mut csv = Csv { buf: Vec::new() };
        csv.row(header.iter().map(|s| s.to_string()));
        csv
    }

    pub fn row<I: IntoIterator<Item = String>>(&mut self, cells: I) {
        let mut first = true;
        for cell in cells {
            debug_assert!(!cell.contains(','));
            if !first {
                self.buf.push(b',');
            }
            self.buf.extend_from_slice(cell.as_bytes());
            first = false;
        }
        self.buf.push(b'\n');
    }

    pub fn into_bytes(self) -> Vec<u8> {
        self.buf
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_round_trip() {
        for x in [
            0.1,
            1.0 / 3.0,
            -2.5e-300,
            3.0,
            0.0,
            1e308,
            f64::MIN_POSITIVE,
        ] {
            let s = float(x);
            assert_eq!(s.parse::<f64>().unwrap(), x, "{s}");
        }
        assert_eq!(float(3.0), "3.0000000000000000e0");
    }

    #[test]
    fn json_floats_use_seventeen_digits() {
        let out = String::from_utf8(json(&serde_json::json!({"a": 0.5, "b": 2}))).unwrap();
        assert_eq!(out, "{\"a\":5.0000000000000000e-1,\"b\":2}\n");
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["a"].as_f64(), Some(0.5));
    }

    #[test]
    fn csv_layout() {
        let mut c = Csv::new(&["x", "y"]);
        c.row([float(1.0), "2".to_string()]);
        assert_eq!(
            String::from_utf8(c.into_bytes()).unwrap(),
            "x,y\n1.0000000000000000e0,2\n"
        );
    }
}
