//! Canonical text output: JSON and CSV with 17 significant digits per float.
//!
//! Seventeen digits identify an `f64` uniquely, and formatting the parsed value
//! again yields the same digits, so payloads round-trip byte for byte.

use std::io;

use serde::Serialize;
use serde_json::ser::{CompactFormatter, Formatter};

/// Formats `x` with 17 significant digits, positional for exponents in
/// `-5..17` and scientific otherwise. Non-finite values print as Rust does.
pub fn sig17(x: f64) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{x:.16e}");
    let (mantissa, exp) = sci.split_once('e').expect("scientific format has an exponent");
    let exp: i32 = exp.parse().expect("exponent is an integer");
    if !(-5..17).contains(&exp) {
        return sci;
    }
    let (sign, mantissa) = match mantissa.strip_prefix('-') {
        Some(m) => ("-", m),
        None => ("", mantissa),
    };
    let digits: String = mantissa.chars().filter(|c| *c != '.').collect();
    let body = if exp >= 0 {
        let split = exp as usize + 1;
        if split >= digits.len() {
            format!("{digits}.0")
        } else {
            format!("{}.{}", &digits[..split], &digits[split..])
        }
    } else {
        format!("0.{}{digits}", "0".repeat((-exp - 1) as usize))
    };
    format!("{sign}{body}")
}

/// Compact JSON formatter that writes every float through [`sig17`].
#[derive(Debug, Default, Clone, Copy)]
pub struct Sig17Formatter;

impl Formatter for Sig17Formatter {
    fn write_f64<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        writer.write_all(sig17(value).as_bytes())
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(writer, value as f64)
    }

    fn write_null<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        CompactFormatter.write_null(writer)
    }
}

/// Canonical JSON for a payload, without a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, Sig17Formatter);
    value
        .serialize(&mut ser)
        .expect("serializing to memory cannot fail");
    String::from_utf8(out).expect("serde_json emits UTF-8")
}

/// CSV text with a header line; every row is newline terminated.
pub fn to_csv<'a>(header: &[&str], rows: impl IntoIterator<Item = &'a [f64]>) -> String {
    let mut out = header.join(",");
    out.push('\n');
    for row in rows {
        let cells: Vec<String> = row.iter().map(|&v| sig17(v)).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seventeen_digits() {
        assert_eq!(sig17(0.1), "0.10000000000000001");
        assert_eq!(sig17(2.5), "2.5000000000000000");
        assert_eq!(sig17(25.0), "25.000000000000000");
        assert_eq!(sig17(0.0), "0.0000000000000000");
        assert_eq!(sig17(-1.5e-3), "-0.0015000000000000000");
        assert_eq!(sig17(1e20), "1.0000000000000000e20");
        assert_eq!(sig17(2f64.powi(-23)), "1.1920928955078125e-7");
        assert_eq!(sig17(12345678901234567.0), "12345678901234568.0");
    }

    #[test]
    fn reparses_to_same_value() {
        for x in [0.1, 1.0 / 3.0, 2.0f64.sqrt() * 1e10, 4.9e-324, f64::MAX, -7.25e-6, 123.456] {
            let s = sig17(x);
            let back: f64 = s.parse().unwrap();
            assert_eq!(back.to_bits(), x.to_bits(), "{s}");
            assert_eq!(sig17(back), s);
        }
    }

    #[test]
    fn json_uses_sig17() {
        #[derive(Serialize)]
        struct P {
            a: f64,
            b: u64,
            c: bool,
            d: f64,
        }
        let s = to_json(&P { a: 0.5, b: 3, c: true, d: f64::NAN });
        assert_eq!(s, r#"{"a":0.50000000000000000,"b":3,"c":true,"d":null}"#);
    }

    #[test]
    fn csv_layout() {
        let rows: Vec<Vec<f64>> = vec![vec![0.0, 1.0], vec![0.5, -2.0]];
        let s = to_csv(&["x", "y"], rows.iter().map(|r| r.as_slice()));
        assert_eq!(
            s,
            "x,y\n0.0000000000000000,1.0000000000000000\n0.50000000000000000,-2.0000000000000000\n"
        );
    }
}
