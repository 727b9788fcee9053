//! JSON output with every float written to 17 significant digits.

use std::io;

use serde::Serialize;
use serde_json::ser::Formatter;

/// Compact formatter that prints `f64` values with 17 significant digits,
/// positional between 1e-5 and 1e17 and scientific outside.
#[derive(Debug, Default, Clone, Copy)]
pub struct Sig17Formatter;

impl Formatter for Sig17Formatter {
    fn write_f64<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        writer.write_all(format_sig17(value).as_bytes())
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        writer.write_all(format_sig17(value as f64).as_bytes())
    }
}

/// Renders a finite `f64` with 17 significant digits, trailing zeros trimmed.
pub fn format_sig17(v: f64) -> String {
    let sci = format!("{v:.16e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    let (sign, mantissa) = match mantissa.strip_prefix('-') {
        Some(m) => ("-", m),
        None => ("", mantissa),
    };
    let digits: String = mantissa.chars().filter(|c| *c != '.').collect();
    let trim = |s: &str| -> String {
        let t = s.trim_end_matches('0');
        if t.is_empty() {
            "0".to_string()
        } else {
            t.to_string()
        }
    };
    if (-5..17).contains(&exp) {
        if exp >= 0 {
            let split = exp as usize + 1;
            format!("{sign}{}.{}", &digits[..split], trim(&digits[split..]))
        } else {
            let zeros = "0".repeat((-exp - 1) as usize);
            format!("{sign}0.{}", trim(&format!("{zeros}{digits}")))
        }
    } else {
        format!("{sign}{}.{}e{exp}", &digits[..1], trim(&digits[1..]))
    }
}

/// Serializes `value` on one line with [`Sig17Formatter`].
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, Sig17Formatter);
    value.serialize(&mut ser).expect("in-memory serialization cannot fail");
    String::from_utf8(buf).expect("serde_json writes UTF-8")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn formats() {
        assert_eq!(format_sig17(1.0), "1.0");
        assert_eq!(format_sig17(0.0), "0.0");
        assert_eq!(format_sig17(-2.5), "-2.5");
        assert_eq!(format_sig17(0.1), "0.10000000000000001");
        assert_eq!(format_sig17(123456.0), "123456.0");
        assert_eq!(format_sig17(1e-7), "9.9999999999999995e-8");
        assert_eq!(format_sig17(1e20), "1.0e20");
        assert_eq!(format_sig17(0.000123), "0.00012300000000000001");
    }

    #[test]
    fn round_trips() {
        for v in [
            0.1,
            1.0 / 3.0,
            -7.25e-9,
            6.02e23,
            2f64.sqrt(),
            f64::MIN_POSITIVE,
            f64::MAX,
        ] {
            assert_eq!(format_sig17(v).parse::<f64>().unwrap(), v);
        }
    }

    #[test]
    fn serializes_nested_values() {
        let s = to_json(&serde_json::json!({"a": [1.0, 0.5], "b": null, "c": 3}));
        assert_eq!(s, r#"{"a":[1.0,0.5],"b":null,"c":3}"#);
        let v: serde_json::Value = serde_json::from_str(&to_json(&vec![f64::NAN])).unwrap();
        assert!(v[0].is_null());
    }
}
