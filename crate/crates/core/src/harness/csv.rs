// Copyright 2026 The drift-density Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

//! CSV output with fixed 12-significant-digit decimal formatting.

use std::fmt::Write as _;

/// `x` in plain decimal notation with `digits` significant digits.
pub fn format_sig(x: f64, digits: usize) -> String {
    if x.is_nan() {
        return "NaN".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let digits = digits.max(1);
    let sci = format!("{:.*e}", digits - 1, x.abs());
    let (mantissa, exp) = sci.split_once('e').expect("scientific format");
    let exp: i64 = exp.parse().expect("exponent");
    let mut ds: String = mantissa.chars().filter(char::is_ascii_digit).collect();
    let mut out = String::new();
    if x < 0.0 {
        out.push('-');
    }
    if exp >= 0 {
        let int_len = exp as usize + 1;
        if ds.len() < int_len {
            ds.extend(std::iter::repeat_n('0', int_len - ds.len()));
        }
        out.push_str(&ds[..int_len]);
        if ds.len() > int_len {
            out.push('.');
            out.push_str(&ds[int_len..]);
        }
    } else {
        out.push_str("0.");
        out.extend(std::iter::repeat_n('0', (-exp - 1) as usize));
        out.push_str(&ds);
    }
    out
}

/// Formats a real for CSV output.
pub fn real(x: f64) -> String {
    format_sig(x, 12)
}

/// Joins rows under `header` with `\n` line endings.
pub fn render(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut out = String::new();
    out.push_str(&header.join(","));
    out.push('\n');
    for row in rows {
        let _ = writeln!(out, "{}", row.iter().map(|f| escape(f)).collect::<Vec<_>>().join(","));
    }
    out
}

fn escape(field: &str) -> String {
    if field.contains([',', '"', '\n']) {
        format!("\"{}\"", field.replace('"', "\"\""))
    } else {
        field.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn significant_digits() {
        assert_eq!(real(0.1), "0.100000000000");
        assert_eq!(real(1.0), "1.00000000000");
        assert_eq!(real(123.456), "123.456000000");
        assert_eq!(real(-0.000244140625), "-0.000244140625000");
        assert_eq!(real(9.9999999999996), "10.0000000000");
        assert_eq!(real(1.5e14), "150000000000000");
        assert_eq!(real(0.0), "0");
        assert_eq!(real(f64::INFINITY), "inf");
        assert_eq!(format_sig(2.0f64.sqrt(), 3), "1.41");
    }

    #[test]
    fn render_escapes() {
        let s = render(&["a", "b"], &[vec!["x,y".into(), "1".into()]]);
        assert_eq!(s, "a,b\n\"x,y\",1\n");
    }
}
