//! CSV output: 12 significant digits, `,` separated, `\n` terminated.

use std::io::{self, Write};

/// Formats like C's `%.12g`. Negative zero prints as `0`.
pub fn format_g12(x: f64) -> String {
    const P: i32 = 12;
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{:.*e}", (P - 1) as usize, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-4..P).contains(&exp) {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{sign}{:02}", trim_zeros(mantissa), exp.abs())
    } else {
        let fixed = format!("{:.*}", (P - 1 - exp) as usize, x);
        trim_zeros(&fixed).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

pub fn write_csv<W: Write, S: AsRef<str>>(mut w: W, header: &[S], rows: &[Vec<f64>]) -> io::Result<()> {
    let head: Vec<&str> = header.iter().map(AsRef::as_ref).collect();
    writeln!(w, "{}", head.join(","))?;
    let mut line = String::new();
    for row in rows {
        line.clear();
        for (i, v) in row.iter().enumerate() {
            if i > 0 {
                line.push(',');
            }
            line.push_str(&format_g12(*v));
        }
        line.push('\n');
        w.write_all(line.as_bytes())?;
    }
    w.flush()
}

pub fn csv_string<S: AsRef<str>>(header: &[S], rows: &[Vec<f64>]) -> String {
    let mut buf = Vec::new();
    write_csv(&mut buf, header, rows).expect("writing to a Vec cannot fail");
    String::from_utf8(buf).expect("ASCII output")
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn matches_printf_g() {
        let cases = [
            (1.0, "1"),
            (0.5, "0.5"),
            (-2.25, "-2.25"),
            (100.0, "100"),
            (0.1 + 0.2, "0.3"),
            (1.0 / 3.0, "0.333333333333"),
            (2.0 / 3.0, "0.666666666667"),
            (123456789012.0, "123456789012"),
            (1234567890123.0, "1.23456789012e+12"),
            (1e-4, "0.0001"),
            (1.5e-5, "1.5e-05"),
            (-0.0, "0"),
            (1e100, "1e+100"),
            (9.9999999999999e-5, "0.0001"),
            (999999999999.5, "1e+12"),
            (f64::NAN, "nan"),
        ];
        for (x, want) in cases {
            assert_eq!(format_g12(x), want, "{x:e}");
        }
    }

    #[test]
    fn csv_layout() {
        let s = csv_string(&["a", "b"], &[vec![1.0, 0.25], vec![-3.0, 1e-7]]);
        assert_eq!(s, "a,b\n1,0.25\n-3,1e-07\n");
    }

    proptest! {
        #[test]
        fn twelve_significant_digits_round_trip(x in -1e6f64..1e6) {
            let back: f64 = format_g12(x).parse().unwrap();
            prop_assert!((back - x).abs() <= 5e-12 * x.abs().max(1e-300));
        }
    }
}
