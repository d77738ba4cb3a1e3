//! Deterministic numeric formatting and CSV emission.
//!
//! All emitted numbers carry 12 significant digits in scientific notation
//! with a `.` decimal separator, independent of locale, so identical inputs
//! produce byte-identical files.

use std::io::Write;

/// Format with 12 significant digits, scientific notation.
pub fn fmt_sig(x: f64) -> String {
    if x.is_nan() {
        return "NaN".to_string();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf" } else { "-inf" }.to_string();
    }
    format!("{:.11e}", x)
}

/// Write a CSV table: header row plus rows of 12-significant-digit numbers.
pub fn write_csv<W: Write>(
    out: &mut W,
    header: &[&str],
    rows: impl Iterator<Item = Vec<f64>>,
) -> std::io::Result<()> {
    writeln!(out, "{}", header.join(","))?;
    for row in rows {
        let line: Vec<String> = row.iter().map(|&x| fmt_sig(x)).collect();
        writeln!(out, "{}", line.join(","))?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twelve_significant_digits() {
        assert_eq!(fmt_sig(2.45e-6), "2.45000000000e-6");
        assert_eq!(fmt_sig(-1.0), "-1.00000000000e0");
        assert_eq!(fmt_sig(f64::INFINITY), "inf");
    }

    #[test]
    fn csv_layout() {
        let mut buf = Vec::new();
        write_csv(&mut buf, &["tau", "q", "p"], vec![vec![1.0, 0.5, 0.5]].into_iter()).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(
            text,
            "tau,q,p\n1.00000000000e0,5.00000000000e-1,5.00000000000e-1\n"
        );
    }
}
